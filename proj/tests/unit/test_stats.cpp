#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "clsel/error.hpp"
#include "clsel/stats.hpp"
#include "oracles.hpp"

using namespace clsel;

namespace {

std::vector<double> col(const Eigen::MatrixXd& m, Eigen::Index j) {
    return {m.col(j).data(), m.col(j).data() + m.rows()};
}

}  // namespace

TEST_CASE("toy table correlations") {
    const auto t = oracle::toy_table();
    const std::vector<double> y(t.y.data(), t.y.data() + 8);
    CHECK(*stats::pearson(col(t.x, 0), y) == 0.0);
    CHECK(*stats::pearson(col(t.x, 1), y) == 0.0);
    CHECK(*stats::pearson(col(t.x, 2), y) == doctest::Approx(0.258).epsilon(0.005 / 0.258));
    CHECK(*stats::pearson(col(t.x, 3), y) == doctest::Approx(0.258).epsilon(0.005 / 0.258));
    CHECK(*stats::pearson(col(t.x, 2), y) == doctest::Approx(oracle::pearson(col(t.x, 2), y)));
}

TEST_CASE("pearson edge cases and invariances") {
    const std::vector<double> c{1, 1, 1, 1}, y{0, 1, 0, 1};
    CHECK_FALSE(stats::pearson(c, y).has_value());
    CHECK_FALSE(stats::pearson(y, c).has_value());
    CHECK_THROWS_AS(stats::pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}),
                    InvalidArgument);

    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> a(30), b(30), a2(30), b2(30);
        for (std::size_t i = 0; i < 30; ++i) {
            a[i] = g(rng);
            b[i] = a[i] + g(rng);
            a2[i] = 3.5 * a[i] - 7;
            b2[i] = 0.25 * b[i] + 100;
        }
        const double r = *stats::pearson(a, b);
        CHECK(std::abs(r - *stats::pearson(b, a)) < 1e-12);
        CHECK(std::abs(r - *stats::pearson(a2, b2)) < 1e-12);
        CHECK(std::abs(r - oracle::pearson(a, b)) < 1e-12);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
    }
}

TEST_CASE("incomplete beta closed forms") {
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
        CHECK(stats::incomplete_beta(1, 1, x) == doctest::Approx(x).epsilon(1e-13));
        CHECK(stats::incomplete_beta(2.5, 1, x) == doctest::Approx(std::pow(x, 2.5)).epsilon(1e-12));
        CHECK(stats::incomplete_beta(1, 3, x) ==
              doctest::Approx(1 - std::pow(1 - x, 3)).epsilon(1e-12));
    }
    // symmetry I_x(a, b) = 1 - I_{1-x}(b, a)
    CHECK(stats::incomplete_beta(3.2, 7.1, 0.3) ==
          doctest::Approx(1 - stats::incomplete_beta(7.1, 3.2, 0.7)).epsilon(1e-13));
}

TEST_CASE("t tail probability matches density quadrature") {
    for (double df : {3.0, 10.0, 58.0}) {
        for (double t : {0.5, 1.0, 2.0, 5.0}) {
            const double ref = oracle::t_two_sided_by_quadrature(t, df);
            CHECK(std::abs(stats::student_t_two_sided(t, df) - ref) < 1e-8);
            CHECK(std::abs(stats::student_t_two_sided(-t, df) - ref) < 1e-8);
        }
    }
    CHECK(stats::student_t_cdf(0.0, 5) == doctest::Approx(0.5));
    // df = 1 is Cauchy
    CHECK(stats::student_t_cdf(1.0, 1) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("univariate p-value basics") {
    const std::vector<double> x{0, 1, 0, 1, 1, 0};
    const auto perfect = stats::univariate_pvalue(x, x);
    REQUIRE(perfect.has_value());
    CHECK(perfect->p_value == 0.0);
    CHECK(perfect->df == 4);
    CHECK(perfect->slope == doctest::Approx(1.0));

    const std::vector<double> c{1, 1, 1, 1, 1, 1};
    CHECK_FALSE(stats::univariate_pvalue(c, x).has_value());

    // textbook example computed by hand: x = 1..5, y = (2, 4, 5, 4, 5)
    const std::vector<double> xs{1, 2, 3, 4, 5}, ys{2, 4, 5, 4, 5};
    const auto r = stats::univariate_pvalue(xs, ys);
    REQUIRE(r.has_value());
    CHECK(r->slope == doctest::Approx(0.6));
    // residual SS = 2.4, se(slope) = sqrt(2.4 / 3 / 10)
    const double t = 0.6 / std::sqrt(2.4 / 3.0 / 10.0);
    CHECK(r->t_statistic == doctest::Approx(t).epsilon(1e-12));
    CHECK(std::abs(r->p_value - oracle::t_two_sided_by_quadrature(t, 3)) < 1e-8);
}

TEST_CASE("univariate p-value is invariant under positive affine maps of x") {
    std::mt19937_64 rng(22);
    std::bernoulli_distribution bit(0.5);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x(40), y(40), x2(40);
        for (std::size_t i = 0; i < 40; ++i) {
            x[i] = bit(rng) ? 1 : 0;
            y[i] = bit(rng) ? 1 : 0;
            x2[i] = 2 * x[i] + 5;
        }
        const auto a = stats::univariate_pvalue(x, y), b = stats::univariate_pvalue(x2, y);
        if (!a) continue;
        CHECK(std::abs(a->p_value - b->p_value) < 1e-10);
        CHECK(a->p_value >= 0.0);
        CHECK(a->p_value <= 1.0);
    }
}

TEST_CASE("univariate p-values are uniform under the null") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    std::vector<double> ps;
    while (ps.size() < 2000) {
        std::vector<double> x(200), y(200);
        for (std::size_t i = 0; i < 200; ++i) {
            x[i] = g(rng);
            y[i] = g(rng);
        }
        ps.push_back(stats::univariate_pvalue(x, y)->p_value);
    }
    // asymptotic KS critical value at level 0.01
    CHECK(oracle::ks_uniform(ps) < 1.628 / std::sqrt(2000.0));
}

TEST_CASE("kde") {
    const std::vector<double> one{2.0};
    const double bw = stats::silverman_bandwidth(one);
    CHECK(bw == doctest::Approx(1e-3 * 3.0));
    const std::vector<double> g{2.0};
    CHECK(stats::kde(one, g)[0] == doctest::Approx(1.0 / (bw * std::sqrt(2 * std::numbers::pi))));
    CHECK_THROWS_AS(stats::kde(std::vector<double>{}, g), InvalidArgument);

    std::mt19937_64 rng(24);
    std::normal_distribution<double> nd;
    std::vector<double> sample(10'000);
    for (auto& v : sample) v = nd(rng);
    const std::vector<double> zero{0.0};
    CHECK(std::abs(stats::kde(sample, zero)[0] - 0.3989) < 0.05);

    // integral over data +- 3 bandwidths
    const std::vector<double> small{0.1, 0.4, 0.45, 1.3, 2.0, 2.1, 5.0};
    const double h = stats::silverman_bandwidth(small);
    std::vector<double> grid;
    const double lo = 0.1 - 3 * h, hi = 5.0 + 3 * h;
    for (int i = 0; i <= 4000; ++i) grid.push_back(lo + (hi - lo) * i / 4000.0);
    const auto dens = stats::kde(small, grid);
    double integral = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        integral += 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
    }
    CHECK(std::abs(integral - 1.0) < 0.01);
    for (double d : dens) CHECK(d >= 0.0);

    // smaller bandwidth, taller peak
    double prev = 0;
    for (double b : {1.0, 0.5, 0.2, 0.1, 0.05}) {
        const auto d = stats::kde(small, grid, b);
        const double peak = *std::max_element(d.begin(), d.end());
        CHECK(peak >= prev);
        prev = peak;
    }
}

TEST_CASE("quantile and welch") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(stats::quantile(v, 0.0) == 1.0);
    CHECK(stats::quantile(v, 1.0) == 4.0);
    CHECK(stats::quantile(v, 0.5) == doctest::Approx(2.5));
    CHECK(stats::quantile(v, 0.25) == doctest::Approx(1.75));

    std::mt19937_64 rng(25);
    std::normal_distribution<double> a(0.0, 1.0), b(0.5, 2.0);
    std::vector<double> xa(300), xb(500);
    for (auto& x : xa) x = a(rng);
    for (auto& x : xb) x = b(rng);
    const auto w = stats::welch_test(xa, xb);
    CHECK(w.t_statistic < 0);
    CHECK(w.p_less < 0.001);
    const auto w2 = stats::welch_test(xb, xa);
    CHECK(w2.p_less > 0.999);
    // Welch-Satterthwaite df lies between min(m)-1 and m_a + m_b - 2
    CHECK(w.df > 299);
    CHECK(w.df < 798);
}
