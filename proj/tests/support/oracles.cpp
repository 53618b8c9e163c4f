#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

Eigen::MatrixXd hat_by_inverse(const Eigen::MatrixXd& a) {
    const Eigen::MatrixXd gram = a.transpose() * a;
    const Eigen::MatrixXd inv = Eigen::FullPivLU<Eigen::MatrixXd>(gram).inverse();
    return a * inv * a.transpose();
}

std::size_t rank_by_svd(const Eigen::MatrixXd& a, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > rel_tol * s(0)) ++r;
    }
    return r;
}

Eigen::MatrixXd hat_by_svd(const Eigen::MatrixXd& a, double rel_tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
    const auto r = static_cast<Eigen::Index>(rank_by_svd(a, rel_tol));
    const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
    return u * u.transpose();
}

Eigen::MatrixXd augmented(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    Eigen::MatrixXd out(x.cols() + 1, x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) out(j, i) = x(i, j);
        out(x.cols(), i) = y(i);
    }
    return out;
}

Eigen::MatrixXd random_binary(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                              double p_one) {
    std::bernoulli_distribution bit(p_one);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = bit(rng) ? 1.0 : 0.0;
    }
    return m;
}

clsel::Dataset random_dataset(std::size_t n, std::size_t p, std::mt19937_64& rng) {
    for (;;) {
        Eigen::MatrixXd x = random_binary(n, p, rng);
        Eigen::VectorXd y = random_binary(n, 1, rng).col(0);
        if (y.sum() > 0 && y.sum() < static_cast<double>(n)) {
            return clsel::Dataset(x, y, {}, clsel::Encoding::binary);
        }
    }
}

double t_density(double t, double df) {
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) /
                     std::sqrt(df * std::numbers::pi);
    return c * std::pow(1 + t * t / df, -(df + 1) / 2);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double eps, int depth) {
    const double m = (a + b) / 2;
    const double lm = (a + m) / 2, rm = (m + b) / 2;
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps) {
        return left + right + (left + right - whole) / 15;
    }
    return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

}  // namespace

double t_two_sided_by_quadrature(double t, double df) {
    auto f = [df](double u) { return t_density(u, df); };
    const double b = std::abs(t);
    const double fa = f(0), fb = f(b), fm = f(b / 2);
    const double whole = b / 6 * (fa + 4 * fm + fb);
    const double central = simpson(f, 0, b, fa, fm, fb, whole, 1e-14, 50);
    return 1.0 - 2.0 * central;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
    }
    const double ma = sa / n, mb = sb / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

void for_each_assignment(std::size_t vars,
                         const std::function<void(const std::vector<double>&)>& f) {
    std::vector<double> row(vars);
    for (std::size_t mask = 0; mask < (std::size_t{1} << vars); ++mask) {
        for (std::size_t v = 0; v < vars; ++v) row[v] = (mask >> v) & 1U ? 1.0 : 0.0;
        f(row);
    }
}

ToyTable toy_table() {
    static const double rows[8][19] = {
        {1, 1, 0, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1},
        {1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 1, 0, 1},
        {0, 0, 1, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1},
        {0, 0, 1, 1, 0, 1, 1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1},
        {1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0},
        {1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0},
        {0, 1, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0},
        {0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
    };
    ToyTable t;
    t.x.resize(8, 18);
    t.y.resize(8);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 18; ++j) t.x(i, j) = rows[i][j];
        t.y(i) = rows[i][18];
    }
    return t;
}

double ks_uniform(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(sample[i] - lo), std::abs(hi - sample[i])});
    }
    return d;
}

}  // namespace oracle
