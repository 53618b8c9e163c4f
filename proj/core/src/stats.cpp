#include "clsel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "clsel/error.hpp"

namespace clsel::stats {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y, std::size_t min_n) {
    if (x.size() != y.size()) throw InvalidArgument("vectors differ in length");
    if (x.size() < min_n) {
        throw InvalidArgument("need at least " + std::to_string(min_n) + " observations");
    }
}

struct Moments {
    double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
};

Moments centered_moments(std::span<const double> x, std::span<const double> y) {
    Moments m;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        m.mx += x[i];
        m.my += y[i];
    }
    m.mx /= n;
    m.my /= n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - m.mx;
        const double dy = y[i] - m.my;
        m.sxx += dx * dx;
        m.syy += dy * dy;
        m.sxy += dx * dy;
    }
    return m;
}

// Continued fraction for I_x(a, b), Numerical Recipes betacf with the
// modified Lentz recurrences.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 1e-14;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    // 200 terms are ample on the branch chosen below; return the last
    // convergent rather than fail.
    return h;
}

}  // namespace

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 2);
    const Moments m = centered_moments(x, y);
    if (m.sxx == 0.0 || m.syy == 0.0) return std::nullopt;
    const double r = m.sxy / std::sqrt(m.sxx * m.syy);
    return std::clamp(r, -1.0, 1.0);
}

std::optional<UnivariateTestResult> univariate_pvalue(std::span<const double> x,
                                                      std::span<const double> y) {
    check_pair(x, y, 3);
    const Moments m = centered_moments(x, y);
    if (m.sxx == 0.0) return std::nullopt;

    UnivariateTestResult out;
    out.df = x.size() - 2;
    out.slope = m.sxy / m.sxx;
    const double rss = std::max(0.0, m.syy - out.slope * m.sxy);
    // Residual sum of squares at rounding level counts as a perfect fit.
    if (rss <= 1e-14 * std::max(m.syy, 1.0)) {
        if (out.slope == 0.0) {
            out.t_statistic = 0.0;
            out.p_value = 1.0;
        } else {
            out.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), out.slope);
            out.p_value = 0.0;
        }
        return out;
    }
    const double se = std::sqrt(rss / static_cast<double>(out.df) / m.sxx);
    out.t_statistic = out.slope / se;
    out.p_value = student_t_two_sided(out.t_statistic, static_cast<double>(out.df));
    return out;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete_beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("incomplete_beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw InvalidArgument("degrees of freedom must be positive");
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return std::clamp(incomplete_beta(0.5 * df, 0.5, x), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
    const double tail = 0.5 * student_t_two_sided(t, df);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double mean(std::span<const double> v) {
    if (v.empty()) throw InvalidArgument("mean of empty vector");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double quantile(std::span<const double> v, double prob) {
    if (v.empty()) throw InvalidArgument("quantile of empty vector");
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(prob, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(std::span<const double> values) {
    if (values.empty()) throw InvalidArgument("bandwidth of empty sample");
    const double sd = sample_sd(values);
    if (sd == 0.0) return 1e-3 * (1.0 + std::fabs(values.front()));
    const double iqr = quantile(values, 0.75) - quantile(values, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

std::vector<double> kde(std::span<const double> values, std::span<const double> grid,
                        std::optional<double> bandwidth) {
    if (values.empty()) throw InvalidArgument("kde of empty sample");
    const double bw = bandwidth.value_or(silverman_bandwidth(values));
    if (!(bw > 0.0)) throw InvalidArgument("bandwidth must be positive");
    const double norm = 1.0 / (static_cast<double>(values.size()) * bw *
                               std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double s = 0.0;
        for (double v : values) {
            const double z = (grid[g] - v) / bw;
            s += std::exp(-0.5 * z * z);
        }
        out[g] = s * norm;
    }
    return out;
}

WelchResult welch_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw InvalidArgument("welch_test needs two samples of size >= 2");
    const double va = std::pow(sample_sd(a), 2) / static_cast<double>(a.size());
    const double vb = std::pow(sample_sd(b), 2) / static_cast<double>(b.size());
    WelchResult out;
    const double se = std::sqrt(va + vb);
    const double diff = mean(a) - mean(b);
    if (se == 0.0) {
        out.t_statistic = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
        out.df = static_cast<double>(a.size() + b.size() - 2);
    } else {
        out.t_statistic = diff / se;
        out.df = (va + vb) * (va + vb) /
                 (va * va / static_cast<double>(a.size() - 1) +
                  vb * vb / static_cast<double>(b.size() - 1));
    }
    out.p_less = student_t_cdf(out.t_statistic, out.df);
    return out;
}

}  // namespace clsel::stats
