#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace clsel::stats {

// Product-moment correlation. std::nullopt when either vector has zero
// variance. Throws InvalidArgument on length mismatch or n < 2.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct UnivariateTestResult {
    double slope = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;
    std::size_t df = 0;
};

// Two-sided t-test of the OLS slope of y on (1, x). std::nullopt for a
// constant x. A perfect fit yields t = +-inf and p_value = 0.
std::optional<UnivariateTestResult> univariate_pvalue(std::span<const double> x,
                                                      std::span<const double> y);

// Regularized incomplete beta I_x(a, b) by continued fractions (modified
// Lentz, at most 200 iterations, relative convergence 1e-14).
double incomplete_beta(double a, double b, double x);

// Student t with df degrees of freedom.
double student_t_cdf(double t, double df);
double student_t_two_sided(double t, double df);

double mean(std::span<const double> v);
// Sample standard deviation (denominator m - 1); 0 for m < 2.
double sample_sd(std::span<const double> v);
// Type-7 (linear interpolation) quantile, prob in [0, 1].
double quantile(std::span<const double> v, double prob);

// 0.9 * min(sd, IQR/1.34) * m^(-1/5); IQR = 0 falls back to sd and
// sd = 0 to 1e-3 * (1 + |v|).
double silverman_bandwidth(std::span<const double> values);

// Gaussian kernel density on grid; Silverman bandwidth unless given.
std::vector<double> kde(std::span<const double> values, std::span<const double> grid,
                        std::optional<double> bandwidth = std::nullopt);

struct WelchResult {
    double t_statistic = 0.0;
    double df = 0.0;
    // One-sided p-value for mean(a) < mean(b).
    double p_less = 1.0;
};

WelchResult welch_test(std::span<const double> a, std::span<const double> b);

}  // namespace clsel::stats
