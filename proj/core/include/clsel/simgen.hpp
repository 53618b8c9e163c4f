#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "clsel/dataset.hpp"

namespace clsel::sim {

// Conjunction of positive literals over 0-based variable indices.
using Term = std::vector<std::size_t>;
using Dnf = std::vector<Term>;

// How literal probabilities of the relevant variables are chosen so that
// cases and controls are balanced.
enum class Calibration {
    // One common probability q for every relevant literal.
    uniform,
    // Every term equally likely: term probability pi, literal probability
    // pi^(1/|term|). Default for the built-in scenarios.
    per_term,
};

struct ScenarioSpec {
    std::size_t n = 0;
    std::size_t p = 0;
    Dnf dnf;
    std::vector<double> probs;  // length p, each in (0, 1]
    std::uint64_t seed = 0;
    // Probability of flipping each generated label. Label-noise hook; 0
    // reproduces deterministic labelling.
    double flip_prob = 0.0;
};

// Throws InvalidArgument unless indices are in range, terms non-empty and
// probs has length p with entries in [0, 1].
void validate(const ScenarioSpec& spec);

bool terms_disjoint(const Dnf& dnf);

// Common literal probability q with 1 - prod(1 - q^|t|) = target,
// bisection on (0, 1) to 1e-10. Terms must be pairwise disjoint.
double calibrate(const Dnf& dnf, double target_prevalence = 0.5);

// Term probability pi with 1 - (1 - pi)^T = target, T = number of terms.
double calibrate_term_probability(const Dnf& dnf, double target_prevalence = 0.5);

// Length-p probabilities: relevant literals calibrated, others 0.5.
std::vector<double> calibrated_probs(const Dnf& dnf, std::size_t p, Calibration mode,
                                     double target_prevalence = 0.5);

// Exact P(y = 1) for disjoint terms under the given probabilities.
double analytic_prevalence(const Dnf& dnf, std::span<const double> probs);

Dnf builtin_dnf(int id);
ScenarioSpec builtin_scenario(int id, std::size_t n, std::size_t p, std::uint64_t seed = 0,
                              Calibration mode = Calibration::per_term);

// 1 iff some term has all its variables >= 1.
int eval_dnf(const Dnf& dnf, std::span<const double> row);

Dataset generate(const ScenarioSpec& spec);

// Order of each variable's term: |term| for relevant variables, 0 for
// irrelevant ones.
std::vector<std::size_t> term_order_of_variables(const Dnf& dnf, std::size_t p);
std::vector<std::size_t> relevant_variables(const Dnf& dnf);

// Text form: one term per line, 1-based comma-separated indices; blank
// lines and lines starting with '#' are ignored.
Dnf parse_dnf(std::istream& in);
Dnf parse_dnf_file(const std::string& path);
std::string format_dnf(const Dnf& dnf);

}  // namespace clsel::sim
