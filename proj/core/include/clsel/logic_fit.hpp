#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "clsel/dataset.hpp"
#include "clsel/logic.hpp"

namespace clsel::logic {

// Column-wise bit packing of a dataset: bit i of column j is x_ij >= 1.
class BitColumns {
public:
    explicit BitColumns(const Dataset& dataset);

    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }
    std::size_t words() const { return words_; }
    std::span<const std::uint64_t> column(std::size_t j) const {
        return {bits_.data() + j * words_, words_};
    }
    std::span<const std::uint64_t> response() const { return response_; }
    std::size_t response_ones() const { return response_ones_; }
    // Mask of the valid bits in the last word.
    std::uint64_t tail_mask() const { return tail_mask_; }

private:
    std::size_t n_ = 0, p_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> response_;
    std::size_t response_ones_ = 0;
    std::uint64_t tail_mask_ = ~std::uint64_t{0};
};

// Evaluates trees on all observations at once, 64 per machine word.
class TreeEvaluator {
public:
    explicit TreeEvaluator(const BitColumns& data);
    // Bit i set when the tree is true on observation i.
    std::span<const std::uint64_t> evaluate(const LogicTree& tree);

private:
    std::size_t eval_into(const std::vector<Node>& nodes, std::size_t pos, std::size_t depth);
    const BitColumns& data_;
    std::vector<std::uint64_t> scratch_;  // one row of words per depth
};

struct Classification {
    std::size_t errors = 0;
    int class_when_true = 1;
    int class_when_false = 0;
};

// Majority label inside the tree-true and tree-false groups. Ties go to
// 1 for the true group and 0 for the false group.
Classification classify(std::span<const std::uint64_t> truth, const BitColumns& data);

struct AnnealParams {
    std::size_t nleaves_max = 30;
    std::size_t iterations = 50'000;
    // Starting temperature; 1 + initial_score / 10 when unset.
    std::optional<double> t_start;
    double cooling = 0.999;  // T_k = t_start * cooling^k
    std::uint64_t seed = 0;
};

void validate(const AnnealParams& params);

struct FittedLogicModel {
    LogicTree tree = LogicTree::leaf({});
    std::size_t score = 0;  // training misclassifications
    int class_when_true = 1;
    int class_when_false = 0;
    // Canonical DNF of the tree; empty when the expansion exceeded the cap.
    std::optional<Dnf> dnf;
    // DNF of the expression predicting y = 1: the tree, its negation, or a
    // constant when both groups get the same label.
    std::optional<Dnf> case_dnf;
    std::size_t iterations_run = 0;
};

struct TraceEvent {
    std::size_t iteration = 0;
    std::size_t current_score = 0;
    std::size_t best_score = 0;
    double temperature = 0.0;
    bool accepted = false;
    MoveKind move = MoveKind::alternate_leaf;
};

using TraceHook = std::function<void(const TraceEvent&)>;

// Simulated annealing over single logic trees. Returns the best tree seen;
// on equal scores the one with fewer leaves wins. Deterministic in seed.
FittedLogicModel anneal_fit(const Dataset& dataset, const AnnealParams& params,
                            const TraceHook& trace = {});

// Misclassifications of a model recomputed row by row with eval_tree.
std::size_t misclassifications(const LogicTree& tree, int class_when_true, int class_when_false,
                               const Dataset& dataset);

struct ImportanceReport {
    std::size_t bootstraps = 0;
    std::vector<double> variable_frequency;  // per variable, in [0, 1]
    std::map<Term, double> term_frequency;   // per case-DNF term, in [0, 1]
    std::vector<FittedLogicModel> models;
};

// B bootstrap resamples of size n; one anneal_fit per in-bag set. Seeds
// for resample b and its fit are derived from params.seed and b.
ImportanceReport ensemble_fit(const Dataset& dataset, const AnnealParams& params,
                              std::size_t bootstraps, std::size_t jobs = 1);

}  // namespace clsel::logic
