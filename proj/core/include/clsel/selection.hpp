#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clsel/dataset.hpp"
#include "clsel/scores.hpp"

namespace clsel {

enum class Criterion { cls, ls, cor, pval, combined };

// How a signed statistic is turned into a "more extreme" ranking.
enum class SignMode { absolute, signed_descending };
enum class LeverageOrder { ascending, descending };
enum class CombineMode { union_of_sets, sequential_disjoint };

struct CombinedSpec {
    double pct_cls = 0.0;
    double pct_ls = 0.0;
    CombineMode mode = CombineMode::union_of_sets;
};

struct SelectionSpec {
    Criterion criterion = Criterion::cls;
    std::size_t k = 1;
    SignMode cls_mode = SignMode::absolute;
    LeverageOrder ls_mode = LeverageOrder::ascending;
    SignMode cor_mode = SignMode::absolute;
    std::optional<CombinedSpec> combined;
};

struct SelectionResult {
    std::vector<std::size_t> indices;  // 0-based, in ranking order
    std::vector<double> scores_used;   // criterion value per index; NaN if undefined
    Criterion criterion = Criterion::cls;
    bool truncated = false;            // k exceeded the admissible count
};

// ceil(n ln n); throws InvalidArgument for n < 2.
std::size_t sample_size(std::size_t n);

// ceil(fraction * p) with a 1e-9 guard against decimal round-up.
std::size_t fraction_count(double fraction, std::size_t p);

// Order of variables by key, largest first; undefined keys last; ties by
// lowest index. Total and deterministic.
std::vector<std::size_t> rank_order(std::span<const std::optional<double>> keys);

// Ranking keys (larger = selected earlier) for one criterion. The raw
// statistic is also returned so results can echo it.
struct CriterionValues {
    std::vector<std::optional<double>> key;
    std::vector<double> raw;
};

CriterionValues cls_values(const ScoreSet& scores, SignMode mode);
CriterionValues ls_values(const ScoreSet& scores, LeverageOrder order);
CriterionValues cor_values(const Dataset& dataset, SignMode mode);
CriterionValues pval_values(const Dataset& dataset);

std::string to_string(Criterion criterion);
Criterion criterion_from_string(const std::string& text);

SelectionResult select(const Dataset& dataset, const SelectionSpec& spec);
// Same, reusing precomputed scores for CLS / LS / COMBINED.
SelectionResult select(const Dataset& dataset, const ScoreSet& scores,
                       const SelectionSpec& spec);

// Union mode: top ceil(pct_cls p) by CLS united with top ceil(pct_ls p) by
// LS (CLS picks first, then the new LS picks). Sequential-disjoint mode:
// ceil(pct_ls p) lowest-LS picks, then the best remaining CLS picks until
// total_k indices are held; pct_cls is ignored there.
SelectionResult select_combined(const Dataset& dataset, const CombinedSpec& spec,
                                std::optional<std::size_t> total_k = std::nullopt);
SelectionResult select_combined(const ScoreSet& scores, const CombinedSpec& spec,
                                std::optional<std::size_t> total_k = std::nullopt,
                                SignMode cls_mode = SignMode::absolute,
                                LeverageOrder ls_mode = LeverageOrder::ascending);

// Core of union mode on precomputed rankings.
std::vector<std::size_t> union_of_prefixes(std::span<const std::size_t> cls_order,
                                           std::span<const std::size_t> ls_order,
                                           std::size_t n_cls, std::size_t n_ls);

}  // namespace clsel
