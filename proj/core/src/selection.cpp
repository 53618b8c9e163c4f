#include "clsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clsel/error.hpp"
#include "clsel/stats.hpp"

namespace clsel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> column(const Dataset& dataset, std::size_t j) {
    const auto col = dataset.x().col(static_cast<Eigen::Index>(j));
    return {col.data(), col.data() + col.size()};
}

std::span<const double> response(const Dataset& dataset) {
    return {dataset.y().data(), static_cast<std::size_t>(dataset.y().size())};
}

SelectionResult take_top(const CriterionValues& values, std::size_t k, Criterion criterion) {
    const auto order = rank_order(values.key);
    SelectionResult out;
    out.criterion = criterion;
    out.truncated = k > order.size();
    const std::size_t take = std::min(k, order.size());
    out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
    for (auto j : out.indices) out.scores_used.push_back(values.raw[j]);
    return out;
}

}  // namespace

std::size_t sample_size(std::size_t n) {
    if (n < 2) throw InvalidArgument("sample_size needs n >= 2");
    const double v = static_cast<double>(n) * std::log(static_cast<double>(n));
    return static_cast<std::size_t>(std::ceil(v));
}

std::size_t fraction_count(double fraction, std::size_t p) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw InvalidArgument("fraction must lie in [0, 1]");
    }
    const double v = std::ceil(fraction * static_cast<double>(p) - 1e-9);
    return std::min(p, static_cast<std::size_t>(std::max(0.0, v)));
}

std::vector<std::size_t> rank_order(std::span<const std::optional<double>> keys) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ka = keys[a];
        const auto& kb = keys[b];
        if (ka.has_value() != kb.has_value()) return ka.has_value();
        if (!ka.has_value()) return false;
        return *ka > *kb;
    });
    return order;
}

CriterionValues cls_values(const ScoreSet& scores, SignMode mode) {
    CriterionValues v;
    const auto p = scores.p();
    v.key.resize(p);
    v.raw.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double c = scores.cross_leverage(static_cast<Eigen::Index>(j));
        v.raw[j] = c;
        v.key[j] = mode == SignMode::absolute ? std::fabs(c) : c;
    }
    return v;
}

CriterionValues ls_values(const ScoreSet& scores, LeverageOrder order) {
    CriterionValues v;
    const auto p = scores.p();
    v.key.resize(p);
    v.raw.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double l = scores.leverage(static_cast<Eigen::Index>(j));
        v.raw[j] = l;
        v.key[j] = order == LeverageOrder::ascending ? -l : l;
    }
    return v;
}

CriterionValues cor_values(const Dataset& dataset, SignMode mode) {
    CriterionValues v;
    const auto p = dataset.p();
    v.key.resize(p);
    v.raw.assign(p, kNaN);
    const auto y = response(dataset);
    for (std::size_t j = 0; j < p; ++j) {
        const auto x = column(dataset, j);
        if (const auto r = stats::pearson(x, y)) {
            v.raw[j] = *r;
            v.key[j] = mode == SignMode::absolute ? std::fabs(*r) : *r;
        }
    }
    return v;
}

CriterionValues pval_values(const Dataset& dataset) {
    CriterionValues v;
    const auto p = dataset.p();
    v.key.resize(p);
    v.raw.assign(p, kNaN);
    const auto y = response(dataset);
    for (std::size_t j = 0; j < p; ++j) {
        const auto x = column(dataset, j);
        if (const auto test = stats::univariate_pvalue(x, y)) {
            v.raw[j] = test->p_value;
            v.key[j] = -test->p_value;
        }
    }
    return v;
}

std::string to_string(Criterion criterion) {
    switch (criterion) {
        case Criterion::cls: return "cls";
        case Criterion::ls: return "ls";
        case Criterion::cor: return "cor";
        case Criterion::pval: return "pval";
        case Criterion::combined: return "combined";
    }
    return "?";
}

Criterion criterion_from_string(const std::string& text) {
    if (text == "cls") return Criterion::cls;
    if (text == "ls") return Criterion::ls;
    if (text == "cor") return Criterion::cor;
    if (text == "pval" || text == "p-value") return Criterion::pval;
    if (text == "combined") return Criterion::combined;
    throw InvalidArgument("unknown criterion '" + text + "'");
}

SelectionResult select(const Dataset& dataset, const SelectionSpec& spec) {
    dataset.require_both_classes();
    if (spec.criterion == Criterion::cls || spec.criterion == Criterion::ls ||
        spec.criterion == Criterion::combined) {
        return select(dataset, compute_scores(dataset), spec);
    }
    return select(dataset, ScoreSet{}, spec);
}

SelectionResult select(const Dataset& dataset, const ScoreSet& scores,
                       const SelectionSpec& spec) {
    dataset.require_both_classes();
    if (spec.k < 1) throw InvalidArgument("selection size k must be >= 1");
    switch (spec.criterion) {
        case Criterion::cls:
            return take_top(cls_values(scores, spec.cls_mode), spec.k, spec.criterion);
        case Criterion::ls:
            return take_top(ls_values(scores, spec.ls_mode), spec.k, spec.criterion);
        case Criterion::cor:
            return take_top(cor_values(dataset, spec.cor_mode), spec.k, spec.criterion);
        case Criterion::pval:
            return take_top(pval_values(dataset), spec.k, spec.criterion);
        case Criterion::combined: {
            if (!spec.combined) {
                throw InvalidArgument("combined criterion requires pct_cls / pct_ls");
            }
            return select_combined(scores, *spec.combined, spec.k, spec.cls_mode, spec.ls_mode);
        }
    }
    throw InvalidArgument("unhandled criterion");
}

std::vector<std::size_t> union_of_prefixes(std::span<const std::size_t> cls_order,
                                           std::span<const std::size_t> ls_order,
                                           std::size_t n_cls, std::size_t n_ls) {
    const std::size_t p = cls_order.size();
    std::vector<char> taken(p, 0);
    std::vector<std::size_t> out;
    out.reserve(std::min(p, n_cls + n_ls));
    for (std::size_t r = 0; r < std::min(n_cls, p); ++r) {
        taken[cls_order[r]] = 1;
        out.push_back(cls_order[r]);
    }
    for (std::size_t r = 0; r < std::min(n_ls, ls_order.size()); ++r) {
        if (!taken[ls_order[r]]) {
            taken[ls_order[r]] = 1;
            out.push_back(ls_order[r]);
        }
    }
    return out;
}

SelectionResult select_combined(const Dataset& dataset, const CombinedSpec& spec,
                                std::optional<std::size_t> total_k) {
    dataset.require_both_classes();
    return select_combined(compute_scores(dataset), spec, total_k);
}

SelectionResult select_combined(const ScoreSet& scores, const CombinedSpec& spec,
                                std::optional<std::size_t> total_k, SignMode cls_mode,
                                LeverageOrder ls_mode) {
    const std::size_t p = scores.p();
    const auto cls = cls_values(scores, cls_mode);
    const auto ls = ls_values(scores, ls_mode);
    const auto cls_order = rank_order(cls.key);
    const auto ls_order = rank_order(ls.key);
    const std::size_t n_ls = fraction_count(spec.pct_ls, p);

    SelectionResult out;
    out.criterion = Criterion::combined;
    if (spec.mode == CombineMode::union_of_sets) {
        const std::size_t n_cls = fraction_count(spec.pct_cls, p);
        out.indices = union_of_prefixes(cls_order, ls_order, n_cls, n_ls);
        // The first min(n_cls, p) entries are the CLS picks.
        for (std::size_t r = 0; r < out.indices.size(); ++r) {
            const auto j = out.indices[r];
            out.scores_used.push_back(r < n_cls ? cls.raw[j] : ls.raw[j]);
        }
        return out;
    }

    if (!total_k) throw InvalidArgument("sequential-disjoint mode needs an explicit total k");
    const std::size_t k = *total_k;
    out.truncated = k > p;
    std::vector<char> taken(p, 0);
    for (std::size_t r = 0; r < std::min(n_ls, k); ++r) {
        taken[ls_order[r]] = 1;
        out.indices.push_back(ls_order[r]);
        out.scores_used.push_back(ls.raw[ls_order[r]]);
    }
    for (std::size_t r = 0; r < p && out.indices.size() < k; ++r) {
        const auto j = cls_order[r];
        if (taken[j]) continue;
        taken[j] = 1;
        out.indices.push_back(j);
        out.scores_used.push_back(cls.raw[j]);
    }
    return out;
}

}  // namespace clsel
