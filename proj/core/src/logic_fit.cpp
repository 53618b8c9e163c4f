#include "clsel/logic_fit.hpp"

#include <bit>
#include <cmath>
#include <set>

#include "clsel/error.hpp"
#include "clsel/parallel.hpp"
#include "clsel/random.hpp"

namespace clsel::logic {

namespace {

std::size_t popcount(std::span<const std::uint64_t> bits) {
    std::size_t c = 0;
    for (auto w : bits) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

constexpr std::uint64_t kAnnealStream = 0xa5a5'0000'0000'0001ULL;

std::optional<Dnf> try_dnf(const LogicTree& tree) {
    try {
        return to_dnf(tree);
    } catch (const SizeLimit&) {
        return std::nullopt;
    }
}

std::optional<Dnf> case_dnf_of(const LogicTree& tree, int when_true, int when_false) {
    if (when_true == when_false) return when_true == 1 ? Dnf{Term{}} : Dnf{};
    return try_dnf(when_true == 1 ? tree : tree.negation());
}

}  // namespace

BitColumns::BitColumns(const Dataset& dataset)
    : n_(dataset.n()), p_(dataset.p()), words_((dataset.n() + 63) / 64) {
    bits_.assign(p_ * words_, 0);
    response_.assign(words_, 0);
    const auto& x = dataset.x();
    for (std::size_t j = 0; j < p_; ++j) {
        auto* col = bits_.data() + j * words_;
        for (std::size_t i = 0; i < n_; ++i) {
            if (x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >= 1.0) {
                col[i / 64] |= std::uint64_t{1} << (i % 64);
            }
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (dataset.y()(static_cast<Eigen::Index>(i)) == 1.0) {
            response_[i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }
    response_ones_ = popcount(response_);
    if (n_ % 64 != 0) tail_mask_ = (std::uint64_t{1} << (n_ % 64)) - 1;
}

TreeEvaluator::TreeEvaluator(const BitColumns& data) : data_(data) {}

std::span<const std::uint64_t> TreeEvaluator::evaluate(const LogicTree& tree) {
    const std::size_t words = data_.words();
    // Depth never exceeds the operator count, so size() rows suffice.
    if (scratch_.size() < (tree.size() + 1) * words) scratch_.resize((tree.size() + 1) * words);
    eval_into(tree.nodes(), 0, 0);
    scratch_[words - 1] &= data_.tail_mask();
    return {scratch_.data(), words};
}

std::size_t TreeEvaluator::eval_into(const std::vector<Node>& nodes, std::size_t pos,
                                     std::size_t depth) {
    const std::size_t words = data_.words();
    std::uint64_t* out = scratch_.data() + depth * words;
    const Node& node = nodes[pos];
    if (node.kind == NodeKind::leaf) {
        const auto col = data_.column(node.literal.var);
        if (node.literal.negated) {
            for (std::size_t w = 0; w < words; ++w) out[w] = ~col[w];
        } else {
            for (std::size_t w = 0; w < words; ++w) out[w] = col[w];
        }
        return pos + 1;
    }
    const std::size_t next = eval_into(nodes, pos + 1, depth);
    const std::size_t end = eval_into(nodes, next, depth + 1);
    out = scratch_.data() + depth * words;
    const std::uint64_t* right = scratch_.data() + (depth + 1) * words;
    if (node.kind == NodeKind::and_op) {
        for (std::size_t w = 0; w < words; ++w) out[w] &= right[w];
    } else {
        for (std::size_t w = 0; w < words; ++w) out[w] |= right[w];
    }
    return end;
}

Classification classify(std::span<const std::uint64_t> truth, const BitColumns& data) {
    const auto y = data.response();
    std::size_t true_size = 0;
    std::size_t true_cases = 0;
    for (std::size_t w = 0; w < truth.size(); ++w) {
        true_size += static_cast<std::size_t>(std::popcount(truth[w]));
        true_cases += static_cast<std::size_t>(std::popcount(truth[w] & y[w]));
    }
    const std::size_t false_size = data.n() - true_size;
    const std::size_t false_cases = data.response_ones() - true_cases;

    Classification out;
    out.class_when_true = 2 * true_cases >= true_size ? 1 : 0;
    out.class_when_false = 2 * false_cases > false_size ? 1 : 0;
    out.errors = (out.class_when_true == 1 ? true_size - true_cases : true_cases) +
                 (out.class_when_false == 1 ? false_size - false_cases : false_cases);
    return out;
}

void validate(const AnnealParams& params) {
    if (params.iterations < 1) throw InvalidArgument("iterations must be >= 1");
    if (params.nleaves_max < 1) throw InvalidArgument("nleaves_max must be >= 1");
    if (!(params.cooling > 0.0 && params.cooling < 1.0)) {
        throw InvalidArgument("cooling must lie in (0, 1)");
    }
    if (params.t_start && !(*params.t_start > 0.0)) {
        throw InvalidArgument("t_start must be positive");
    }
}

FittedLogicModel anneal_fit(const Dataset& dataset, const AnnealParams& params,
                            const TraceHook& trace) {
    validate(params);
    if (!dataset.has_both_classes()) {
        throw InvalidDataset("logic regression needs a response with both classes");
    }
    const BitColumns data(dataset);
    TreeEvaluator evaluator(data);
    Rng rng(params.seed);

    LogicTree current = LogicTree::leaf({uniform_index(rng, data.p()), false});
    Classification current_fit = classify(evaluator.evaluate(current), data);
    LogicTree best = current;
    Classification best_fit = current_fit;

    double temperature = params.t_start.value_or(1.0 + static_cast<double>(current_fit.errors) / 10.0);
    for (std::size_t it = 0; it < params.iterations; ++it) {
        Proposal proposal = propose_move(current, data.p(), params.nleaves_max, rng);
        const Classification fit = classify(evaluator.evaluate(proposal.tree), data);
        const double delta = static_cast<double>(fit.errors) - static_cast<double>(current_fit.errors);
        const bool accepted = delta <= 0.0 || uniform01(rng) < std::exp(-delta / temperature);
        if (accepted) {
            current = std::move(proposal.tree);
            current_fit = fit;
            if (current_fit.errors < best_fit.errors ||
                (current_fit.errors == best_fit.errors && current.leaf_count() < best.leaf_count())) {
                best = current;
                best_fit = current_fit;
            }
        }
        if (trace) {
            trace(TraceEvent{it, current_fit.errors, best_fit.errors, temperature, accepted,
                             proposal.move});
        }
        temperature *= params.cooling;
    }

    FittedLogicModel model;
    model.tree = best;
    model.score = best_fit.errors;
    model.class_when_true = best_fit.class_when_true;
    model.class_when_false = best_fit.class_when_false;
    model.dnf = try_dnf(best);
    model.case_dnf = case_dnf_of(best, best_fit.class_when_true, best_fit.class_when_false);
    model.iterations_run = params.iterations;
    return model;
}

std::size_t misclassifications(const LogicTree& tree, int class_when_true, int class_when_false,
                               const Dataset& dataset) {
    std::size_t errors = 0;
    std::vector<double> row(dataset.p());
    for (std::size_t i = 0; i < dataset.n(); ++i) {
        for (std::size_t j = 0; j < dataset.p(); ++j) {
            row[j] = dataset.x()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        const int predicted = eval_tree(tree, row) ? class_when_true : class_when_false;
        if (predicted != static_cast<int>(dataset.y()(static_cast<Eigen::Index>(i)))) ++errors;
    }
    return errors;
}

ImportanceReport ensemble_fit(const Dataset& dataset, const AnnealParams& params,
                              std::size_t bootstraps, std::size_t jobs) {
    validate(params);
    if (bootstraps < 1) throw InvalidArgument("bootstrap count must be >= 1");
    dataset.require_both_classes();

    ImportanceReport report;
    report.bootstraps = bootstraps;
    report.models.resize(bootstraps);
    const std::size_t n = dataset.n();

    parallel_for(bootstraps, jobs, [&](std::size_t b) {
        Rng rng(derive_seed(params.seed, b));
        std::vector<std::size_t> rows(n);
        // Redraw until the in-bag response has both classes.
        for (;;) {
            for (auto& r : rows) r = uniform_index(rng, n);
            std::size_t ones = 0;
            for (auto r : rows) ones += dataset.y()(static_cast<Eigen::Index>(r)) == 1.0;
            if (ones > 0 && ones < n) break;
        }
        AnnealParams run = params;
        run.seed = derive_seed(params.seed ^ kAnnealStream, b);
        report.models[b] = anneal_fit(dataset.subset_rows(rows), run);
    });

    report.variable_frequency.assign(dataset.p(), 0.0);
    const double weight = 1.0 / static_cast<double>(bootstraps);
    for (const auto& model : report.models) {
        for (auto v : model.tree.variables()) report.variable_frequency[v] += weight;
        if (model.case_dnf) {
            const std::set<Term> distinct(model.case_dnf->begin(), model.case_dnf->end());
            for (const auto& term : distinct) report.term_frequency[term] += weight;
        }
    }
    return report;
}

}  // namespace clsel::logic
