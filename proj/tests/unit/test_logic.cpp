#include <doctest.h>

#include <random>

#include "clsel/error.hpp"
#include "clsel/logic.hpp"
#include "clsel/logic_fit.hpp"
#include "oracles.hpp"

using namespace clsel;
using namespace clsel::logic;

namespace {

LogicTree lf(std::size_t v, bool neg = false) { return LogicTree::leaf({v, neg}); }
LogicTree land(const LogicTree& a, const LogicTree& b) { return LogicTree::join(NodeKind::and_op, a, b); }
LogicTree lor(const LogicTree& a, const LogicTree& b) { return LogicTree::join(NodeKind::or_op, a, b); }

// Random tree over variables [0, p) grown by a chain of proposals.
LogicTree random_tree(std::size_t p, std::size_t max_leaves, std::size_t steps, Rng& rng) {
    LogicTree t = lf(uniform_index(rng, p), uniform01(rng) < 0.5);
    for (std::size_t s = 0; s < steps; ++s) t = propose_move(t, p, max_leaves, rng).tree;
    return t;
}

bool contains(const std::vector<MoveKind>& v, MoveKind m) {
    return std::find(v.begin(), v.end(), m) != v.end();
}

Dataset planted(std::size_t n, std::size_t p, std::uint64_t seed,
                const std::function<int(const Eigen::VectorXd&)>& rule) {
    std::mt19937_64 rng(seed);
    for (;;) {
        Eigen::MatrixXd x = oracle::random_binary(n, p, rng);
        Eigen::VectorXd y(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < x.rows(); ++i) y(i) = rule(x.row(i).transpose());
        if (y.sum() > 0 && y.sum() < static_cast<double>(n)) {
            return Dataset(x, y, {}, Encoding::binary);
        }
    }
}

}  // namespace

TEST_CASE("tree evaluation") {
    const std::vector<double> row{1, 0, 1};
    CHECK(eval_tree(lf(0), row) == 1);
    CHECK(eval_tree(lf(0, true), row) == 0);
    const auto t = land(lf(0), lf(1));
    oracle::for_each_assignment(2, [&](const std::vector<double>& r) {
        CHECK(eval_tree(t, r) == (r[0] == 1 && r[1] == 1 ? 1 : 0));
    });
    const std::vector<double> ternary{2};
    CHECK(eval_tree(lf(0), ternary) == 1);
    CHECK(t.to_string() == "(X1 & X2)");
    CHECK(lor(lf(0, true), lf(2)).to_string() == "(!X1 | X3)");
}

TEST_CASE("pre-order validation") {
    std::vector<Node> bad{{NodeKind::and_op, {}}, {NodeKind::leaf, {0, false}}};
    CHECK_THROWS_AS(LogicTree::from_preorder(bad), InvalidArgument);
    std::vector<Node> extra{{NodeKind::leaf, {0, false}}, {NodeKind::leaf, {1, false}}};
    CHECK_THROWS_AS(LogicTree::from_preorder(extra), InvalidArgument);
    const auto t = land(lor(lf(0), lf(1)), lf(2));
    CHECK(LogicTree::from_preorder(t.nodes()) == t);
    CHECK(t.leaf_count() == 3);
    CHECK(t.subtree_end(1) == 4);
    CHECK(t.valid(3, 3));
    CHECK_FALSE(t.valid(2, 3));
    CHECK_FALSE(t.valid(3, 2));
}

TEST_CASE("DNF conversion") {
    const auto t = land(lor(lf(0), lf(1)), lf(2));
    const Dnf expect{{{0, false}, {2, false}}, {{1, false}, {2, false}}};
    CHECK(to_dnf(t) == expect);
    CHECK(to_dnf(lf(4, true)) == Dnf{{{4, true}}});
    CHECK(format_dnf(to_dnf(t)) == "X1&X3|X2&X3");
    CHECK(to_dnf(land(lf(0), lf(0, true))).empty());
    CHECK(format_dnf(Dnf{}) == "FALSE");
    CHECK(to_dnf(lor(lf(0), lf(0, true))) == Dnf{{{0, false}}, {{0, true}}});

    const Dnf absorbed = canonicalize({{{0, false}, {1, false}}, {{0, false}}, {{0, false}}});
    CHECK(absorbed == Dnf{{{0, false}}});

    const auto parsed = parse_dnf("X1&X2|!X5&X9");
    CHECK(format_dnf(parsed) == "X1&X2|!X5&X9");
    CHECK(parsed[1][0] == Literal{4, true});
    CHECK_THROWS_AS(parse_dnf("X1&&X2"), ParseError);
    CHECK_THROWS_AS(parse_dnf("X0"), ParseError);
}

TEST_CASE("DNF term cap") {
    // conjunction of 13 disjoint ORs expands to 2^13 terms
    LogicTree t = lor(lf(0), lf(1));
    for (std::size_t k = 1; k < 13; ++k) t = land(t, lor(lf(2 * k), lf(2 * k + 1)));
    CHECK_THROWS_AS(to_dnf(t), SizeLimit);
    CHECK(to_dnf(t, 10'000).size() == 8192);
}

TEST_CASE("tree, DNF and negation agree on every assignment") {
    Rng rng(41);
    for (int rep = 0; rep < 500; ++rep) {
        const auto t = random_tree(4, 8, 1 + rep % 25, rng);
        const auto dnf = to_dnf(t);
        const auto neg = t.negation();
        oracle::for_each_assignment(4, [&](const std::vector<double>& row) {
            const int v = eval_tree(t, row);
            CHECK(eval_dnf(dnf, row) == v);
            CHECK(eval_tree(neg, row) == 1 - v);
        });
    }
}

TEST_CASE("move applicability") {
    const auto single = lf(0);
    const auto moves = applicable_moves(single, 5);
    CHECK_FALSE(contains(moves, MoveKind::prune_branch));
    CHECK_FALSE(contains(moves, MoveKind::delete_leaf));
    CHECK(contains(moves, MoveKind::alternate_leaf));
    CHECK(contains(moves, MoveKind::split_leaf));
    CHECK(contains(moves, MoveKind::grow_branch));

    const auto full = land(lor(lf(0), lf(1)), lf(2));
    const auto capped = applicable_moves(full, 3);
    CHECK_FALSE(contains(capped, MoveKind::grow_branch));
    CHECK_FALSE(contains(capped, MoveKind::split_leaf));
    CHECK(contains(capped, MoveKind::prune_branch));
    CHECK(contains(capped, MoveKind::delete_leaf));
    CHECK(contains(capped, MoveKind::alternate_operator));
}

TEST_CASE("proposals keep every tree invariant") {
    const auto start = land(lor(lf(0), lf(1, true)), lor(lf(2), land(lf(3), lf(4))));
    REQUIRE(start.leaf_count() == 5);
    Rng rng(42);
    std::array<int, kMoveKinds> seen{};
    for (int i = 0; i < 10'000; ++i) {
        const auto prop = propose_move(start, 20, 6, rng);
        CHECK(prop.tree.valid(20, 6));
        CHECK(prop.tree != start);
        ++seen[static_cast<std::size_t>(prop.move)];
    }
    for (int c : seen) CHECK(c > 0);
}

TEST_CASE("every move can be undone by one move") {
    const auto t = land(lor(lf(0), lf(1)), lf(2));
    // alternate leaf
    CHECK(alternate_leaf(alternate_leaf(t, 2, {7, true}), 2, {0, false}) == t);
    // alternate operator
    CHECK(alternate_operator(alternate_operator(t, 1), 1) == t);
    // grow, undone by prune
    const auto grown = grow_branch(t, 4, NodeKind::or_op, {5, false});
    CHECK(grown.leaf_count() == 4);
    CHECK(prune_branch(grown, 4, true) == t);
    // prune, undone by grow
    const auto pruned = prune_branch(t, 1, true);
    CHECK(pruned == land(lf(0), lf(2)));
    CHECK(grow_branch(pruned, 1, NodeKind::or_op, {1, false}) == t);
    // split keeping the old literal first, undone by prune
    const auto split = split_leaf(lf(3), 0, NodeKind::and_op, {3, false}, {6, true});
    CHECK(split == land(lf(3), lf(6, true)));
    CHECK(prune_branch(split, 0, true) == lf(3));
    // delete, undone by grow
    const auto deleted = delete_leaf(t, 3);
    CHECK(deleted == land(lf(0), lf(2)));
    CHECK(grow_branch(deleted, 1, NodeKind::or_op, {1, false}) == t);
}

TEST_CASE("bit-parallel evaluation matches row evaluation") {
    std::mt19937_64 gen(43);
    Rng rng(44);
    const Dataset d = oracle::random_dataset(130, 8, gen);
    const BitColumns bits(d);
    CHECK(bits.words() == 3);
    TreeEvaluator ev(bits);
    for (int rep = 0; rep < 200; ++rep) {
        const auto t = random_tree(8, 10, 30, rng);
        const auto truth = ev.evaluate(t);
        for (std::size_t i = 0; i < d.n(); ++i) {
            const Eigen::VectorXd row = d.x().row(static_cast<Eigen::Index>(i));
            const int bit = static_cast<int>((truth[i / 64] >> (i % 64)) & 1U);
            CHECK(bit == eval_tree(t, {row.data(), 8}));
        }
        const auto cls = classify(truth, bits);
        CHECK(cls.errors == misclassifications(t, cls.class_when_true, cls.class_when_false, d));
    }
}

TEST_CASE("anneal fit") {
    const Dataset d = planted(100, 20, 45, [](const Eigen::VectorXd& r) { return r(6) >= 1 ? 1 : 0; });
    AnnealParams params;
    params.iterations = 5000;
    int perfect = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        params.seed = s;
        std::size_t last_best = std::numeric_limits<std::size_t>::max();
        bool monotone = true;
        const auto m = anneal_fit(d, params, [&](const TraceEvent& e) {
            monotone = monotone && e.best_score <= last_best;
            last_best = e.best_score;
        });
        CHECK(monotone);
        CHECK(m.score == misclassifications(m.tree, m.class_when_true, m.class_when_false, d));
        CHECK(m.tree.valid(20, params.nleaves_max));
        CHECK(m.iterations_run == params.iterations);
        perfect += m.score == 0 ? 1 : 0;
        if (m.score == 0 && m.tree.leaf_count() == 1) {
            CHECK(m.tree.nodes()[0].literal.var == 6);
        }
    }
    CHECK(perfect >= 19);

    params.seed = 3;
    const auto a = anneal_fit(d, params), b = anneal_fit(d, params);
    CHECK(a.tree == b.tree);
    CHECK(a.score == b.score);

    const Dataset constant(d.x(), Eigen::VectorXd::Zero(100), {}, Encoding::binary);
    CHECK_THROWS_AS(anneal_fit(constant, params), InvalidDataset);

    AnnealParams bad;
    bad.cooling = 1.0;
    CHECK_THROWS_AS(validate(bad), InvalidArgument);
    bad = AnnealParams{};
    bad.iterations = 0;
    CHECK_THROWS_AS(validate(bad), InvalidArgument);
}

TEST_CASE("fitted DNF is equivalent to the fitted tree") {
    const Dataset d = planted(150, 6, 46, [](const Eigen::VectorXd& r) {
        return (r(0) >= 1 && r(1) >= 1) || r(3) < 1 ? 1 : 0;
    });
    AnnealParams params;
    params.iterations = 3000;
    params.nleaves_max = 6;
    for (std::uint64_t s = 0; s < 5; ++s) {
        params.seed = s;
        const auto m = anneal_fit(d, params);
        REQUIRE(m.dnf.has_value());
        REQUIRE(m.case_dnf.has_value());
        oracle::for_each_assignment(6, [&](const std::vector<double>& row) {
            const int v = eval_tree(m.tree, row);
            CHECK(eval_dnf(*m.dnf, row) == v);
            const int predicted = v ? m.class_when_true : m.class_when_false;
            CHECK(eval_dnf(*m.case_dnf, row) == predicted);
        });
    }
}

TEST_CASE("bootstrap ensemble") {
    const Dataset d = planted(100, 20, 47, [](const Eigen::VectorXd& r) { return r(6) >= 1 ? 1 : 0; });
    AnnealParams params;
    params.iterations = 4000;
    params.seed = 8;
    const auto r = ensemble_fit(d, params, 10, 1);
    CHECK(r.bootstraps == 10);
    CHECK(r.models.size() == 10);
    CHECK(r.variable_frequency[6] >= 0.9);
    for (double f : r.variable_frequency) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
    // a variable absent from every tree has frequency 0
    for (std::size_t j = 0; j < 20; ++j) {
        bool used = false;
        for (const auto& m : r.models) used = used || m.tree.variables().count(j) > 0;
        if (!used) CHECK(r.variable_frequency[j] == 0.0);
    }
    const auto r3 = ensemble_fit(d, params, 10, 3);
    CHECK(r3.variable_frequency == r.variable_frequency);
    CHECK(r3.term_frequency == r.term_frequency);

    const auto one = ensemble_fit(d, params, 1, 1);
    for (double f : one.variable_frequency) CHECK((f == 0.0 || f == 1.0));
    for (const auto& [t, f] : one.term_frequency) CHECK(f == 1.0);
}
