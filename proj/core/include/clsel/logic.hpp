#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "clsel/random.hpp"

namespace clsel::logic {

struct Literal {
    std::size_t var = 0;  // 0-based variable index
    bool negated = false;

    friend auto operator<=>(const Literal&, const Literal&) = default;
};

enum class NodeKind : std::uint8_t { leaf, and_op, or_op };

struct Node {
    NodeKind kind = NodeKind::leaf;
    Literal literal;  // meaningful for leaves only

    friend bool operator==(const Node&, const Node&) = default;
};

// Boolean expression tree over literals, stored in pre-order: an operator
// node at position i is followed by its left subtree, then its right one.
class LogicTree {
public:
    static LogicTree leaf(Literal literal);
    static LogicTree join(NodeKind op, const LogicTree& left, const LogicTree& right);
    // Validates arity; throws InvalidArgument on a malformed sequence.
    static LogicTree from_preorder(std::vector<Node> nodes);

    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    std::size_t leaf_count() const { return (nodes_.size() + 1) / 2; }
    std::size_t operator_count() const { return nodes_.size() / 2; }

    // One past the last node of the subtree rooted at pos.
    std::size_t subtree_end(std::size_t pos) const;
    std::vector<std::size_t> leaf_positions() const;
    std::vector<std::size_t> operator_positions() const;
    // Parent position per node; the root maps to size().
    std::vector<std::size_t> parents() const;
    std::set<std::size_t> variables() const;

    // Copy with the subtree at pos replaced by the given pre-order run.
    LogicTree replace_subtree(std::size_t pos, std::span<const Node> replacement) const;
    // De Morgan dual: the negation of this expression with negations
    // pushed to the leaves.
    LogicTree negation() const;

    // Tree invariants: well-formed, every var < p, 1 <= leaves <= max_leaves.
    bool valid(std::size_t p, std::size_t max_leaves) const;

    // Infix rendering with 1-based names, e.g. "(X1 & !X2)".
    std::string to_string() const;

    friend bool operator==(const LogicTree&, const LogicTree&) = default;

private:
    explicit LogicTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}
    std::vector<Node> nodes_;
};

// Recursive evaluation on one observation; entries >= 1 count as true.
int eval_tree(const LogicTree& tree, std::span<const double> row);

// The six neighbourhood moves.
enum class MoveKind {
    alternate_leaf,
    alternate_operator,
    grow_branch,
    prune_branch,
    split_leaf,
    delete_leaf,
};

inline constexpr std::size_t kMoveKinds = 6;

std::string to_string(MoveKind move);

// Deterministic forms; positions index LogicTree::nodes().
LogicTree alternate_leaf(const LogicTree& tree, std::size_t leaf_pos, Literal replacement);
LogicTree alternate_operator(const LogicTree& tree, std::size_t op_pos);
// Leaf L becomes op(L, added).
LogicTree grow_branch(const LogicTree& tree, std::size_t leaf_pos, NodeKind op, Literal added);
// Operator node becomes one of its children.
LogicTree prune_branch(const LogicTree& tree, std::size_t op_pos, bool keep_left);
// Leaf becomes op(first, second) over two fresh literals.
LogicTree split_leaf(const LogicTree& tree, std::size_t leaf_pos, NodeKind op, Literal first,
                     Literal second);
// Leaf is removed and its parent replaced by the sibling subtree.
LogicTree delete_leaf(const LogicTree& tree, std::size_t leaf_pos);

std::vector<MoveKind> applicable_moves(const LogicTree& tree, std::size_t max_leaves);

struct Proposal {
    LogicTree tree;
    MoveKind move;
};

// Draws one applicable move uniformly, then its parameters uniformly.
// Fresh literals are uniform over p variables and both polarities.
Proposal propose_move(const LogicTree& tree, std::size_t p, std::size_t max_leaves, Rng& rng);

// ---------------------------------------------------------------------
// Disjunctive normal form

// Conjunction of literals, sorted, no repeated variable.
using Term = std::vector<Literal>;
// Disjunction of terms, sorted, free of duplicates and absorbed terms. An
// empty Dnf is FALSE; a Dnf holding one empty term is TRUE.
using Dnf = std::vector<Term>;

inline constexpr std::size_t kDnfTermCap = 4096;

// Distributes AND over OR bottom-up, dropping contradictory terms and
// absorbed terms. Throws SizeLimit when an intermediate form exceeds cap.
Dnf to_dnf(const LogicTree& tree, std::size_t cap = kDnfTermCap);

// Removes duplicate, contradictory and absorbed terms and sorts.
Dnf canonicalize(Dnf dnf);

int eval_dnf(const Dnf& dnf, std::span<const double> row);

// "X1&X2|!X5&X9"; FALSE / TRUE for the constant forms.
std::string format_dnf(const Dnf& dnf);
std::string format_term(const Term& term);
Dnf parse_dnf(const std::string& text);

}  // namespace clsel::logic
