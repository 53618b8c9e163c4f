#include "clsel/logic.hpp"

#include <sstream>

#include "clsel/error.hpp"

namespace clsel::logic {

namespace {

bool is_leaf(const Node& node) { return node.kind == NodeKind::leaf; }

NodeKind flip(NodeKind op) {
    return op == NodeKind::and_op ? NodeKind::or_op : NodeKind::and_op;
}

bool eval_at(const std::vector<Node>& nodes, std::size_t& pos, std::span<const double> row) {
    const Node& node = nodes[pos++];
    if (is_leaf(node)) {
        const bool present = row[node.literal.var] >= 1.0;
        return node.literal.negated ? !present : present;
    }
    // Both children are always visited so pos advances past the subtree.
    const bool left = eval_at(nodes, pos, row);
    const bool right = eval_at(nodes, pos, row);
    return node.kind == NodeKind::and_op ? (left && right) : (left || right);
}

void render(const std::vector<Node>& nodes, std::size_t& pos, std::ostream& out) {
    const Node& node = nodes[pos++];
    if (is_leaf(node)) {
        out << (node.literal.negated ? "!" : "") << 'X' << node.literal.var + 1;
        return;
    }
    out << '(';
    render(nodes, pos, out);
    out << (node.kind == NodeKind::and_op ? " & " : " | ");
    render(nodes, pos, out);
    out << ')';
}

void check_position(const LogicTree& tree, std::size_t pos, bool want_leaf) {
    if (pos >= tree.size() || is_leaf(tree.nodes()[pos]) != want_leaf) {
        throw InvalidArgument(want_leaf ? "position does not hold a leaf"
                                        : "position does not hold an operator");
    }
}

Literal random_literal(std::size_t p, Rng& rng) {
    return Literal{uniform_index(rng, p), uniform01(rng) < 0.5};
}

NodeKind random_operator(Rng& rng) {
    return uniform01(rng) < 0.5 ? NodeKind::and_op : NodeKind::or_op;
}

}  // namespace

LogicTree LogicTree::leaf(Literal literal) {
    return LogicTree({Node{NodeKind::leaf, literal}});
}

LogicTree LogicTree::join(NodeKind op, const LogicTree& left, const LogicTree& right) {
    if (op == NodeKind::leaf) throw InvalidArgument("join needs an operator");
    std::vector<Node> nodes;
    nodes.reserve(1 + left.size() + right.size());
    nodes.push_back(Node{op, {}});
    nodes.insert(nodes.end(), left.nodes_.begin(), left.nodes_.end());
    nodes.insert(nodes.end(), right.nodes_.begin(), right.nodes_.end());
    return LogicTree(std::move(nodes));
}

LogicTree LogicTree::from_preorder(std::vector<Node> nodes) {
    std::size_t needed = 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (needed == 0) throw InvalidArgument("pre-order sequence has trailing nodes");
        needed = is_leaf(nodes[i]) ? needed - 1 : needed + 1;
    }
    if (nodes.empty() || needed != 0) throw InvalidArgument("pre-order sequence is incomplete");
    return LogicTree(std::move(nodes));
}

std::size_t LogicTree::subtree_end(std::size_t pos) const {
    std::size_t needed = 1;
    std::size_t i = pos;
    while (needed > 0) {
        needed = is_leaf(nodes_[i]) ? needed - 1 : needed + 1;
        ++i;
    }
    return i;
}

std::vector<std::size_t> LogicTree::leaf_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (is_leaf(nodes_[i])) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> LogicTree::operator_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!is_leaf(nodes_[i])) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> LogicTree::parents() const {
    std::vector<std::size_t> parent(nodes_.size(), nodes_.size());
    // Stack of operator positions still waiting for children, with the
    // number of children already attached.
    std::vector<std::pair<std::size_t, int>> open;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!open.empty()) {
            parent[i] = open.back().first;
            if (++open.back().second == 2) open.pop_back();
        }
        if (!is_leaf(nodes_[i])) open.emplace_back(i, 0);
    }
    return parent;
}

std::set<std::size_t> LogicTree::variables() const {
    std::set<std::size_t> vars;
    for (const auto& node : nodes_) {
        if (is_leaf(node)) vars.insert(node.literal.var);
    }
    return vars;
}

LogicTree LogicTree::replace_subtree(std::size_t pos, std::span<const Node> replacement) const {
    const std::size_t end = subtree_end(pos);
    std::vector<Node> nodes;
    nodes.reserve(nodes_.size() - (end - pos) + replacement.size());
    nodes.insert(nodes.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(pos));
    nodes.insert(nodes.end(), replacement.begin(), replacement.end());
    nodes.insert(nodes.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(end), nodes_.end());
    return LogicTree(std::move(nodes));
}

LogicTree LogicTree::negation() const {
    std::vector<Node> nodes = nodes_;
    for (auto& node : nodes) {
        if (is_leaf(node)) {
            node.literal.negated = !node.literal.negated;
        } else {
            node.kind = flip(node.kind);
        }
    }
    return LogicTree(std::move(nodes));
}

bool LogicTree::valid(std::size_t p, std::size_t max_leaves) const {
    std::size_t needed = 1;
    for (const auto& node : nodes_) {
        if (needed == 0) return false;
        if (is_leaf(node)) {
            if (node.literal.var >= p) return false;
            --needed;
        } else {
            if (node.kind != NodeKind::and_op && node.kind != NodeKind::or_op) return false;
            ++needed;
        }
    }
    return !nodes_.empty() && needed == 0 && leaf_count() >= 1 && leaf_count() <= max_leaves;
}

std::string LogicTree::to_string() const {
    std::ostringstream out;
    std::size_t pos = 0;
    render(nodes_, pos, out);
    return out.str();
}

int eval_tree(const LogicTree& tree, std::span<const double> row) {
    std::size_t pos = 0;
    return eval_at(tree.nodes(), pos, row) ? 1 : 0;
}

std::string to_string(MoveKind move) {
    switch (move) {
        case MoveKind::alternate_leaf: return "alternate-leaf";
        case MoveKind::alternate_operator: return "alternate-operator";
        case MoveKind::grow_branch: return "grow-branch";
        case MoveKind::prune_branch: return "prune-branch";
        case MoveKind::split_leaf: return "split-leaf";
        case MoveKind::delete_leaf: return "delete-leaf";
    }
    return "?";
}

LogicTree alternate_leaf(const LogicTree& tree, std::size_t leaf_pos, Literal replacement) {
    check_position(tree, leaf_pos, true);
    const Node node{NodeKind::leaf, replacement};
    return tree.replace_subtree(leaf_pos, std::span<const Node>(&node, 1));
}

LogicTree alternate_operator(const LogicTree& tree, std::size_t op_pos) {
    check_position(tree, op_pos, false);
    std::vector<Node> nodes = tree.nodes();
    nodes[op_pos].kind = flip(nodes[op_pos].kind);
    return LogicTree::from_preorder(std::move(nodes));
}

LogicTree grow_branch(const LogicTree& tree, std::size_t leaf_pos, NodeKind op, Literal added) {
    check_position(tree, leaf_pos, true);
    if (op == NodeKind::leaf) throw InvalidArgument("grow_branch needs an operator");
    const Node run[3] = {Node{op, {}}, tree.nodes()[leaf_pos], Node{NodeKind::leaf, added}};
    return tree.replace_subtree(leaf_pos, run);
}

LogicTree prune_branch(const LogicTree& tree, std::size_t op_pos, bool keep_left) {
    check_position(tree, op_pos, false);
    const std::size_t left_begin = op_pos + 1;
    const std::size_t right_begin = tree.subtree_end(left_begin);
    const std::size_t begin = keep_left ? left_begin : right_begin;
    const std::size_t end = tree.subtree_end(begin);
    const std::vector<Node> kept(tree.nodes().begin() + static_cast<std::ptrdiff_t>(begin),
                                 tree.nodes().begin() + static_cast<std::ptrdiff_t>(end));
    return tree.replace_subtree(op_pos, kept);
}

LogicTree split_leaf(const LogicTree& tree, std::size_t leaf_pos, NodeKind op, Literal first,
                     Literal second) {
    check_position(tree, leaf_pos, true);
    if (op == NodeKind::leaf) throw InvalidArgument("split_leaf needs an operator");
    const Node run[3] = {Node{op, {}}, Node{NodeKind::leaf, first}, Node{NodeKind::leaf, second}};
    return tree.replace_subtree(leaf_pos, run);
}

LogicTree delete_leaf(const LogicTree& tree, std::size_t leaf_pos) {
    check_position(tree, leaf_pos, true);
    if (tree.leaf_count() < 2) throw InvalidArgument("cannot delete the only leaf");
    const std::size_t parent = tree.parents()[leaf_pos];
    const bool leaf_is_left = leaf_pos == parent + 1;
    return prune_branch(tree, parent, !leaf_is_left);
}

std::vector<MoveKind> applicable_moves(const LogicTree& tree, std::size_t max_leaves) {
    std::vector<MoveKind> moves{MoveKind::alternate_leaf};
    const bool has_operator = tree.operator_count() > 0;
    const bool can_grow = tree.leaf_count() < max_leaves;
    if (has_operator) moves.push_back(MoveKind::alternate_operator);
    if (can_grow) moves.push_back(MoveKind::grow_branch);
    if (has_operator) moves.push_back(MoveKind::prune_branch);
    if (can_grow) moves.push_back(MoveKind::split_leaf);
    if (tree.leaf_count() >= 2) moves.push_back(MoveKind::delete_leaf);
    return moves;
}

Proposal propose_move(const LogicTree& tree, std::size_t p, std::size_t max_leaves, Rng& rng) {
    if (p == 0) throw InvalidArgument("propose_move needs p >= 1");
    const auto moves = applicable_moves(tree, max_leaves);
    const MoveKind move = moves[uniform_index(rng, moves.size())];
    auto pick = [&](const std::vector<std::size_t>& positions) {
        return positions[uniform_index(rng, positions.size())];
    };

    switch (move) {
        case MoveKind::alternate_leaf: {
            const std::size_t pos = pick(tree.leaf_positions());
            const Literal current = tree.nodes()[pos].literal;
            Literal next = random_literal(p, rng);
            while (next == current) next = random_literal(p, rng);
            return {alternate_leaf(tree, pos, next), move};
        }
        case MoveKind::alternate_operator:
            return {alternate_operator(tree, pick(tree.operator_positions())), move};
        case MoveKind::grow_branch: {
            const std::size_t pos = pick(tree.leaf_positions());
            const NodeKind op = random_operator(rng);
            return {grow_branch(tree, pos, op, random_literal(p, rng)), move};
        }
        case MoveKind::prune_branch: {
            const std::size_t pos = pick(tree.operator_positions());
            return {prune_branch(tree, pos, uniform01(rng) < 0.5), move};
        }
        case MoveKind::split_leaf: {
            const std::size_t pos = pick(tree.leaf_positions());
            const NodeKind op = random_operator(rng);
            const Literal first = random_literal(p, rng);
            const Literal second = random_literal(p, rng);
            return {split_leaf(tree, pos, op, first, second), move};
        }
        case MoveKind::delete_leaf:
            return {delete_leaf(tree, pick(tree.leaf_positions())), move};
    }
    throw Error("propose_move: no applicable move");
}

}  // namespace clsel::logic
