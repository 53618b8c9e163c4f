#include "clsel/logic.hpp"

#include <algorithm>
#include <sstream>

#include "clsel/error.hpp"

namespace clsel::logic {

namespace {

// Sorted merge of two terms; false when they contain x and !x.
bool merge_terms(const Term& a, const Term& b, Term& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        const Literal* next = nullptr;
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            next = &a[i++];
        } else {
            next = &b[j++];
        }
        if (!out.empty() && out.back().var == next->var) {
            if (out.back().negated != next->negated) return false;
            continue;
        }
        out.push_back(*next);
    }
    return true;
}

// Normalises one term; false when it is contradictory.
bool normalize_term(Term& term) {
    std::sort(term.begin(), term.end());
    term.erase(std::unique(term.begin(), term.end()), term.end());
    for (std::size_t k = 1; k < term.size(); ++k) {
        if (term[k].var == term[k - 1].var) return false;
    }
    return true;
}

bool is_subset(const Term& small, const Term& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

void check_cap(std::size_t count, std::size_t cap) {
    if (count > cap) {
        throw SizeLimit("DNF expansion exceeds the cap of " + std::to_string(cap) + " terms");
    }
}

Dnf expand(const std::vector<Node>& nodes, std::size_t& pos, std::size_t cap) {
    const Node& node = nodes[pos++];
    if (node.kind == NodeKind::leaf) return Dnf{Term{node.literal}};

    Dnf left = expand(nodes, pos, cap);
    Dnf right = expand(nodes, pos, cap);
    Dnf out;
    if (node.kind == NodeKind::or_op) {
        out = std::move(left);
        out.insert(out.end(), std::make_move_iterator(right.begin()),
                   std::make_move_iterator(right.end()));
    } else {
        // Raw products larger than cap^2 cannot be reduced cheaply enough.
        if (left.size() * right.size() > cap * cap) check_cap(left.size() * right.size(), cap);
        Term merged;
        out.reserve(left.size() * right.size());
        for (const auto& a : left) {
            for (const auto& b : right) {
                if (merge_terms(a, b, merged)) out.push_back(merged);
            }
        }
    }
    out = canonicalize(std::move(out));
    check_cap(out.size(), cap);
    return out;
}

}  // namespace

Dnf canonicalize(Dnf dnf) {
    Dnf terms;
    terms.reserve(dnf.size());
    for (auto& t : dnf) {
        if (normalize_term(t)) terms.push_back(std::move(t));
    }
    // Shorter terms first so absorbers are kept before what they absorb.
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    Dnf kept;
    for (auto& t : terms) {
        const bool absorbed = std::any_of(kept.begin(), kept.end(),
                                          [&](const Term& k) { return is_subset(k, t); });
        if (!absorbed) kept.push_back(std::move(t));
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

Dnf to_dnf(const LogicTree& tree, std::size_t cap) {
    std::size_t pos = 0;
    return expand(tree.nodes(), pos, cap);
}

int eval_dnf(const Dnf& dnf, std::span<const double> row) {
    for (const auto& term : dnf) {
        const bool all = std::all_of(term.begin(), term.end(), [&](const Literal& lit) {
            const bool present = row[lit.var] >= 1.0;
            return lit.negated ? !present : present;
        });
        if (all) return 1;
    }
    return 0;
}

std::string format_term(const Term& term) {
    if (term.empty()) return "TRUE";
    std::ostringstream out;
    for (std::size_t k = 0; k < term.size(); ++k) {
        if (k) out << '&';
        out << (term[k].negated ? "!" : "") << 'X' << term[k].var + 1;
    }
    return out.str();
}

std::string format_dnf(const Dnf& dnf) {
    if (dnf.empty()) return "FALSE";
    std::ostringstream out;
    for (std::size_t t = 0; t < dnf.size(); ++t) {
        if (t) out << '|';
        out << format_term(dnf[t]);
    }
    return out.str();
}

Dnf parse_dnf(const std::string& text) {
    if (text == "FALSE") return {};
    if (text == "TRUE") return Dnf{Term{}};
    Dnf dnf;
    std::stringstream terms(text);
    std::string term_text;
    while (std::getline(terms, term_text, '|')) {
        Term term;
        std::stringstream literals(term_text);
        std::string lit;
        while (std::getline(literals, lit, '&')) {
            Literal out;
            std::size_t at = 0;
            if (at < lit.size() && lit[at] == '!') {
                out.negated = true;
                ++at;
            }
            if (at >= lit.size() || lit[at] != 'X') {
                throw ParseError("bad literal '" + lit + "' in DNF '" + text + "'");
            }
            ++at;
            const std::string digits = lit.substr(at);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos ||
                std::stoull(digits) == 0) {
                throw ParseError("bad variable index in literal '" + lit + "'");
            }
            out.var = static_cast<std::size_t>(std::stoull(digits) - 1);
            term.push_back(out);
        }
        if (term.empty()) throw ParseError("empty term in DNF '" + text + "'");
        dnf.push_back(std::move(term));
    }
    return canonicalize(std::move(dnf));
}

}  // namespace clsel::logic
