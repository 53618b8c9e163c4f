#include "clsel/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "clsel/error.hpp"
#include "clsel/random.hpp"

namespace clsel::sim {

namespace {

template <typename F>
double bisect_increasing(F&& f, double target) {
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void check_target(double target) {
    if (!(target > 0.0 && target < 1.0)) {
        throw InvalidArgument("target prevalence must lie in (0, 1)");
    }
}

void check_dnf(const Dnf& dnf) {
    if (dnf.empty()) throw InvalidArgument("DNF has no terms");
    for (const auto& t : dnf) {
        if (t.empty()) throw InvalidArgument("DNF contains an empty term");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void validate(const ScenarioSpec& spec) {
    if (spec.n < 1 || spec.p < 1) throw InvalidArgument("scenario needs n >= 1 and p >= 1");
    check_dnf(spec.dnf);
    for (const auto& t : spec.dnf) {
        for (auto v : t) {
            if (v >= spec.p) {
                throw InvalidArgument("DNF index " + std::to_string(v + 1) + " exceeds p = " +
                                      std::to_string(spec.p));
            }
        }
    }
    if (spec.probs.size() != spec.p) throw InvalidArgument("probs must have length p");
    for (double q : spec.probs) {
        if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("probs must lie in [0, 1]");
    }
    if (!(spec.flip_prob >= 0.0 && spec.flip_prob <= 1.0)) {
        throw InvalidArgument("flip_prob must lie in [0, 1]");
    }
}

bool terms_disjoint(const Dnf& dnf) {
    std::set<std::size_t> seen;
    for (const auto& t : dnf) {
        std::set<std::size_t> own(t.begin(), t.end());
        if (own.size() != t.size()) return false;
        for (auto v : own) {
            if (!seen.insert(v).second) return false;
        }
    }
    return true;
}

double calibrate(const Dnf& dnf, double target_prevalence) {
    check_dnf(dnf);
    check_target(target_prevalence);
    if (!terms_disjoint(dnf)) {
        throw InvalidArgument("auto-calibration needs variable-disjoint terms; pass explicit probs");
    }
    auto prevalence = [&](double q) {
        double none = 1.0;
        for (const auto& t : dnf) none *= 1.0 - std::pow(q, static_cast<double>(t.size()));
        return 1.0 - none;
    };
    return bisect_increasing(prevalence, target_prevalence);
}

double calibrate_term_probability(const Dnf& dnf, double target_prevalence) {
    check_dnf(dnf);
    check_target(target_prevalence);
    if (!terms_disjoint(dnf)) {
        throw InvalidArgument("auto-calibration needs variable-disjoint terms; pass explicit probs");
    }
    const auto terms = static_cast<double>(dnf.size());
    return bisect_increasing([&](double pi) { return 1.0 - std::pow(1.0 - pi, terms); },
                             target_prevalence);
}

std::vector<double> calibrated_probs(const Dnf& dnf, std::size_t p, Calibration mode,
                                     double target_prevalence) {
    std::vector<double> probs(p, 0.5);
    if (mode == Calibration::uniform) {
        const double q = calibrate(dnf, target_prevalence);
        for (const auto& t : dnf) {
            for (auto v : t) probs.at(v) = q;
        }
    } else {
        const double pi = calibrate_term_probability(dnf, target_prevalence);
        for (const auto& t : dnf) {
            const double q = std::pow(pi, 1.0 / static_cast<double>(t.size()));
            for (auto v : t) probs.at(v) = q;
        }
    }
    return probs;
}

double analytic_prevalence(const Dnf& dnf, std::span<const double> probs) {
    if (!terms_disjoint(dnf)) throw InvalidArgument("analytic prevalence needs disjoint terms");
    double none = 1.0;
    for (const auto& t : dnf) {
        double all = 1.0;
        for (auto v : t) all *= probs[v];
        none *= 1.0 - all;
    }
    return 1.0 - none;
}

Dnf builtin_dnf(int id) {
    switch (id) {
        case 1: {
            Dnf dnf;
            for (std::size_t v = 0; v < 10; ++v) dnf.push_back({v});
            return dnf;
        }
        case 2: return {{0, 1, 2}, {3, 4, 5}, {6, 7}, {8}, {9}};
        case 3: return {{0, 1, 2, 3}, {4, 5, 6}, {7, 8}, {9}};
        default: throw InvalidArgument("unknown scenario id " + std::to_string(id) + " (expected 1, 2 or 3)");
    }
}

ScenarioSpec builtin_scenario(int id, std::size_t n, std::size_t p, std::uint64_t seed,
                              Calibration mode) {
    if (p < 10) throw InvalidArgument("built-in scenarios need p >= 10");
    ScenarioSpec spec;
    spec.n = n;
    spec.p = p;
    spec.dnf = builtin_dnf(id);
    spec.probs = calibrated_probs(spec.dnf, p, mode);
    spec.seed = seed;
    return spec;
}

int eval_dnf(const Dnf& dnf, std::span<const double> row) {
    for (const auto& t : dnf) {
        bool all = true;
        for (auto v : t) {
            if (row[v] < 1.0) {
                all = false;
                break;
            }
        }
        if (all) return 1;
    }
    return 0;
}

Dataset generate(const ScenarioSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const auto n = static_cast<Eigen::Index>(spec.n);
    const auto p = static_cast<Eigen::Index>(spec.p);
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    std::vector<double> row(spec.p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            row[static_cast<std::size_t>(j)] =
                uniform01(rng) < spec.probs[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
            x(i, j) = row[static_cast<std::size_t>(j)];
        }
        int label = eval_dnf(spec.dnf, row);
        if (spec.flip_prob > 0.0 && uniform01(rng) < spec.flip_prob) label = 1 - label;
        y(i) = label;
    }
    return Dataset(std::move(x), std::move(y), {}, Encoding::binary);
}

std::vector<std::size_t> term_order_of_variables(const Dnf& dnf, std::size_t p) {
    std::vector<std::size_t> order(p, 0);
    for (const auto& t : dnf) {
        for (auto v : t) {
            if (v < p) order[v] = std::max(order[v], t.size());
        }
    }
    return order;
}

std::vector<std::size_t> relevant_variables(const Dnf& dnf) {
    std::set<std::size_t> vars;
    for (const auto& t : dnf) vars.insert(t.begin(), t.end());
    return {vars.begin(), vars.end()};
}

Dnf parse_dnf(std::istream& in) {
    Dnf dnf;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        Term term;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            field = trim(field);
            std::size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(field, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != field.size() || v < 1) {
                throw ParseError("line " + std::to_string(line_no) + ": '" + field +
                                 "' is not a positive 1-based index");
            }
            term.push_back(static_cast<std::size_t>(v - 1));
        }
        dnf.push_back(std::move(term));
    }
    if (dnf.empty()) throw ParseError("scenario file contains no terms");
    return dnf;
}

Dnf parse_dnf_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    return parse_dnf(in);
}

std::string format_dnf(const Dnf& dnf) {
    std::ostringstream out;
    for (const auto& t : dnf) {
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (k) out << ',';
            out << t[k] + 1;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace clsel::sim
