#include "clsel/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "clsel/error.hpp"
#include "clsel/parallel.hpp"
#include "clsel/random.hpp"
#include "clsel/scores.hpp"
#include "clsel/stats.hpp"
#include "clsel/version.hpp"

namespace clsel::exp {

namespace {

constexpr std::size_t kMaxRedraws = 1000;
constexpr std::uint64_t kFitStream = 0x5bd1e995u;
constexpr std::size_t kMethodStreams = 8;

std::string calibration_name(sim::Calibration c) {
    return c == sim::Calibration::uniform ? "uniform" : "per_term";
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

double mean_of(const std::vector<std::size_t>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (auto x : v) s += static_cast<double>(x);
    return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    return stats::sample_sd(v) / std::sqrt(static_cast<double>(v.size()));
}

std::ofstream open_out(const std::string& dir, const std::string& file) {
    std::filesystem::path path = std::filesystem::path(dir.empty() ? "." : dir) / file;
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(10);
    return out;
}

void header(std::ostream& out, const std::string& study, const ExperimentConfig& config) {
    out << "# clsel " << version() << "\n# study = " << study << "\n";
    for (const auto& line : describe(config)) out << "# " << line << "\n";
}

void check_written(std::ofstream& out, const std::string& file) {
    out.flush();
    if (!out) throw IoError("write failed: " + file);
}

}  // namespace

std::size_t ExperimentConfig::resolved_k() const { return k ? *k : sample_size(n); }

void validate(const ExperimentConfig& config) {
    if (config.scenario < 1 || config.scenario > 3) {
        throw InvalidArgument("scenario must be 1, 2 or 3");
    }
    if (config.p < 10) throw InvalidArgument("built-in scenarios need p >= 10");
    if (config.n < 2) throw InvalidArgument("n must be >= 2");
    if (config.replicates < 1) throw InvalidArgument("replicates must be >= 1");
    const std::size_t k = config.resolved_k();
    if (k < 1 || k > config.p) throw InvalidArgument("k must lie in [1, p]");
    if (config.criteria.empty()) throw InvalidArgument("at least one criterion is required");
    if (config.jobs < 1) throw InvalidArgument("jobs must be >= 1");
    if (config.bootstraps < 1) throw InvalidArgument("bootstraps must be >= 1");
    if (!(config.pipeline_pct_ls >= 0.0 && config.pipeline_pct_ls <= 1.0)) {
        throw InvalidArgument("pipeline LS fraction must lie in [0, 1]");
    }
    logic::validate(config.anneal);
}

std::vector<std::string> describe(const ExperimentConfig& config) {
    std::vector<std::string> lines;
    auto add = [&](const std::string& key, const std::string& value) {
        lines.push_back(key + " = " + value);
    };
    add("scenario", std::to_string(config.scenario));
    add("n", std::to_string(config.n));
    add("p", std::to_string(config.p));
    add("replicates", std::to_string(config.replicates));
    add("k", std::to_string(config.resolved_k()));
    std::string crit;
    for (std::size_t i = 0; i < config.criteria.size(); ++i) {
        crit += (i ? "," : "") + to_string(config.criteria[i]);
    }
    add("criteria", crit);
    add("seed", std::to_string(config.seed));
    add("calibration", calibration_name(config.calibration));
    add("cls_mode", config.cls_mode == SignMode::absolute ? "absolute" : "signed");
    add("cor_mode", config.cor_mode == SignMode::absolute ? "absolute" : "signed");
    add("ls_mode", config.ls_mode == LeverageOrder::ascending ? "ascending" : "descending");
    add("bootstraps", std::to_string(config.bootstraps));
    add("pipeline_pct_ls", fmt(config.pipeline_pct_ls));
    add("nleaves_max", std::to_string(config.anneal.nleaves_max));
    add("iterations", std::to_string(config.anneal.iterations));
    add("t_start", config.anneal.t_start ? fmt(*config.anneal.t_start) : "auto");
    add("cooling", fmt(config.anneal.cooling));
    return lines;
}

sim::ScenarioSpec replicate_spec(const ExperimentConfig& config, std::size_t replicate) {
    return sim::builtin_scenario(config.scenario, config.n, config.p,
                                 derive_seed(config.seed, replicate), config.calibration);
}

Dataset replicate_dataset(const ExperimentConfig& config, std::size_t replicate) {
    auto spec = replicate_spec(config, replicate);
    const std::uint64_t base = spec.seed;
    for (std::size_t attempt = 0; attempt <= kMaxRedraws; ++attempt) {
        if (attempt > 0) spec.seed = derive_seed(base, attempt);
        Dataset d = sim::generate(spec);
        if (d.has_both_classes()) return d;
    }
    throw DegenerateResponse("replicate " + std::to_string(replicate) +
                             " produced a constant response in every redraw");
}

// ---------------------------------------------------------------------

std::string class_label(std::size_t order) {
    if (order == 0) return "irrelevant";
    if (order == 1) return "main";
    return std::to_string(order) + "-way";
}

const ClassSamples& DensityStudyResult::by_order(std::size_t order) const {
    for (const auto& c : classes) {
        if (c.order == order) return c;
    }
    throw InvalidArgument("no variable class of order " + std::to_string(order));
}

namespace {

KdeCurves kde_curves(const std::vector<ClassSamples>& classes, bool leverage,
                     std::size_t grid_points) {
    KdeCurves out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    std::vector<double> bws;
    for (const auto& c : classes) {
        const auto& v = leverage ? c.leverage : c.cross_leverage;
        const double bw = stats::silverman_bandwidth(v);
        bws.push_back(bw);
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        lo = std::min(lo, *mn - 3.0 * bw);
        hi = std::max(hi, *mx + 3.0 * bw);
    }
    out.grid.resize(grid_points);
    for (std::size_t g = 0; g < grid_points; ++g) {
        out.grid[g] = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid_points - 1);
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& v = leverage ? classes[c].leverage : classes[c].cross_leverage;
        out.density.push_back(stats::kde(v, out.grid, bws[c]));
    }
    return out;
}

}  // namespace

DensityStudyResult run_density_study(const ExperimentConfig& config, std::size_t grid_points) {
    validate(config);
    if (grid_points < 2) throw InvalidArgument("KDE grid needs at least 2 points");
    const auto dnf = sim::builtin_dnf(config.scenario);
    const auto order = sim::term_order_of_variables(dnf, config.p);

    std::vector<ScoreSet> per_rep(config.replicates);
    parallel_for(config.replicates, config.jobs, [&](std::size_t r) {
        per_rep[r] = compute_scores(replicate_dataset(config, r));
    });

    std::set<std::size_t, std::greater<>> orders(order.begin(), order.end());
    DensityStudyResult out;
    out.replicates = config.replicates;
    for (auto o : orders) {
        if (o != 0) out.classes.push_back({o, class_label(o), {}, {}});
    }
    if (orders.count(0)) out.classes.push_back({0, class_label(0), {}, {}});
    std::vector<std::size_t> slot(config.p + 1, 0);
    for (std::size_t c = 0; c < out.classes.size(); ++c) slot[out.classes[c].order] = c;

    for (const auto& s : per_rep) {
        for (std::size_t j = 0; j < config.p; ++j) {
            auto& cls = out.classes[slot[order[j]]];
            cls.leverage.push_back(s.leverage[j]);
            cls.cross_leverage.push_back(s.cross_leverage[j]);
        }
    }
    out.leverage_kde = kde_curves(out.classes, true, grid_points);
    out.cross_leverage_kde = kde_curves(out.classes, false, grid_points);
    return out;
}

// ---------------------------------------------------------------------

std::size_t SuccessHistogram::replicates() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

double SuccessHistogram::fraction_at_least(std::size_t m) const {
    const auto total = replicates();
    if (total == 0) return 0.0;
    std::size_t hit = 0;
    for (std::size_t i = m; i < counts.size(); ++i) hit += counts[i];
    return static_cast<double>(hit) / static_cast<double>(total);
}

namespace {

SelectionSpec spec_for(const ExperimentConfig& config, Criterion c, std::size_t k) {
    SelectionSpec spec;
    spec.criterion = c;
    spec.k = k;
    spec.cls_mode = config.cls_mode;
    spec.cor_mode = config.cor_mode;
    spec.ls_mode = config.ls_mode;
    if (c == Criterion::combined) {
        spec.combined = CombinedSpec{0.0, config.pipeline_pct_ls, CombineMode::sequential_disjoint};
    }
    return spec;
}

std::size_t count_relevant(const std::vector<std::size_t>& picked, const std::vector<char>& is_rel) {
    std::size_t c = 0;
    for (auto j : picked) c += is_rel[j] ? 1 : 0;
    return c;
}

std::vector<char> relevant_mask(const sim::Dnf& dnf, std::size_t p) {
    std::vector<char> mask(p, 0);
    for (auto j : sim::relevant_variables(dnf)) mask[j] = 1;
    return mask;
}

}  // namespace

SuccessStudyResult run_success_study(const ExperimentConfig& config) {
    validate(config);
    const auto dnf = sim::builtin_dnf(config.scenario);
    const auto is_rel = relevant_mask(dnf, config.p);
    const std::size_t k = config.resolved_k();
    const std::size_t n_crit = config.criteria.size();

    std::vector<std::vector<std::size_t>> captured(n_crit, std::vector<std::size_t>(config.replicates));
    parallel_for(config.replicates, config.jobs, [&](std::size_t r) {
        const Dataset d = replicate_dataset(config, r);
        const ScoreSet scores = compute_scores(d);
        for (std::size_t c = 0; c < n_crit; ++c) {
            const auto res = select(d, scores, spec_for(config, config.criteria[c], k));
            captured[c][r] = count_relevant(res.indices, is_rel);
        }
    });

    SuccessStudyResult out;
    out.relevant = sim::relevant_variables(dnf).size();
    out.k = k;
    for (std::size_t c = 0; c < n_crit; ++c) {
        SuccessHistogram h;
        h.counts.assign(out.relevant + 1, 0);
        std::vector<double> vals;
        for (auto m : captured[c]) {
            ++h.counts[m];
            vals.push_back(static_cast<double>(m));
        }
        h.mean_captured = mean_of(captured[c]);
        h.se = se_of(vals);
        out.histograms[config.criteria[c]] = std::move(h);
        out.captured[config.criteria[c]] = std::move(captured[c]);
    }
    return out;
}

// ---------------------------------------------------------------------

namespace {

std::size_t pct_slot(const std::vector<double>& pct, double v) {
    for (std::size_t i = 0; i < pct.size(); ++i) {
        if (std::abs(pct[i] - v) < 1e-9) return i;
    }
    throw InvalidArgument("grid has no row/column at " + fmt(v));
}

}  // namespace

double ComboGrid::at(double pct_cls, double pct_ls) const {
    return mean(static_cast<Eigen::Index>(pct_slot(pct, pct_ls)),
                static_cast<Eigen::Index>(pct_slot(pct, pct_cls)));
}

double ComboGrid::se_at(double pct_cls, double pct_ls) const {
    return se(static_cast<Eigen::Index>(pct_slot(pct, pct_ls)),
              static_cast<Eigen::Index>(pct_slot(pct, pct_cls)));
}

ComboGrid run_combo_grid(const ExperimentConfig& config) {
    validate(config);
    const auto dnf = sim::builtin_dnf(config.scenario);
    const auto is_rel = relevant_mask(dnf, config.p);
    const double n_rel = static_cast<double>(sim::relevant_variables(dnf).size());
    constexpr std::size_t kSteps = 10;

    ComboGrid grid;
    for (std::size_t i = 0; i < kSteps; ++i) grid.pct.push_back(static_cast<double>(i) / 10.0);
    grid.replicates = config.replicates;

    // props[r](ls row, cls column)
    std::vector<Eigen::MatrixXd> props(config.replicates);
    parallel_for(config.replicates, config.jobs, [&](std::size_t r) {
        const ScoreSet scores = compute_scores(replicate_dataset(config, r));
        const auto cls_order = rank_order(cls_values(scores, config.cls_mode).key);
        const auto ls_order = rank_order(ls_values(scores, config.ls_mode).key);
        Eigen::MatrixXd m(kSteps, kSteps);
        for (std::size_t a = 0; a < kSteps; ++a) {
            const std::size_t n_ls = fraction_count(grid.pct[a], config.p);
            for (std::size_t b = 0; b < kSteps; ++b) {
                const std::size_t n_cls = fraction_count(grid.pct[b], config.p);
                const auto picked = union_of_prefixes(cls_order, ls_order, n_cls, n_ls);
                m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    static_cast<double>(count_relevant(picked, is_rel)) / n_rel;
            }
        }
        props[r] = std::move(m);
    });

    grid.mean = Eigen::MatrixXd::Zero(kSteps, kSteps);
    grid.se = Eigen::MatrixXd::Zero(kSteps, kSteps);
    std::vector<double> cell(config.replicates);
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(kSteps); ++a) {
        for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(kSteps); ++b) {
            for (std::size_t r = 0; r < config.replicates; ++r) cell[r] = props[r](a, b);
            grid.mean(a, b) = stats::mean(cell);
            grid.se(a, b) = se_of(cell);
        }
    }
    return grid;
}

// ---------------------------------------------------------------------

std::string to_string(ReductionMethod method) {
    switch (method) {
        case ReductionMethod::none: return "none";
        case ReductionMethod::ls: return "ls";
        case ReductionMethod::cls: return "cls";
        case ReductionMethod::cor: return "cor";
        case ReductionMethod::pval: return "pval";
        case ReductionMethod::combined: return "combined";
    }
    return "unknown";
}

const MethodRecovery& PipelineReport::method(ReductionMethod m) const {
    for (const auto& r : methods) {
        if (r.method == m) return r;
    }
    throw InvalidArgument("report has no method " + to_string(m));
}

std::vector<std::size_t> reduce(const Dataset& dataset, ReductionMethod method, std::size_t k,
                                const ExperimentConfig& config) {
    const std::size_t p = dataset.p();
    if (method == ReductionMethod::none) {
        std::vector<std::size_t> all(p);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    Criterion c = Criterion::cls;
    switch (method) {
        case ReductionMethod::ls: c = Criterion::ls; break;
        case ReductionMethod::cls: c = Criterion::cls; break;
        case ReductionMethod::cor: c = Criterion::cor; break;
        case ReductionMethod::pval: c = Criterion::pval; break;
        case ReductionMethod::combined: c = Criterion::combined; break;
        case ReductionMethod::none: break;
    }
    return select(dataset, spec_for(config, c, k)).indices;
}

PipelineReport run_pipeline_study(const ExperimentConfig& config,
                                  const std::vector<ReductionMethod>& methods) {
    validate(config);
    if (methods.empty()) throw InvalidArgument("no reduction methods requested");
    const auto dnf = sim::builtin_dnf(config.scenario);
    const std::size_t k = config.resolved_k();
    const std::size_t n_m = methods.size();
    const std::size_t n_t = dnf.size();

    struct Cell {
        std::size_t kept = 0;
        std::vector<char> term_kept;
        std::vector<double> term_freq;
        std::vector<char> var_kept;
        std::vector<double> var_freq;
        double reduce_seconds = 0.0;
        double fit_seconds = 0.0;
    };
    const auto relevant = sim::relevant_variables(dnf);
    const std::size_t n_v = relevant.size();
    std::vector<std::vector<Cell>> cells(config.replicates, std::vector<Cell>(n_m));

    parallel_for(config.replicates, config.jobs, [&](std::size_t r) {
        const Dataset d = replicate_dataset(config, r);
        for (std::size_t m = 0; m < n_m; ++m) {
            const auto t0 = std::chrono::steady_clock::now();
            auto kept = reduce(d, methods[m], k, config);
            std::sort(kept.begin(), kept.end());
            const Dataset sub = d.subset_columns(kept);
            const auto t1 = std::chrono::steady_clock::now();
            logic::AnnealParams params = config.anneal;
            // keyed on the method, not its position, so subsets of methods reproduce
            params.seed = derive_seed(config.seed ^ kFitStream,
                                      r * kMethodStreams + static_cast<std::size_t>(methods[m]));
            const auto report = logic::ensemble_fit(sub, params, config.bootstraps, 1);
            const auto t2 = std::chrono::steady_clock::now();

            Cell& cell = cells[r][m];
            cell.kept = kept.size();
            cell.reduce_seconds = std::chrono::duration<double>(t1 - t0).count();
            cell.fit_seconds = std::chrono::duration<double>(t2 - t1).count();
            cell.var_kept.assign(n_v, 0);
            cell.var_freq.assign(n_v, 0.0);
            for (std::size_t v = 0; v < n_v; ++v) {
                const auto it = std::lower_bound(kept.begin(), kept.end(), relevant[v]);
                if (it == kept.end() || *it != relevant[v]) continue;
                cell.var_kept[v] = 1;
                cell.var_freq[v] = report.variable_frequency[static_cast<std::size_t>(it - kept.begin())];
            }
            cell.term_kept.assign(n_t, 0);
            cell.term_freq.assign(n_t, 0.0);
            // Fitted terms in original column numbering, positive literals only.
            std::map<sim::Term, double> fitted;
            for (const auto& [term, freq] : report.term_frequency) {
                sim::Term vars;
                bool positive = true;
                for (const auto& lit : term) {
                    if (lit.negated) positive = false;
                    vars.push_back(kept[lit.var]);
                }
                if (!positive || vars.empty()) continue;
                std::sort(vars.begin(), vars.end());
                fitted[vars] += freq;
            }
            for (std::size_t t = 0; t < n_t; ++t) {
                sim::Term truth = dnf[t];
                std::sort(truth.begin(), truth.end());
                cell.term_kept[t] = std::all_of(truth.begin(), truth.end(), [&](std::size_t v) {
                    return std::binary_search(kept.begin(), kept.end(), v);
                });
                auto it = fitted.find(truth);
                if (it != fitted.end()) cell.term_freq[t] = it->second;
            }
        }
    });

    PipelineReport out;
    out.replicates = config.replicates;
    const double reps = static_cast<double>(config.replicates);
    for (std::size_t m = 0; m < n_m; ++m) {
        MethodRecovery rec;
        rec.method = methods[m];
        rec.kept_variables = cells[0][m].kept;
        for (std::size_t t = 0; t < n_t; ++t) {
            TermRecovery tr;
            tr.truth = dnf[t];
            std::sort(tr.truth.begin(), tr.truth.end());
            double kept = 0.0, found = 0.0, imp = 0.0;
            for (std::size_t r = 0; r < config.replicates; ++r) {
                kept += cells[r][m].term_kept[t] ? 1.0 : 0.0;
                found += cells[r][m].term_freq[t] > 0.0 ? 1.0 : 0.0;
                imp += cells[r][m].term_freq[t];
            }
            tr.kept_fraction = kept / reps;
            tr.found_fraction = found / reps;
            tr.mean_importance = imp / reps;
            rec.terms.push_back(std::move(tr));
        }
        for (std::size_t v = 0; v < n_v; ++v) {
            VariableRecovery vr;
            vr.var = relevant[v];
            for (std::size_t r = 0; r < config.replicates; ++r) {
                vr.kept_fraction += cells[r][m].var_kept[v] ? 1.0 : 0.0;
                vr.found_fraction += cells[r][m].var_freq[v] > 0.0 ? 1.0 : 0.0;
                vr.mean_frequency += cells[r][m].var_freq[v];
            }
            vr.kept_fraction /= reps;
            vr.found_fraction /= reps;
            vr.mean_frequency /= reps;
            rec.variables.push_back(vr);
        }
        for (std::size_t r = 0; r < config.replicates; ++r) {
            rec.reduce_seconds += cells[r][m].reduce_seconds;
            rec.fit_seconds += cells[r][m].fit_seconds;
        }
        out.methods.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------

void write_density(const std::string& dir, const DensityStudyResult& result,
                   const ExperimentConfig& config, bool raw_samples) {
    if (raw_samples) {
        auto out = open_out(dir, "density_samples.tsv");
        header(out, "density", config);
        out << "class\tleverage\tcross_leverage\n";
        for (const auto& c : result.classes) {
            for (std::size_t i = 0; i < c.leverage.size(); ++i) {
                out << c.label << '\t' << c.leverage[i] << '\t' << c.cross_leverage[i] << '\n';
            }
        }
        check_written(out, "density_samples.tsv");
    }
    {
        auto out = open_out(dir, "density_summary.tsv");
        header(out, "density", config);
        out << "class\tmeasure\tcount\tmean\tsd\tq05\tq50\tq95\tfrac_abs_gt_0.025\n";
        for (const auto& c : result.classes) {
            for (int which = 0; which < 2; ++which) {
                const auto& v = which == 0 ? c.leverage : c.cross_leverage;
                const auto above = std::count_if(v.begin(), v.end(),
                                                 [](double x) { return std::abs(x) > 0.025; });
                out << c.label << '\t' << (which == 0 ? "leverage" : "cross_leverage") << '\t'
                    << v.size() << '\t' << stats::mean(v) << '\t'
                    << (v.size() > 1 ? stats::sample_sd(v) : 0.0) << '\t'
                    << stats::quantile(v, 0.05) << '\t' << stats::quantile(v, 0.5) << '\t'
                    << stats::quantile(v, 0.95) << '\t'
                    << static_cast<double>(above) / static_cast<double>(v.size()) << '\n';
            }
        }
        check_written(out, "density_summary.tsv");
    }
    for (int which = 0; which < 2; ++which) {
        const std::string file = which == 0 ? "density_kde_leverage.tsv"
                                            : "density_kde_cross_leverage.tsv";
        const auto& curves = which == 0 ? result.leverage_kde : result.cross_leverage_kde;
        auto out = open_out(dir, file);
        header(out, "density", config);
        out << "grid";
        for (const auto& c : result.classes) out << '\t' << c.label;
        out << '\n';
        for (std::size_t g = 0; g < curves.grid.size(); ++g) {
            out << curves.grid[g];
            for (const auto& d : curves.density) out << '\t' << d[g];
            out << '\n';
        }
        check_written(out, file);
    }
}

void write_success(const std::string& dir, const SuccessStudyResult& result,
                   const ExperimentConfig& config) {
    auto out = open_out(dir, "success.tsv");
    header(out, "success", config);
    out << "criterion";
    for (std::size_t m = 0; m <= result.relevant; ++m) out << "\tcaptured_" << m;
    out << "\tmean_captured\tse\tfrac_ge_8\n";
    for (auto c : config.criteria) {
        const auto& h = result.histograms.at(c);
        out << to_string(c);
        for (auto v : h.counts) out << '\t' << v;
        out << '\t' << h.mean_captured << '\t' << h.se << '\t' << h.fraction_at_least(8) << '\n';
    }
    check_written(out, "success.tsv");
}

void write_grid(const std::string& dir, const ComboGrid& grid, const ExperimentConfig& config) {
    for (int which = 0; which < 2; ++which) {
        const std::string file = which == 0 ? "grid.tsv" : "grid_se.tsv";
        const auto& m = which == 0 ? grid.mean : grid.se;
        auto out = open_out(dir, file);
        header(out, "grid", config);
        out << "# rows: LS fraction, columns: CLS fraction\n";
        out << "pct_ls\\pct_cls";
        for (auto v : grid.pct) out << '\t' << v;
        out << '\n';
        for (Eigen::Index a = 0; a < m.rows(); ++a) {
            out << grid.pct[static_cast<std::size_t>(a)];
            for (Eigen::Index b = 0; b < m.cols(); ++b) out << '\t' << m(a, b);
            out << '\n';
        }
        check_written(out, file);
    }
}

void write_pipeline(const std::string& dir, const PipelineReport& report,
                    const ExperimentConfig& config) {
    auto out = open_out(dir, "pipeline.tsv");
    header(out, "pipeline", config);
    out << "method\tkept_variables\tkind\titem\tkept_fraction\tfound_fraction\tmean_importance\n";
    for (const auto& m : report.methods) {
        for (const auto& v : m.variables) {
            out << to_string(m.method) << '\t' << m.kept_variables << "\tvariable\tX" << v.var + 1
                << '\t' << v.kept_fraction << '\t' << v.found_fraction << '\t' << v.mean_frequency
                << '\n';
        }
        for (const auto& t : m.terms) {
            std::string term;
            for (std::size_t i = 0; i < t.truth.size(); ++i) {
                term += (i ? "&X" : "X") + std::to_string(t.truth[i] + 1);
            }
            out << to_string(m.method) << '\t' << m.kept_variables << "\tterm\t" << term << '\t'
                << t.kept_fraction << '\t' << t.found_fraction << '\t' << t.mean_importance << '\n';
        }
    }
    check_written(out, "pipeline.tsv");

    // Timings vary run to run, so they live apart from the deterministic table.
    auto tout = open_out(dir, "pipeline_timing.tsv");
    header(tout, "pipeline", config);
    tout << "method\treduce_seconds\tfit_seconds\n";
    for (const auto& m : report.methods) {
        tout << to_string(m.method) << '\t' << m.reduce_seconds << '\t' << m.fit_seconds << '\n';
    }
    check_written(tout, "pipeline_timing.tsv");
}

}  // namespace clsel::exp
