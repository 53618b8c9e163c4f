#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clsel/error.hpp"
#include "clsel/experiments.hpp"
#include "clsel/io.hpp"
#include "clsel/logic.hpp"
#include "clsel/logic_fit.hpp"
#include "clsel/scores.hpp"
#include "clsel/selection.hpp"
#include "clsel/simgen.hpp"
#include "clsel/version.hpp"

namespace clsel::cli {

namespace {

// Usage-class failure detected after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            os_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw IoError("cannot open " + path + " for writing");
            os_ = file_.get();
        }
        *os_ << std::setprecision(10);
        path_ = path.empty() ? "-" : path;
    }
    std::ostream& os() { return *os_; }
    void finish() {
        os_->flush();
        if (!*os_) throw IoError("write failed: " + path_);
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
    std::string path_;
};

using Config = std::vector<std::pair<std::string, std::string>>;

void write_header(std::ostream& os, const std::string& command, const Config& config) {
    os << "# clsel " << version() << "\n# command = " << command << "\n";
    for (const auto& [k, v] : config) os << "# " << k << " = " << v << "\n";
}

std::vector<std::string> header_lines(const std::string& command, const Config& config) {
    std::vector<std::string> lines{std::string("clsel ") + version(), "command = " + command};
    for (const auto& [k, v] : config) lines.push_back(k + " = " + v);
    return lines;
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

io::ColumnRef column_ref(const std::string& text) {
    if (!text.empty() && std::all_of(text.begin(), text.end(), [](unsigned char c) {
            return std::isdigit(c) != 0;
        })) {
        return static_cast<std::size_t>(std::stoul(text));
    }
    return text;
}

Dataset load_dataset(const std::string& path, const std::string& response) {
    const auto table = io::load_table(path, column_ref(response));
    if (table.missing_count() > 0) {
        throw InvalidDataset(path + " has " + std::to_string(table.missing_count()) +
                             " missing cells; run 'clsel preprocess' first");
    }
    return io::to_dataset(table);
}

std::size_t resolve_k(const std::string& text, std::size_t n) {
    if (text == "auto") return sample_size(n);
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || v == 0) throw UsageError("--k must be 'auto' or a positive integer");
    return v;
}

// 1-based comma-separated list, e.g. "1,4,7".
std::vector<std::size_t> parse_columns(const std::string& text, std::size_t p) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || v < 1 || v > p) {
            throw UsageError("invalid column '" + item + "' (expected 1.." + std::to_string(p) + ")");
        }
        out.push_back(v - 1);
    }
    return out;
}

// Reads the 'index' column of a file written by 'clsel select'.
std::vector<std::size_t> read_selection(const std::string& path, std::size_t p) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    std::optional<std::size_t> col;
    std::vector<std::size_t> out;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, '\t')) cells.push_back(cell);
        if (!col) {
            auto it = std::find(cells.begin(), cells.end(), "index");
            if (it == cells.end()) throw ParseError(path + ": no 'index' column in header");
            col = static_cast<std::size_t>(it - cells.begin());
            continue;
        }
        if (*col >= cells.size()) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": missing index cell");
        }
        const auto idx = parse_columns(cells[*col], p);
        out.insert(out.end(), idx.begin(), idx.end());
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string named_term(const logic::Term& term, const Dataset& d) {
    std::vector<std::string> lits;
    for (const auto& l : term) lits.push_back((l.negated ? "!" : "") + d.name(l.var));
    return join(lits, "&");
}

std::string named_dnf(const logic::Dnf& dnf, const Dataset& d) {
    if (dnf.empty()) return "FALSE";
    std::vector<std::string> terms;
    for (const auto& t : dnf) terms.push_back(t.empty() ? "TRUE" : named_term(t, d));
    return join(terms, "|");
}

// Literal indices of a model fitted on a column subset, moved back to the
// original column numbering.
logic::Term remap(logic::Term t, const std::vector<std::size_t>& cols) {
    for (auto& l : t) l.var = cols[l.var];
    std::sort(t.begin(), t.end());
    return t;
}

logic::Dnf remap(const logic::Dnf& dnf, const std::vector<std::size_t>& cols) {
    logic::Dnf out;
    for (const auto& t : dnf) out.push_back(remap(t, cols));
    return out;
}

logic::LogicTree remap(const logic::LogicTree& tree, const std::vector<std::size_t>& cols) {
    auto nodes = tree.nodes();
    for (auto& n : nodes) {
        if (n.kind == logic::NodeKind::leaf) n.literal.var = cols[n.literal.var];
    }
    return logic::LogicTree::from_preorder(std::move(nodes));
}

SignMode sign_mode(const std::string& s) {
    return s == "signed" ? SignMode::signed_descending : SignMode::absolute;
}

LeverageOrder leverage_order(const std::string& s) {
    return s == "descending" ? LeverageOrder::descending : LeverageOrder::ascending;
}

sim::Calibration calibration(const std::string& s) {
    return s == "uniform" ? sim::Calibration::uniform : sim::Calibration::per_term;
}

const std::vector<std::string> kCriteria{"cls", "ls", "cor", "pval", "combined"};

// ---------------------------------------------------------------------

struct DataOpts {
    std::string input;
    std::string response = "y";
    std::string output = "-";
};

void add_data_opts(CLI::App* sub, DataOpts& o, bool with_output = true) {
    sub->add_option("-i,--input", o.input, "Delimiter-separated input table")->required();
    sub->add_option("-r,--response", o.response,
                    "Response column: header name or 1-based position")
        ->capture_default_str();
    if (with_output) {
        sub->add_option("-o,--output", o.output, "Output file ('-' for stdout)")
            ->capture_default_str();
    }
}

struct AnnealOpts {
    std::size_t nleaves = 30;
    std::size_t iterations = 50'000;
    std::optional<double> t_start;
    double cooling = 0.999;
};

void add_anneal_opts(CLI::App* sub, AnnealOpts& o) {
    sub->add_option("--nleaves", o.nleaves, "Maximum leaves per tree")->capture_default_str();
    sub->add_option("--iterations", o.iterations, "Annealing iterations")->capture_default_str();
    sub->add_option("--t-start", o.t_start, "Starting temperature (default 1 + score/10)");
    sub->add_option("--cooling", o.cooling, "Geometric cooling factor")->capture_default_str();
}

logic::AnnealParams anneal_params(const AnnealOpts& o, std::uint64_t seed) {
    logic::AnnealParams p;
    p.nleaves_max = o.nleaves;
    p.iterations = o.iterations;
    p.t_start = o.t_start;
    p.cooling = o.cooling;
    p.seed = seed;
    return p;
}

void echo_anneal(Config& cfg, const AnnealOpts& o) {
    cfg.emplace_back("nleaves", std::to_string(o.nleaves));
    cfg.emplace_back("iterations", std::to_string(o.iterations));
    cfg.emplace_back("t_start", o.t_start ? num(*o.t_start) : "auto");
    cfg.emplace_back("cooling", num(o.cooling));
}

// ---------------------------------------------------------------------

void cmd_scores(const DataOpts& o, std::ostream& out) {
    const Dataset d = load_dataset(o.input, o.response);
    const ScoreSet s = compute_scores(d);
    Config cfg{{"input", o.input},
               {"response", o.response},
               {"n", std::to_string(d.n())},
               {"p", std::to_string(d.p())},
               {"rank", std::to_string(s.rank)},
               {"rank_deficient", s.rank_deficient ? "true" : "false"},
               {"response_leverage", num(s.response_leverage)}};
    Sink sink(o.output, out);
    write_header(sink.os(), "scores", cfg);
    sink.os() << "index\tname\tleverage\tcross_leverage\n";
    for (std::size_t j = 0; j < d.p(); ++j) {
        sink.os() << j + 1 << '\t' << d.name(j) << '\t' << s.leverage[j] << '\t'
                  << s.cross_leverage[j] << '\n';
    }
    sink.finish();
}

struct SelectOpts {
    DataOpts data;
    std::string criterion = "cls";
    std::string k = "auto";
    std::string cls_mode = "absolute";
    std::string ls_mode = "ascending";
    std::string cor_mode = "absolute";
    std::optional<double> pct_cls;
    std::optional<double> pct_ls;
    std::string combine = "union";
};

void cmd_select(const SelectOpts& o, std::ostream& out) {
    const Criterion criterion = criterion_from_string(o.criterion);
    if (criterion == Criterion::combined) {
        if (!o.pct_ls || (o.combine == "union" && !o.pct_cls)) {
            throw UsageError(o.combine == "union"
                                 ? "--criterion combined needs --pct-cls and --pct-ls"
                                 : "--criterion combined needs --pct-ls");
        }
    } else if (o.pct_cls || o.pct_ls) {
        throw UsageError("--pct-cls / --pct-ls only apply to --criterion combined");
    }
    const Dataset d = load_dataset(o.data.input, o.data.response);
    d.require_both_classes();

    SelectionSpec spec;
    spec.criterion = criterion;
    spec.k = resolve_k(o.k, d.n());
    spec.cls_mode = sign_mode(o.cls_mode);
    spec.ls_mode = leverage_order(o.ls_mode);
    spec.cor_mode = sign_mode(o.cor_mode);
    if (criterion == Criterion::combined) {
        spec.combined = CombinedSpec{o.pct_cls.value_or(0.0), *o.pct_ls,
                                     o.combine == "union" ? CombineMode::union_of_sets
                                                          : CombineMode::sequential_disjoint};
    }
    const auto result = select(d, spec);

    Config cfg{{"input", o.data.input},        {"response", o.data.response},
               {"n", std::to_string(d.n())},   {"p", std::to_string(d.p())},
               {"criterion", o.criterion},     {"k", std::to_string(spec.k)},
               {"cls_mode", o.cls_mode},       {"ls_mode", o.ls_mode},
               {"cor_mode", o.cor_mode}};
    if (criterion == Criterion::combined) {
        cfg.emplace_back("combine", o.combine);
        cfg.emplace_back("pct_cls", num(o.pct_cls.value_or(0.0)));
        cfg.emplace_back("pct_ls", num(*o.pct_ls));
        if (o.combine == "union") cfg.emplace_back("note", "union mode ignores k");
    }
    cfg.emplace_back("selected", std::to_string(result.indices.size()));
    cfg.emplace_back("truncated", result.truncated ? "true" : "false");

    Sink sink(o.data.output, out);
    write_header(sink.os(), "select", cfg);
    sink.os() << "rank\tindex\tname\tscore\n";
    for (std::size_t r = 0; r < result.indices.size(); ++r) {
        const auto j = result.indices[r];
        sink.os() << r + 1 << '\t' << j + 1 << '\t' << d.name(j) << '\t';
        if (std::isnan(result.scores_used[r])) {
            sink.os() << "NA";
        } else {
            sink.os() << result.scores_used[r];
        }
        sink.os() << '\n';
    }
    sink.finish();
}

struct SimulateOpts {
    int scenario = 3;
    std::string dnf_file;
    std::size_t n = 60;
    std::size_t p = 1000;
    std::uint64_t seed = 1;
    std::string calibration = "per_term";
    double flip_prob = 0.0;
    std::string output = "-";
};

void cmd_simulate(const SimulateOpts& o, std::ostream& out) {
    sim::ScenarioSpec spec;
    const auto mode = calibration(o.calibration);
    if (!o.dnf_file.empty()) {
        spec.n = o.n;
        spec.p = o.p;
        spec.dnf = sim::parse_dnf_file(o.dnf_file);
        spec.probs = sim::calibrated_probs(spec.dnf, o.p, mode);
        spec.seed = o.seed;
    } else {
        spec = sim::builtin_scenario(o.scenario, o.n, o.p, o.seed, mode);
    }
    spec.flip_prob = o.flip_prob;
    const Dataset d = sim::generate(spec);

    std::string terms;
    for (const auto& t : spec.dnf) {
        std::vector<std::string> v;
        for (auto j : t) v.push_back(std::to_string(j + 1));
        terms += (terms.empty() ? "" : " | ") + join(v, ",");
    }
    Config cfg{{"scenario", o.dnf_file.empty() ? std::to_string(o.scenario) : "file"},
               {"dnf_file", o.dnf_file.empty() ? "none" : o.dnf_file},
               {"terms", terms},
               {"n", std::to_string(o.n)},
               {"p", std::to_string(o.p)},
               {"seed", std::to_string(o.seed)},
               {"calibration", o.calibration},
               {"flip_prob", num(o.flip_prob)},
               {"cases", std::to_string(d.cases())}};
    std::vector<std::size_t> rel = sim::relevant_variables(spec.dnf);
    for (auto j : rel) cfg.emplace_back("prob_X" + std::to_string(j + 1), num(spec.probs[j]));

    Sink sink(o.output, out);
    write_header(sink.os(), "simulate", cfg);
    io::write_table(sink.os(), d, "y");
    sink.finish();
}

struct FitOpts {
    DataOpts data;
    AnnealOpts anneal;
    std::uint64_t seed = 1;
    std::size_t bootstraps = 0;
    std::size_t jobs = 1;
    std::string columns;
    std::string selection;
};

void cmd_fit(const FitOpts& o, std::ostream& out) {
    if (!o.columns.empty() && !o.selection.empty()) {
        throw UsageError("--columns and --selection are mutually exclusive");
    }
    const Dataset full = load_dataset(o.data.input, o.data.response);
    full.require_both_classes();
    std::vector<std::size_t> cols;
    if (!o.columns.empty()) {
        cols = parse_columns(o.columns, full.p());
    } else if (!o.selection.empty()) {
        cols = read_selection(o.selection, full.p());
    } else {
        cols.resize(full.p());
        for (std::size_t j = 0; j < full.p(); ++j) cols[j] = j;
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    const Dataset d = full.subset_columns(cols);
    const auto params = anneal_params(o.anneal, o.seed);

    Config cfg{{"input", o.data.input},
               {"response", o.data.response},
               {"n", std::to_string(full.n())},
               {"p", std::to_string(full.p())},
               {"columns_used", std::to_string(cols.size())},
               {"seed", std::to_string(o.seed)},
               {"bootstraps", std::to_string(o.bootstraps)},
               {"jobs", std::to_string(o.jobs)}};
    echo_anneal(cfg, o.anneal);

    auto describe_model = [&](std::ostream& os, const logic::FittedLogicModel& m) {
        os << "tree\t" << remap(m.tree, cols).to_string() << '\n';
        os << "score\t" << m.score << '\n';
        os << "class_when_true\t" << m.class_when_true << '\n';
        os << "class_when_false\t" << m.class_when_false << '\n';
        if (m.case_dnf) {
            const auto dnf = remap(*m.case_dnf, cols);
            os << "case_dnf\t" << logic::format_dnf(dnf) << '\n';
            os << "case_dnf_names\t" << named_dnf(dnf, full) << '\n';
        } else {
            os << "case_dnf\tNA\n";
        }
    };

    if (o.bootstraps == 0) {
        const auto model = logic::anneal_fit(d, params);
        Sink sink(o.data.output, out);
        write_header(sink.os(), "fit-logic", cfg);
        sink.os() << "key\tvalue\n";
        describe_model(sink.os(), model);
        sink.finish();
        return;
    }

    const auto report = logic::ensemble_fit(d, params, o.bootstraps, o.jobs);
    Sink sink(o.data.output, out);
    write_header(sink.os(), "fit-logic", cfg);
    sink.os() << "kind\titem\tname\tfrequency\n";
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (report.variable_frequency[j] <= 0.0) continue;
        sink.os() << "variable\tX" << cols[j] + 1 << '\t' << full.name(cols[j]) << '\t'
                  << report.variable_frequency[j] << '\n';
    }
    std::vector<std::pair<logic::Term, double>> terms;
    for (const auto& [t, f] : report.term_frequency) terms.emplace_back(remap(t, cols), f);
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [t, f] : terms) {
        sink.os() << "term\t" << logic::format_term(t) << '\t' << named_term(t, full) << '\t' << f
                  << '\n';
    }
    for (std::size_t b = 0; b < report.models.size(); ++b) {
        const auto& m = report.models[b];
        sink.os() << "model\t" << b + 1 << '\t'
                  << (m.case_dnf ? logic::format_dnf(remap(*m.case_dnf, cols)) : "NA") << '\t'
                  << m.score << '\n';
    }
    sink.finish();
}

struct ExperimentOpts {
    std::string study;
    int scenario = 3;
    std::size_t n = 60;
    std::size_t p = 1000;
    std::optional<std::size_t> replicates;
    bool full_scale = false;
    std::string k = "auto";
    std::vector<std::string> criteria{"cls", "ls", "cor", "pval"};
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    std::string out_dir = ".";
    std::string calibration = "per_term";
    std::string cls_mode = "absolute";
    std::string ls_mode = "ascending";
    std::string cor_mode = "absolute";
    std::size_t bootstraps = 20;
    double pct_ls = 0.1;
    std::size_t grid_points = 512;
    bool no_raw = false;
    AnnealOpts anneal;
};

void cmd_experiment(const ExperimentOpts& o, std::ostream& out) {
    exp::ExperimentConfig c;
    c.scenario = o.scenario;
    c.n = o.n;
    c.p = o.p;
    const std::size_t default_reps = o.study == "pipeline" ? 10 : exp::kDeskReplicates;
    c.replicates = o.full_scale ? exp::kFullReplicates : o.replicates.value_or(default_reps);
    if (o.full_scale && o.replicates) {
        throw UsageError("--full-scale and --replicates are mutually exclusive");
    }
    c.k = resolve_k(o.k, o.n);
    c.criteria.clear();
    for (const auto& s : o.criteria) c.criteria.push_back(criterion_from_string(s));
    c.seed = o.seed;
    c.jobs = o.jobs;
    c.calibration = calibration(o.calibration);
    c.cls_mode = sign_mode(o.cls_mode);
    c.ls_mode = leverage_order(o.ls_mode);
    c.cor_mode = sign_mode(o.cor_mode);
    c.bootstraps = o.bootstraps;
    c.pipeline_pct_ls = o.pct_ls;
    c.anneal = anneal_params(o.anneal, 0);
    exp::validate(c);

    std::ostream& os = out;
    os << std::setprecision(6);
    os << "# clsel " << version() << "\n# command = experiment " << o.study << "\n";
    for (const auto& line : exp::describe(c)) os << "# " << line << "\n";
    os << "# output_dir = " << o.out_dir << "\n";

    if (o.study == "density") {
        const auto r = exp::run_density_study(c, o.grid_points);
        exp::write_density(o.out_dir, r, c, !o.no_raw);
        os << "class\tcount\tmean_leverage\tmean_cross_leverage\n";
        for (const auto& cls : r.classes) {
            double ml = 0.0, mc = 0.0;
            for (auto v : cls.leverage) ml += v;
            for (auto v : cls.cross_leverage) mc += v;
            const double m = static_cast<double>(cls.leverage.size());
            os << cls.label << '\t' << cls.leverage.size() << '\t' << ml / m << '\t' << mc / m
               << '\n';
        }
    } else if (o.study == "success") {
        const auto r = exp::run_success_study(c);
        exp::write_success(o.out_dir, r, c);
        os << "criterion\tmean_captured\tse\tfrac_ge_8\n";
        for (auto crit : c.criteria) {
            const auto& h = r.histograms.at(crit);
            os << to_string(crit) << '\t' << h.mean_captured << '\t' << h.se << '\t'
               << h.fraction_at_least(8) << '\n';
        }
    } else if (o.study == "grid") {
        const auto g = exp::run_combo_grid(c);
        exp::write_grid(o.out_dir, g, c);
        os << "pct_ls\\pct_cls";
        for (auto v : g.pct) os << '\t' << v;
        os << '\n';
        for (Eigen::Index a = 0; a < g.mean.rows(); ++a) {
            os << g.pct[static_cast<std::size_t>(a)];
            for (Eigen::Index b = 0; b < g.mean.cols(); ++b) os << '\t' << g.mean(a, b);
            os << '\n';
        }
    } else {
        const auto r = exp::run_pipeline_study(c);
        exp::write_pipeline(o.out_dir, r, c);
        os << "method\tkept_variables\tterms_found_fraction\treduce_seconds\tfit_seconds\n";
        for (const auto& m : r.methods) {
            double found = 0.0;
            for (const auto& t : m.terms) found += t.found_fraction;
            os << exp::to_string(m.method) << '\t' << m.kept_variables << '\t'
               << found / static_cast<double>(m.terms.size()) << '\t' << m.reduce_seconds << '\t'
               << m.fit_seconds << '\n';
        }
    }
}

struct RasterOpts {
    DataOpts data;
    std::string columns;
    std::string selection;
    bool ascii = false;
};

void cmd_raster(const RasterOpts& o) {
    if (!o.columns.empty() && !o.selection.empty()) {
        throw UsageError("--columns and --selection are mutually exclusive");
    }
    if (o.data.output == "-" || o.data.output.empty()) {
        throw UsageError("raster needs an --output path");
    }
    const Dataset d = load_dataset(o.data.input, o.data.response);
    std::vector<std::size_t> cols;
    if (!o.columns.empty()) {
        cols = parse_columns(o.columns, d.p());
    } else if (!o.selection.empty()) {
        cols = read_selection(o.selection, d.p());
    } else {
        cols.resize(d.p());
        for (std::size_t j = 0; j < d.p(); ++j) cols[j] = j;
    }
    Config cfg{{"input", o.data.input},
               {"response", o.data.response},
               {"selection", o.selection.empty() ? (o.columns.empty() ? "all" : o.columns)
                                                 : o.selection},
               {"width", std::to_string(cols.size())},
               {"height", std::to_string(d.n())},
               {"format", o.ascii ? "P3" : "P6"}};
    io::raster_export(o.data.output, d, cols,
                      o.ascii ? io::PixmapFormat::ascii_p3 : io::PixmapFormat::binary_p6,
                      header_lines("raster", cfg));
}

struct PreprocessOpts {
    DataOpts data;
    std::string report;
    std::uint64_t seed = 1;
    bool zero_variance = false;
};

void cmd_preprocess(const PreprocessOpts& o, std::ostream& out) {
    const auto raw = io::load_table(o.data.input, column_ref(o.data.response));
    io::ImputationReport imp;
    const auto imputed = io::impute(raw, o.seed, &imp);
    io::DropReport drop;
    const auto kept = io::drop_uninformative(imputed, o.zero_variance, &drop);
    const Dataset d = io::to_dataset(kept);

    Config cfg{{"input", o.data.input},
               {"response", o.data.response},
               {"seed", std::to_string(o.seed)},
               {"drop_zero_variance", o.zero_variance ? "true" : "false"},
               {"n", std::to_string(raw.n())},
               {"p_in", std::to_string(raw.p())},
               {"p_out", std::to_string(kept.p())},
               {"imputed_cells", std::to_string(imp.imputed_cells)},
               {"dropped_columns", std::to_string(drop.dropped.size())}};
    {
        Sink sink(o.data.output, out);
        write_header(sink.os(), "preprocess", cfg);
        io::write_table(sink.os(), d, raw.response_name);
        sink.finish();
    }
    if (!o.report.empty()) {
        Sink sink(o.report, out);
        write_header(sink.os(), "preprocess", cfg);
        sink.os() << "kind\tcolumn\tname\tcount\n";
        for (std::size_t j = 0; j < raw.p(); ++j) {
            if (imp.imputed_per_column[j] > 0) {
                sink.os() << "imputed\t" << j + 1 << '\t' << raw.names[j] << '\t'
                          << imp.imputed_per_column[j] << '\n';
            }
        }
        for (std::size_t i = 0; i < drop.dropped.size(); ++i) {
            sink.os() << "dropped\t" << drop.dropped[i] + 1 << '\t' << drop.dropped_names[i]
                      << "\t0\n";
        }
        sink.finish();
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-leverage variable selection and logic regression on wide binary data",
                 "clsel"};
    app.set_version_flag("--version", std::string(version()));
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    DataOpts scores_opts;
    auto* scores = app.add_subcommand("scores", "Leverage and cross-leverage scores per variable");
    add_data_opts(scores, scores_opts);

    SelectOpts sel;
    auto* select_cmd = app.add_subcommand("select", "Select variables by one criterion");
    add_data_opts(select_cmd, sel.data);
    select_cmd->add_option("-c,--criterion", sel.criterion)
        ->check(CLI::IsMember(kCriteria))
        ->capture_default_str();
    select_cmd->add_option("-k,--k", sel.k, "Subset size or 'auto' (ceil(n ln n))")
        ->capture_default_str();
    select_cmd->add_option("--cls-mode", sel.cls_mode)
        ->check(CLI::IsMember({"absolute", "signed"}))
        ->capture_default_str();
    select_cmd->add_option("--ls-mode", sel.ls_mode)
        ->check(CLI::IsMember({"ascending", "descending"}))
        ->capture_default_str();
    select_cmd->add_option("--cor-mode", sel.cor_mode)
        ->check(CLI::IsMember({"absolute", "signed"}))
        ->capture_default_str();
    select_cmd->add_option("--pct-cls", sel.pct_cls, "Combined: CLS fraction of p")
        ->check(CLI::Range(0.0, 1.0));
    select_cmd->add_option("--pct-ls", sel.pct_ls, "Combined: LS fraction of p")
        ->check(CLI::Range(0.0, 1.0));
    select_cmd->add_option("--combine", sel.combine, "Combined mode")
        ->check(CLI::IsMember({"union", "sequential"}))
        ->capture_default_str();

    SimulateOpts simo;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
    simulate->add_option("-s,--scenario", simo.scenario)
        ->check(CLI::Range(1, 3))
        ->capture_default_str();
    simulate->add_option("--dnf", simo.dnf_file, "Ground-truth DNF file (overrides --scenario)")
        ->check(CLI::ExistingFile);
    simulate->add_option("-n,--n", simo.n)->capture_default_str();
    simulate->add_option("-p,--p", simo.p)->capture_default_str();
    simulate->add_option("--seed", simo.seed)->capture_default_str();
    simulate->add_option("--calibration", simo.calibration)
        ->check(CLI::IsMember({"per_term", "uniform"}))
        ->capture_default_str();
    simulate->add_option("--flip-prob", simo.flip_prob, "Label flip probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    simulate->add_option("-o,--output", simo.output)->capture_default_str();

    FitOpts fit;
    auto* fit_cmd = app.add_subcommand("fit-logic", "Fit a logic regression tree or ensemble");
    add_data_opts(fit_cmd, fit.data);
    add_anneal_opts(fit_cmd, fit.anneal);
    fit_cmd->add_option("--seed", fit.seed)->capture_default_str();
    fit_cmd->add_option("-B,--bootstraps", fit.bootstraps, "Ensemble size; 0 fits one tree")
        ->capture_default_str();
    fit_cmd->add_option("-j,--jobs", fit.jobs)->check(CLI::PositiveNumber)->capture_default_str();
    fit_cmd->add_option("--columns", fit.columns, "Restrict to 1-based columns, e.g. 1,4,7");
    fit_cmd->add_option("--selection", fit.selection, "Restrict to the output of 'select'")
        ->check(CLI::ExistingFile);

    ExperimentOpts ex;
    auto* experiment = app.add_subcommand("experiment", "Run a replicated simulation study");
    experiment->add_option("study", ex.study, "density | success | grid | pipeline")
        ->required()
        ->check(CLI::IsMember({"density", "success", "grid", "pipeline"}));
    experiment->add_option("-s,--scenario", ex.scenario)
        ->check(CLI::Range(1, 3))
        ->capture_default_str();
    experiment->add_option("-n,--n", ex.n)->capture_default_str();
    experiment->add_option("-p,--p", ex.p)->capture_default_str();
    experiment->add_option("-R,--replicates", ex.replicates,
                           "Replicates (default 500; 10 for pipeline)");
    experiment->add_flag("--full-scale", ex.full_scale, "Use 10000 replicates");
    experiment->add_option("-k,--k", ex.k)->capture_default_str();
    experiment->add_option("--criteria", ex.criteria)
        ->delimiter(',')
        ->check(CLI::IsMember(kCriteria))
        ->capture_default_str();
    experiment->add_option("--seed", ex.seed)->capture_default_str();
    experiment->add_option("-j,--jobs", ex.jobs)->check(CLI::PositiveNumber)->capture_default_str();
    experiment->add_option("--out", ex.out_dir, "Output directory")->capture_default_str();
    experiment->add_option("--calibration", ex.calibration)
        ->check(CLI::IsMember({"per_term", "uniform"}))
        ->capture_default_str();
    experiment->add_option("--cls-mode", ex.cls_mode)
        ->check(CLI::IsMember({"absolute", "signed"}))
        ->capture_default_str();
    experiment->add_option("--ls-mode", ex.ls_mode)
        ->check(CLI::IsMember({"ascending", "descending"}))
        ->capture_default_str();
    experiment->add_option("--cor-mode", ex.cor_mode)
        ->check(CLI::IsMember({"absolute", "signed"}))
        ->capture_default_str();
    experiment->add_option("-B,--bootstraps", ex.bootstraps)->capture_default_str();
    experiment->add_option("--pct-ls", ex.pct_ls, "LS fraction for the combined reduction")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    experiment->add_option("--grid-points", ex.grid_points, "KDE grid size")
        ->capture_default_str();
    experiment->add_flag("--no-raw", ex.no_raw, "Skip the raw density samples file");
    add_anneal_opts(experiment, ex.anneal);

    RasterOpts ras;
    auto* raster = app.add_subcommand("raster", "Export selected columns as a pixmap image");
    add_data_opts(raster, ras.data);
    raster->add_option("--columns", ras.columns, "1-based columns, e.g. 1,4,7");
    raster->add_option("--selection", ras.selection, "Output of 'select'")
        ->check(CLI::ExistingFile);
    raster->add_flag("--ascii", ras.ascii, "Write plain P3 instead of binary P6");

    PreprocessOpts pre;
    auto* preprocess =
        app.add_subcommand("preprocess", "Impute missing cells and drop uninformative columns");
    add_data_opts(preprocess, pre.data);
    preprocess->add_option("--report", pre.report, "Preprocessing report (TSV)");
    preprocess->add_option("--seed", pre.seed)->capture_default_str();
    preprocess->add_flag("--drop-zero-variance", pre.zero_variance,
                         "Drop every constant column, not only all-zero ones");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*scores) cmd_scores(scores_opts, out);
        else if (*select_cmd) cmd_select(sel, out);
        else if (*simulate) cmd_simulate(simo, out);
        else if (*fit_cmd) cmd_fit(fit, out);
        else if (*experiment) cmd_experiment(ex, out);
        else if (*raster) cmd_raster(ras);
        else if (*preprocess) cmd_preprocess(pre, out);
    } catch (const UsageError& e) {
        err << "clsel: usage error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        err << "clsel: usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "clsel: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace clsel::cli
