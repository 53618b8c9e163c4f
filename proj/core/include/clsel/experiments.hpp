#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clsel/dataset.hpp"
#include "clsel/logic_fit.hpp"
#include "clsel/selection.hpp"
#include "clsel/simgen.hpp"

namespace clsel::exp {

inline constexpr std::size_t kDeskReplicates = 500;
inline constexpr std::size_t kFullReplicates = 10'000;

struct ExperimentConfig {
    int scenario = 3;
    std::size_t n = 60;
    std::size_t p = 1000;
    std::size_t replicates = kDeskReplicates;
    std::optional<std::size_t> k;  // defaults to sample_size(n)
    std::vector<Criterion> criteria{Criterion::cls, Criterion::ls, Criterion::cor, Criterion::pval};
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    sim::Calibration calibration = sim::Calibration::per_term;
    SignMode cls_mode = SignMode::absolute;
    SignMode cor_mode = SignMode::absolute;
    LeverageOrder ls_mode = LeverageOrder::ascending;
    // Reduce-then-fit study only.
    logic::AnnealParams anneal{};
    std::size_t bootstraps = 20;
    double pipeline_pct_ls = 0.1;

    std::size_t resolved_k() const;
};

void validate(const ExperimentConfig& config);

// "key = value" lines describing every resolved setting.
std::vector<std::string> describe(const ExperimentConfig& config);

// Scenario for replicate r (seed derived from config.seed and r).
sim::ScenarioSpec replicate_spec(const ExperimentConfig& config, std::size_t replicate);
// Generated replicate; redrawn with further derived seeds in the rare
// case the response comes out constant.
Dataset replicate_dataset(const ExperimentConfig& config, std::size_t replicate);

// ---------------------------------------------------------------------
// Score densities per variable class

struct ClassSamples {
    std::size_t order = 0;  // term order; 0 = irrelevant
    std::string label;      // "4-way", ..., "main", "irrelevant"
    std::vector<double> leverage;
    std::vector<double> cross_leverage;
};

struct KdeCurves {
    std::vector<double> grid;
    std::vector<std::vector<double>> density;  // one curve per class
};

struct DensityStudyResult {
    std::size_t replicates = 0;
    std::vector<ClassSamples> classes;  // highest order first, irrelevant last
    KdeCurves leverage_kde;
    KdeCurves cross_leverage_kde;

    const ClassSamples& by_order(std::size_t order) const;
};

std::string class_label(std::size_t order);

DensityStudyResult run_density_study(const ExperimentConfig& config, std::size_t grid_points = 512);

// ---------------------------------------------------------------------
// Success rates at fixed k

struct SuccessHistogram {
    std::vector<std::size_t> counts;  // counts[m]: replicates capturing m relevant variables
    double mean_captured = 0.0;
    double se = 0.0;                  // standard error of mean_captured

    std::size_t replicates() const;
    double fraction_at_least(std::size_t m) const;
};

struct SuccessStudyResult {
    std::size_t relevant = 0;
    std::size_t k = 0;
    std::map<Criterion, SuccessHistogram> histograms;
    // captured[c][r]: relevant variables captured by criterion c in replicate r.
    std::map<Criterion, std::vector<std::size_t>> captured;
};

SuccessStudyResult run_success_study(const ExperimentConfig& config);

// ---------------------------------------------------------------------
// LS x CLS union grid

struct ComboGrid {
    std::vector<double> pct;  // 0.0, 0.1, ..., 0.9
    Eigen::MatrixXd mean;     // rows: pct LS, columns: pct CLS
    Eigen::MatrixXd se;
    std::size_t replicates = 0;

    double at(double pct_cls, double pct_ls) const;
    double se_at(double pct_cls, double pct_ls) const;
};

ComboGrid run_combo_grid(const ExperimentConfig& config);

// ---------------------------------------------------------------------
// Reduce, then fit logic regression ensembles

enum class ReductionMethod { none, ls, cls, cor, pval, combined };

std::string to_string(ReductionMethod method);

struct TermRecovery {
    sim::Term truth;               // ground-truth term (0-based variables)
    double kept_fraction = 0.0;    // replicates whose reduction kept every variable of the term
    double found_fraction = 0.0;   // replicates where the exact term was fitted
    double mean_importance = 0.0;  // mean ensemble frequency of the exact term
};

struct VariableRecovery {
    std::size_t var = 0;           // 0-based
    double kept_fraction = 0.0;    // replicates whose reduction kept the variable
    double found_fraction = 0.0;   // replicates where some fitted tree used it
    double mean_frequency = 0.0;   // mean ensemble variable frequency
};

struct MethodRecovery {
    ReductionMethod method = ReductionMethod::none;
    std::size_t kept_variables = 0;
    std::vector<TermRecovery> terms;
    std::vector<VariableRecovery> variables;  // ground-truth variables only
    // Wall time summed over replicates.
    double reduce_seconds = 0.0;
    double fit_seconds = 0.0;
};

struct PipelineReport {
    std::size_t replicates = 0;
    std::vector<MethodRecovery> methods;

    const MethodRecovery& method(ReductionMethod m) const;
};

// Columns kept by a reduction method (0-based, ranking order).
std::vector<std::size_t> reduce(const Dataset& dataset, ReductionMethod method, std::size_t k,
                                const ExperimentConfig& config);

PipelineReport run_pipeline_study(const ExperimentConfig& config,
                                  const std::vector<ReductionMethod>& methods = {
                                      ReductionMethod::none, ReductionMethod::ls,
                                      ReductionMethod::cls, ReductionMethod::cor,
                                      ReductionMethod::pval, ReductionMethod::combined});

// ---------------------------------------------------------------------
// Tab-separated writers; every file starts with '#' lines echoing the
// tool version and the resolved configuration.

void write_density(const std::string& dir, const DensityStudyResult& result,
                   const ExperimentConfig& config, bool raw_samples = true);
void write_success(const std::string& dir, const SuccessStudyResult& result,
                   const ExperimentConfig& config);
void write_grid(const std::string& dir, const ComboGrid& grid, const ExperimentConfig& config);
void write_pipeline(const std::string& dir, const PipelineReport& report,
                    const ExperimentConfig& config);

}  // namespace clsel::exp
