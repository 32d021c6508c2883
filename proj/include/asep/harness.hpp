#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asep/lattice.hpp"

namespace asep {

enum class ExperimentKind { Speed, CouplingAudit, Identity, Block, FitAlpha };

enum class InitVariant {
    TwoSpecies,
    SingleSecondClass,
    SingleSecondClassEmptyOrigin,  // alternative reading: site 0 vacant
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(InitVariant v);
InitVariant init_variant_from_string(const std::string& s);

/// Grid of speeds s for CDF curve tables.
struct SGrid {
    double lo = -1.0;
    double hi = 1.0;
    int steps = 201;

    bool operator==(const SGrid&) const = default;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Speed;
    double p = 1.0;
    int L = 0;
    double t = 500.0;
    std::uint64_t n_trials = 10000;
    std::uint64_t master_seed = 42;
    double safety = 5.0;
    InitVariant init = InitVariant::TwoSpecies;
    SGrid s_grid;

    // identity experiment
    std::vector<Site> set_i;
    std::vector<Site> set_j;
    Site cutoff_p = 0;

    // block experiment
    double s = 0.0;
    std::vector<double> t_grid;

    // pass thresholds
    double ks_threshold = 0.05;
    double block_tol = 0.02;
    double z_max = 3.0;
    double alpha_min = 0.0;  // [0, 1] disables the fit pass window
    double alpha_max = 1.0;

    void validate() const;
    bool operator==(const ExperimentSpec&) const = default;
};

struct TrialRecord {
    std::uint64_t trial_index = 0;
    Site position = 0;
    double speed = 0.0;
    std::uint64_t events = 0;
    double wall_ms = 0.0;
    std::map<std::string, double> extra;

    bool operator==(const TrialRecord&) const = default;
};

struct CurvePoint {
    double s = 0.0;
    double empirical = 0.0;
    double theoretical = 0.0;
    std::optional<double> fitted;

    bool operator==(const CurvePoint&) const = default;
};

struct Report {
    int schema_version = 1;
    ExperimentSpec spec;
    std::vector<TrialRecord> records;  // sorted by trial_index
    nlohmann::json aggregates;
    std::vector<CurvePoint> curve;
    bool pass = false;

    bool operator==(const Report&) const = default;
};

void to_json(nlohmann::json& j, const ExperimentSpec& spec);
void from_json(const nlohmann::json& j, ExperimentSpec& spec);
void to_json(nlohmann::json& j, const TrialRecord& r);
void from_json(const nlohmann::json& j, TrialRecord& r);

struct RunOptions {
    int workers = 0;  // 0 = runtime default; 1 = the serial reference path
    std::vector<TrialRecord> existing;       // completed trials to reuse (resume)
    std::filesystem::path record_log;        // if set, append records as trials finish
};

Report run_speed_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});
Report run_coupling_audit(const ExperimentSpec& spec, const RunOptions& opts = {});
Report run_identity_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});
Report run_block_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});
Report run_fit_alpha_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});
Report run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

/// Recomputes aggregates, curve, and pass from spec + records. Running and
/// resuming both go through this, so aggregates are always recomputable
/// from the persisted records.
void finalize_report(Report& report);

/// report.json + records.jsonl + curve.csv (when a curve exists) in `dir`.
void persist_report(const Report& report, const std::filesystem::path& dir);
Report load_report(const std::filesystem::path& dir);

/// Records previously persisted to `dir` (empty if none); resume input.
std::vector<TrialRecord> load_records(const std::filesystem::path& dir);

/// CSV curve table: s, empirical_cdf, theoretical_cdf[, fitted_cdf].
void emit_plot_data(const Report& report, const std::filesystem::path& file);

/// Report equality with wall times ignored (the scheduling-independence
/// contract covers everything else).
bool reports_equal_ignoring_walltime(const Report& a, const Report& b);

}  // namespace asep
