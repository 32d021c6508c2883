#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "asep/harness.hpp"

using namespace asep;
namespace fs = std::filesystem;

namespace {

ExperimentSpec tiny_speed_spec() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Speed;
    spec.p = 0.7;
    spec.L = 1;
    spec.t = 3.0;
    spec.n_trials = 40;
    spec.master_seed = 2024;
    spec.s_grid = SGrid{-1.0, 1.0, 21};
    return spec;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("speed experiment is deterministic and scheduling independent") {
    const auto spec = tiny_speed_spec();
    RunOptions serial;
    serial.workers = 1;
    RunOptions parallel;
    parallel.workers = 3;
    const Report a = run_speed_experiment(spec, serial);
    const Report b = run_speed_experiment(spec, parallel);
    const Report c = run_speed_experiment(spec, serial);
    CHECK(reports_equal_ignoring_walltime(a, b));
    CHECK(reports_equal_ignoring_walltime(a, c));
    CHECK(a.records.size() == 40);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].trial_index == i);
        CHECK(a.records[i].speed * spec.t == doctest::Approx(a.records[i].position));
    }
}

TEST_CASE("persist/load round trip") {
    TempDir dir("asep_harness_roundtrip");
    const Report report = run_speed_experiment(tiny_speed_spec(), {});
    persist_report(report, dir.path);
    const Report loaded = load_report(dir.path);
    CHECK(loaded == report);
    CHECK(fs::exists(dir.path / "curve.csv"));

    // aggregates recomputable from the records alone
    Report rebuilt;
    rebuilt.spec = loaded.spec;
    rebuilt.records = loaded.records;
    finalize_report(rebuilt);
    CHECK(rebuilt.aggregates == loaded.aggregates);
    CHECK(rebuilt.curve == loaded.curve);
    CHECK(rebuilt.pass == loaded.pass);
}

TEST_CASE("resume re-runs only missing trials and matches a fresh run") {
    const auto spec = tiny_speed_spec();
    const Report full = run_speed_experiment(spec, {});

    RunOptions resume;
    resume.existing.assign(full.records.begin(), full.records.begin() + 17);
    const Report resumed = run_speed_experiment(spec, resume);
    CHECK(reports_equal_ignoring_walltime(resumed, full));
    // the 17 reused records keep their original wall times
    for (std::size_t i = 0; i < 17; ++i)
        CHECK(resumed.records[i].wall_ms == full.records[i].wall_ms);
}

TEST_CASE("record log stream leaves a loadable partial state") {
    TempDir dir("asep_harness_stream");
    const auto spec = tiny_speed_spec();
    RunOptions opts;
    opts.record_log = dir.path / "records.jsonl";
    const Report report = run_speed_experiment(spec, opts);
    const auto streamed = load_records(dir.path);
    CHECK(streamed.size() == report.records.size());
}

TEST_CASE("identity experiment at t=0 is exact on packed step data") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Identity;
    spec.p = 0.7;
    spec.t = 0.0;
    spec.n_trials = 25;
    spec.set_i = {-2, -1};
    spec.set_j = {1};
    spec.cutoff_p = -1;
    // single-species side: sites -2,-1 and P+1=0 occupied at t=0 -> indicator 1
    // colored side: color 1 sits at 0 > P=-1 -> indicator 1
    const Report report = run_identity_experiment(spec, {});
    CHECK(report.aggregates.at("p1").get<double>() == 1.0);
    CHECK(report.aggregates.at("p2").get<double>() == 1.0);
    CHECK(report.aggregates.at("z").get<double>() == 0.0);
    CHECK(report.pass);
}

TEST_CASE("identity experiment at t=0 with a target beyond the step front") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Identity;
    spec.p = 0.7;
    spec.t = 0.0;
    spec.n_trials = 25;
    spec.set_i = {-1};
    spec.set_j = {1, 2};
    spec.cutoff_p = 1;  // P + J_j > 0: vacant at t=0; color J_j at 1-J_j <= 0 <= P
    const Report report = run_identity_experiment(spec, {});
    CHECK(report.aggregates.at("p1").get<double>() == 0.0);
    CHECK(report.aggregates.at("p2").get<double>() == 0.0);
    CHECK(report.pass);
}

TEST_CASE("block experiment at t=0 on packed sites is exact") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Block;
    spec.p = 0.75;
    spec.L = 1;
    spec.s = -0.2;
    spec.t = 0.0;  // block sites floor(-0.2*0)..+L = 0..1
    spec.n_trials = 10;
    const Report report = run_block_experiment(spec, {});
    // at t=0 site 0 is occupied, site 1 empty
    CHECK(report.aggregates.at("estimate").get<double>() == 0.0);
}

TEST_CASE("spec validation rejects malformed inputs") {
    ExperimentSpec spec = tiny_speed_spec();
    spec.p = 0.4;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = tiny_speed_spec();
    spec.kind = ExperimentKind::Identity;
    spec.set_i = {0, -1};  // not ascending
    spec.set_j = {1};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec.set_i = {-1};
    spec.set_j = {0};  // J must be >= 1
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = tiny_speed_spec();
    spec.kind = ExperimentKind::Block;
    spec.s = 0.9;  // |s| > gamma = 0.4
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = tiny_speed_spec();
    spec.kind = ExperimentKind::FitAlpha;
    spec.init = InitVariant::TwoSpecies;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("fit-alpha experiment runs end to end on a small trial set") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::FitAlpha;
    spec.init = InitVariant::SingleSecondClass;
    spec.p = 1.0;
    spec.L = 0;
    spec.t = 20.0;
    spec.n_trials = 400;
    spec.master_seed = 77;
    spec.s_grid = SGrid{-1.0, 1.0, 41};
    const Report report = run_fit_alpha_experiment(spec, {});
    const double alpha = report.aggregates.at("alpha_hat").get<double>();
    CHECK(alpha > 0.7);  // true alpha is 1; generous band at t=20, n=400
    CHECK(alpha <= 1.0);
    REQUIRE(!report.curve.empty());
    CHECK(report.curve.front().fitted.has_value());

    // fitted and theoretical CDF columns are nondecreasing in s
    for (std::size_t i = 1; i < report.curve.size(); ++i) {
        CHECK(report.curve[i].theoretical >= report.curve[i - 1].theoretical);
        CHECK(*report.curve[i].fitted >= *report.curve[i - 1].fitted);
        CHECK(report.curve[i].empirical >= report.curve[i - 1].empirical);
    }
}

TEST_CASE("coupling audit report counts events and violations") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::CouplingAudit;
    spec.p = 0.7;
    spec.L = 1;
    spec.t = 5.0;
    spec.n_trials = 50;
    const Report report = run_coupling_audit(spec, {});
    CHECK(report.aggregates.at("violations").get<std::uint64_t>() == 0);
    CHECK(report.aggregates.at("events_checked").get<std::uint64_t>() > 0);
    CHECK(report.pass);
}
