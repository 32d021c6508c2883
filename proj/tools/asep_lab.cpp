#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asep/dynamics.hpp"
#include "asep/harness.hpp"
#include "asep/rng.hpp"

namespace fs = std::filesystem;
using namespace asep;

namespace {

struct CliCommon {
    ExperimentSpec spec;
    std::string out_dir;
    int workers = 0;
    bool resume = false;
};

void add_model_options(CLI::App* sub, CliCommon& c) {
    sub->add_option("--p", c.spec.p, "right-jump probability, in (1/2, 1]")
        ->capture_default_str();
    sub->add_option("--L", c.spec.L, "number of extra second-class particles / block length - 1")
        ->capture_default_str();
    sub->add_option("--t", c.spec.t, "simulation end time")->capture_default_str();
    sub->add_option("--n", c.spec.n_trials, "number of trials")->capture_default_str();
    sub->add_option("--seed", c.spec.master_seed, "master seed")->capture_default_str();
    sub->add_option("--safety", c.spec.safety, "window half-width multiplier")
        ->capture_default_str();
}

void add_run_options(CLI::App* sub, CliCommon& c) {
    sub->add_option("--workers", c.workers, "worker threads (0 = all, 1 = serial reference)")
        ->capture_default_str()
        ->configurable(false);
    sub->add_option("--out", c.out_dir, "output directory (env ASEP_LAB_OUT)")
        ->envname("ASEP_LAB_OUT")
        ->configurable(false);
    sub->add_flag("--resume", c.resume, "re-run only trials missing from the output directory")
        ->configurable(false);
}

void add_grid_options(CLI::App* sub, CliCommon& c) {
    sub->add_option("--s-lo", c.spec.s_grid.lo, "curve grid lower end")->capture_default_str();
    sub->add_option("--s-hi", c.spec.s_grid.hi, "curve grid upper end")->capture_default_str();
    sub->add_option("--s-steps", c.spec.s_grid.steps, "curve grid size")->capture_default_str();
}

int execute(CLI::App* sub, CliCommon& c) {
    c.spec.validate();
    const fs::path out = c.out_dir.empty()
                             ? fs::path("out") / to_string(c.spec.kind)
                             : fs::path(c.out_dir);
    RunOptions opts;
    opts.workers = c.workers;
    if (c.resume) opts.existing = load_records(out);
    fs::create_directories(out);
    if (!c.resume) std::filesystem::remove(out / "records.jsonl");
    opts.record_log = out / "records.jsonl";

    const Report report = run_experiment(c.spec, opts);
    // records.jsonl was streamed during the run; rewrite it in index order
    persist_report(report, out);
    {
        // rerun recipe: asep_lab --config <out>/config.ini <subcommand>
        std::ofstream cfg(out / "config.ini");
        cfg << '[' << sub->get_name() << "]\n" << sub->config_to_str(true, false);
    }

    std::cout << "experiment: " << to_string(c.spec.kind) << '\n'
              << "aggregates: " << report.aggregates.dump(2) << '\n'
              << "result: " << (report.pass ? "PASS" : "FAIL") << '\n'
              << "report written to " << out.string() << '\n';
    return report.pass ? 0 : 1;
}

int run_replay(std::uint64_t seed, std::uint64_t trial, const ExperimentSpec& spec,
               const std::string& trace_path) {
    RngStream stream(seed, trial);
    const ModelParams params = ModelParams::make(spec.p, spec.L);
    const Window w = make_window(spec.t, spec.L, spec.safety);
    Configuration config =
        spec.init == InitVariant::TwoSpecies
            ? init_two_species(params, w)
            : init_single_second_class(spec.L, w,
                                       spec.init == InitVariant::SingleSecondClassEmptyOrigin);
    SimState state{std::move(config), params, Mode::TwoSpecies, 0.0};

    std::ofstream trace(trace_path);
    if (!trace) {
        std::cerr << "cannot write " << trace_path << '\n';
        return 3;
    }
    trace << "time,site,direction,accepted\n";
    char buf[64];
    run_until(state, spec.t, stream, [&](const Event& ev, const SimState&) {
        std::snprintf(buf, sizeof(buf), "%.17g", ev.time);
        trace << buf << ',' << ev.site << ',' << (ev.dir == Direction::Right ? 'R' : 'L') << ','
              << (ev.accepted ? 1 : 0) << '\n';
    });
    std::cout << "trial " << trial << ": x*_L(" << spec.t
              << ") = " << leftmost_second_class(state) << ", trace written to " << trace_path
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for exclusion processes"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key=value config file with one section per subcommand; flags override it");

    CliCommon speed, audit, identity, block, fit;
    std::string init_name = "two_species";
    std::string fit_init_name = "single_second_class";

    // speed
    auto* sub_speed = app.add_subcommand("speed", "speed-law experiment for x*_L(t)/t");
    speed.spec.kind = ExperimentKind::Speed;
    add_model_options(sub_speed, speed);
    add_grid_options(sub_speed, speed);
    sub_speed->add_option("--init", init_name,
                          "two_species | single_second_class | single_second_class_empty_origin")
        ->capture_default_str();
    sub_speed->add_option("--ks-threshold", speed.spec.ks_threshold, "pass threshold on KS")
        ->capture_default_str();
    add_run_options(sub_speed, speed);
    sub_speed->callback([&] {
        speed.spec.init = init_variant_from_string(init_name);
        std::exit(execute(sub_speed, speed));
    });

    // coupling-audit
    auto* sub_audit = app.add_subcommand("coupling-audit",
                                         "pathwise audit of the colored/two-species coupling");
    audit.spec.kind = ExperimentKind::CouplingAudit;
    audit.spec.t = 50;
    audit.spec.n_trials = 1000;
    add_model_options(sub_audit, audit);
    add_run_options(sub_audit, audit);
    sub_audit->callback([&] { std::exit(execute(sub_audit, audit)); });

    // identity
    auto* sub_id = app.add_subcommand("identity",
                                      "colored vs. single-species Monte Carlo identity");
    identity.spec.kind = ExperimentKind::Identity;
    identity.spec.t = 1;
    identity.spec.n_trials = 200000;
    add_model_options(sub_id, identity);
    sub_id->add_option("--I", identity.spec.set_i, "occupied sites I (ascending, <= P)")
        ->delimiter(',');
    sub_id->add_option("--J", identity.spec.set_j, "color indices J (ascending, >= 1)")
        ->delimiter(',');
    sub_id->add_option("--P", identity.spec.cutoff_p, "cutoff position P")
        ->capture_default_str();
    sub_id->add_option("--z-max", identity.spec.z_max, "pass threshold on |p1-p2|/SE")
        ->capture_default_str();
    add_run_options(sub_id, identity);
    sub_id->callback([&] { std::exit(execute(sub_id, identity)); });

    // block
    auto* sub_block = app.add_subcommand("block", "(L+1)-block probability at speed s");
    block.spec.kind = ExperimentKind::Block;
    block.spec.t = 1000;
    block.spec.n_trials = 20000;
    add_model_options(sub_block, block);
    sub_block->add_option("--s", block.spec.s, "block speed, |s| <= gamma")
        ->capture_default_str();
    sub_block->add_option("--t-grid", block.spec.t_grid, "extra evaluation times")
        ->delimiter(',');
    sub_block->add_option("--tol", block.spec.block_tol, "pass tolerance on |estimate-target|")
        ->capture_default_str();
    add_run_options(sub_block, block);
    sub_block->callback([&] { std::exit(execute(sub_block, block)); });

    // fit-alpha
    auto* sub_fit = app.add_subcommand("fit-alpha",
                                       "speed experiment plus least-squares fit of alpha");
    fit.spec.kind = ExperimentKind::FitAlpha;
    fit.spec.init = InitVariant::SingleSecondClass;
    add_model_options(sub_fit, fit);
    add_grid_options(sub_fit, fit);
    sub_fit->add_option("--init", fit_init_name,
                        "single_second_class | single_second_class_empty_origin")
        ->capture_default_str();
    sub_fit->add_option("--alpha-min", fit.spec.alpha_min, "pass window lower bound")
        ->capture_default_str();
    sub_fit->add_option("--alpha-max", fit.spec.alpha_max, "pass window upper bound")
        ->capture_default_str();
    add_run_options(sub_fit, fit);
    sub_fit->callback([&] {
        fit.spec.init = init_variant_from_string(fit_init_name);
        std::exit(execute(sub_fit, fit));
    });

    // replay
    auto* sub_replay = app.add_subcommand("replay", "re-run one trial and emit its event trace");
    CliCommon replay;
    replay.spec.kind = ExperimentKind::Speed;
    std::uint64_t replay_trial = 0;
    std::string replay_init = "two_species";
    std::string trace_path = "trace.csv";
    add_model_options(sub_replay, replay);
    sub_replay->add_option("--trial", replay_trial, "trial index to replay")
        ->capture_default_str();
    sub_replay->add_option("--init", replay_init, "initial data variant")->capture_default_str();
    sub_replay->add_option("--trace", trace_path, "trace CSV path")->capture_default_str();
    sub_replay->callback([&] {
        replay.spec.init = init_variant_from_string(replay_init);
        std::exit(run_replay(replay.spec.master_seed, replay_trial, replay.spec, trace_path));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
