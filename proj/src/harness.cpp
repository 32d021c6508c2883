#include "asep/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "asep/coupling.hpp"
#include "asep/dynamics.hpp"
#include "asep/rng.hpp"
#include "asep/stats.hpp"

namespace asep {

using nlohmann::json;

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Speed: return "speed";
        case ExperimentKind::CouplingAudit: return "coupling_audit";
        case ExperimentKind::Identity: return "identity";
        case ExperimentKind::Block: return "block";
        case ExperimentKind::FitAlpha: return "fit_alpha";
    }
    throw std::logic_error("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "speed") return ExperimentKind::Speed;
    if (s == "coupling_audit") return ExperimentKind::CouplingAudit;
    if (s == "identity") return ExperimentKind::Identity;
    if (s == "block") return ExperimentKind::Block;
    if (s == "fit_alpha") return ExperimentKind::FitAlpha;
    throw std::invalid_argument("unknown experiment kind: " + s);
}

std::string to_string(InitVariant v) {
    switch (v) {
        case InitVariant::TwoSpecies: return "two_species";
        case InitVariant::SingleSecondClass: return "single_second_class";
        case InitVariant::SingleSecondClassEmptyOrigin: return "single_second_class_empty_origin";
    }
    throw std::logic_error("unknown init variant");
}

InitVariant init_variant_from_string(const std::string& s) {
    if (s == "two_species") return InitVariant::TwoSpecies;
    if (s == "single_second_class") return InitVariant::SingleSecondClass;
    if (s == "single_second_class_empty_origin") return InitVariant::SingleSecondClassEmptyOrigin;
    throw std::invalid_argument("unknown init variant: " + s);
}

void ExperimentSpec::validate() const {
    ModelParams::make(p, L);  // throws on bad p or L
    if (n_trials < 1) throw std::invalid_argument("spec: n_trials must be >= 1");
    if (t < 0) throw std::invalid_argument("spec: t must be >= 0");
    if (safety < 1) throw std::invalid_argument("spec: safety must be >= 1");
    if (s_grid.steps < 2 || !(s_grid.lo < s_grid.hi))
        throw std::invalid_argument("spec: bad s-grid");
    // the fit itself searches (0, 1]; the pass window may carry slack above 1
    if (!(alpha_min >= 0 && alpha_min <= alpha_max && alpha_max <= 2))
        throw std::invalid_argument("spec: bad alpha window");
    if (kind == ExperimentKind::Identity) {
        if (set_i.empty() || set_j.empty())
            throw std::invalid_argument("spec: identity needs nonempty I and J");
        if (!std::is_sorted(set_i.begin(), set_i.end()) ||
            std::adjacent_find(set_i.begin(), set_i.end()) != set_i.end())
            throw std::invalid_argument("spec: I must be strictly ascending");
        if (!std::is_sorted(set_j.begin(), set_j.end()) ||
            std::adjacent_find(set_j.begin(), set_j.end()) != set_j.end())
            throw std::invalid_argument("spec: J must be strictly ascending");
        if (set_i.back() > cutoff_p)
            throw std::invalid_argument("spec: I must satisfy max(I) <= P");
        if (set_j.front() < 1) throw std::invalid_argument("spec: J must satisfy min(J) >= 1");
    }
    if (kind == ExperimentKind::Block) {
        const double gamma = 2 * p - 1;
        if (std::abs(s) > gamma) throw std::invalid_argument("spec: block needs |s| <= gamma");
        for (double tg : t_grid)
            if (tg < 0) throw std::invalid_argument("spec: t_grid values must be >= 0");
    }
    if (kind == ExperimentKind::FitAlpha) {
        if (init == InitVariant::TwoSpecies)
            throw std::invalid_argument("spec: fit_alpha uses single-second-class initial data");
        if (n_trials < 10) throw std::invalid_argument("spec: fit_alpha needs n_trials >= 10");
    }
}

void to_json(json& j, const ExperimentSpec& spec) {
    j = json{{"kind", to_string(spec.kind)},
             {"p", spec.p},
             {"L", spec.L},
             {"t", spec.t},
             {"n_trials", spec.n_trials},
             {"master_seed", spec.master_seed},
             {"safety", spec.safety},
             {"init", to_string(spec.init)},
             {"s_grid", {{"lo", spec.s_grid.lo}, {"hi", spec.s_grid.hi}, {"steps", spec.s_grid.steps}}},
             {"I", spec.set_i},
             {"J", spec.set_j},
             {"P", spec.cutoff_p},
             {"s", spec.s},
             {"t_grid", spec.t_grid},
             {"ks_threshold", spec.ks_threshold},
             {"block_tol", spec.block_tol},
             {"z_max", spec.z_max},
             {"alpha_min", spec.alpha_min},
             {"alpha_max", spec.alpha_max}};
}

void from_json(const json& j, ExperimentSpec& spec) {
    spec.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    j.at("p").get_to(spec.p);
    j.at("L").get_to(spec.L);
    j.at("t").get_to(spec.t);
    j.at("n_trials").get_to(spec.n_trials);
    j.at("master_seed").get_to(spec.master_seed);
    j.at("safety").get_to(spec.safety);
    spec.init = init_variant_from_string(j.at("init").get<std::string>());
    j.at("s_grid").at("lo").get_to(spec.s_grid.lo);
    j.at("s_grid").at("hi").get_to(spec.s_grid.hi);
    j.at("s_grid").at("steps").get_to(spec.s_grid.steps);
    j.at("I").get_to(spec.set_i);
    j.at("J").get_to(spec.set_j);
    j.at("P").get_to(spec.cutoff_p);
    j.at("s").get_to(spec.s);
    j.at("t_grid").get_to(spec.t_grid);
    j.at("ks_threshold").get_to(spec.ks_threshold);
    j.at("block_tol").get_to(spec.block_tol);
    j.at("z_max").get_to(spec.z_max);
    j.at("alpha_min").get_to(spec.alpha_min);
    j.at("alpha_max").get_to(spec.alpha_max);
}

void to_json(json& j, const TrialRecord& r) {
    j = json{{"trial", r.trial_index},
             {"position", r.position},
             {"speed", r.speed},
             {"events", r.events},
             {"wall_ms", r.wall_ms}};
    if (!r.extra.empty()) j["extra"] = r.extra;
}

void from_json(const json& j, TrialRecord& r) {
    j.at("trial").get_to(r.trial_index);
    j.at("position").get_to(r.position);
    j.at("speed").get_to(r.speed);
    j.at("events").get_to(r.events);
    j.at("wall_ms").get_to(r.wall_ms);
    r.extra.clear();
    if (j.contains("extra")) j.at("extra").get_to(r.extra);
}

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

std::vector<TrialRecord> run_farm(std::uint64_t n, const RunOptions& opts,
                                  const std::function<TrialRecord(std::uint64_t)>& trial) {
    std::vector<std::optional<TrialRecord>> slots(n);
    for (const auto& r : opts.existing)
        if (r.trial_index < n) slots[r.trial_index] = r;
    std::vector<std::uint64_t> todo;
    todo.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        if (!slots[i]) todo.push_back(i);

    std::ofstream log;
    if (!opts.record_log.empty()) {
        std::filesystem::create_directories(opts.record_log.parent_path());
        log.open(opts.record_log, std::ios::app);
        if (!log) throw std::runtime_error("cannot open record log " + opts.record_log.string());
    }

    const auto m = static_cast<std::int64_t>(todo.size());
#ifdef _OPENMP
    const int threads = opts.workers > 0 ? opts.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (std::int64_t k = 0; k < m; ++k) {
        TrialRecord rec = trial(todo[static_cast<std::size_t>(k)]);
#ifdef _OPENMP
#pragma omp critical(asep_farm)
#endif
        {
            if (log.is_open()) {
                log << json(rec).dump() << '\n';
                log.flush();
            }
            slots[rec.trial_index] = std::move(rec);
        }
    }

    std::vector<TrialRecord> records;
    records.reserve(n);
    for (auto& s : slots) records.push_back(std::move(*s));
    return records;
}

Configuration make_initial(const ExperimentSpec& spec, const ModelParams& params, Window w) {
    switch (spec.init) {
        case InitVariant::TwoSpecies: return init_two_species(params, w);
        case InitVariant::SingleSecondClass: return init_single_second_class(spec.L, w, false);
        case InitVariant::SingleSecondClassEmptyOrigin:
            return init_single_second_class(spec.L, w, true);
    }
    throw std::logic_error("unknown init variant");
}

TrialRecord speed_trial(const ExperimentSpec& spec, std::uint64_t index) {
    const double t0 = now_ms();
    RngStream stream(spec.master_seed, index);
    const ModelParams params = ModelParams::make(spec.p, spec.L);
    const Window w = make_window(spec.t, spec.L, spec.safety);
    SimState state{make_initial(spec, params, w), params, Mode::TwoSpecies, 0.0};
    std::uint64_t events = 0;
    run_until(state, spec.t, stream, [&](const Event&, const SimState&) { ++events; });
    TrialRecord rec;
    rec.trial_index = index;
    rec.position = leftmost_second_class(state);
    rec.speed = spec.t > 0 ? static_cast<double>(rec.position) / spec.t : 0.0;
    rec.events = events;
    rec.wall_ms = now_ms() - t0;
    return rec;
}

TrialRecord coupling_trial(const ExperimentSpec& spec, std::uint64_t index) {
    const double t0 = now_ms();
    RngStream stream(spec.master_seed, index);
    const ModelParams params = ModelParams::make(spec.p, spec.L);
    CoupledState cs = init_coupling(params, make_window(spec.t, spec.L, spec.safety));
    std::uint64_t events = 0, violations = 0;
    double first_violation = -1.0;
    run_coupled_until(cs, spec.t, stream, [&](const Event& ev, const CoupledState& state) {
        ++events;
        if (!check_identity(state) || !check_projection(state) ||
            !state.status.is_bijection(spec.L)) {
            if (violations == 0) first_violation = ev.time;
            ++violations;
        }
    });
    TrialRecord rec;
    rec.trial_index = index;
    rec.position = leftmost_second_class(cs.twospec);
    rec.speed = spec.t > 0 ? static_cast<double>(rec.position) / spec.t : 0.0;
    rec.events = events;
    rec.wall_ms = now_ms() - t0;
    rec.extra["violations"] = static_cast<double>(violations);
    rec.extra["events_checked"] = static_cast<double>(events);
    if (violations > 0) rec.extra["first_violation_time"] = first_violation;
    return rec;
}

Window identity_window(const ExperimentSpec& spec) {
    Window w = make_window(spec.t, 0, spec.safety);
    w.lo = std::min(w.lo, spec.set_i.front() - 10);
    w.lo = std::min(w.lo, -(spec.set_j.back() + 10));
    w.hi = std::max(w.hi, spec.cutoff_p + spec.set_j.back() + 10);
    return w;
}

TrialRecord identity_trial(const ExperimentSpec& spec, std::uint64_t index) {
    const double t0 = now_ms();
    RngStream stream(spec.master_seed, index);
    const ModelParams params = ModelParams::make(spec.p, 0);
    const Window w = identity_window(spec);
    const bool colored_side = index >= spec.n_trials;

    SimState state{colored_side ? init_colored_step(w) : init_asep_step(w), params,
                   colored_side ? Mode::Colored : Mode::Single, 0.0};
    std::uint64_t events = 0;
    run_until(state, spec.t, stream, [&](const Event&, const SimState&) { ++events; });

    bool hit = true;
    for (Site site : spec.set_i)
        if (state.config.at(site) == kEmpty) hit = false;
    if (colored_side) {
        for (Site j : spec.set_j)
            if (hit && state.config.position_of_color(static_cast<Color>(j)) <= spec.cutoff_p)
                hit = false;
    } else {
        for (Site j : spec.set_j)
            if (state.config.at(spec.cutoff_p + j) == kEmpty) hit = false;
    }

    TrialRecord rec;
    rec.trial_index = index;
    rec.events = events;
    rec.wall_ms = now_ms() - t0;
    rec.extra["side"] = colored_side ? 2.0 : 1.0;
    rec.extra["indicator"] = hit ? 1.0 : 0.0;
    return rec;
}

std::vector<double> block_times(const ExperimentSpec& spec) {
    std::set<double> times(spec.t_grid.begin(), spec.t_grid.end());
    times.insert(spec.t);
    return {times.begin(), times.end()};
}

TrialRecord block_trial(const ExperimentSpec& spec, std::uint64_t index) {
    const double t0 = now_ms();
    RngStream stream(spec.master_seed, index);
    const ModelParams params = ModelParams::make(spec.p, spec.L);
    const std::vector<double> times = block_times(spec);
    const Window w = make_window(times.back(), spec.L, spec.safety);
    SimState state{init_asep_step(w), params, Mode::Single, 0.0};

    TrialRecord rec;
    rec.trial_index = index;
    std::uint64_t events = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        run_until(state, times[k], stream, [&](const Event&, const SimState&) { ++events; });
        const Site base = static_cast<Site>(std::floor(spec.s * times[k]));
        bool occupied = true;
        for (int j = 0; j <= spec.L; ++j)
            if (!w.contains(base + j) || state.config.at(base + j) == kEmpty) occupied = false;
        rec.extra["ind" + std::to_string(k)] = occupied ? 1.0 : 0.0;
    }
    rec.events = events;
    rec.wall_ms = now_ms() - t0;
    return rec;
}

std::vector<double> speeds_of(const std::vector<TrialRecord>& records) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& r : records) v.push_back(r.speed);
    return v;
}

std::vector<CurvePoint> make_curve(const ExperimentSpec& spec, const EmpiricalCdf& ecdf,
                                   const SpeedLaw& law, const std::optional<SpeedLaw>& fitted) {
    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(spec.s_grid.steps));
    for (int i = 0; i < spec.s_grid.steps; ++i) {
        const double s =
            spec.s_grid.lo + (spec.s_grid.hi - spec.s_grid.lo) * i / (spec.s_grid.steps - 1);
        CurvePoint pt{s, ecdf(s), speed_cdf(s, law), std::nullopt};
        if (fitted) pt.fitted = speed_cdf(s, *fitted);
        curve.push_back(pt);
    }
    return curve;
}

double theoretical_median(const SpeedLaw& law) {
    return law.alpha * (1.0 - 2.0 * std::pow(0.5, 1.0 / (law.L + 1)));
}

void finalize_speed(Report& report) {
    const ExperimentSpec& spec = report.spec;
    const ModelParams params = ModelParams::make(spec.p, spec.L);
    const SpeedLaw law{params.gamma, spec.L};
    EmpiricalCdf ecdf(speeds_of(report.records));
    const double ks = ks_distance(ecdf, [&](double s) { return speed_cdf(s, law); });
    double mean = 0.0;
    for (double v : ecdf.samples()) mean += v;
    mean /= static_cast<double>(ecdf.size());
    report.aggregates = json{{"n", ecdf.size()},
                             {"gamma", params.gamma},
                             {"ks", ks},
                             {"ks_threshold", spec.ks_threshold},
                             {"mean_emp", mean},
                             {"median_emp", ecdf.median()},
                             {"median_theo", theoretical_median(law)}};
    report.curve = make_curve(spec, ecdf, law, std::nullopt);
    report.pass = ks <= spec.ks_threshold;
}

void finalize_coupling(Report& report) {
    std::uint64_t events = 0, violations = 0;
    json first = nullptr;
    for (const auto& r : report.records) {
        events += static_cast<std::uint64_t>(r.extra.at("events_checked"));
        const auto v = static_cast<std::uint64_t>(r.extra.at("violations"));
        violations += v;
        if (v > 0 && first.is_null())
            first = json{{"trial", r.trial_index},
                         {"time", r.extra.at("first_violation_time")}};
    }
    report.aggregates = json{{"n_trials", report.records.size()},
                             {"events_checked", events},
                             {"violations", violations},
                             {"first_violation", first}};
    report.pass = violations == 0;
}

void finalize_identity(Report& report) {
    const ExperimentSpec& spec = report.spec;
    std::uint64_t hits1 = 0, hits2 = 0;
    for (const auto& r : report.records) {
        const bool hit = r.extra.at("indicator") > 0.5;
        if (r.extra.at("side") < 1.5) hits1 += hit; else hits2 += hit;
    }
    const auto n = spec.n_trials;
    const double p1 = static_cast<double>(hits1) / static_cast<double>(n);
    const double p2 = static_cast<double>(hits2) / static_cast<double>(n);
    const double se = std::sqrt(binomial_se(p1, n) * binomial_se(p1, n) +
                                binomial_se(p2, n) * binomial_se(p2, n));
    const double z = se > 0.0 ? std::abs(p1 - p2) / se : 0.0;
    report.aggregates = json{{"n_per_side", n}, {"p1", p1},       {"p2", p2},
                             {"se", se},        {"z", z},         {"z_max", spec.z_max}};
    report.pass = z <= spec.z_max;
}

void finalize_block(Report& report) {
    const ExperimentSpec& spec = report.spec;
    const ModelParams params = ModelParams::make(spec.p, spec.L);
    const double target = block_prob_target(spec.s, params.gamma, spec.L);
    const std::vector<double> times = block_times(spec);
    const auto n = report.records.size();

    std::vector<double> estimates(times.size(), 0.0), ses(times.size(), 0.0),
        abs_errs(times.size(), 0.0);
    for (const auto& r : report.records)
        for (std::size_t k = 0; k < times.size(); ++k)
            estimates[k] += r.extra.at("ind" + std::to_string(k));
    bool monotone_ok = true;
    for (std::size_t k = 0; k < times.size(); ++k) {
        estimates[k] /= static_cast<double>(n);
        ses[k] = binomial_se(estimates[k], n);
        abs_errs[k] = std::abs(estimates[k] - target);
        if (k > 0) {
            const double slack = 2.0 * std::sqrt(ses[k] * ses[k] + ses[k - 1] * ses[k - 1]);
            if (abs_errs[k] > abs_errs[k - 1] + slack) monotone_ok = false;
        }
    }
    const auto main_idx = static_cast<std::size_t>(
        std::find(times.begin(), times.end(), spec.t) - times.begin());
    report.aggregates = json{{"n", n},
                             {"s", spec.s},
                             {"gamma", params.gamma},
                             {"target", target},
                             {"times", times},
                             {"estimates", estimates},
                             {"ses", ses},
                             {"abs_errs", abs_errs},
                             {"estimate", estimates[main_idx]},
                             {"se", ses[main_idx]},
                             {"abs_err", abs_errs[main_idx]},
                             {"block_tol", spec.block_tol},
                             {"monotone_ok", monotone_ok}};
    report.pass = abs_errs[main_idx] <= spec.block_tol && monotone_ok;
}

void finalize_fit_alpha(Report& report) {
    const ExperimentSpec& spec = report.spec;
    const ModelParams params = ModelParams::make(spec.p, spec.L);
    EmpiricalCdf ecdf(speeds_of(report.records));
    const AlphaFit fit = fit_alpha(ecdf, spec.L);
    const SpeedLaw fitted{fit.alpha, spec.L};
    const SpeedLaw theory{params.gamma, spec.L};
    const double ks_at_alpha =
        ks_distance(ecdf, [&](double s) { return speed_cdf(s, fitted); });
    report.aggregates = json{{"n", ecdf.size()},
                             {"gamma", params.gamma},
                             {"alpha_hat", fit.alpha},
                             {"sse", fit.sse},
                             {"ks_at_alpha", ks_at_alpha},
                             {"alpha_min", spec.alpha_min},
                             {"alpha_max", spec.alpha_max}};
    report.curve = make_curve(spec, ecdf, theory, fitted);
    report.pass = fit.alpha >= spec.alpha_min && fit.alpha <= spec.alpha_max;
}

}  // namespace

void finalize_report(Report& report) {
    switch (report.spec.kind) {
        case ExperimentKind::Speed: finalize_speed(report); break;
        case ExperimentKind::CouplingAudit: finalize_coupling(report); break;
        case ExperimentKind::Identity: finalize_identity(report); break;
        case ExperimentKind::Block: finalize_block(report); break;
        case ExperimentKind::FitAlpha: finalize_fit_alpha(report); break;
    }
}

namespace {

Report run_generic(const ExperimentSpec& spec, const RunOptions& opts,
                   const std::function<TrialRecord(std::uint64_t)>& trial,
                   std::uint64_t n_total) {
    spec.validate();
    Report report;
    report.spec = spec;
    report.records = run_farm(n_total, opts, trial);
    finalize_report(report);
    return report;
}

}  // namespace

Report run_speed_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
    if (spec.kind != ExperimentKind::Speed) throw std::invalid_argument("kind mismatch");
    return run_generic(spec, opts, [&](std::uint64_t i) { return speed_trial(spec, i); },
                       spec.n_trials);
}

Report run_coupling_audit(const ExperimentSpec& spec, const RunOptions& opts) {
    if (spec.kind != ExperimentKind::CouplingAudit) throw std::invalid_argument("kind mismatch");
    return run_generic(spec, opts, [&](std::uint64_t i) { return coupling_trial(spec, i); },
                       spec.n_trials);
}

Report run_identity_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
    if (spec.kind != ExperimentKind::Identity) throw std::invalid_argument("kind mismatch");
    return run_generic(spec, opts, [&](std::uint64_t i) { return identity_trial(spec, i); },
                       2 * spec.n_trials);
}

Report run_block_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
    if (spec.kind != ExperimentKind::Block) throw std::invalid_argument("kind mismatch");
    return run_generic(spec, opts, [&](std::uint64_t i) { return block_trial(spec, i); },
                       spec.n_trials);
}

Report run_fit_alpha_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
    if (spec.kind != ExperimentKind::FitAlpha) throw std::invalid_argument("kind mismatch");
    return run_generic(spec, opts, [&](std::uint64_t i) { return speed_trial(spec, i); },
                       spec.n_trials);
}

Report run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
    switch (spec.kind) {
        case ExperimentKind::Speed: return run_speed_experiment(spec, opts);
        case ExperimentKind::CouplingAudit: return run_coupling_audit(spec, opts);
        case ExperimentKind::Identity: return run_identity_experiment(spec, opts);
        case ExperimentKind::Block: return run_block_experiment(spec, opts);
        case ExperimentKind::FitAlpha: return run_fit_alpha_experiment(spec, opts);
    }
    throw std::logic_error("unknown experiment kind");
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void persist_report(const Report& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        json j{{"schema_version", report.schema_version},
               {"spec", report.spec},
               {"aggregates", report.aggregates},
               {"pass", report.pass},
               {"n_records", report.records.size()}};
        std::ofstream out(dir / "report.json");
        if (!out) throw std::runtime_error("cannot write report.json");
        out << j.dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "records.jsonl");
        if (!out) throw std::runtime_error("cannot write records.jsonl");
        for (const auto& r : report.records) out << json(r).dump() << '\n';
    }
    if (!report.curve.empty()) emit_plot_data(report, dir / "curve.csv");
}

std::vector<TrialRecord> load_records(const std::filesystem::path& dir) {
    std::vector<TrialRecord> records;
    std::ifstream in(dir / "records.jsonl");
    if (!in) return records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(json::parse(line).get<TrialRecord>());
    }
    return records;
}

Report load_report(const std::filesystem::path& dir) {
    std::ifstream in(dir / "report.json");
    if (!in) throw std::runtime_error("cannot read " + (dir / "report.json").string());
    const json j = json::parse(in);
    Report report;
    report.schema_version = j.at("schema_version").get<int>();
    if (report.schema_version != 1)
        throw std::runtime_error("unsupported report schema version");
    report.spec = j.at("spec").get<ExperimentSpec>();
    report.aggregates = j.at("aggregates");
    report.pass = j.at("pass").get<bool>();
    report.records = load_records(dir);
    std::sort(report.records.begin(), report.records.end(),
              [](const TrialRecord& a, const TrialRecord& b) {
                  return a.trial_index < b.trial_index;
              });
    if (report.records.size() != j.at("n_records").get<std::size_t>())
        throw std::runtime_error("records.jsonl does not match report.json");

    std::ifstream csv(dir / "curve.csv");
    if (csv) {
        std::string line;
        std::getline(csv, line);  // header
        const bool has_fitted = line.find("fitted_cdf") != std::string::npos;
        while (std::getline(csv, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string cell;
            CurvePoint pt;
            std::getline(row, cell, ',');
            pt.s = std::stod(cell);
            std::getline(row, cell, ',');
            pt.empirical = std::stod(cell);
            std::getline(row, cell, ',');
            pt.theoretical = std::stod(cell);
            if (has_fitted && std::getline(row, cell, ',')) pt.fitted = std::stod(cell);
            report.curve.push_back(pt);
        }
    }
    return report;
}

void emit_plot_data(const Report& report, const std::filesystem::path& file) {
    if (report.curve.empty()) throw std::runtime_error("emit_plot_data: report has no curve");
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    const bool has_fitted = report.curve.front().fitted.has_value();
    out << (has_fitted ? "s,empirical_cdf,theoretical_cdf,fitted_cdf"
                       : "s,empirical_cdf,theoretical_cdf")
        << '\n';
    for (const auto& pt : report.curve) {
        out << format_double(pt.s) << ',' << format_double(pt.empirical) << ','
            << format_double(pt.theoretical);
        if (has_fitted) out << ',' << format_double(*pt.fitted);
        out << '\n';
    }
}

bool reports_equal_ignoring_walltime(const Report& a, const Report& b) {
    Report x = a, y = b;
    for (auto& r : x.records) r.wall_ms = 0.0;
    for (auto& r : y.records) r.wall_ms = 0.0;
    return x == y;
}

}  // namespace asep
