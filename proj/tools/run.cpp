#include "run.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ri1d/adversarial_constructor.hpp"
#include "ri1d/energy_model.hpp"
#include "ri1d/errors.hpp"
#include "ri1d/evolution_integrator.hpp"
#include "ri1d/hypothesis_checker.hpp"
#include "ri1d/incremental_solver.hpp"
#include "ri1d/model_io.hpp"
#include "ri1d/regularity_analyzer.hpp"

namespace ri1d::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// nlohmann prints the shortest round-trip form; numbers here always carry 17 significant digits
void write_json(const json& j, std::ostream& os, int depth = 0) {
    const std::string pad(std::size_t(2 * depth), ' '), inner(std::size_t(2 * depth + 2), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << inner << json(it.key()).dump() << ": ";
            write_json(it.value(), os, depth + 1);
        }
        os << '\n' << pad << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << ",\n";
            os << inner;
            write_json(j[i], os, depth + 1);
        }
        os << '\n' << pad << ']';
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            os << "null";
            return;
        }
        std::ostringstream s;
        s << std::setprecision(17) << v;
        os << s.str();
        return;
    }
    default:
        os << j.dump();
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::ofstream f(fs::path(dir) / name);
    if (!f) throw ConfigError("cannot write " + (fs::path(dir) / name).string());
    return f;
}

void save_report(const RunConfig& cfg, const json& report) {
    auto f = open_out(cfg.out, "report.json");
    write_json(report, f);
    f << '\n';
}

void save_trajectory(const RunConfig& cfg, const Trajectory& tr) {
    auto f = open_out(cfg.out, "trajectory.csv");
    write_csv(tr, f);
    auto p = open_out(cfg.out, "plot.dat");
    write_plot(tr, p);
}

void save_events(const RunConfig& cfg, const std::vector<RegimeEvent>& ev) {
    auto f = open_out(cfg.out, "events.csv");
    write_events_csv(ev, f);
}

bool is_file(const std::string& p) {
    std::error_code ec;
    return !p.empty() && fs::is_regular_file(p, ec);
}

EnergyModel resolve_model(const RunConfig& cfg) {
    if (cfg.model.empty()) throw ConfigError("--model is required");
    for (const auto& n : builtin_model_names())
        if (n == cfg.model) return builtin_model(n);
    if (!is_file(cfg.model))
        throw ConfigError("model '" + cfg.model + "' is neither a built-in name nor a readable file");
    return load_model(cfg.model);
}

MonotoneDriver resolve_driver(const RunConfig& cfg) {
    if (cfg.driver.empty()) throw ConfigError("--driver is required");
    if (is_file(cfg.driver)) return load_driver(cfg.driver);
    return parse_driver(KeyValues::parse_inline(cfg.driver));
}

Box resolve_box(const RunConfig& cfg, const EnergyModel& m) {
    if (cfg.box.empty()) return m.domain();
    if (cfg.box.size() != 4) throw ConfigError("--box needs t0,t1,x0,x1");
    Box b{{cfg.box[0], cfg.box[1]}, {cfg.box[2], cfg.box[3]}};
    if (!(b.t.hi > b.t.lo) || !(b.x.hi > b.x.lo)) throw ConfigError("--box intervals must be non-empty");
    return b;
}

double resolve_horizon(const RunConfig& cfg, const EnergyModel& m) {
    const double h = cfg.horizon > 0.0 ? cfg.horizon : m.domain().t.hi;
    if (h > m.domain().t.hi * (1 + 1e-12) || h <= m.domain().t.lo) throw ConfigError("--T lies outside the model's time range");
    return h;
}

std::size_t steps_for(double span, double dt) {
    const double n = span / dt;
    if (!(n >= 1.0) || n > 1e8) throw ConfigError("--dt does not fit the time range");
    return std::size_t(std::llround(n));
}

json jumps_json(const std::vector<JumpRecord>& js) {
    json a = json::array();
    for (const auto& j : js) a.push_back({{"t", j.time}, {"left", j.left}, {"right", j.right}, {"size", j.size()}});
    return a;
}

json weak_json(const WeakCheck& w) {
    return {{"stability", {{"residual", w.stability}, {"time", w.stability_time}, {"pass", w.stability_pass}}},
            {"upper_bound",
             {{"worst", w.upper.worst}, {"t1", w.upper.t1}, {"t2", w.upper.t2}, {"pairs", w.upper.pairs_checked},
              {"pass", w.upper.pass}}}};
}

json model_json(const RunConfig& cfg, const EnergyModel& m) {
    return {{"source", cfg.model},
            {"family", m.family()},
            {"domain", {m.domain().t.lo, m.domain().t.hi, m.domain().x.lo, m.domain().x.hi}}};
}

constexpr std::size_t upper_pairs = 2000;
constexpr double class_tol = 1e-4;

int solve_energetic_cmd(const RunConfig& cfg, std::ostream& log) {
    const EnergyModel m = resolve_model(cfg);
    const double x0 = cfg.has_x0 ? cfg.x0 : 0.0;
    const double T = resolve_horizon(cfg, m);
    const auto grid = uniform_grid(m.domain().t.lo, T, steps_for(T - m.domain().t.lo, cfg.dt));
    const Trajectory tr = solve_energetic(m, x0, grid, m.domain().x, 1e-3);

    const double scale = energy_scale(m, tr);
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-3 * scale;
    const double btol = cfg.tol > 0.0 ? cfg.tol : 5e-3 * scale;
    std::vector<double> probe(2001);
    for (std::size_t j = 0; j < probe.size(); ++j)
        probe[j] = m.domain().x.lo + m.domain().x.width() * double(j) / double(probe.size() - 1);
    const StabilityCheck st = check_global_stability(m, tr, probe, tol);
    const WeakCheck w = verify_weak(m, tr, tol, upper_pairs, cfg.seed);
    const BalanceCheck b = check_energy_balance(m, tr, btol);
    const bool pass = st.pass && w.pass && b.pass;

    std::vector<RegimeEvent> ev;
    for (const auto& j : tr.jumps) ev.push_back({j.time, EventKind::jump, j.left, j.right});
    json report = {{"command", cfg.command},
                   {"model", model_json(cfg, m)},
                   {"x0", x0},
                   {"dt", cfg.dt},
                   {"horizon", T},
                   {"rows", tr.size()},
                   {"jumps", jumps_json(tr.jumps)},
                   {"ties", tr.ties},
                   {"audit",
                    {{"tolerance", tol},
                     {"energy_scale", scale},
                     {"global_stability",
                      {{"margin", st.margin}, {"time", st.time}, {"probe", st.probe}, {"state", st.state}, {"pass", st.pass}}},
                     {"weak", weak_json(w)},
                     {"balance",
                      {{"max_abs", b.max_abs}, {"worst_time", b.worst_time}, {"tolerance", btol}, {"pass", b.pass}}}}},
                   {"verdict", pass ? "pass" : "fail"}};
    save_trajectory(cfg, tr);
    save_events(cfg, ev);
    save_report(cfg, report);
    log << "solve-energetic: " << tr.size() << " rows, " << tr.jumps.size() << " jumps, verdict "
        << (pass ? "pass" : "fail") << '\n';
    return pass ? ok : audit_failed;
}

int solve_local_cmd(const RunConfig& cfg, std::ostream& log) {
    const EnergyModel m = resolve_model(cfg);
    const double x0 = cfg.has_x0 ? cfg.x0 : 0.0;
    const double T = resolve_horizon(cfg, m);
    steps_for(T - m.domain().t.lo, cfg.dt);
    const LocalSolution sol = solve_local(m, x0, T, cfg.dt);
    const Trajectory& tr = sol.trajectory;

    const double scale = energy_scale(m, tr);
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-3 * scale;
    const WeakCheck w = verify_weak(m, tr, tol, upper_pairs, cfg.seed);

    json events = json::array();
    for (const auto& e : sol.events)
        events.push_back({{"t", e.t}, {"kind", event_name(e.kind)}, {"x_before", e.x_before}, {"x_after", e.x_after}});
    json report = {{"command", cfg.command},
                   {"model", model_json(cfg, m)},
                   {"x0", x0},
                   {"dt", cfg.dt},
                   {"horizon", T},
                   {"rows", tr.size()},
                   {"jumps", jumps_json(tr.jumps)},
                   {"events", events},
                   {"final_regime", point_regime_name(sol.final_state.regime)},
                   {"audit", {{"tolerance", tol}, {"energy_scale", scale}, {"weak", weak_json(w)}}},
                   {"verdict", w.pass ? "pass" : "fail"}};
    save_trajectory(cfg, tr);
    save_events(cfg, sol.events);
    save_report(cfg, report);
    log << "solve-local: " << tr.size() << " rows, " << sol.events.size() << " events, verdict "
        << (w.pass ? "pass" : "fail") << '\n';
    return w.pass ? ok : audit_failed;
}

int check_hypotheses_cmd(const RunConfig& cfg, std::ostream& log) {
    const EnergyModel m = resolve_model(cfg);
    const Box box = resolve_box(cfg, m);
    if (cfg.resolution < 8) throw ConfigError("--resolution must be at least 8");
    std::vector<Hypothesis> which;
    if (cfg.hypotheses.empty())
        which = {Hypothesis::H1, Hypothesis::H2, Hypothesis::H3, Hypothesis::H4, Hypothesis::H5};
    for (const auto& h : cfg.hypotheses) which.push_back(parse_hypothesis(h));

    json entries = json::array();
    for (Hypothesis h : which) {
        const HypothesisEntry e = check_hypothesis(m, h, box, cfg.resolution);
        json pts = json::array();
        for (const auto& p : e.points) {
            json res = json::object();
            for (const auto& [k, v] : p.residuals) res[k] = v;
            pts.push_back({{"t", p.t}, {"x", p.x}, {"sign", p.sign}, {"residuals", res}});
        }
        entries.push_back({{"hypothesis", hypothesis_name(h)},
                           {"verdict", verdict_name(e.verdict)},
                           {"resolution", e.resolution},
                           {"state_resolution", e.state_resolution},
                           {"residual_tol", e.residual_tol},
                           {"candidates", e.candidates},
                           {"unresolved", e.unresolved},
                           {"points", pts}});
        log << hypothesis_name(h) << ": " << verdict_name(e.verdict) << " (" << e.points.size() << " points)\n";
    }
    const GapEstimate g = estimate_gap(m, box, cfg.resolution, std::max(cfg.resolution, 1024));
    json report = {{"command", cfg.command},
                   {"model", model_json(cfg, m)},
                   {"box", {box.t.lo, box.t.hi, box.x.lo, box.x.hi}},
                   {"hypotheses", entries},
                   {"gap", {{"finite", g.finite}, {"epsilon", g.epsilon}, {"time", g.time}, {"left", g.left}, {"right", g.right}}}};
    save_report(cfg, report);
    return ok;
}

int gap_cmd(const RunConfig& cfg, std::ostream& log) {
    const EnergyModel m = resolve_model(cfg);
    const Box box = resolve_box(cfg, m);
    if (cfg.resolution < 2) throw ConfigError("--resolution must be at least 2");
    const GapEstimate g = estimate_gap(m, box, cfg.resolution, std::max(cfg.resolution, 1024));
    json report = {{"command", cfg.command},
                   {"model", model_json(cfg, m)},
                   {"box", {box.t.lo, box.t.hi, box.x.lo, box.x.hi}},
                   {"resolution", cfg.resolution},
                   {"finite", g.finite},
                   {"epsilon", g.epsilon},
                   {"time", g.time},
                   {"left", g.left},
                   {"right", g.right}};
    save_report(cfg, report);
    log << "gap: " << (g.finite ? format_number(g.epsilon) : std::string("none")) << '\n';
    return ok;
}

int audit_cmd(const RunConfig& cfg, std::ostream& log) {
    const EnergyModel m = resolve_model(cfg);
    if (!is_file(cfg.traj)) throw ConfigError("--traj must name a readable trajectory CSV");
    std::ifstream in(cfg.traj);
    const Trajectory tr = read_csv(in);
    if (tr.size() < 2) throw ConfigError("trajectory needs at least two samples");

    const double scale = energy_scale(m, tr);
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-3 * scale;
    const WeakCheck w = verify_weak(m, tr, tol, upper_pairs, cfg.seed);
    bool pass = w.pass;

    const double thr = cfg.threshold > 0.0 ? cfg.threshold : default_jump_threshold(tr);
    const auto js = detect_jumps(tr, thr);
    const ClassificationReport cls = classify_points(m, tr, js, class_tol);
    json flagged = json::array();
    for (const auto& p : cls.points)
        if (p.cls != PointClass::I3 || p.resolution_limited)
            flagged.push_back({{"t", p.t},
                               {"class", class_name(p.cls)},
                               {"resolution_limited", p.resolution_limited},
                               {"left", p.left},
                               {"right", p.right}});
    json report = {{"command", cfg.command},
                   {"model", model_json(cfg, m)},
                   {"trajectory", cfg.traj},
                   {"rows", tr.size()},
                   {"tolerance", tol},
                   {"energy_scale", scale}};
    json wj = weak_json(w);
    report["stability"] = wj["stability"];
    report["upper_bound"] = wj["upper_bound"];
    if (cfg.balance) {
        const double btol = cfg.tol > 0.0 ? cfg.tol : 5e-3 * scale;
        const BalanceCheck b = check_energy_balance(m, tr, btol);
        report["balance"] = {{"max_abs", b.max_abs}, {"worst_time", b.worst_time}, {"tolerance", btol}, {"pass", b.pass}};
        pass = pass && b.pass;
    }
    report["jump_threshold"] = thr;
    report["jumps"] = jumps_json(js);
    report["classes"] = {{"tolerance", class_tol},
                         {"I1", cls.count(PointClass::I1)},
                         {"I2", cls.count(PointClass::I2)},
                         {"I3", cls.count(PointClass::I3)},
                         {"J", cls.count(PointClass::J)},
                         {"resolution_limited", cls.resolution_limited()},
                         {"points", flagged}};
    if (cfg.sbv) {
        const SbvSplit s = sbv_split(tr, {1, 2, 4}, 0.1, thr);
        report["sbv"] = {{"total", s.total},
                         {"ac", s.ac},
                         {"jump", s.jump},
                         {"cantor", s.cantor},
                         {"cantor_per_rung", s.cantor_per_rung},
                         {"ladder", s.ladder},
                         {"converged", s.converged},
                         {"verdict", s.sbv ? "SBV" : "not SBV"}};
        log << "sbv: " << (s.sbv ? "SBV" : "not SBV") << " (cantor " << format_number(s.cantor) << " of "
            << format_number(s.total) << ")\n";
    }
    report["verdict"] = pass ? "pass" : "fail";
    save_report(cfg, report);
    {
        Trajectory annotated = tr;
        annotated.jumps = js;
        auto p = open_out(cfg.out, "plot.dat");
        write_plot(annotated, p);
    }
    if (!w.stability_pass)
        log << "stability violated: residual " << format_number(w.stability) << " at t=" << format_number(w.stability_time)
            << '\n';
    if (!w.upper.pass)
        log << "upper bound violated: " << format_number(w.upper.worst) << " on [" << format_number(w.upper.t1) << ", "
            << format_number(w.upper.t2) << "]\n";
    log << "audit: " << (pass ? "pass" : "fail") << '\n';
    return pass ? ok : audit_failed;
}

int construct_cmd(const RunConfig& cfg, std::ostream& log) {
    const MonotoneDriver u = resolve_driver(cfg);
    const auto g = build_sign_field(u, cfg.bound, cfg.sharpness);
    const double x0 = cfg.has_x0 ? cfg.x0 : u(0.0);
    const EnergyModel m = build_energy(g, x0);
    const EnergeticVerdict v = verify_energetic(m, u, x0);

    // Cantor approximants are sampled on their own triadic grid
    const double T = u.horizon();
    const std::size_t n = u.kind() == MonotoneDriver::Kind::cantor
                              ? std::size_t(std::llround(std::pow(3.0, u.level())))
                              : steps_for(T, cfg.dt);
    std::vector<double> ts(n + 1), xs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        ts[k] = k == n ? T : T * double(k) / double(n);
        xs[k] = u(ts[k]);
    }
    const Trajectory tr = make_trajectory(ts, xs);

    json driver = json::object();
    {
        std::istringstream is(u.describe());
        std::string line;
        while (std::getline(is, line)) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) driver[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    json report = {{"command", cfg.command},
                   {"driver", driver},
                   {"bound", g->bound()},
                   {"sharpness", g->sharpness()},
                   {"x0", x0},
                   {"offset", v.offset},
                   {"rows", tr.size()},
                   {"left_continuous", v.left_continuous},
                   {"dissipation", {{"value", v.diss}, {"expected", v.diss_expected}, {"pass", v.diss_pass}}},
                   {"minimality",
                    {{"worst_margin", v.worst_margin}, {"time", v.margin_time}, {"probe", v.margin_probe}, {"pass", v.margin_pass}}},
                   {"uniqueness", {{"margin", v.uniqueness}, {"times", v.uniqueness_times}, {"pass", v.unique_pass}}},
                   {"slope", {{"max_error", v.slope_error}, {"pass", v.slope_pass}}},
                   {"sign_clauses",
                    {{"checked", v.sign_checked}, {"violations", v.sign_violations}, {"max_abs", v.max_abs_g}, {"pass", v.sign_pass}}},
                   {"saturation", {{"error", v.saturation_error}, {"pass", v.saturation_pass}}},
                   {"verdict", v.pass ? "pass" : "fail"}};
    {
        auto f = open_out(cfg.out, "model.txt");
        f << serialize_model(m);
    }
    save_trajectory(cfg, tr);
    save_events(cfg, {});
    save_report(cfg, report);
    log << "construct: worst margin " << format_number(v.worst_margin) << ", verdict " << (v.pass ? "pass" : "fail") << '\n';
    return v.pass ? ok : audit_failed;
}

} // namespace

std::vector<std::string> commands() {
    return {"solve-energetic", "solve-local", "check-hypotheses", "audit", "construct", "gap"};
}

int run(const RunConfig& cfg, std::ostream& log) {
    try {
        if (!(cfg.dt > 0.0)) throw ConfigError("--dt must be positive");
        if (cfg.tol < 0.0) throw ConfigError("--tol must be positive");
        ensure_dir(cfg.out);
        if (cfg.command == "solve-energetic") return solve_energetic_cmd(cfg, log);
        if (cfg.command == "solve-local") return solve_local_cmd(cfg, log);
        if (cfg.command == "check-hypotheses") return check_hypotheses_cmd(cfg, log);
        if (cfg.command == "audit") return audit_cmd(cfg, log);
        if (cfg.command == "construct") return construct_cmd(cfg, log);
        if (cfg.command == "gap") return gap_cmd(cfg, log);
        throw ConfigError("unknown command '" + cfg.command + "'");
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const DomainError& e) {
        log << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const BoundError& e) {
        log << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        log << "failed: " << e.what() << '\n';
        return audit_failed;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"rate-independent evolution in one dimension: solvers, audits, constructions"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string box;
    std::string hyps;

    auto common = [&](CLI::App* s) {
        s->add_option("--out", cfg.out, "output directory")->capture_default_str();
        s->add_option("--seed", cfg.seed, "seed for randomised checks")->capture_default_str();
        s->add_option("--tol", cfg.tol, "audit tolerance (default: 1e-3 x energy scale)")->check(CLI::PositiveNumber);
    };
    auto model_opt = [&](CLI::App* s) {
        s->add_option("--model", cfg.model, "model file or built-in name (zero, quadratic, double-well, reversal)")
            ->required();
    };
    auto time_opts = [&](CLI::App* s) {
        s->add_option("--dt", cfg.dt, "time step")->capture_default_str()->check(CLI::PositiveNumber);
        s->add_option("--T", cfg.horizon, "horizon (default: end of the model's time range)")->check(CLI::PositiveNumber);
        s->add_option_function<double>("--x0", [&](const double& v) { cfg.x0 = v; cfg.has_x0 = true; }, "initial state");
    };
    auto box_opts = [&](CLI::App* s) {
        s->add_option("--box", box, "t0,t1,x0,x1 (default: model domain)");
        s->add_option("--resolution", cfg.resolution, "time slices")->capture_default_str();
    };

    auto* se = app.add_subcommand("solve-energetic", "incremental global minimisation");
    model_opt(se), time_opts(se), common(se);
    auto* sl = app.add_subcommand("solve-local", "stick / slide / fold-jump integration");
    model_opt(sl), time_opts(sl), common(sl);
    auto* ch = app.add_subcommand("check-hypotheses", "locate degenerate points of the hypotheses");
    model_opt(ch), box_opts(ch), common(ch);
    ch->add_option("--hypotheses", hyps, "comma list, e.g. H1,H5 (default: all)");
    auto* au = app.add_subcommand("audit", "weak-solution audit of a trajectory CSV");
    model_opt(au), common(au);
    au->add_option("--traj", cfg.traj, "trajectory CSV")->required();
    au->add_flag("--sbv", cfg.sbv, "split the variation into absolutely continuous, jump and Cantor parts");
    au->add_flag("--balance", cfg.balance, "also check the energy-dissipation balance");
    au->add_option("--threshold", cfg.threshold, "jump threshold")->check(CLI::PositiveNumber);
    auto* co = app.add_subcommand("construct", "energy for which a monotone driver is an energetic solution");
    co->add_option("--driver", cfg.driver, "driver file or inline description, e.g. 'cantor level=5'")->required();
    co->add_option("--dt", cfg.dt, "sampling step of the driver trajectory")->capture_default_str()->check(CLI::PositiveNumber);
    co->add_option_function<double>("--x0", [&](const double& v) { cfg.x0 = v; cfg.has_x0 = true; }, "anchor (default u(0))");
    co->add_option("--bound", cfg.bound, "saturation bound M (default: smallest admissible)")->check(CLI::PositiveNumber);
    co->add_option("--sharpness", cfg.sharpness, "smoothing width (default: quarter of the smallest plateau)")
        ->check(CLI::PositiveNumber);
    common(co);
    auto* ga = app.add_subcommand("gap", "smallest spacing of the stationary set");
    model_opt(ga), box_opts(ga), common(ga);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage_error;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (!box.empty()) {
            std::stringstream ss(box);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.box.push_back(std::stod(item));
        }
    } catch (const std::exception&) {
        std::cerr << "error: --box needs four comma-separated numbers\n";
        return usage_error;
    }
    if (!hyps.empty()) {
        std::stringstream ss(hyps);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.hypotheses.push_back(item);
    }
    return run(cfg, std::cerr);
}

} // namespace ri1d::cli
