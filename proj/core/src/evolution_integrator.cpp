#include "ri1d/evolution_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "ri1d/errors.hpp"
#include "ri1d/incremental_solver.hpp"

namespace ri1d {

std::string point_regime_name(PointRegime r) {
    switch (r) {
    case PointRegime::stick: return "stick";
    case PointRegime::slide_plus: return "slide+";
    case PointRegime::slide_minus: return "slide-";
    case PointRegime::fold: return "fold";
    case PointRegime::unstable: return "unstable";
    }
    return "unstable";
}

PointRegime detect_regime(const EnergyModel& model, double t, double x, double tol, double fold_tol) {
    const GradientJet g = model.eval_dx(t, x);
    const double a = std::abs(g.dx);
    if (a > 1.0 + tol) return PointRegime::unstable;
    if (a < 1.0 - tol) return PointRegime::stick;
    if (std::abs(g.dxx) <= fold_tol) return PointRegime::fold;
    if (g.dxx > fold_tol) return g.dx > 0 ? PointRegime::slide_plus : PointRegime::slide_minus;
    // on |dE/dx| = 1 with negative curvature: not a stable state
    return PointRegime::unstable;
}

std::string event_name(EventKind k) {
    switch (k) {
    case EventKind::activation: return "activation";
    case EventKind::fold: return "fold";
    case EventKind::landing: return "landing";
    case EventKind::jump: return "jump";
    }
    return "activation";
}

namespace {

std::string at(double t, double x) {
    std::ostringstream os;
    os << std::setprecision(17) << "t=" << t << ", x=" << x;
    return os.str();
}

enum class BranchStatus { found, released, lost };

struct Branch {
    BranchStatus status;
    double y;
};

class LocalIntegrator {
public:
    LocalIntegrator(const EnergyModel& m, const LocalTolerances& tol) : model_(m), tol_(tol) {
        const Interval& xr = m.domain().x;
        march_ = std::max(1e-6, 1e-3 * xr.width() / 6.0);
    }

    LocalSolution run(double x0, double horizon, double dt) {
        if (!(dt > 0.0) || !(horizon > 0.0)) throw ConfigError("solve_local needs dt > 0 and horizon > 0");
        const double t0 = model_.domain().t.lo;
        std::size_t n = std::size_t(std::llround(horizon / dt));
        if (n == 0 || std::abs(double(n) * dt - horizon) > 1e-9 * horizon) n = std::size_t(std::ceil(horizon / dt));
        const std::vector<double> grid = uniform_grid(t0, t0 + horizon, n);

        const GradientJet g0 = model_.eval_dx(t0, x0);
        if (std::abs(g0.dx) > 1.0 + tol_.stick)
            throw DomainError("initial state is not weakly stable: |dE/dx| = " + std::to_string(std::abs(g0.dx)));

        x_ = x0;
        t_ = t0;
        mode_ = 0;
        settle(t0, x0);
        out_.trajectory.times.push_back(t0);
        out_.trajectory.values.push_back(x_);
        out_.trajectory.regimes.push_back(label());

        for (std::size_t k = 1; k < grid.size(); ++k) {
            const double target = grid[k];
            int guard = 0;
            while (t_ < target) {
                if (++guard > 10000) throw StiffSlideError("no progress in regime switching near " + at(t_, x_));
                if (mode_ == 0) stick_phase(target);
                else slide_phase(target);
            }
            push_row(target, label());
        }
        out_.trajectory.validate();
        out_.final_state.regime = mode_ == 0 ? PointRegime::stick
                                             : (mode_ > 0 ? PointRegime::slide_plus : PointRegime::slide_minus);
        return std::move(out_);
    }

private:
    double phi(double t, double y, int s) const { return s * model_.dx(t, y) - 1.0; }

    Regime label() const { return mode_ == 0 ? Regime::stick : Regime::slide; }

    void push_row(double t, Regime r) {
        auto& tr = out_.trajectory;
        if (!tr.times.empty() && t <= tr.times.back()) {
            // event landed on an existing sample: overwrite it
            tr.values.back() = x_;
            if (tr.regimes.back() != Regime::jump) tr.regimes.back() = r;
            return;
        }
        tr.times.push_back(t);
        tr.values.push_back(x_);
        tr.regimes.push_back(r);
    }

    void event(double t, EventKind k, double before, double after) {
        out_.events.push_back({t, k, before, after});
        out_.final_state.last_event_time = t;
        out_.final_state.last_event = k;
        out_.final_state.has_event = true;
    }

    // Picks stick or slide for a point with |dE/dx| <= 1 (after landing or at the start).
    void settle(double t, double x) {
        const GradientJet g = model_.eval_dx(t, x);
        mode_ = 0;
        if (std::abs(g.dx) < 1.0 - tol_.slide) return;
        const int s = g.dx > 0 ? 1 : -1;
        if (g.dxx > tol_.fold && s * (-g.dxt / g.dxx) <= 0.0) mode_ = s;
    }

    void stick_phase(double target) {
        const double x = x_;
        auto f = [&](double tau) { return std::abs(model_.dx(tau, x)) - 1.0; };
        if (f(target) < 0.0) {
            t_ = target;
            return;
        }
        double ta = t_;
        if (f(t_) < 0.0) {
            std::uintmax_t it = 200;
            auto r = boost::math::tools::bisect(
                f, t_, target, [&](double a, double b) { return b - a <= tol_.event; }, it);
            ta = r.second;
        }
        const GradientJet g = model_.eval_dx(ta, x);
        const int s = g.dx > 0 ? 1 : -1;
        if (g.dxx <= tol_.fold) {
            fold_jump(ta, x, s);
            return;
        }
        if (s * (-g.dxt / g.dxx) <= 0.0) {
            event(ta, EventKind::activation, x, x);
            mode_ = s;
            t_ = ta;
            return;
        }
        // |dE/dx| touches 1 but the outgoing slide would violate the sign law: stay stuck
        t_ = target;
    }

    // Root of s dE/dx = 1 reached from `from` by moving in direction -s.
    Branch branch_point(double tau, double from, int s) const {
        const Interval& xr = model_.domain().x;
        double f0 = phi(tau, from, s);
        if (f0 < -tol_.slide) return {BranchStatus::released, from};
        if (f0 <= 0.0) return {BranchStatus::found, from};
        if (model_.eval_dx(tau, from).dxx <= 0.0) return {BranchStatus::lost, from};
        double prev = from;
        for (;;) {
            double y = prev - s * march_;
            bool edge = false;
            if (y < xr.lo) { y = xr.lo; edge = true; }
            if (y > xr.hi) { y = xr.hi; edge = true; }
            if (y == prev) return {BranchStatus::lost, prev};
            const GradientJet g = model_.eval_dx(tau, y);
            const double fy = s * g.dx - 1.0;
            if (g.dxx <= 0.0) {
                // phi is smallest where the curvature changes sign: look there before giving up
                auto curv = [&](double z) { return model_.eval_dx(tau, z).dxx; };
                std::uintmax_t it = 200;
                auto r = boost::math::tools::bisect(
                    curv, std::min(prev, y), std::max(prev, y),
                    [](double a, double b) { return b - a <= 1e-14 * (1.0 + std::abs(a)); }, it);
                const double yc = s > 0 ? r.second : r.first; // stay on the convex side
                if (phi(tau, yc, s) <= 0.0) return {BranchStatus::found, root(tau, prev, yc, s)};
                return {BranchStatus::lost, yc};
            }
            if (fy <= 0.0) return {BranchStatus::found, fy == 0.0 ? y : root(tau, prev, y, s)};
            if (edge) return {BranchStatus::lost, y};
            prev = y;
        }
    }

    double root(double tau, double a, double b, int s) const {
        auto f = [&](double z) { return phi(tau, z, s); };
        if (f(a) == 0.0) return a;
        if (f(b) == 0.0) return b;
        std::uintmax_t it = 200;
        auto r = boost::math::tools::bisect(f, std::min(a, b), std::max(a, b),
                                            [](double p, double q) { return q - p <= 1e-15 * (1.0 + std::abs(p)); },
                                            it);
        return 0.5 * (r.first + r.second);
    }

    std::optional<double> rk4(double t, double x, double h, int s) const {
        bool ok = true;
        auto F = [&](double tau, double y) {
            const GradientJet g = model_.eval_dx(tau, y);
            if (!(g.dxx > tol_.fold)) {
                ok = false;
                return 0.0;
            }
            return -g.dxt / g.dxx;
        };
        const double k1 = F(t, x);
        if (!ok) return std::nullopt;
        const double k2 = F(t + h / 2, x + h / 2 * k1);
        if (!ok) return std::nullopt;
        const double k3 = F(t + h / 2, x + h / 2 * k2);
        if (!ok) return std::nullopt;
        const double k4 = F(t + h, x + h * k3);
        if (!ok) return std::nullopt;
        double xn = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (!model_.contains(t + h, xn)) return std::nullopt;
        const GradientJet g = model_.eval_dx(t + h, xn);
        if (!(g.dxx > tol_.fold)) return std::nullopt;
        xn -= (g.dx - s) / g.dxx; // projection onto the branch
        if (!model_.contains(t + h, xn)) return std::nullopt;
        const GradientJet gp = model_.eval_dx(t + h, xn);
        if (!(gp.dxx > tol_.fold) || std::abs(gp.dx - s) > tol_.slide) return std::nullopt;
        return xn;
    }

    bool sign_law_holds(double t, double x, int s) const {
        const GradientJet g = model_.eval_dx(t, x);
        return g.dxx > 0.0 && s * (-g.dxt / g.dxx) <= 0.0;
    }

    void slide_phase(double target) {
        const int s = mode_;
        const double t = t_, x = x_;
        const double h = target - t;
        auto xn = rk4(t, x, h, s);
        if (xn && s * (*xn - x) <= 0.0 && sign_law_holds(target, *xn, s)) {
            stiff_ = 0;
            x_ = *xn;
            t_ = target;
            return;
        }
        const Branch end = branch_point(target, x, s);
        if (end.status == BranchStatus::released || (xn && !sign_law_holds(target, *xn, s))) {
            release(target, s);
            return;
        }
        if (end.status == BranchStatus::found) {
            const GradientJet g = model_.eval_dx(target, end.y);
            if (g.dxx <= tol_.fold && ++stiff_ > tol_.stiff_steps)
                throw StiffSlideError("d2E/dx2 stays below the fold tolerance without a fold near " + at(target, end.y));
            if (g.dxx > tol_.fold) stiff_ = 0;
            x_ = end.y;
            t_ = target;
            return;
        }
        // the branch is lost inside the step: bracket the fold time
        double lo = t, hi = target;
        while (hi - lo > tol_.event) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (branch_point(mid, x, s).status == BranchStatus::lost) hi = mid;
            else lo = mid;
        }
        const Branch b = branch_point(lo, x, s);
        const double xf = b.status == BranchStatus::found ? b.y : x;
        fold_jump(hi, xf, s);
    }

    // The branch starts moving back: find where the sign law first fails and stick there.
    void release(double target, int s) {
        const double t = t_, x = x_;
        auto follow = [&](double tau) {
            Branch b = branch_point(tau, x, s);
            return b.status == BranchStatus::found ? b.y : x;
        };
        auto moving = [&](double tau) {
            if (branch_point(tau, x, s).status == BranchStatus::released) return false;
            return sign_law_holds(tau, follow(tau), s);
        };
        double lo = t, hi = target;
        while (hi - lo > tol_.event) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (moving(mid)) lo = mid;
            else hi = mid;
        }
        x_ = follow(lo);
        mode_ = 0;
        t_ = lo > t ? lo : target; // no progress possible: stay stuck to the end of the step
    }

    void fold_jump(double tf, double xf, int s) {
        event(tf, EventKind::fold, xf, xf);
        const double z = landing(tf, xf, s);
        event(tf, EventKind::landing, xf, z);
        x_ = z;
        t_ = tf;
        out_.trajectory.jumps.push_back({tf, xf, z});
        push_row(tf, Regime::jump);
        settle(tf, z);
    }

    double landing(double t, double xf, int s) const {
        const Interval& xr = model_.domain().x;
        const Interval range = s < 0 ? Interval{xf, xr.hi} : Interval{xr.lo, xf};
        if (range.width() <= 0.0) throw NoLandingError("fold at the domain edge, " + at(t, xf));
        const int res = std::max(64, int(std::ceil(range.width() / march_)) + 1);
        std::vector<StationaryPoint> roots = stationary_set(model_, t, range, res);
        if (s > 0) std::reverse(roots.begin(), roots.end());
        for (const auto& r : roots) {
            if (r.sign != s || std::abs(r.x - xf) <= 1e-6) continue;
            if (model_.eval_dx(t, r.x).dxx > tol_.fold) return r.x;
        }
        throw NoLandingError("no stable landing point inside the domain after the fold at " + at(t, xf));
    }

    const EnergyModel& model_;
    LocalTolerances tol_;
    double march_;
    double t_ = 0.0, x_ = 0.0;
    int mode_ = 0; // 0 stick, +-1 slide with dE/dx = +-1
    int stiff_ = 0;
    LocalSolution out_;
};

} // namespace

LocalSolution solve_local(const EnergyModel& model, double x0, double horizon, double dt, const LocalTolerances& tol) {
    LocalIntegrator integrator(model, tol);
    return integrator.run(x0, horizon, dt);
}

void write_events_csv(const std::vector<RegimeEvent>& events, std::ostream& out) {
    out << "t,kind,x_before,x_after\n" << std::setprecision(17);
    for (const auto& e : events) out << e.t << ',' << event_name(e.kind) << ',' << e.x_before << ',' << e.x_after << '\n';
}

std::vector<RegimeEvent> read_events_csv(std::istream& in) {
    std::vector<RegimeEvent> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty() || (n == 1 && line.rfind("t,", 0) == 0)) continue;
        std::istringstream is(line);
        std::string f[4];
        for (auto& s : f)
            if (!std::getline(is, s, ',')) throw ConfigError("events: expected 4 fields", n);
        RegimeEvent e;
        try {
            e.t = std::stod(f[0]);
            e.x_before = std::stod(f[2]);
            e.x_after = std::stod(f[3]);
        } catch (const std::exception&) {
            throw ConfigError("events: bad number", n);
        }
        if (f[1] == "activation") e.kind = EventKind::activation;
        else if (f[1] == "fold") e.kind = EventKind::fold;
        else if (f[1] == "landing") e.kind = EventKind::landing;
        else if (f[1] == "jump") e.kind = EventKind::jump;
        else throw ConfigError("events: unknown kind '" + f[1] + "'", n);
        out.push_back(e);
    }
    return out;
}

UpperBoundCheck check_upper_bound(const EnergyModel& model, const Trajectory& traj, std::size_t pairs, double tol,
                                  std::uint64_t seed) {
    UpperBoundCheck c;
    const std::size_t n = traj.size();
    if (n == 0) return c;
    const PathLedger p = path_ledger(model, traj);
    // max over i <= j of phi(j) - phi(i)
    c.worst = -std::numeric_limits<double>::infinity();
    std::size_t imin = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (p.phi(j) < p.phi(imin)) imin = j;
        const double r = p.phi(j) - p.phi(imin);
        if (r > c.worst) {
            c.worst = r;
            c.t1 = traj.times[imin];
            c.t2 = traj.times[j];
        }
    }
    c.pairs_checked = n * (n + 1) / 2;
    if (pairs > 0 && n > 1) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t q = 0; q < pairs; ++q) {
            std::size_t i = pick(rng), j = pick(rng);
            if (i > j) std::swap(i, j);
            const double r = (p.energy[j] - p.energy[i]) - (p.power[j] - p.power[i]) +
                             (p.dissipation[j] - p.dissipation[i]);
            if (r > c.worst) {
                c.worst = r;
                c.t1 = traj.times[i];
                c.t2 = traj.times[j];
            }
        }
    }
    c.pass = c.worst <= tol;
    return c;
}

} // namespace ri1d
