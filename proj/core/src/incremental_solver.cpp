#include "ri1d/incremental_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ri1d/errors.hpp"
#include "ri1d/minimize.hpp"
#include "ri1d/parallel.hpp"

namespace ri1d {

namespace {

struct Candidate {
    double z;
    double f;
    int side;      // -1 below x_prev, +1 above, 0 for x_prev itself
    bool boundary; // end of the search interval
};

struct StepResult {
    double z;
    Regime regime;
    bool tie;
};

class Stepper {
public:
    Stepper(const EnergyModel& m, Interval search, double h, const EnergeticOptions& o)
        : model_(m), search_(search), h_(h), opts_(o) {}

    StepResult step(double t, double xp) {
        auto f = [&](double z) { return model_.value(t, z) + std::abs(z - xp); };
        std::vector<Candidate> cands{{xp, f(xp), 0, false}};
        for (int side : {-1, 1}) {
            std::vector<double>& zs = side < 0 ? zlo_ : zhi_;
            std::vector<double>& fs = side < 0 ? flo_ : fhi_;
            zs.clear();
            fs.clear();
            const double end = side < 0 ? search_.lo : search_.hi;
            const double span = std::abs(end - xp);
            if (span <= 0.0) continue;
            const std::size_t nseg = std::size_t(std::ceil(span / h_));
            for (std::size_t m = 0; m <= nseg; ++m) {
                const double z = m == nseg ? end : xp + side * double(m) * h_;
                zs.push_back(z);
                fs.push_back(m == 0 ? cands[0].f : f(z));
            }
            auto refine = [&](double a, double b) {
                auto [z, fz] = golden_section(f, std::min(a, b), std::max(a, b), opts_.refine_tol);
                cands.push_back({z, fz, side, false});
            };
            refine(zs[0], zs[1]);
            for (std::size_t m = 1; m + 1 <= nseg; ++m)
                if (fs[m] <= fs[m - 1] && fs[m] <= fs[m + 1]) refine(zs[m - 1], zs[m + 1]);
            if (fs[nseg] < fs[nseg - 1]) cands.push_back({zs[nseg], fs[nseg], side, true});
        }

        // candidates within two scan steps share a basin: keep the lowest of each
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.z < b.z; });
        std::vector<Candidate> basins;
        for (const auto& c : cands) {
            if (!basins.empty() && c.z - basins.back().z <= 2.0 * h_) {
                if (c.f < basins.back().f) basins.back() = c;
                continue;
            }
            basins.push_back(c);
        }
        cands.swap(basins);

        double fbest = std::numeric_limits<double>::infinity();
        for (const auto& c : cands) fbest = std::min(fbest, c.f);
        const double tie = opts_.tie_tol * (1.0 + std::abs(fbest));
        const Candidate* chosen = nullptr;
        bool spread = false;
        for (const auto& c : cands) {
            if (c.f > fbest + tie) continue;
            if (!chosen || std::abs(c.z - xp) < std::abs(chosen->z - xp)) chosen = &c;
        }
        for (const auto& c : cands)
            if (c.f <= fbest + tie && std::abs(c.z - chosen->z) > 1e3 * opts_.refine_tol) spread = true;
        if (chosen->boundary) {
            std::ostringstream os;
            os.precision(17);
            os << "global minimiser at the search boundary x=" << chosen->z << " at t=" << t;
            throw UnboundedBelowError(os.str());
        }
        if (chosen->side == 0) return {xp, Regime::stick, spread};
        return {chosen->z, descends(t, xp, *chosen) ? Regime::slide : Regime::jump, spread};
    }

private:
    // Slide iff the scan profile falls monotonically from x_prev to the minimiser
    // through a convex region (no barrier and no lost branch on the way).
    bool descends(double t, double xp, const Candidate& c) const {
        const auto& zs = c.side < 0 ? zlo_ : zhi_;
        const auto& fs = c.side < 0 ? flo_ : fhi_;
        const double slack = 1e-13 * (1.0 + std::abs(fs[0]));
        for (std::size_t m = 1; m < zs.size(); ++m) {
            if (std::abs(zs[m] - xp) >= std::abs(c.z - xp)) break;
            if (fs[m] > fs[m - 1] + slack) return false;
            if (model_.eval_dx(t, zs[m]).dxx <= 0.0) return false;
        }
        return true;
    }

    const EnergyModel& model_;
    Interval search_;
    double h_;
    EnergeticOptions opts_;
    std::vector<double> zlo_, zhi_, flo_, fhi_;
};

} // namespace

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
    if (n == 0) throw ConfigError("grid needs at least one interval");
    std::vector<double> g(n + 1);
    for (std::size_t k = 0; k <= n; ++k) g[k] = k == n ? t1 : t0 + (t1 - t0) * double(k) / double(n);
    return g;
}

Trajectory solve_energetic(const EnergyModel& model, double x0, const std::vector<double>& grid, Interval search,
                           double tol, const EnergeticOptions& opts) {
    if (!(tol > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (grid.empty()) throw ConfigError("empty time grid");
    if (!search.contains(x0)) throw DomainError("x0 outside the search interval");
    if (!model.contains(grid.front(), search.lo) || !model.contains(grid.back(), search.hi))
        throw DomainError("search interval or time grid outside the model domain");
    const double h = opts.scan_step > 0.0 ? opts.scan_step : tol;
    Stepper stepper(model, search, h, opts);

    Trajectory traj;
    double xp = x0;
    for (double t : grid) {
        StepResult r = stepper.step(t, xp);
        traj.times.push_back(t);
        traj.values.push_back(r.z);
        traj.regimes.push_back(r.regime);
        if (r.regime == Regime::jump) traj.jumps.push_back({t, xp, r.z});
        if (r.tie) traj.ties.push_back(t);
        xp = r.z;
    }
    traj.validate();
    return traj;
}

StabilityCheck check_global_stability(const EnergyModel& model, const Trajectory& traj,
                                      const std::vector<double>& probe, double tol) {
    std::vector<StabilityCheck> rows(traj.size());
    parallel_for(traj.size(), [&](std::size_t k) {
        const double t = traj.times[k], x = traj.values[k];
        const double ex = model.value(t, x);
        StabilityCheck w;
        w.margin = std::numeric_limits<double>::infinity();
        for (double z : probe) {
            const double m = model.value(t, z) + std::abs(z - x) - ex;
            if (m < w.margin) {
                w.margin = m;
                w.probe = z;
            }
        }
        w.time = t;
        w.state = x;
        rows[k] = w;
    });
    StabilityCheck worst;
    worst.margin = std::numeric_limits<double>::infinity();
    for (const auto& r : rows)
        if (r.margin < worst.margin) worst = r;
    if (rows.empty()) worst.margin = 0.0;
    worst.pass = worst.margin >= -tol;
    return worst;
}

PathLedger path_ledger(const EnergyModel& model, const Trajectory& traj) {
    const std::size_t n = traj.size();
    PathLedger p;
    p.energy.resize(n);
    p.power.assign(n, 0.0);
    p.dissipation.assign(n, 0.0);
    std::vector<double> pw_left(n), pw_right(n);
    parallel_for(n, [&](std::size_t k) {
        p.energy[k] = model.value(traj.times[k], traj.values[k]);
        pw_right[k] = model.dt(traj.times[k], traj.values[k]);
        const double xl = traj.left_value(k);
        pw_left[k] = xl == traj.values[k] ? pw_right[k] : model.dt(traj.times[k], xl);
    });
    for (std::size_t k = 1; k < n; ++k) {
        const double dt = traj.times[k] - traj.times[k - 1];
        p.power[k] = p.power[k - 1] + 0.5 * dt * (pw_right[k - 1] + pw_left[k]);
        p.dissipation[k] = p.dissipation[k - 1] + std::abs(traj.values[k] - traj.values[k - 1]);
    }
    return p;
}

BalanceCheck check_energy_balance(const EnergyModel& model, const Trajectory& traj, double tol) {
    PathLedger p = path_ledger(model, traj);
    BalanceCheck b;
    b.residual.resize(traj.size());
    b.dissipation = p.dissipation;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        b.residual[k] = p.phi(k);
        if (std::abs(b.residual[k]) > b.max_abs) {
            b.max_abs = std::abs(b.residual[k]);
            b.worst_time = traj.times[k];
        }
    }
    b.pass = b.max_abs <= tol;
    return b;
}

double energy_scale(const EnergyModel& model, const Trajectory& traj) {
    double s = 1.0;
    for (std::size_t k = 0; k < traj.size(); ++k) s = std::max(s, std::abs(model.value(traj.times[k], traj.values[k])));
    return s;
}

} // namespace ri1d
