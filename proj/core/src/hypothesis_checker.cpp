#include "ri1d/hypothesis_checker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ri1d/errors.hpp"
#include "ri1d/parallel.hpp"

namespace ri1d {

std::string hypothesis_name(Hypothesis h) {
    switch (h) {
    case Hypothesis::H1: return "H1";
    case Hypothesis::H2: return "H2";
    case Hypothesis::H3: return "H3";
    case Hypothesis::H4: return "H4";
    case Hypothesis::H5: return "H5";
    }
    return "H5";
}

Hypothesis parse_hypothesis(const std::string& s) {
    for (Hypothesis h : {Hypothesis::H1, Hypothesis::H2, Hypothesis::H3, Hypothesis::H4, Hypothesis::H5})
        if (hypothesis_name(h) == s) return h;
    throw ConfigError("unknown hypothesis '" + s + "'");
}

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

struct Root {
    double x;
    int sign;
    GradientJet g;
};

struct Slice {
    double t;
    std::vector<Root> roots;
};

struct Candidate {
    double t, x;
    int sign;
};

enum class Outcome { located, dismissed, unresolved };

struct Refined {
    Outcome outcome = Outcome::dismissed;
    DegeneratePoint point;
};

std::vector<double> slice_times(const Box& box, int n) {
    std::vector<double> ts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ts[std::size_t(i)] = i == n - 1 ? box.t.hi : box.t.lo + box.t.width() * i / (n - 1);
    return ts;
}

double aux_value(Hypothesis h, const GradientJet& g) { return h == Hypothesis::H4 ? g.dxt : g.dxx; }

// Equalities solved by the refinement: value and gradient in (t, x).
struct Equation {
    double r, dt, dx;
};

// r0: dE/dx - s, taken from the model so that it keeps full precision near the branch
std::vector<Equation> equations(Hypothesis h, const GradientJet& g, double r0) {
    std::vector<Equation> eq{{r0, g.dxt, g.dxx}};
    if (h != Hypothesis::H4) eq.push_back({g.dxx, g.dxxt, g.dxxx});
    if (h == Hypothesis::H2 || h == Hypothesis::H3 || h == Hypothesis::H4) eq.push_back({g.dxt, g.dxtt, g.dxxt});
    return eq;
}

double norm_inf(const std::vector<Equation>& eq) {
    double m = 0.0;
    for (const auto& e : eq) m = std::max(m, std::abs(e.r));
    return m;
}

class Refiner {
public:
    Refiner(const EnergyModel& m, Hypothesis h, const Box& b, const CheckOptions& o)
        : model_(m), h_(h), box_(b), opts_(o) {}

    Refined refine(const Candidate& c) const {
        double t = clamp_t(c.t), x = clamp_x(c.x);
        const int s = c.sign;
        auto eq = system(t, x, s);
        double res = norm_inf(eq);
        double lambda = 1e-3;
        for (int it = 0; it < 100 && res > opts_.point_tol; ++it) {
            // normal equations of the damped least-squares step
            double a = 0, b = 0, d = 0, gt = 0, gx = 0;
            for (const auto& e : eq) {
                a += e.dt * e.dt;
                b += e.dt * e.dx;
                d += e.dx * e.dx;
                gt += e.dt * e.r;
                gx += e.dx * e.r;
            }
            bool improved = false;
            for (int k = 0; k < 30 && !improved; ++k) {
                const double aa = a * (1 + lambda) + 1e-300, dd = d * (1 + lambda) + 1e-300;
                const double det = aa * dd - b * b;
                if (!(std::abs(det) > 0.0)) break;
                const double st = -(dd * gt - b * gx) / det;
                const double sx = -(aa * gx - b * gt) / det;
                const double tn = clamp_t(t + st), xn = clamp_x(x + sx);
                auto eqn = system(tn, xn, s);
                const double rn = norm_inf(eqn);
                if (rn < res) {
                    t = tn;
                    x = xn;
                    eq = std::move(eqn);
                    res = rn;
                    lambda = std::max(lambda / 3, 1e-12);
                    improved = true;
                } else {
                    lambda *= 4;
                }
            }
            if (!improved) break;
        }
        Refined out;
        if (res > opts_.miss_tol) return out;
        if (res > opts_.point_tol) {
            out.outcome = Outcome::unresolved;
            return out;
        }
        if (!inside(t)) return out;
        const GradientJet g = model_.eval_dx(t, x);
        DegeneratePoint p;
        p.t = t;
        p.x = x;
        p.sign = s;
        p.residuals.push_back({"dx-sign", model_.branch_residual(t, x, p.sign)});
        if (h_ != Hypothesis::H4) p.residuals.push_back({"dxx", g.dxx});
        if (h_ == Hypothesis::H2 || h_ == Hypothesis::H3 || h_ == Hypothesis::H4) p.residuals.push_back({"dxt", g.dxt});
        double filter = 0.0;
        if (h_ == Hypothesis::H1) {
            filter = g.dxxx;
            p.residuals.push_back({"dxxx", filter});
        } else if (h_ == Hypothesis::H2) {
            filter = g.dxxt * g.dxxt - g.dxtt * g.dxxx;
            p.residuals.push_back({"dxxt^2-dxtt*dxxx", filter});
        } else if (h_ == Hypothesis::H4) {
            filter = g.dxtt;
            p.residuals.push_back({"dxtt", filter});
        }
        if (std::abs(filter) > opts_.filter_tol) return out;
        out.outcome = Outcome::located;
        out.point = std::move(p);
        return out;
    }

private:
    std::vector<Equation> system(double t, double x, int s) const {
        return equations(h_, model_.eval_dx(t, x), model_.branch_residual(t, x, s));
    }
    double clamp_t(double t) const { return std::clamp(t, box_.t.lo, box_.t.hi); }
    double clamp_x(double x) const { return std::clamp(x, box_.x.lo, box_.x.hi); }
    bool inside(double t) const {
        if (h_ == Hypothesis::H4 || h_ == Hypothesis::H5) return true;
        const double e = 1e-9 * (1.0 + std::abs(box_.t.hi));
        return t > box_.t.lo + e && t < box_.t.hi - e;
    }

    const EnergyModel& model_;
    Hypothesis h_;
    Box box_;
    CheckOptions opts_;
};

std::vector<Root> of_sign(const std::vector<Root>& r, int s) {
    std::vector<Root> out;
    for (const auto& x : r)
        if (x.sign == s) out.push_back(x);
    return out;
}

void closest_pair(const std::vector<Root>& r, double t, int s, std::vector<Candidate>& out) {
    if (r.size() < 2) return;
    std::size_t best = 0;
    for (std::size_t k = 1; k + 1 < r.size(); ++k)
        if (r[k + 1].x - r[k].x < r[best + 1].x - r[best].x) best = k;
    out.push_back({t, 0.5 * (r[best].x + r[best + 1].x), s});
}

} // namespace

HypothesisEntry check_hypothesis(const EnergyModel& model, Hypothesis which, const Box& box, int resolution,
                                 const CheckOptions& opts) {
    if (resolution < 8) throw ConfigError("check_hypothesis needs resolution >= 8");
    if (!model.contains(box.t.lo, box.x.lo) || !model.contains(box.t.hi, box.x.hi))
        throw DomainError("hypothesis box exceeds the model domain");
    HypothesisEntry entry;
    entry.which = which;
    entry.box = box;
    entry.resolution = resolution;
    entry.state_resolution = opts.state_resolution > 0 ? opts.state_resolution : std::max(resolution, 1024);
    entry.residual_tol = std::max(opts.point_tol, opts.filter_tol);

    const std::vector<double> ts = slice_times(box, resolution);
    std::vector<Slice> slices(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) {
        slices[i].t = ts[i];
        for (const auto& r : stationary_set(model, ts[i], box.x, entry.state_resolution))
            slices[i].roots.push_back({r.x, r.sign, model.eval_dx(ts[i], r.x)});
    });

    std::vector<Candidate> cands;
    for (const auto& sl : slices)
        for (const auto& r : sl.roots)
            if (std::abs(aux_value(which, r.g)) <= opts.filter_tol) cands.push_back({sl.t, r.x, r.sign});
    for (int s : {-1, 1}) {
        for (std::size_t i = 0; i + 1 < slices.size(); ++i) {
            const auto a = of_sign(slices[i].roots, s), b = of_sign(slices[i + 1].roots, s);
            const double tm = 0.5 * (slices[i].t + slices[i + 1].t);
            if (a.size() != b.size()) {
                closest_pair(a.size() > b.size() ? a : b, a.size() > b.size() ? slices[i].t : slices[i + 1].t, s,
                             cands);
                continue;
            }
            for (std::size_t k = 0; k < a.size(); ++k) {
                const double fa = aux_value(which, a[k].g), fb = aux_value(which, b[k].g);
                if (fa * fb < 0.0) cands.push_back({tm, 0.5 * (a[k].x + b[k].x), s});
            }
            if (i == 0) continue;
            const auto p = of_sign(slices[i - 1].roots, s);
            if (p.size() != a.size()) continue;
            for (std::size_t k = 0; k < a.size(); ++k) {
                const double fp = std::abs(aux_value(which, p[k].g)), fa = std::abs(aux_value(which, a[k].g)),
                             fb = std::abs(aux_value(which, b[k].g));
                if (fa < fp && fa < fb) cands.push_back({slices[i].t, a[k].x, s});
            }
        }
    }
    entry.candidates = cands.size();

    Refiner refiner(model, which, box, opts);
    std::vector<Refined> refined(cands.size());
    parallel_for(cands.size(), [&](std::size_t k) { refined[k] = refiner.refine(cands[k]); });

    std::vector<DegeneratePoint> pts;
    for (auto& r : refined) {
        if (r.outcome == Outcome::located) pts.push_back(std::move(r.point));
        else if (r.outcome == Outcome::unresolved) ++entry.unresolved;
    }
    std::sort(pts.begin(), pts.end(), [](const DegeneratePoint& a, const DegeneratePoint& b) {
        return a.t < b.t || (a.t == b.t && a.x < b.x);
    });
    for (auto& p : pts) {
        bool dup = false;
        for (const auto& q : entry.points)
            if (std::abs(p.t - q.t) <= 1e-7 * (1.0 + std::abs(q.t)) && std::abs(p.x - q.x) <= 1e-7 * (1.0 + std::abs(q.x)))
                dup = true;
        if (!dup) entry.points.push_back(std::move(p));
    }
    if (!entry.points.empty()) entry.verdict = Verdict::fails;
    else if (entry.unresolved > 0) entry.verdict = Verdict::inconclusive;
    else entry.verdict = Verdict::holds;
    return entry;
}

GapEstimate estimate_gap(const EnergyModel& model, const Box& box, int time_resolution, int state_resolution) {
    if (time_resolution < 2 || state_resolution < 2) throw ConfigError("estimate_gap needs resolutions >= 2");
    const std::vector<double> ts = slice_times(box, time_resolution);
    std::vector<GapEstimate> per(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) {
        const auto roots = stationary_set(model, ts[i], box.x, state_resolution);
        GapEstimate g;
        for (std::size_t k = 1; k < roots.size(); ++k) {
            const double d = roots[k].x - roots[k - 1].x;
            if (!g.finite || d < g.epsilon) {
                g.finite = true;
                g.epsilon = d;
                g.time = ts[i];
                g.left = roots[k - 1].x;
                g.right = roots[k].x;
            }
        }
        per[i] = g;
    });
    GapEstimate best;
    for (const auto& g : per)
        if (g.finite && (!best.finite || g.epsilon < best.epsilon)) best = g;
    if (!best.finite) best.epsilon = std::numeric_limits<double>::infinity();
    return best;
}

GrowthDiagnostic growth_diagnostic(const EnergyModel& model, Hypothesis which, const Box& box, int base_resolution,
                                   int doublings, const CheckOptions& opts) {
    GrowthDiagnostic d;
    int r = base_resolution;
    for (int k = 0; k <= doublings; ++k, r *= 2) {
        d.resolutions.push_back(r);
        d.counts.push_back(check_hypothesis(model, which, box, r, opts).points.size());
    }
    d.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < d.counts.size(); ++k)
        d.min_ratio = d.counts[k - 1] > 0 ? std::min(d.min_ratio, double(d.counts[k]) / double(d.counts[k - 1])) : 0.0;
    if (d.counts.size() < 2) d.min_ratio = 0.0;
    return d;
}

} // namespace ri1d
