#include "ri1d/adversarial_constructor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "ri1d/errors.hpp"
#include "ri1d/parallel.hpp"

namespace ri1d {

MonotoneDriver cantor_driver(int level) { return MonotoneDriver::cantor(level); }

std::shared_ptr<const SignField> build_sign_field(const MonotoneDriver& u, double M, double sharpness) {
    if (!(M > 0.0)) M = default_bound(u);
    if (!(sharpness > 0.0)) sharpness = default_sharpness(u);
    return std::make_shared<const SignField>(u, M, sharpness);
}

EnergyModel build_energy(std::shared_ptr<const SignField> g, double x0) {
    if (!g) throw ConfigError("build_energy needs a sign field");
    const double T = g->driver().horizon(), M = g->bound();
    auto e = std::make_shared<const ConstructedEnergy>(g, x0);
    return EnergyModel::constructed(e, T, M);
}

std::vector<std::pair<std::string, MonotoneDriver>> builtin_drivers() {
    return {
        {"constant", MonotoneDriver::staircase(0.0, {}, 1.0)},
        {"one-step", MonotoneDriver::staircase(0.0, {{0.5, 1.0}}, 1.0)},
        {"three-step", MonotoneDriver::staircase(0.0, {{0.25, 0.5}, {0.5, 1.0}, {0.75, 1.5}}, 1.0)},
        {"cantor-5", MonotoneDriver::cantor(5)},
    };
}

namespace {

// max-norm distance from (t, x) to the completed graph of u (vertical segments included)
double graph_distance(const MonotoneDriver& u, double t, double x) {
    double d = std::abs(x - u(t));
    const auto& jt = u.jump_times();
    const auto& lv = u.levels();
    for (std::size_t k = 0; k < jt.size(); ++k) {
        const double dt = std::abs(t - jt[k]);
        if (dt >= d) continue;
        const double lo = lv[k], hi = lv[k + 1];
        const double dx = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
        d = std::min(d, std::max(dt, dx));
    }
    return d;
}

} // namespace

EnergeticVerdict verify_energetic(const EnergyModel& model, const MonotoneDriver& u, double x0,
                                  const VerifyOptions& opts) {
    if (opts.times == 0 || opts.probes < 2 || opts.sign_grid == 0) throw ConfigError("verification grids must be non-empty");
    if (std::abs(x0 - u(0.0)) > 1e-12 * (1.0 + std::abs(x0))) throw ConfigError("verify_energetic needs x0 = u(0)");
    EnergeticVerdict v;
    v.offset = model.offset();
    const double T = u.horizon();
    const Interval xr = model.domain().x;

    for (double tj : u.jump_times())
        if (u(tj) != u.left_limit(tj) || !(u.right_limit(tj) >= u(tj))) v.left_continuous = false;

    std::vector<double> ts(opts.times);
    for (std::size_t k = 0; k < opts.times; ++k) ts[k] = (double(k) + 0.5) * T / double(opts.times);

    {
        double prev = u(0.0);
        for (double t : ts) {
            v.diss += std::abs(u(t) - prev);
            prev = u(t);
        }
        v.diss += std::abs(u(T) - prev);
        v.diss_expected = u(T) - u(0.0);
        v.diss_pass = std::abs(v.diss - v.diss_expected) <= 1e-12 * (1.0 + std::abs(v.diss_expected));
    }

    const Constructed* cons = std::get_if<Constructed>(&model.repr());
    const double w = cons ? cons->energy->field().sharpness() : 0.0;

    std::vector<double> probe(opts.probes);
    for (std::size_t j = 0; j < opts.probes; ++j)
        probe[j] = j + 1 == opts.probes ? xr.hi : xr.lo + xr.width() * double(j) / double(opts.probes - 1);

    struct Row {
        double worst = std::numeric_limits<double>::infinity(), probe = 0.0;
        double unique = std::numeric_limits<double>::infinity();
        bool use_unique = false;
        double slope = 0.0;
    };
    std::vector<Row> rows(ts.size());
    parallel_for(ts.size(), [&](std::size_t k) {
        const double t = ts[k], ut = u(t);
        std::vector<double> xs = probe;
        xs.insert(std::upper_bound(xs.begin(), xs.end(), ut), ut);
        std::vector<double> es;
        if (cons) {
            es = cons->energy->values(t, xs);
            for (auto& e : es) e += model.offset();
        } else {
            es.resize(xs.size());
            for (std::size_t j = 0; j < xs.size(); ++j) es[j] = model.value(t, xs[j]);
        }
        const std::size_t iu = std::size_t(std::upper_bound(xs.begin(), xs.end(), ut) - xs.begin()) - 1;
        const double base = es[iu] + std::abs(ut - x0);
        Row r;
        bool far = true;
        for (double tj : u.jump_times())
            if (std::abs(t - tj) < w) far = false;
        r.use_unique = far;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == iu) continue;
            const double m = es[j] + std::abs(xs[j] - x0) - base;
            if (m < r.worst) {
                r.worst = m;
                r.probe = xs[j];
            }
            if (std::abs(xs[j] - ut) > opts.uniqueness_sep) r.unique = std::min(r.unique, m);
        }
        r.slope = std::abs(model.dx(t, ut) + 1.0);
        rows[k] = r;
    });
    v.worst_margin = std::numeric_limits<double>::infinity();
    v.uniqueness = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].worst < v.worst_margin) {
            v.worst_margin = rows[k].worst;
            v.margin_time = ts[k];
            v.margin_probe = rows[k].probe;
        }
        if (rows[k].use_unique) {
            ++v.uniqueness_times;
            v.uniqueness = std::min(v.uniqueness, rows[k].unique);
        }
        v.slope_error = std::max(v.slope_error, rows[k].slope);
    }
    v.margin_pass = v.worst_margin >= -opts.margin_tol;
    v.unique_pass = v.uniqueness_times > 0 && v.uniqueness > 0.0;
    v.slope_pass = v.slope_error <= opts.slope_tol;

    if (cons) {
        const SignField& g = cons->energy->field();
        const std::size_t n = opts.sign_grid;
        const double M = g.bound();
        // grid tolerance: one cell in each direction
        const double tol = std::max(T, 2 * M) / double(n);
        std::vector<std::size_t> bad(n, 0), checked(n, 0);
        std::vector<double> gmax(n, 0.0), sat(n, 0.0);
        parallel_for(n, [&](std::size_t i) {
            const double t = (double(i) + 0.5) * T / double(n);
            const double ut = u(t);
            for (std::size_t j = 0; j < n; ++j) {
                const double x = -M + (double(j) + 0.5) * 2 * M / double(n);
                const double gv = g.value(t, x);
                gmax[i] = std::max(gmax[i], std::abs(gv));
                if (graph_distance(u, t, x) <= tol) continue;
                ++checked[i];
                const double want = x > ut ? 1.0 : -1.0;
                if (!(gv * want > 0.0)) ++bad[i];
            }
            sat[i] = std::max(std::abs(g.value(t, M) - 1.0), std::abs(g.value(t, -M) + 1.0));
        });
        for (std::size_t i = 0; i < n; ++i) {
            v.sign_checked += checked[i];
            v.sign_violations += bad[i];
            v.max_abs_g = std::max(v.max_abs_g, gmax[i]);
            v.saturation_error = std::max(v.saturation_error, sat[i]);
        }
        v.sign_pass = v.sign_violations == 0 && v.max_abs_g <= 1.0;
        v.saturation_pass = v.saturation_error <= opts.saturation_tol;
    }
    v.pass = v.left_continuous && v.diss_pass && v.margin_pass && v.slope_pass && v.sign_pass && v.saturation_pass;
    return v;
}

} // namespace ri1d
