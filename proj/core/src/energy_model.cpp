#include "ri1d/energy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "ri1d/errors.hpp"
#include "ri1d/sign_field.hpp"

namespace ri1d {

namespace {

constexpr double kDomainSlack = 1e-9;

double horner(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
}

double horner_deriv(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) r = r * x + double(k) * c[k];
    return r;
}

Jet3 horner_jet(const std::vector<double>& c, const Jet3& x) {
    Jet3 r;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        r = r * x;
        r += *it;
    }
    return r;
}

void require_finite(const std::vector<double>& v, const char* what) {
    for (double c : v)
        if (!std::isfinite(c)) throw NonFiniteError(std::string("non-finite coefficient in ") + what);
}

Box make_box(double T, double L) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("domain.T must be positive");
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("domain.L must be positive");
    return Box{{0.0, T}, {-L, L}};
}

std::string fmt_point(double t, double x) {
    std::ostringstream os;
    os.precision(17);
    os << "(t=" << t << ", x=" << x << ")";
    return os.str();
}

} // namespace

EnergyModel EnergyModel::separable(std::vector<double> W, std::vector<double> loading, double T, double L) {
    require_finite(W, "W.coeffs");
    require_finite(loading, "loading.coeffs");
    return EnergyModel(SeparablePolynomial{std::move(W), std::move(loading)}, make_box(T, L));
}

EnergyModel EnergyModel::polynomial(std::vector<GeneralPolynomial::Term> terms, double T, double L) {
    for (const auto& term : terms) {
        if (term.i < 0 || term.j < 0) throw ConfigError("negative exponent in polynomial term");
        if (!std::isfinite(term.c)) throw NonFiniteError("non-finite polynomial coefficient");
    }
    return EnergyModel(GeneralPolynomial{std::move(terms)}, make_box(T, L));
}

EnergyModel EnergyModel::constructed(std::shared_ptr<const ConstructedEnergy> e, double T, double L) {
    if (!e) throw ConfigError("constructed model without energy");
    return EnergyModel(Constructed{std::move(e)}, make_box(T, L));
}

std::string EnergyModel::family() const {
    switch (repr_.index()) {
    case 0: return "separable";
    case 1: return "polynomial";
    default: return "constructed";
    }
}

EnergyModel EnergyModel::with_offset(double c) const {
    if (!std::isfinite(c)) throw NonFiniteError("non-finite energy offset");
    EnergyModel m = *this;
    m.offset_ = c;
    return m;
}

bool EnergyModel::contains(double t, double x) const {
    return box_.t.contains(t, kDomainSlack * (1.0 + std::abs(box_.t.hi))) &&
           box_.x.contains(x, kDomainSlack * (1.0 + std::abs(box_.x.hi)));
}

void EnergyModel::check_domain(double t, double x) const {
    if (!std::isfinite(t) || !std::isfinite(x)) throw NonFiniteError("non-finite evaluation point " + fmt_point(t, x));
    if (!contains(t, x)) throw DomainError("point " + fmt_point(t, x) + " outside the model domain");
}

Jet3 EnergyModel::eval_jet(double t, double x) const {
    check_domain(t, x);
    Jet3 r;
    if (auto* s = std::get_if<SeparablePolynomial>(&repr_)) {
        const Jet3 X = Jet3::variable_x(x);
        r = horner_jet(s->W, X) - horner_jet(s->loading, Jet3::variable_t(t)) * X;
    } else if (auto* p = std::get_if<GeneralPolynomial>(&repr_)) {
        int mi = 0, mj = 0;
        for (const auto& term : p->terms) {
            mi = std::max(mi, term.i);
            mj = std::max(mj, term.j);
        }
        std::vector<Jet3> tp(std::size_t(mi) + 1), xp(std::size_t(mj) + 1);
        tp[0] = xp[0] = Jet3::constant(1.0);
        for (int k = 1; k <= mi; ++k) tp[std::size_t(k)] = tp[std::size_t(k) - 1] * Jet3::variable_t(t);
        for (int k = 1; k <= mj; ++k) xp[std::size_t(k)] = xp[std::size_t(k) - 1] * Jet3::variable_x(x);
        for (const auto& term : p->terms) r += term.c * (tp[std::size_t(term.i)] * xp[std::size_t(term.j)]);
    } else {
        r = std::get<Constructed>(repr_).energy->eval_jet(t, x);
    }
    r += offset_;
    if (!r.finite()) throw NonFiniteError("non-finite jet at " + fmt_point(t, x));
    return r;
}

GradientJet EnergyModel::eval_dx(double t, double x) const {
    GradientJet g;
    if (auto* c = std::get_if<Constructed>(&repr_)) {
        check_domain(t, x);
        Jet2 j = c->energy->eval_dx_jet(t, x);
        if (!j.finite()) throw NonFiniteError("non-finite jet at " + fmt_point(t, x));
        g.dx = j.derivative(0, 0);
        g.dxx = j.derivative(0, 1);
        g.dxt = j.derivative(1, 0);
        g.dxxx = j.derivative(0, 2);
        g.dxxt = j.derivative(1, 1);
        g.dxtt = j.derivative(2, 0);
        return g;
    }
    Jet3 j = eval_jet(t, x);
    g.dx = j.derivative(0, 1);
    g.dxx = j.derivative(0, 2);
    g.dxt = j.derivative(1, 1);
    g.dxxx = j.derivative(0, 3);
    g.dxxt = j.derivative(1, 2);
    g.dxtt = j.derivative(2, 1);
    return g;
}

double EnergyModel::value(double t, double x) const {
    check_domain(t, x);
    double v;
    if (auto* s = std::get_if<SeparablePolynomial>(&repr_)) {
        v = horner(s->W, x) - horner(s->loading, t) * x;
    } else if (auto* p = std::get_if<GeneralPolynomial>(&repr_)) {
        v = 0.0;
        for (const auto& term : p->terms) v += term.c * std::pow(t, term.i) * std::pow(x, term.j);
    } else {
        v = std::get<Constructed>(repr_).energy->value(t, x);
    }
    v += offset_;
    if (!std::isfinite(v)) throw NonFiniteError("non-finite energy at " + fmt_point(t, x));
    return v;
}

double EnergyModel::dt(double t, double x) const {
    check_domain(t, x);
    double v;
    if (auto* s = std::get_if<SeparablePolynomial>(&repr_)) {
        v = -horner_deriv(s->loading, t) * x;
    } else if (auto* p = std::get_if<GeneralPolynomial>(&repr_)) {
        v = 0.0;
        for (const auto& term : p->terms)
            if (term.i > 0) v += term.c * term.i * std::pow(t, term.i - 1) * std::pow(x, term.j);
    } else {
        v = std::get<Constructed>(repr_).energy->t_series(t, x)[1];
    }
    if (!std::isfinite(v)) throw NonFiniteError("non-finite time derivative at " + fmt_point(t, x));
    return v;
}

double EnergyModel::dx(double t, double x) const {
    check_domain(t, x);
    double v;
    if (auto* s = std::get_if<SeparablePolynomial>(&repr_)) {
        v = horner_deriv(s->W, x) - horner(s->loading, t);
    } else if (auto* p = std::get_if<GeneralPolynomial>(&repr_)) {
        v = 0.0;
        for (const auto& term : p->terms)
            if (term.j > 0) v += term.c * term.j * std::pow(t, term.i) * std::pow(x, term.j - 1);
    } else {
        v = std::get<Constructed>(repr_).energy->field().value(t, x) - 1.0;
    }
    if (!std::isfinite(v)) throw NonFiniteError("non-finite state derivative at " + fmt_point(t, x));
    return v;
}

double EnergyModel::branch_residual(double t, double x, int s) const {
    if (auto* c = std::get_if<Constructed>(&repr_)) {
        check_domain(t, x);
        const double g = c->energy->field().value(t, x);
        return s < 0 ? g : g - 2.0;
    }
    return dx(t, x) - s;
}

EnergyModel zero_model(double T, double L) { return EnergyModel::separable({}, {}, T, L); }

EnergyModel quadratic_model() { return EnergyModel::separable({0.0, 0.0, 0.5}, {0.0, 1.0}, 2.0, 3.0); }

EnergyModel double_well_model() {
    return EnergyModel::separable({0.25, 0.0, -0.5, 0.0, 0.25}, {0.0, 1.0}, 2.0, 3.0);
}

EnergyModel reversal_model() {
    return EnergyModel::polynomial({{0, 2, 0.5}, {0, 4, 0.1}, {1, 1, -6.0}, {2, 1, 3.0}}, 2.0, 3.0);
}

std::vector<std::string> builtin_model_names() { return {"zero", "quadratic", "double-well", "reversal"}; }

EnergyModel builtin_model(const std::string& name) {
    if (name == "zero") return zero_model();
    if (name == "quadratic") return quadratic_model();
    if (name == "double-well") return double_well_model();
    if (name == "reversal") return reversal_model();
    throw ConfigError("unknown built-in model '" + name + "'");
}

const std::array<const char*, 9>& ValidationReport::slot_names() {
    static const std::array<const char*, 9> names{"t", "x", "tt", "tx", "xx", "ttt", "ttx", "txx", "xxx"};
    return names;
}

ValidationReport validate_derivatives(const JetEvaluator& f, const Box& box, int samples, double tol,
                                      std::uint64_t seed) {
    if (samples < 1) throw ConfigError("validate_derivatives needs at least one sample");
    constexpr double h = 1e-4;
    // slot k -> (i, j) in t/x orders
    static const std::array<std::pair<int, int>, 9> slots{
        {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}};
    ValidationReport rep;
    rep.samples = samples;
    rep.tol = tol;
    const double tlo = box.t.lo + h, thi = box.t.hi - h;
    const double xlo = box.x.lo + h, xhi = box.x.hi - h;
    if (!(thi > tlo) || !(xhi > xlo)) throw DomainError("validation box too small for the difference step");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(tlo, thi), ux(xlo, xhi);
    for (int s = 0; s < samples; ++s) {
        const double t = ut(rng), x = ux(rng);
        const Jet3 c = f(t, x);
        const Jet3 tp = f(t + h, x), tm = f(t - h, x), tp2 = f(t + h / 2, x), tm2 = f(t - h / 2, x);
        const Jet3 xp = f(t, x + h), xm = f(t, x - h), xp2 = f(t, x + h / 2), xm2 = f(t, x - h / 2);
        for (std::size_t k = 0; k < slots.size(); ++k) {
            const auto [i, j] = slots[k];
            const double ref = c.derivative(i, j);
            const double scale = std::max(1.0, std::abs(ref));
            double err = 0.0;
            if (i >= 1) {
                const double d1 = (tp.derivative(i - 1, j) - tm.derivative(i - 1, j)) / (2 * h);
                const double d2 = (tp2.derivative(i - 1, j) - tm2.derivative(i - 1, j)) / h;
                err = std::max(err, std::abs(ref - (4 * d2 - d1) / 3) / scale);
            }
            if (j >= 1) {
                const double d1 = (xp.derivative(i, j - 1) - xm.derivative(i, j - 1)) / (2 * h);
                const double d2 = (xp2.derivative(i, j - 1) - xm2.derivative(i, j - 1)) / h;
                err = std::max(err, std::abs(ref - (4 * d2 - d1) / 3) / scale);
            }
            if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
            rep.max_error[k] = std::max(rep.max_error[k], err);
        }
    }
    for (std::size_t k = 0; k < 9; ++k) {
        rep.flagged[k] = !(rep.max_error[k] <= tol);
        if (rep.flagged[k]) rep.pass = false;
    }
    return rep;
}

ValidationReport validate_derivatives(const EnergyModel& model, const Box& box, int samples, double tol,
                                      std::uint64_t seed) {
    if (!model.contains(box.t.lo, box.x.lo) || !model.contains(box.t.hi, box.x.hi))
        throw DomainError("validation box exceeds the model domain");
    return validate_derivatives([&](double t, double x) { return model.eval_jet(t, x); }, box, samples, tol, seed);
}

std::vector<StationaryPoint> stationary_set(const EnergyModel& model, double t, Interval xr, int resolution) {
    if (resolution < 2) throw ConfigError("stationary_set needs resolution >= 2");
    const int n = resolution;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) xs[std::size_t(k)] = k == n - 1 ? xr.hi : xr.lo + xr.width() * k / (n - 1);
    const double width_tol = 1e-12 * std::abs(xr.width());
    std::vector<StationaryPoint> out;
    for (int s : {-1, 1}) {
        std::vector<double> d(xs.size());
        for (std::size_t k = 0; k < xs.size(); ++k) d[k] = model.branch_residual(t, xs[k], s);
        auto f = [&](double x) { return model.branch_residual(t, x, s); };
        for (int k = 0; k < n; ++k) {
            const double fk = d[std::size_t(k)];
            if (fk == 0.0) {
                // a run of exact zeros is reported once, at its middle grid point
                int e = k;
                while (e + 1 < n && d[std::size_t(e) + 1] == 0.0) ++e;
                out.push_back({xs[std::size_t((k + e) / 2)], s});
                k = e;
                continue;
            }
            if (k + 1 < n) {
                const double fn = d[std::size_t(k) + 1];
                if (fn != 0.0 && (fk < 0.0) != (fn < 0.0)) {
                    std::uintmax_t iters = 200;
                    auto r = boost::math::tools::bisect(
                        f, xs[std::size_t(k)], xs[std::size_t(k) + 1],
                        [&](double a, double b) { return std::abs(b - a) <= width_tol; }, iters);
                    out.push_back({0.5 * (r.first + r.second), s});
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const StationaryPoint& a, const StationaryPoint& b) {
        return a.x < b.x || (a.x == b.x && a.sign < b.sign);
    });
    return out;
}

} // namespace ri1d
