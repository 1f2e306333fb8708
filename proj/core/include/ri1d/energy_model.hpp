#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ri1d/jet.hpp"

namespace ri1d {

class ConstructedEnergy;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

struct Box {
    Interval t;
    Interval x;
};

/// x-derivatives of E at a point, as needed by the slide law and the hypothesis sets.
struct GradientJet {
    double dx = 0, dxx = 0, dxt = 0, dxxx = 0, dxxt = 0, dxtt = 0;
};

/// E = W(x) - l(t) x, coefficients in ascending degree.
struct SeparablePolynomial {
    std::vector<double> W;
    std::vector<double> loading;
};

/// E = sum c t^i x^j.
struct GeneralPolynomial {
    struct Term {
        int i = 0;
        int j = 0;
        double c = 0.0;
    };
    std::vector<Term> terms;
};

struct Constructed {
    std::shared_ptr<const ConstructedEnergy> energy;
};

class EnergyModel {
public:
    using Repr = std::variant<SeparablePolynomial, GeneralPolynomial, Constructed>;

    static EnergyModel separable(std::vector<double> W, std::vector<double> loading, double T, double L);
    static EnergyModel polynomial(std::vector<GeneralPolynomial::Term> terms, double T, double L);
    static EnergyModel constructed(std::shared_ptr<const ConstructedEnergy> e, double T, double L);

    const Repr& repr() const { return repr_; }
    std::string family() const;
    const Box& domain() const { return box_; }
    /// Additive constant, already included in every evaluation.
    double offset() const { return offset_; }
    EnergyModel with_offset(double c) const;

    bool contains(double t, double x) const;

    Jet3 eval_jet(double t, double x) const;
    GradientJet eval_dx(double t, double x) const;
    double value(double t, double x) const;
    double dt(double t, double x) const;
    double dx(double t, double x) const;
    /// dE/dx - s without the cancellation of forming dx first (s = +-1).
    double branch_residual(double t, double x, int s) const;

private:
    EnergyModel(Repr r, Box b) : repr_(std::move(r)), box_(b) {}
    void check_domain(double t, double x) const;

    Repr repr_;
    Box box_;
    double offset_ = 0.0;
};

// Built-in models.
EnergyModel zero_model(double T = 2.0, double L = 3.0);
/// x^2/2 - t x on [0,2] x [-3,3].
EnergyModel quadratic_model();
/// (x^2-1)^2/4 - t x on [0,2] x [-3,3].
EnergyModel double_well_model();
/// x^2/2 + x^4/10 - (6t - 3t^2) x on [0,2] x [-3,3]: loading rises, then reverses.
EnergyModel reversal_model();

std::vector<std::string> builtin_model_names();
/// Throws ConfigError for an unknown name.
EnergyModel builtin_model(const std::string& name);

struct ValidationReport {
    /// Slot names, in the order used by max_error and flagged.
    static const std::array<const char*, 9>& slot_names();
    std::array<double, 9> max_error{};
    std::array<bool, 9> flagged{};
    int samples = 0;
    double tol = 0.0;
    bool pass = true;
};

using JetEvaluator = std::function<Jet3(double, double)>;

/// Compares every jet slot of total order 1..3 against Richardson-extrapolated central
/// differences of the slot one order below, along t and along x wherever both exist.
ValidationReport validate_derivatives(const JetEvaluator& f, const Box& box, int samples, double tol,
                                      std::uint64_t seed = 7);
ValidationReport validate_derivatives(const EnergyModel& model, const Box& box, int samples, double tol,
                                      std::uint64_t seed = 7);

struct StationaryPoint {
    double x = 0.0;
    int sign = 0; ///< value of dE/dx at the root, +1 or -1
};

/// Roots of |dE/dx(t, .)| = 1 in xr, isolated on a uniform grid and refined by bisection.
std::vector<StationaryPoint> stationary_set(const EnergyModel& model, double t, Interval xr, int resolution);

} // namespace ri1d
