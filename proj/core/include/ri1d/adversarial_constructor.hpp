#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ri1d/driver.hpp"
#include "ri1d/energy_model.hpp"
#include "ri1d/sign_field.hpp"

namespace ri1d {

MonotoneDriver cantor_driver(int level);

/// sharpness <= 0 or M <= 0 select the defaults.
std::shared_ptr<const SignField> build_sign_field(const MonotoneDriver& u, double M = 0.0, double sharpness = 0.0);

/// Constructed model on [0, horizon] x [-M, M] with E(t, x0) = 0.
EnergyModel build_energy(std::shared_ptr<const SignField> g, double x0);

/// The drivers used for round-trip checks: constant, one step, three steps, Cantor level 5.
std::vector<std::pair<std::string, MonotoneDriver>> builtin_drivers();

struct VerifyOptions {
    std::size_t times = 100;      ///< sample times (k + 1/2) T / times
    std::size_t probes = 10000;   ///< uniform z grid over the model's x-range
    std::size_t sign_grid = 200;  ///< sign-clause test grid per axis
    double margin_tol = 1e-6;
    double slope_tol = 1e-8;
    double saturation_tol = 1e-10;
    double uniqueness_sep = 1e-3;
};

struct EnergeticVerdict {
    bool left_continuous = true;

    double diss = 0.0;          ///< variation of u over the sample times plus both ends
    double diss_expected = 0.0; ///< u(T) - u(0)
    bool diss_pass = true;

    double worst_margin = 0.0;
    double margin_time = 0.0;
    double margin_probe = 0.0;
    bool margin_pass = true;

    /// min margin over probes with |z - u(t)| > uniqueness_sep, at sample times at least
    /// one sharpness away from every jump (closer in, the smoothing is flatter than rounding)
    double uniqueness = 0.0;
    std::size_t uniqueness_times = 0;
    bool unique_pass = true;

    double slope_error = 0.0; ///< max |dE/dx(t, u(t)) + 1|
    bool slope_pass = true;

    std::size_t sign_checked = 0;
    std::size_t sign_violations = 0;
    double max_abs_g = 0.0;
    bool sign_pass = true;

    double saturation_error = 0.0;
    bool saturation_pass = true;

    double offset = 0.0;
    bool pass = true;
};

/// Checks left-continuity, Diss = u(T) - u(0), minimality of u(t) for E(t, .) + |. - x0|,
/// and the sign-field properties when the model is a constructed one.
EnergeticVerdict verify_energetic(const EnergyModel& model, const MonotoneDriver& u, double x0,
                                  const VerifyOptions& opts = {});

} // namespace ri1d
