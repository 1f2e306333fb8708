#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ri1d/energy_model.hpp"

namespace ri1d {

enum class Hypothesis { H1, H2, H3, H4, H5 };
enum class Verdict { holds, fails, inconclusive };

std::string hypothesis_name(Hypothesis h);
Hypothesis parse_hypothesis(const std::string& s);
std::string verdict_name(Verdict v);

struct DegeneratePoint {
    double t = 0.0;
    double x = 0.0;
    int sign = 0; ///< dE/dx at the point
    std::vector<std::pair<std::string, double>> residuals;
};

struct HypothesisEntry {
    Hypothesis which = Hypothesis::H5;
    Verdict verdict = Verdict::holds;
    std::vector<DegeneratePoint> points;
    int resolution = 0;       ///< time slices
    int state_resolution = 0; ///< grid points per slice
    Box box;
    double residual_tol = 0.0;
    std::size_t candidates = 0; ///< candidate cells examined
    std::size_t unresolved = 0; ///< candidates whose refinement neither converged nor clearly missed
};

struct CheckOptions {
    int state_resolution = 0; ///< 0: max(resolution, 1024)
    double point_tol = 1e-10; ///< residual of the solved equalities
    double filter_tol = 1e-6; ///< residual of the filtered equality (H1, H2, H4)
    double miss_tol = 1e-4;   ///< refinement residual above which a candidate is dismissed
};

/// Scans `resolution` time slices of box, traces the branches dE/dx = +-1 and locates the
/// hypothesis' degenerate points. H1-H3 are taken over the open time interval, H4-H5 over the closed one.
HypothesisEntry check_hypothesis(const EnergyModel& model, Hypothesis which, const Box& box, int resolution,
                                 const CheckOptions& opts = {});

struct GapEstimate {
    bool finite = false; ///< false: no slice had two stationary points
    double epsilon = 0.0;
    double time = 0.0;
    double left = 0.0;
    double right = 0.0;
};

/// Smallest spacing between consecutive elements of the stationary set over the sampled times.
GapEstimate estimate_gap(const EnergyModel& model, const Box& box, int time_resolution, int state_resolution);

struct GrowthDiagnostic {
    std::vector<int> resolutions;
    std::vector<std::size_t> counts;
    /// Smallest ratio count(2r)/count(r); 0 when undefined.
    double min_ratio = 0.0;
};

/// Located-point counts at base, 2*base, ... (doublings + 1 resolutions).
GrowthDiagnostic growth_diagnostic(const EnergyModel& model, Hypothesis which, const Box& box, int base_resolution,
                                   int doublings, const CheckOptions& opts = {});

struct HypothesisReport {
    std::vector<HypothesisEntry> entries;
    GapEstimate gap;
};

} // namespace ri1d
