#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace ri1d::cli {

enum ExitCode { ok = 0, audit_failed = 1, usage_error = 2 };

struct RunConfig {
    std::string command;
    std::string model;  ///< file path or built-in name
    std::string driver; ///< file path or inline "cantor level=5"
    std::string traj;   ///< trajectory CSV (audit)
    std::string out = ".";
    double dt = 1e-3;
    double horizon = 0.0;   ///< 0: the model's time range
    double x0 = 0.0;
    bool has_x0 = false;
    std::vector<double> box; ///< t0,t1,x0,x1; empty: the model domain
    int resolution = 512;
    double tol = 0.0;       ///< 0: per-command default scaled by the energy
    std::uint64_t seed = 11;
    bool sbv = false;
    bool balance = false;
    double threshold = 0.0; ///< jump threshold for audits; 0: default
    double bound = 0.0;     ///< construct: M (0: default)
    double sharpness = 0.0; ///< construct: smoothing width (0: default)
    std::vector<std::string> hypotheses;
};

std::vector<std::string> commands();

/// Runs one pipeline and writes its artifacts under cfg.out. Messages go to log.
int run(const RunConfig& cfg, std::ostream& log);

/// Full command-line entry point (parsing included).
int main_entry(int argc, char** argv);

} // namespace ri1d::cli
