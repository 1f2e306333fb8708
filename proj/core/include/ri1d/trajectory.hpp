#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace ri1d {

enum class Regime { stick, slide, jump, incremental };

std::string regime_name(Regime r);
Regime parse_regime(const std::string& s);

struct JumpRecord {
    double time = 0.0;
    double left = 0.0;
    double right = 0.0;
    double size() const { return right - left; }
};

// Sampled state path. A jump record's time coincides with the sample that first shows
// the post-jump value; that sample stores the right limit.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<Regime> regimes;
    std::vector<JumpRecord> jumps;
    /// Steps at which two minimisers were tied within tolerance.
    std::vector<double> ties;

    std::size_t size() const { return times.size(); }
    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;
    /// Index of the jump record at sample k, or -1.
    int jump_at(std::size_t k) const;
    /// State just before sample k: the jump's left limit on jump rows, the value otherwise.
    double left_value(std::size_t k) const;
};

/// Trajectory from plain samples; every row is labelled incremental, no jump records.
Trajectory make_trajectory(std::vector<double> times, std::vector<double> values);

void write_csv(const Trajectory& traj, std::ostream& out);
/// Reads the CSV produced by write_csv (also accepts two-column t,x files). Throws ConfigError.
Trajectory read_csv(std::istream& in);
/// "t x" lines with "# jump t left right" annotations.
void write_plot(const Trajectory& traj, std::ostream& out);
/// Reads write_plot output back; regimes come back as incremental.
Trajectory read_plot(std::istream& in);

} // namespace ri1d
