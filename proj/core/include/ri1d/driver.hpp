#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ri1d {

// Non-decreasing, left-continuous driver u on [0, T], stored as a staircase:
// u = base on [0, t_1], u = level_k on (t_k, t_{k+1}].
class MonotoneDriver {
public:
    enum class Kind { staircase, cantor, table };

    MonotoneDriver() = default;

    static MonotoneDriver staircase(double base, std::vector<std::pair<double, double>> jumps, double T);
    static MonotoneDriver cantor(int level);
    /// Samples (t_k, v_k) with increasing t and non-decreasing v; u(t_k) = v_k.
    static MonotoneDriver table(std::vector<std::pair<double, double>> samples);

    Kind kind() const { return kind_; }
    int level() const { return level_; }
    double horizon() const { return T_; }
    double base() const { return base_; }
    const std::vector<double>& jump_times() const { return times_; }
    /// levels()[0] == base, levels()[k] is the value after the k-th jump.
    const std::vector<double>& levels() const { return levels_; }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

    double operator()(double t) const;
    double left_limit(double t) const;
    double right_limit(double t) const;
    /// Index of the active level at t (number of jump times strictly below t).
    std::size_t level_index(double t) const;

    double min_value() const { return levels_.front(); }
    double max_value() const { return levels_.back(); }
    double total_increase() const { return levels_.back() - levels_.front(); }
    /// Smallest gap between consecutive interior jump times (horizon if fewer than two jumps).
    double min_plateau() const;

    /// key=value description, one entry per line.
    std::string describe() const;

private:
    Kind kind_ = Kind::staircase;
    int level_ = 0;
    double T_ = 1.0;
    double base_ = 0.0;
    std::vector<double> times_;
    std::vector<double> levels_{0.0};
    std::vector<std::pair<double, double>> samples_;
};

} // namespace ri1d
