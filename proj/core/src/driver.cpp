#include "ri1d/driver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <iomanip>

#include "ri1d/errors.hpp"

namespace ri1d {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void cantor_jumps(double a, double b, double lo, double hi, int depth,
                  std::vector<std::pair<double, double>>& out) {
    if (depth == 0) {
        out.emplace_back(0.5 * (a + b), hi);
        return;
    }
    const double third = (b - a) / 3.0;
    const double mid = 0.5 * (lo + hi);
    cantor_jumps(a, a + third, lo, mid, depth - 1, out);
    cantor_jumps(b - third, b, mid, hi, depth - 1, out);
}

} // namespace

MonotoneDriver MonotoneDriver::staircase(double base, std::vector<std::pair<double, double>> jumps,
                                         double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("driver horizon must be positive");
    MonotoneDriver d;
    d.kind_ = Kind::staircase;
    d.T_ = T;
    d.base_ = base;
    d.levels_ = {base};
    std::sort(jumps.begin(), jumps.end());
    double prev_t = -1.0;
    for (auto [t, v] : jumps) {
        if (!std::isfinite(t) || !std::isfinite(v)) throw ConfigError("non-finite driver entry");
        if (t < 0.0 || t >= T) throw ConfigError("jump time " + num(t) + " outside [0, T)");
        if (t == prev_t) throw ConfigError("duplicate jump time " + num(t));
        if (v < d.levels_.back()) throw ConfigError("driver must be non-decreasing");
        if (v == d.levels_.back()) continue;
        d.times_.push_back(t);
        d.levels_.push_back(v);
        prev_t = t;
    }
    return d;
}

MonotoneDriver MonotoneDriver::cantor(int level) {
    if (level < 1 || level > 12) throw ConfigError("cantor level must be in [1, 12]");
    std::vector<std::pair<double, double>> jumps;
    cantor_jumps(0.0, 1.0, 0.0, 1.0, level, jumps);
    MonotoneDriver d = staircase(0.0, std::move(jumps), 1.0);
    d.kind_ = Kind::cantor;
    d.level_ = level;
    return d;
}

MonotoneDriver MonotoneDriver::table(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw ConfigError("empty driver table");
    for (std::size_t k = 1; k < samples.size(); ++k) {
        if (!(samples[k].first > samples[k - 1].first)) throw ConfigError("driver table times must increase");
        if (samples[k].second < samples[k - 1].second) throw ConfigError("driver table must be non-decreasing");
    }
    if (samples.front().first != 0.0) throw ConfigError("driver table must start at t = 0");
    std::vector<std::pair<double, double>> jumps;
    for (std::size_t k = 1; k < samples.size(); ++k)
        if (samples[k].second > samples[k - 1].second) jumps.emplace_back(samples[k - 1].first, samples[k].second);
    const double T = samples.size() > 1 ? samples.back().first : 1.0;
    MonotoneDriver d = staircase(samples.front().second, std::move(jumps), T);
    d.kind_ = Kind::table;
    d.samples_ = std::move(samples);
    return d;
}

std::size_t MonotoneDriver::level_index(double t) const {
    return std::size_t(std::lower_bound(times_.begin(), times_.end(), t) - times_.begin());
}

double MonotoneDriver::operator()(double t) const { return levels_[level_index(t)]; }

double MonotoneDriver::left_limit(double t) const { return (*this)(t); }

double MonotoneDriver::right_limit(double t) const {
    return levels_[std::size_t(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin())];
}

double MonotoneDriver::min_plateau() const {
    double m = T_;
    for (std::size_t k = 1; k < times_.size(); ++k) m = std::min(m, times_[k] - times_[k - 1]);
    return m;
}

std::string MonotoneDriver::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::cantor:
        os << "type=cantor\nlevel=" << level_ << "\n";
        break;
    case Kind::table:
        os << "type=table\nsamples=";
        for (std::size_t k = 0; k < samples_.size(); ++k)
            os << (k ? "," : "") << num(samples_[k].first) << ":" << num(samples_[k].second);
        os << "\n";
        break;
    case Kind::staircase:
        os << "type=staircase\nbase=" << num(base_) << "\njumps=";
        for (std::size_t k = 0; k < times_.size(); ++k)
            os << (k ? "," : "") << num(times_[k]) << ":" << num(levels_[k + 1]);
        os << "\nT=" << num(T_) << "\n";
        break;
    }
    return os.str();
}

} // namespace ri1d
