#include "ri1d/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ri1d/errors.hpp"

namespace ri1d {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_field(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size() || s.find_first_not_of(" \r\t", used) == std::string::npos) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("bad number '" + s + "'", line);
}

} // namespace

std::string regime_name(Regime r) {
    switch (r) {
    case Regime::stick: return "stick";
    case Regime::slide: return "slide";
    case Regime::jump: return "jump";
    case Regime::incremental: return "incremental";
    }
    return "incremental";
}

Regime parse_regime(const std::string& s) {
    if (s == "stick") return Regime::stick;
    if (s == "slide") return Regime::slide;
    if (s == "jump") return Regime::jump;
    if (s == "incremental") return Regime::incremental;
    throw ConfigError("unknown regime '" + s + "'");
}

void Trajectory::validate() const {
    if (times.size() != values.size() || regimes.size() != times.size())
        throw std::invalid_argument("trajectory columns have different lengths");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || !std::isfinite(values[k]))
            throw std::invalid_argument("non-finite trajectory sample");
        if (k > 0 && !(times[k] > times[k - 1])) throw std::invalid_argument("trajectory times must increase strictly");
    }
    for (const auto& j : jumps)
        if (!(std::abs(j.right - j.left) > 0.0)) throw std::invalid_argument("zero-size jump record");
}

int Trajectory::jump_at(std::size_t k) const {
    for (std::size_t j = 0; j < jumps.size(); ++j)
        if (jumps[j].time == times[k]) return int(j);
    return -1;
}

double Trajectory::left_value(std::size_t k) const {
    const int j = jump_at(k);
    return j >= 0 ? jumps[std::size_t(j)].left : values[k];
}

Trajectory make_trajectory(std::vector<double> times, std::vector<double> values) {
    Trajectory t;
    t.regimes.assign(times.size(), Regime::incremental);
    t.times = std::move(times);
    t.values = std::move(values);
    t.validate();
    return t;
}

void write_csv(const Trajectory& traj, std::ostream& out) {
    out << "t,x,regime,jump_left,jump_right\n";
    out << std::setprecision(17);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << traj.times[k] << ',' << traj.values[k] << ',' << regime_name(traj.regimes[k]) << ',';
        const int j = traj.jump_at(k);
        if (j >= 0) out << traj.jumps[std::size_t(j)].left << ',' << traj.jumps[std::size_t(j)].right;
        else out << ',';
        out << '\n';
    }
}

Trajectory read_csv(std::istream& in) {
    Trajectory traj;
    std::string line;
    int n = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv(line);
        if (!header_seen) {
            header_seen = true;
            if (!f.empty() && f[0] == "t") continue;
        }
        if (f.size() < 2) throw ConfigError("expected at least t,x", n);
        const double t = parse_field(f[0], n), x = parse_field(f[1], n);
        traj.times.push_back(t);
        traj.values.push_back(x);
        Regime r = Regime::incremental;
        if (f.size() >= 3 && !f[2].empty()) {
            try {
                r = parse_regime(f[2]);
            } catch (const ConfigError& e) {
                throw ConfigError(e.what(), n);
            }
        }
        traj.regimes.push_back(r);
        if (f.size() >= 5 && !f[3].empty() && !f[4].empty())
            traj.jumps.push_back({t, parse_field(f[3], n), parse_field(f[4], n)});
    }
    try {
        traj.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid trajectory: ") + e.what());
    }
    return traj;
}

void write_plot(const Trajectory& traj, std::ostream& out) {
    out << std::setprecision(17);
    out << "# t x\n";
    for (const auto& j : traj.jumps) out << "# jump " << j.time << ' ' << j.left << ' ' << j.right << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) out << traj.times[k] << ' ' << traj.values[k] << '\n';
}

Trajectory read_plot(std::istream& in) {
    Trajectory traj;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream is(line);
        if (line[0] == '#') {
            std::string hash, tag;
            is >> hash >> tag;
            if (tag != "jump") continue;
            JumpRecord j;
            if (!(is >> j.time >> j.left >> j.right)) throw ConfigError("plot: malformed jump annotation", n);
            traj.jumps.push_back(j);
            continue;
        }
        double t = 0.0, x = 0.0;
        if (!(is >> t >> x)) throw ConfigError("plot: expected 't x'", n);
        traj.times.push_back(t);
        traj.values.push_back(x);
        traj.regimes.push_back(Regime::incremental);
    }
    try {
        traj.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid plot data: ") + e.what());
    }
    return traj;
}

} // namespace ri1d
