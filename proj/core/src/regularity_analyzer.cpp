#include "ri1d/regularity_analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ri1d/errors.hpp"
#include "ri1d/parallel.hpp"

namespace ri1d {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + std::ptrdiff_t(m), v.end());
    double hi = v[m];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + std::ptrdiff_t(m));
    return 0.5 * (lo + hi);
}

// Least-squares line through the given samples, evaluated at t.
double extrapolate(const Trajectory& tr, const std::vector<std::size_t>& idx, double t) {
    if (idx.size() == 1) return tr.values[idx[0]];
    double st = 0, sx = 0;
    for (auto k : idx) {
        st += tr.times[k];
        sx += tr.values[k];
    }
    st /= double(idx.size());
    sx /= double(idx.size());
    double num = 0, den = 0;
    for (auto k : idx) {
        num += (tr.times[k] - st) * (tr.values[k] - sx);
        den += (tr.times[k] - st) * (tr.times[k] - st);
    }
    const double slope = den > 0 ? num / den : 0.0;
    return sx + slope * (t - st);
}

std::size_t sample_at(const Trajectory& tr, double t) {
    auto it = std::lower_bound(tr.times.begin(), tr.times.end(), t);
    return std::size_t(it - tr.times.begin());
}

// One-sided derivative at t0 of the parabola through three samples.
double lagrange_slope(double t0, double x0, double t1, double x1, double t2, double x2) {
    return x0 * (2 * t0 - t1 - t2) / ((t0 - t1) * (t0 - t2)) + x1 * (t0 - t2) / ((t1 - t0) * (t1 - t2)) +
           x2 * (t0 - t1) / ((t2 - t0) * (t2 - t1));
}

enum class Side { exists, diverges, unresolved, unavailable };

struct SideEstimate {
    Side status = Side::unavailable;
    double value = 0.0;
};

} // namespace

double default_jump_threshold(const Trajectory& traj, double state_tol) {
    std::vector<double> inc, steps;
    for (std::size_t k = 1; k < traj.size(); ++k) {
        inc.push_back(std::abs(traj.values[k] - traj.values[k - 1]));
        if (traj.times[k] > traj.times[k - 1]) steps.push_back(traj.times[k] - traj.times[k - 1]);
    }
    if (!(state_tol > 0.0)) state_tol = 0.1 * std::sqrt(median(steps));
    if (!(state_tol > 0.0)) state_tol = 1e-3;
    return std::max(5.0 * median(inc), 10.0 * state_tol);
}

std::vector<JumpRecord> detect_jumps(const Trajectory& traj, double threshold) {
    if (!(threshold > 0.0)) throw ConfigError("jump threshold must be positive");
    const std::size_t n = traj.size();
    // [first, last] sample ranges: the jump spans increments first+1 .. last
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t k = 1; k < n; ++k) {
        const double d = traj.values[k] - traj.values[k - 1];
        if (std::abs(d) <= threshold) continue;
        if (!spans.empty() && spans.back().second == k - 1) {
            const double prev = traj.values[k - 1] - traj.values[k - 2];
            if ((prev > 0) == (d > 0)) {
                spans.back().second = k;
                continue;
            }
        }
        spans.push_back({k - 1, k});
    }
    std::vector<JumpRecord> out;
    for (std::size_t j = 0; j < spans.size(); ++j) {
        const auto [a, b] = spans[j];
        const std::size_t lo_limit = j > 0 ? spans[j - 1].second : 0;
        const std::size_t hi_limit = j + 1 < spans.size() ? spans[j + 1].first : n - 1;
        std::vector<std::size_t> left, right;
        for (std::size_t k = a + 1; k-- > lo_limit && left.size() < 3;) left.push_back(k);
        for (std::size_t k = b; k <= hi_limit && right.size() < 3; ++k) right.push_back(k);
        const double t = traj.times[b];
        JumpRecord r{t, extrapolate(traj, left, t), extrapolate(traj, right, t)};
        if (r.right == r.left) r.right = traj.values[b], r.left = traj.values[a];
        out.push_back(r);
    }
    return out;
}

double dissipation(const Trajectory& traj, double t1, double t2) {
    if (t2 < t1) throw ConfigError("dissipation needs t1 <= t2");
    double d = 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k)
        if (traj.times[k - 1] >= t1 && traj.times[k] <= t2) d += std::abs(traj.values[k] - traj.values[k - 1]);
    return d;
}

WeakCheck verify_weak(const EnergyModel& model, const Trajectory& traj, double tol, std::size_t pairs, std::uint64_t seed) {
    WeakCheck w;
    std::vector<double> res(traj.size(), -std::numeric_limits<double>::infinity());
    parallel_for(traj.size(), [&](std::size_t k) {
        if (traj.jump_at(k) >= 0) return;
        res[k] = std::abs(model.dx(traj.times[k], traj.values[k])) - 1.0;
    });
    for (std::size_t k = 0; k < res.size(); ++k)
        if (res[k] > w.stability) {
            w.stability = res[k];
            w.stability_time = traj.times[k];
        }
    w.stability_pass = w.stability <= tol;
    w.upper = check_upper_bound(model, traj, pairs, tol, seed);
    w.pass = w.stability_pass && w.upper.pass;
    return w;
}

std::string class_name(PointClass c) {
    switch (c) {
    case PointClass::I1: return "I1";
    case PointClass::I2: return "I2";
    case PointClass::I3: return "I3";
    case PointClass::J: return "J";
    }
    return "I3";
}

std::size_t ClassificationReport::count(PointClass c) const {
    return std::size_t(std::count_if(points.begin(), points.end(), [c](const ClassifiedPoint& p) { return p.cls == c; }));
}

std::size_t ClassificationReport::resolution_limited() const {
    return std::size_t(
        std::count_if(points.begin(), points.end(), [](const ClassifiedPoint& p) { return p.resolution_limited; }));
}

ClassificationReport classify_points(const EnergyModel& model, const Trajectory& traj,
                                     const std::vector<JumpRecord>& jumps, double tol) {
    if (!(tol > 0.0)) throw ConfigError("classification tolerance must be positive");
    const std::size_t n = traj.size();
    const auto& T = traj.times;
    const auto& X = traj.values;

    // barriers in sample-index units: a jump between j-1 and j sits at j - 0.5, a kink at its sample
    std::vector<double> barriers;
    std::vector<char> is_jump(n, 0);
    for (const auto& j : jumps) {
        const std::size_t k = sample_at(traj, j.time);
        if (k < n) {
            is_jump[k] = 1;
            barriers.push_back(double(k) - 0.5);
        }
    }
    if (n >= 3) {
        std::vector<double> slope(n, 0.0), change;
        for (std::size_t k = 1; k < n; ++k) slope[k] = (X[k] - X[k - 1]) / (T[k] - T[k - 1]);
        std::vector<double> abs_slope;
        for (std::size_t k = 1; k + 1 < n; ++k)
            if (!is_jump[k] && !is_jump[k + 1]) {
                change.push_back(std::abs(slope[k + 1] - slope[k]));
                abs_slope.push_back(std::abs(slope[k]));
            }
        const double kink_tol = std::max(50.0 * median(change), 1e-2 * (1.0 + median(abs_slope)));
        // a kink is a slope change that is large and also stands out against its neighbours'
        auto jolt = [&](std::size_t k) {
            if (k < 1 || k + 1 >= n || is_jump[k] || is_jump[k + 1]) return 0.0;
            return std::abs(slope[k + 1] - slope[k]);
        };
        for (std::size_t k = 1; k + 1 < n; ++k) {
            const double j = jolt(k);
            if (j > kink_tol && j > 4.0 * std::max(jolt(k - 1), jolt(k + 1))) barriers.push_back(double(k));
        }
    }
    std::sort(barriers.begin(), barriers.end());
    auto clear = [&](long a, long b) { // no barrier strictly inside (a, b)
        auto it = std::upper_bound(barriers.begin(), barriers.end(), double(a));
        return it == barriers.end() || *it >= double(b);
    };

    // Estimates at strides 1, 2, 4. Exists: consecutive quotients agree within tol, or their
    // second-order extrapolations do. Diverges: magnitudes at least double per refinement.
    auto side = [&](std::size_t k, int dir) {
        std::vector<double> est;
        for (long m : {1L, 2L, 4L}) {
            const long k1 = long(k) + dir * m, k2 = long(k) + dir * 2 * m;
            if (k2 < 0 || k2 >= long(n)) break;
            if (!clear(std::min(long(k), k2), std::max(long(k), k2))) break;
            est.push_back(lagrange_slope(T[k], X[k], T[std::size_t(k1)], X[std::size_t(k1)], T[std::size_t(k2)],
                                         X[std::size_t(k2)]));
        }
        SideEstimate s;
        if (est.size() < 2) {
            s.status = Side::unavailable;
            if (!est.empty()) s.value = est[0];
            return s;
        }
        const double scale = std::max(1.0, std::abs(est[0]));
        const double r1 = (4 * est[0] - est[1]) / 3;
        s.value = est.size() >= 3 ? r1 : est[0];
        if (std::abs(est[0] - est[1]) <= tol * scale) {
            s.status = Side::exists;
            return s;
        }
        if (est.size() >= 3 && std::abs(r1 - (4 * est[1] - est[2]) / 3) <= tol * scale) {
            s.status = Side::exists;
            return s;
        }
        bool grows = est.size() >= 3;
        for (std::size_t i = 1; i < est.size(); ++i)
            if (!(std::abs(est[i - 1]) >= 2.0 * std::abs(est[i]))) grows = false;
        s.value = est[0];
        s.status = grows ? Side::diverges : Side::unresolved;
        return s;
    };
    // limit of the neighbours' slopes on one side, extrapolated linearly to sample k
    auto neighbour_limit = [&](std::size_t k, int dir, double& out) {
        const long a = long(k) + dir, b = long(k) + 2 * dir;
        if (b < 0 || b >= long(n) || is_jump[std::size_t(a)] || is_jump[std::size_t(b)]) return false;
        if (!clear(std::min(long(k), b), std::max(long(k), b))) return false;
        const SideEstimate sa = side(std::size_t(a), dir), sb = side(std::size_t(b), dir);
        if (sa.status != Side::exists || sb.status != Side::exists) return false;
        out = 2 * sa.value - sb.value;
        return true;
    };

    ClassificationReport rep;
    rep.points.resize(n);
    parallel_for(n, [&](std::size_t k) {
        ClassifiedPoint p;
        p.t = T[k];
        p.x = X[k];
        const GradientJet g = model.eval_dx(T[k], X[k]);
        if (g.dxx > tol) {
            p.has_prediction = true;
            p.predicted = -g.dxt / g.dxx;
        }
        if (std::abs(g.dxx) <= tol && std::abs(g.dxt) <= tol) {
            const double a = g.dxxx, b = g.dxxt, c = g.dxtt;
            if (a != 0.0) {
                const double disc = b * b - a * c;
                if (disc >= 0.0) {
                    p.has_roots = true;
                    p.X1 = (-b - std::sqrt(disc)) / a;
                    p.X2 = (-b + std::sqrt(disc)) / a;
                    if (p.X1 > p.X2) std::swap(p.X1, p.X2);
                }
            } else if (b != 0.0) {
                p.has_roots = true;
                p.X1 = p.X2 = -c / (2 * b);
            }
        }
        auto quad = [&](double v) { return g.dxtt + 2 * g.dxxt * v + g.dxxx * v * v; };
        if (is_jump[k]) {
            p.cls = PointClass::J;
            rep.points[k] = p;
            return;
        }
        const SideEstimate L = side(k, -1), R = side(k, +1);
        p.left_exists = L.status == Side::exists;
        p.right_exists = R.status == Side::exists;
        p.left = L.value;
        p.right = R.value;
        p.quadratic_left = quad(L.value);
        p.quadratic_right = quad(R.value);
        auto close = [&](double a, double b) { return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}); };

        const bool left_zero = p.left_exists && std::abs(L.value) <= tol;
        const bool right_zero = p.right_exists && std::abs(R.value) <= tol;

        if (p.left_exists && p.right_exists && close(L.value, R.value)) {
            p.cls = PointClass::I3;
            const long kk = long(k);
            if (kk >= 2 && kk + 2 < long(n) && clear(kk - 2, kk + 2)) {
                const double c1 = (X[k + 1] - X[k - 1]) / (T[k + 1] - T[k - 1]);
                const double c2 = (X[k + 2] - X[k - 2]) / (T[k + 2] - T[k - 2]);
                p.derivative = (4 * c1 - c2) / 3;
            } else {
                p.derivative = 0.5 * (L.value + R.value);
            }
        } else if (p.left_exists && R.status == Side::unavailable) {
            p.cls = PointClass::I3;
            p.derivative = L.value;
        } else if (p.right_exists && L.status == Side::unavailable) {
            p.cls = PointClass::I3;
            p.derivative = R.value;
        } else if (left_zero || right_zero) {
            // edge of a stick interval: the other side either moves off or does not settle
            p.cls = PointClass::I1;
            const Side other = left_zero ? R.status : L.status;
            p.resolution_limited = !(other == Side::exists || other == Side::diverges);
        } else if (p.left_exists && p.right_exists) {
            p.cls = PointClass::I2;
            auto matches = [&](double v, int dir) {
                if (p.has_roots && (close(v, p.X1) || close(v, p.X2))) return true;
                double lim = 0.0;
                return neighbour_limit(k, dir, lim) && close(v, lim);
            };
            p.resolution_limited = !(matches(L.value, -1) && matches(R.value, +1));
        } else {
            p.cls = std::min(std::abs(L.value), std::abs(R.value)) <= tol ? PointClass::I1 : PointClass::I3;
            p.resolution_limited = true;
        }
        rep.points[k] = p;
    });
    return rep;
}

SbvSplit sbv_split(const Trajectory& traj, const std::vector<int>& ladder, double fraction, double threshold) {
    if (ladder.empty()) throw ConfigError("empty resolution ladder");
    for (std::size_t i = 0; i < ladder.size(); ++i)
        if (ladder[i] < 1 || (i > 0 && ladder[i] <= ladder[i - 1]))
            throw ConfigError("resolution ladder must be strictly increasing positive integers");
    const int rmax = ladder.back();
    for (int r : ladder)
        if (rmax % r != 0) throw ConfigError("ladder entries must divide the finest one");

    SbvSplit s;
    s.ladder = ladder;
    s.fraction = fraction;
    const std::size_t n = traj.size();
    const auto& T = traj.times;
    for (std::size_t k = 1; k < n; ++k) s.total += std::abs(traj.values[k] - traj.values[k - 1]);

    const double thr = threshold > 0.0 ? threshold : default_jump_threshold(traj);
    // jump-free path: remove the flagged increments
    std::vector<double> y(n, 0.0);
    double removed = 0.0;
    if (n > 0) y[0] = traj.values[0];
    std::vector<JumpRecord> jr = detect_jumps(traj, thr);
    s.jumps = jr.size();
    for (std::size_t k = 1; k < n; ++k) {
        const double d = traj.values[k] - traj.values[k - 1];
        if (std::abs(d) > thr) {
            s.jump += std::abs(d);
            removed += d;
        }
        y[k] = traj.values[k] - removed;
    }

    for (int r : ladder) {
        const std::size_t stride = std::size_t(rmax / r);
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < n; k += stride) idx.push_back(k);
        if (!idx.empty() && idx.back() != n - 1 && n > 0) idx.push_back(n - 1);
        const std::size_t m = idx.size();
        std::vector<double> dy(m, 0.0), dt(m, 0.0);
        for (std::size_t i = 1; i < m; ++i) {
            dy[i] = y[idx[i]] - y[idx[i - 1]];
            dt[i] = T[idx[i]] - T[idx[i - 1]];
        }
        auto window = [&](std::size_t i, std::size_t half) {
            const std::size_t a = i > half ? i - half : 1, b = std::min(m - 1, i + half);
            double sy = 0, st = 0;
            for (std::size_t q = a; q <= b; ++q) {
                sy += dy[q];
                st += dt[q];
            }
            return sy / st;
        };
        double ac = 0.0;
        double floor_slope = 0.0;
        for (std::size_t i = 1; i < m; ++i) floor_slope = std::max(floor_slope, std::abs(dy[i]) / dt[i]);
        floor_slope *= 1e-9;
        for (std::size_t i = 1; i < m; ++i) {
            if (dy[i] == 0.0) continue;
            const double si = dy[i] / dt[i];
            bool stable = true;
            for (std::size_t half : {1u, 2u}) {
                const double w = window(i, half);
                if (std::abs(si - w) > 0.5 * std::max(std::abs(si), std::abs(w)) + floor_slope) stable = false;
            }
            if (stable) ac += std::abs(dy[i]);
        }
        const double cantor = std::max(0.0, s.total - s.jump - ac);
        s.cantor_per_rung.push_back(cantor);
        if (r == rmax) {
            s.ac = std::min(ac, s.total - s.jump);
            s.cantor = s.total - s.jump - s.ac;
        }
    }
    for (std::size_t i = 1; i < s.cantor_per_rung.size(); ++i)
        if (s.cantor_per_rung[i] > s.cantor_per_rung[i - 1] + 1e-9 * std::max(1.0, s.total)) s.converged = false;
    s.sbv = s.cantor <= fraction * s.total;
    return s;
}

} // namespace ri1d
