#pragma once

#include <random>
#include <vector>

#include "tsc/timescale.hpp"

namespace tsc::testing {

// The shared fixture scales. Scattered gaps are dyadic so that difference
// quotients divide exactly.
inline TimeScale ts_int() { return TimeScale::integers(0.0); }
inline TimeScale ts_half() { return TimeScale::uniform_grid(0.0, 0.5); }
inline TimeScale ts_geom() { return TimeScale::geometric(1.0, 2.0); }
inline TimeScale ts_dense() { return TimeScale::half_line(0.0); }

// [0,1] followed by the integer lattice.
inline TimeScale ts_mixed() {
    return TimeScale(0.0, {DenseInterval{0.0, 1.0}}, UniformTail{1.0});
}

// [0,2], two scattered points, then a half-step lattice.
inline TimeScale ts_mixed2() {
    return TimeScale(0.0, {DenseInterval{0.0, 2.0}, ScatteredPoint{2.5}, ScatteredPoint{3.0}},
                     UniformTail{0.5});
}

// Bounded scale for window-only edge cases.
inline TimeScale ts_window_only() {
    return TimeScale(0.0, {DenseInterval{0.0, 1.0}, ScatteredPoint{2.0}}, WindowOnlyTail{});
}

inline std::vector<TimeScale> mixed_fixture_scales() {
    return {ts_int(), ts_half(), ts_geom(), ts_dense(), ts_mixed(), ts_mixed2()};
}

/// Right edge of the dense run containing t, or t itself at scattered points;
/// +infinity inside a continuous tail.
inline double dense_run_end(const TimeScale& ts, double t) {
    double end = t;
    for (const Segment& seg : ts.segments()) {
        if (const auto* d = std::get_if<DenseInterval>(&seg)) {
            if (t >= d->a && t <= d->b) end = d->b;
        }
    }
    if (std::holds_alternative<ContinuousTail>(ts.tail()) && end >= ts.window_end()) {
        return kInf;
    }
    return end;
}

/// n-th probe point of T after `from`: scattered points advance by sigma,
/// right-dense points hop forward by at most one unit within their dense run.
inline double nth_point(const TimeScale& ts, double from, int n) {
    double t = ts.floor(from);
    for (int i = 0; i < n; ++i) {
        const double sig = ts.sigma(t);
        if (sig > t) {
            t = sig;
        } else {
            t = std::min(t + 1.0, dense_run_end(ts, t));
            if (t == sig) break;  // window-only maximum
        }
    }
    return t;
}

/// Uniformly samples a member of T between window_start and roughly the
/// n_max-th point after it (dense parts sampled continuously).
inline double random_point(const TimeScale& ts, std::mt19937_64& rng, int max_steps = 12) {
    std::uniform_int_distribution<int> steps(0, max_steps);
    double t = nth_point(ts, ts.window_start(), steps(rng));
    const double mu = ts.graininess(t);
    if (mu == 0.0) {
        // inside a dense run: jitter within the cell
        double hi = t;
        for (const Segment& seg : ts.segments()) {
            if (const auto* d = std::get_if<DenseInterval>(&seg)) {
                if (t >= d->a && t <= d->b) hi = d->b;
            }
        }
        if (std::holds_alternative<ContinuousTail>(ts.tail()) && t >= ts.window_end()) {
            hi = t + 1.0;
        }
        if (hi > t) {
            std::uniform_real_distribution<double> jitter(0.0, hi - t);
            return t + jitter(rng) * 0.875;
        }
    }
    return t;
}

}  // namespace tsc::testing
