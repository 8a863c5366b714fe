#include "tsc/hilger.hpp"

#include <cmath>
#include <vector>

namespace tsc {

namespace {

Complex one_plus_hz(double h, Complex z) {
    const Complex w = 1.0 + h * z;
    if (std::abs(w) < kRegressiveTol) {
        throw NotRegressive("1 + h*z vanishes (z = -1/h)");
    }
    return w;
}

/// The graininess values attained on [s, inf)_T, split into a finite list,
/// a zero flag (dense parts) and an optional geometric progression.
struct MuSet {
    std::vector<double> discrete;
    bool has_zero = false;
    bool geometric = false;
    double geo_first = 0;  // smallest attained tail graininess
    double geo_ratio = 0;
};

MuSet attained_mu(const TimeScale& ts, double s) {
    MuSet mu;
    const auto& segs = ts.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto seg_last = [&](const Segment& sg) {
            if (const auto* d = std::get_if<DenseInterval>(&sg)) return d->b;
            return std::get<ScatteredPoint>(sg).t;
        };
        const double end = seg_last(segs[i]);
        if (end < s - kMembershipTol) continue;
        if (const auto* d = std::get_if<DenseInterval>(&segs[i])) {
            if (d->b > std::max(d->a, s) + kMembershipTol) mu.has_zero = true;
        }
        if (i + 1 < segs.size()) {
            const auto seg_first = [&](const Segment& sg) {
                if (const auto* d = std::get_if<DenseInterval>(&sg)) return d->a;
                return std::get<ScatteredPoint>(sg).t;
            };
            mu.discrete.push_back(seg_first(segs[i + 1]) - end);
        }
    }
    const TailSpec& tail = ts.tail();
    if (std::holds_alternative<ContinuousTail>(tail)) {
        mu.has_zero = true;
    } else if (const auto* u = std::get_if<UniformTail>(&tail)) {
        mu.discrete.push_back(u->step);
    } else if (const auto* g = std::get_if<GeometricTail>(&tail)) {
        double anchor = ts.window_end();
        if (s > anchor) anchor = ts.floor(s);
        mu.geometric = true;
        mu.geo_first = (g->ratio - 1.0) * anchor;
        mu.geo_ratio = g->ratio;
    }
    return mu;
}

bool factor_ok(Complex z, double m) { return std::abs(1.0 + z * m) >= kRegressiveTol; }

}  // namespace

double hilger_re(double h, Complex z) {
    if (h == 0.0) return z.real();
    return (std::abs(one_plus_hz(h, z)) - 1.0) / h;
}

double hilger_im(double h, Complex z) {
    if (h == 0.0) return z.imag();
    return std::arg(one_plus_hz(h, z)) / h;
}

Complex cylinder(double h, Complex z) {
    if (h == 0.0) return z;
    return std::log(one_plus_hz(h, z)) / h;
}

Complex cplus(double h, Complex z, Complex w) { return z + w + h * z * w; }

Complex cminus(double h, Complex z, Complex w) { return (z - w) / one_plus_hz(h, w); }

Complex cneg(double h, Complex z) { return cminus(h, Complex(0.0), z); }

Complex cdot(double h, Complex lam, Complex z) {
    if (h == 0.0) return lam * z;
    return (std::pow(one_plus_hz(h, z), lam) - 1.0) / h;
}

bool in_region(const RegionSpec& region, Complex z) {
    return hilger_re(region.h, z) > region.lambda;
}

bool is_regressive(const TimeScale& ts, double s, Complex z) {
    if (z == Complex(0.0)) return true;
    const MuSet mu = attained_mu(ts, s);
    for (double m : mu.discrete) {
        if (m > 0 && !factor_ok(z, m)) return false;
    }
    if (mu.geometric) {
        // |1 + z m| over m > 0 is minimized at m_opt = -Re(z)/|z|^2; only the
        // attained progression values near it can violate regressivity.
        const double m_opt = -z.real() / std::norm(z);
        long k_opt = 0;
        if (m_opt > mu.geo_first) {
            k_opt = static_cast<long>(std::lround(std::log(m_opt / mu.geo_first) / std::log(mu.geo_ratio)));
        }
        for (long k = std::max(0L, k_opt - 1); k <= k_opt + 1; ++k) {
            const double m = mu.geo_first * std::pow(mu.geo_ratio, static_cast<double>(k));
            if (std::isfinite(m) && !factor_ok(z, m)) return false;
        }
    }
    return true;
}

bool is_pos_regressive(const TimeScale& ts, double s, Complex z) {
    const MuSet mu = attained_mu(ts, s);

    bool any_positive = mu.geometric;
    double m_max = 0.0;
    for (double m : mu.discrete) {
        if (m > 0) {
            any_positive = true;
            m_max = std::max(m_max, m);
        }
    }
    if (!any_positive) return true;  // 1 + z*0 = 1 > 0 for every z

    if (std::abs(z.imag()) > 1e-12) return false;
    const double x = z.real();
    if (mu.geometric && x < 0) return false;  // unbounded mu defeats any x < 0
    return 1.0 + x * m_max > 0.0;
}

}  // namespace tsc
