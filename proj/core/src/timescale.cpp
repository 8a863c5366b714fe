#include "tsc/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tsc {

namespace {

double seg_start(const Segment& s) {
    if (const auto* d = std::get_if<DenseInterval>(&s)) return d->a;
    return std::get<ScatteredPoint>(s).t;
}

double seg_end(const Segment& s) {
    if (const auto* d = std::get_if<DenseInterval>(&s)) return d->b;
    return std::get<ScatteredPoint>(s).t;
}

bool is_dense(const Segment& s) { return std::holds_alternative<DenseInterval>(s); }

[[noreturn]] void fail(const std::string& msg) { throw Error("time scale: " + msg); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

TimeScale::TimeScale(double window_start, std::vector<Segment> segments, TailSpec tail)
    : window_start_(window_start), tail_(std::move(tail)) {
    if (segments.empty()) fail("at least one segment is required");
    for (const auto& s : segments) {
        if (const auto* d = std::get_if<DenseInterval>(&s)) {
            if (!std::isfinite(d->a) || !std::isfinite(d->b)) fail("non-finite interval endpoint");
            if (!(d->a < d->b)) fail("interval [" + fmt(d->a) + ", " + fmt(d->b) + "] has no length");
        } else if (!std::isfinite(std::get<ScatteredPoint>(s).t)) {
            fail("non-finite scattered point");
        }
    }

    // Canonicalize: keep order, merge exactly adjacent dense intervals, reject overlaps.
    for (const auto& s : segments) {
        if (!segments_.empty()) {
            Segment& prev = segments_.back();
            const double prev_end = seg_end(prev);
            const double cur_start = seg_start(s);
            if (is_dense(prev) && is_dense(s) && cur_start == prev_end) {
                std::get<DenseInterval>(prev).b = std::get<DenseInterval>(s).b;
                continue;
            }
            if (!(cur_start > prev_end)) {
                fail("segment starting at " + fmt(cur_start) +
                     " overlaps or precedes the segment ending at " + fmt(prev_end));
            }
        }
        segments_.push_back(s);
    }

    if (seg_start(segments_.front()) != window_start_) {
        fail("first segment must start at the window start " + fmt(window_start_));
    }
    window_end_ = seg_end(segments_.back());

    if (const auto* u = std::get_if<UniformTail>(&tail_)) {
        if (!(u->step > 0) || !std::isfinite(u->step)) fail("uniform tail step must be positive");
    } else if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
        if (!(g->ratio > 1) || !std::isfinite(g->ratio)) fail("geometric tail ratio must exceed 1");
        if (!(window_end_ > 0)) fail("geometric tail requires a positive window end");
    }
}

TimeScale TimeScale::integers(double start) {
    return TimeScale(start, {ScatteredPoint{start}}, UniformTail{1.0});
}

TimeScale TimeScale::uniform_grid(double start, double step) {
    return TimeScale(start, {ScatteredPoint{start}}, UniformTail{step});
}

TimeScale TimeScale::geometric(double base, double ratio) {
    return TimeScale(base, {ScatteredPoint{base}}, GeometricTail{ratio});
}

TimeScale TimeScale::half_line(double start) {
    return TimeScale(start, {DenseInterval{start, start + 1.0}}, ContinuousTail{});
}

double TimeScale::tail_point(long k) const {
    if (const auto* u = std::get_if<UniformTail>(&tail_)) {
        return window_end_ + static_cast<double>(k) * u->step;
    }
    if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
        return window_end_ * std::pow(g->ratio, static_cast<double>(k));
    }
    fail("tail is not a point generator");
}

long TimeScale::tail_index_at_or_after(double x) const {
    if (x <= window_end_) return 0;
    if (const auto* u = std::get_if<UniformTail>(&tail_)) {
        const double k = std::ceil((x - window_end_) / u->step - kMembershipTol);
        return std::max(0L, static_cast<long>(k));
    }
    if (const auto* g = std::get_if<GeometricTail>(&tail_)) {
        const double k = std::ceil(std::log(x / window_end_) / std::log(g->ratio) - kMembershipTol);
        long idx = std::max(0L, static_cast<long>(k));
        while (idx > 0 && tail_point(idx - 1) >= x - kMembershipTol) --idx;
        while (tail_point(idx) < x - kMembershipTol) ++idx;
        return idx;
    }
    fail("tail is not a point generator");
}

bool TimeScale::contains(double t) const {
    if (!std::isfinite(t)) return false;
    if (t < window_start_ - kMembershipTol) return false;

    if (t <= window_end_ + kMembershipTol) {
        // Last segment whose start is <= t (+tolerance).
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double v, const Segment& s) { return v < seg_start(s) - kMembershipTol; });
        if (it != segments_.begin()) {
            const Segment& s = *std::prev(it);
            if (const auto* d = std::get_if<DenseInterval>(&s)) {
                if (t <= d->b + kMembershipTol) return true;
            } else if (std::abs(t - std::get<ScatteredPoint>(s).t) <= kMembershipTol) {
                return true;
            }
        }
        if (t < window_end_ - kMembershipTol) return false;
        // fall through: t is within tolerance of the window end / first tail point
    }

    if (std::holds_alternative<ContinuousTail>(tail_)) return t >= window_end_ - kMembershipTol;
    if (std::holds_alternative<WindowOnlyTail>(tail_)) return std::abs(t - window_end_) <= kMembershipTol;

    if (const auto* u = std::get_if<UniformTail>(&tail_)) {
        double k = std::round((t - window_end_) / u->step);
        if (k < 0) k = 0;
        return std::abs(t - (window_end_ + k * u->step)) <= kMembershipTol;
    }
    const auto& g = std::get<GeometricTail>(tail_);
    if (!(t > 0)) return false;
    double k = std::round(std::log(t / window_end_) / std::log(g.ratio));
    if (k < 0) k = 0;
    for (double kk : {k - 1, k, k + 1}) {
        if (kk >= 0 && std::abs(t - window_end_ * std::pow(g.ratio, kk)) <= kMembershipTol) return true;
    }
    return false;
}

TimePoint TimeScale::point(double t) const {
    require_member(t, "point");
    return TimePoint(t);
}

void TimeScale::require_member(double t, const char* op) const {
    if (!contains(t)) {
        throw NotInTimeScale(std::string(op) + ": " + fmt(t) + " is not a member of the time scale");
    }
}

double TimeScale::floor(double x) const {
    if (!(x >= window_start_ - kMembershipTol)) {
        throw NotInTimeScale("floor: " + fmt(x) + " precedes the time scale");
    }
    if (x >= window_end_) {
        if (std::holds_alternative<ContinuousTail>(tail_)) return x;
        if (std::holds_alternative<WindowOnlyTail>(tail_)) return window_end_;
        long k = tail_index_at_or_after(x);
        if (tail_point(k) > x + kMembershipTol) --k;
        if (k < 0) return window_end_;
        return tail_point(k);
    }
    auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                               [](double v, const Segment& s) { return v < seg_start(s) - kMembershipTol; });
    if (it == segments_.begin()) return window_start_;
    const Segment& s = *std::prev(it);
    if (const auto* d = std::get_if<DenseInterval>(&s)) return std::min(std::max(x, d->a), d->b);
    return std::get<ScatteredPoint>(s).t;
}

double TimeScale::sigma(double t) const {
    require_member(t, "sigma");

    if (t >= window_end_ - kMembershipTol) {
        const bool at_end = std::abs(t - window_end_) <= kMembershipTol;
        if (std::holds_alternative<ContinuousTail>(tail_)) return t;
        if (std::holds_alternative<WindowOnlyTail>(tail_)) return t;  // max of T
        long k = at_end ? 0 : tail_index_at_or_after(t);
        if (!at_end && tail_point(k) > t + kMembershipTol) --k;  // t sits on point k
        return tail_point(k + 1);
    }

    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < seg_start(s) - kMembershipTol; });
    const std::size_t idx = static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
    const Segment& s = segments_[idx];
    if (const auto* d = std::get_if<DenseInterval>(&s)) {
        if (t < d->b - kMembershipTol) return t;  // right-dense
        return seg_start(segments_[idx + 1]);     // right edge; idx+1 exists since b < window_end
    }
    return seg_start(segments_[idx + 1]);
}

double TimeScale::graininess(double t) const { return sigma(t) - t; }

double TimeScale::min_graininess(double s) const {
    require_member(s, "min_graininess");
    if (std::holds_alternative<WindowOnlyTail>(tail_)) {
        throw UnboundedWindowOnly("min_graininess: [s, infinity) is bounded for a window-only tail");
    }
    if (std::holds_alternative<ContinuousTail>(tail_)) return 0.0;

    double best;
    if (const auto* u = std::get_if<UniformTail>(&tail_)) {
        best = u->step;
    } else {
        const auto& g = std::get<GeometricTail>(tail_);
        const double anchor = (s > window_end_) ? tail_point(tail_index_at_or_after(s)) : window_end_;
        best = (g.ratio - 1.0) * anchor;
    }
    if (s >= window_end_ - kMembershipTol) return best;

    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        if (seg_end(seg) < s - kMembershipTol) continue;
        if (const auto* d = std::get_if<DenseInterval>(&seg)) {
            if (d->b > std::max(d->a, s) + kMembershipTol) return 0.0;  // right-dense points ahead
        }
        if (i + 1 < segments_.size() && seg_end(seg) >= s - kMembershipTol) {
            best = std::min(best, seg_start(segments_[i + 1]) - seg_end(seg));
        }
    }
    return best;
}

TimeScale::MuRange TimeScale::mu_range(double s) const {
    require_member(s, "mu_range");

    double sup = 0.0;
    double min = kInf;
    if (std::holds_alternative<WindowOnlyTail>(tail_)) {
        min = 0.0;  // the maximum point has sigma(t) = t
    } else {
        min = min_graininess(s);
        if (std::holds_alternative<UniformTail>(tail_)) {
            sup = std::get<UniformTail>(tail_).step;
        } else if (std::holds_alternative<GeometricTail>(tail_)) {
            sup = kInf;
        }
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& seg = segments_[i];
        if (seg_end(seg) < s - kMembershipTol) continue;
        if (i + 1 < segments_.size()) {
            sup = std::max(sup, seg_start(segments_[i + 1]) - seg_end(seg));
        }
    }
    return {min, sup};
}

// ---------------------------------------------------------------------------
// Cell cursor
// ---------------------------------------------------------------------------

TimeScale::CellCursor::CellCursor(const TimeScale& ts, double from) : ts_(&ts) {
    ts.require_member(from, "enumerate");

    if (from >= ts.window_end_ - kMembershipTol &&
        !(std::abs(from - ts.window_end_) <= kMembershipTol)) {
        // strictly inside the tail
        atom_ = ts.segments_.size();
        if (std::holds_alternative<ContinuousTail>(ts.tail_)) {
            dense_from_ = from;
        } else {
            long k = ts.tail_index_at_or_after(from);
            if (ts.tail_point(k) > from + kMembershipTol) --k;
            tail_index_ = std::max(1L, k);
        }
        load();
        return;
    }

    auto it = std::upper_bound(ts.segments_.begin(), ts.segments_.end(), from,
                               [](double v, const Segment& s) { return v < seg_start(s) - kMembershipTol; });
    atom_ = static_cast<std::size_t>(std::distance(ts.segments_.begin(), it)) - 1;
    if (const auto* d = std::get_if<DenseInterval>(&ts.segments_[atom_])) {
        dense_from_ = std::min(std::max(from, d->a), d->b);
    }
    load();
}

void TimeScale::CellCursor::load() {
    const TimeScale& ts = *ts_;
    const std::size_t n = ts.segments_.size();

    if (atom_ > n) {
        done_ = true;
        return;
    }

    if (atom_ == n) {  // tail
        if (std::holds_alternative<ContinuousTail>(ts.tail_)) {
            cell_ = {PointKind::Dense, dense_from_, kInf, 0.0};
        } else if (std::holds_alternative<WindowOnlyTail>(ts.tail_)) {
            done_ = true;
        } else {
            const double p = ts.tail_point(tail_index_);
            cell_ = {PointKind::Scattered, p, ts.tail_point(tail_index_ + 1), ts.tail_point(tail_index_ + 1) - p};
        }
        return;
    }

    const Segment& seg = ts.segments_[atom_];
    const bool last = (atom_ + 1 == n);
    const double here = is_dense(seg) && dense_from_ < std::get<DenseInterval>(seg).b
                            ? dense_from_
                            : seg_end(seg);

    if (const auto* d = std::get_if<DenseInterval>(&seg); d && dense_from_ < d->b) {
        cell_ = {PointKind::Dense, dense_from_, d->b, 0.0};
        return;
    }

    // At a segment's right edge (or a scattered point).
    if (!last) {
        const double next = seg_start(ts.segments_[atom_ + 1]);
        cell_ = {PointKind::Scattered, here, next, next - here};
        return;
    }
    // Last window point: the tail decides.
    if (std::holds_alternative<ContinuousTail>(ts.tail_)) {
        cell_ = {PointKind::Dense, here, kInf, 0.0};  // right-dense continuation
    } else if (std::holds_alternative<WindowOnlyTail>(ts.tail_)) {
        cell_ = {PointKind::Scattered, here, here, 0.0};  // maximum of T
    } else {
        const double next = ts.tail_point(1);
        cell_ = {PointKind::Scattered, here, next, next - here};
    }
}

void TimeScale::CellCursor::advance() {
    const TimeScale& ts = *ts_;
    const std::size_t n = ts.segments_.size();
    if (done_) return;

    if (atom_ == n) {
        if (std::holds_alternative<ContinuousTail>(ts.tail_) ||
            std::holds_alternative<WindowOnlyTail>(ts.tail_)) {
            done_ = true;
        } else {
            ++tail_index_;
        }
        load();
        return;
    }

    const Segment& seg = ts.segments_[atom_];
    if (const auto* d = std::get_if<DenseInterval>(&seg); d && dense_from_ < d->b) {
        dense_from_ = d->b;  // move to the right edge point
        if (atom_ + 1 == n && std::holds_alternative<ContinuousTail>(ts.tail_)) {
            // the edge is right-dense; hand over to the tail cell
            atom_ = n;
            dense_from_ = d->b;
        }
        load();
        return;
    }

    // Leaving a scattered point / dense edge.
    if (atom_ + 1 < n) {
        ++atom_;
        if (const auto* nd = std::get_if<DenseInterval>(&ts.segments_[atom_])) dense_from_ = nd->a;
        load();
        return;
    }
    // Past the last window point.
    atom_ = n;
    if (std::holds_alternative<ContinuousTail>(ts.tail_)) {
        dense_from_ = ts.window_end_;
        // the window end itself was just emitted as a cell start only if dense;
        // for a scattered last point with continuous tail the edge case is
        // handled in load() via the dense continuation cell.
        done_ = true;  // continuous tail after a scattered end was already emitted as dense cell
    } else if (std::holds_alternative<WindowOnlyTail>(ts.tail_)) {
        done_ = true;
    } else {
        tail_index_ = 1;
    }
    load();
}

std::vector<GridCell> TimeScale::enumerate(double a, double b) const {
    require_member(a, "enumerate");
    require_member(b, "enumerate");
    if (b < a - kMembershipTol) throw EmptyRange("enumerate: range end precedes its start");

    std::vector<GridCell> cells;
    if (b <= a + kMembershipTol) return cells;

    for (CellCursor cur = cells_from(a); !cur.done(); cur.advance()) {
        GridCell c = cur.cell();
        if (c.start >= b - kMembershipTol) break;
        if (c.kind == PointKind::Dense && c.end > b) {
            c.end = b;
            cells.push_back(c);
            break;
        }
        cells.push_back(c);
    }
    return cells;
}

}  // namespace tsc
