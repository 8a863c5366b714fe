#pragma once

#include <limits>
#include <variant>
#include <vector>

#include "tsc/errors.hpp"

namespace tsc {

/// Absolute tolerance for time-scale membership tests. Segment endpoints are
/// exact binary64 values supplied by the caller; generated tail points are
/// evaluated in closed form, so a tight absolute tolerance suffices.
inline constexpr double kMembershipTol = 1e-12;

struct DenseInterval {
    double a;
    double b;
};

struct ScatteredPoint {
    double t;
};

using Segment = std::variant<DenseInterval, ScatteredPoint>;

/// Tail behaviour on [window_end, infinity).
struct ContinuousTail {};                    // [window_end, inf) is all in T
struct UniformTail { double step; };         // window_end + k*step, k >= 0
struct GeometricTail { double ratio; };      // window_end * ratio^k, k >= 0
struct WindowOnlyTail {};                    // T stops at window_end

using TailSpec = std::variant<ContinuousTail, UniformTail, GeometricTail, WindowOnlyTail>;

enum class PointKind { Dense, Scattered };

class TimeScale;

/// A validated member of a specific time scale. Constructed through
/// TimeScale::point(); converts implicitly to its double value.
class TimePoint {
  public:
    double value() const { return value_; }
    operator double() const { return value_; }

  private:
    friend class TimeScale;
    explicit TimePoint(double v) : value_(v) {}
    double value_;
};

/// One cell of the partition of [a, b)_T produced by enumerate():
/// either a right-scattered point with its graininess, or a maximal dense
/// subinterval [start, end) on which every point is right-dense.
struct GridCell {
    PointKind kind;
    double start;
    double end;    // scattered: sigma(start); dense: right edge of the piece
    double mu;     // scattered: end - start; dense: 0

    double length() const { return end - start; }
};

/// A time scale described by a finite window (dense intervals and scattered
/// points) plus a lazy tail generator. Immutable after construction; all
/// queries are pure and safe for concurrent use.
class TimeScale {
  public:
    /// Validates and canonicalizes the description. Adjacent dense intervals
    /// are merged; overlaps, unordered segments and inconsistent tails throw
    /// Error with a description of the offending segment.
    TimeScale(double window_start, std::vector<Segment> segments, TailSpec tail);

    // Common scales.
    static TimeScale integers(double start = 0.0);              // start + N0
    static TimeScale uniform_grid(double start, double step);   // start + step*N0
    static TimeScale geometric(double base, double ratio);      // base * ratio^N0
    static TimeScale half_line(double start);                   // [start, inf)

    double window_start() const { return window_start_; }
    double window_end() const { return window_end_; }
    const std::vector<Segment>& segments() const { return segments_; }
    const TailSpec& tail() const { return tail_; }
    bool unbounded_above() const { return !std::holds_alternative<WindowOnlyTail>(tail_); }

    bool contains(double t) const;

    /// Validated handle; throws NotInTimeScale.
    TimePoint point(double t) const;

    /// Largest member <= x, or throws NotInTimeScale when x < window_start.
    double floor(double x) const;

    /// Forward jump operator. Right-dense points map to themselves; the
    /// window-only maximum maps to itself.
    double sigma(double t) const;

    /// sigma(t) - t.
    double graininess(double t) const;

    /// inf of the graininess over [s, inf)_T, in closed form per tail kind.
    /// Throws UnboundedWindowOnly for window-only tails.
    double min_graininess(double s) const;

    struct MuRange {
        double min;
        double sup;  // +infinity for geometric tails
    };
    /// Infimum and supremum of the graininess over [s, inf)_T.
    MuRange mu_range(double s) const;

    /// Partition of [a, b)_T into scattered points and maximal dense pieces.
    std::vector<GridCell> enumerate(double a, double b) const;

    /// Streaming enumeration of cells starting at the cell containing `from`
    /// (which must be in T). advance() moves right indefinitely while the
    /// tail permits; done() only for window-only tails.
    class CellCursor {
      public:
        const GridCell& cell() const { return cell_; }
        bool done() const { return done_; }
        void advance();

      private:
        friend class TimeScale;
        CellCursor(const TimeScale& ts, double from);
        void load();

        const TimeScale* ts_;
        std::size_t atom_ = 0;   // index into atoms; atoms.size() => in tail
        long tail_index_ = 0;    // k of the current tail point
        double dense_from_ = 0;  // left edge override for the first dense cell
        GridCell cell_{};
        bool done_ = false;
    };
    CellCursor cells_from(double from) const { return CellCursor(*this, from); }

  private:
    void require_member(double t, const char* op) const;
    double tail_point(long k) const;        // k-th generated tail point (k >= 0 maps to window_end)
    long tail_index_at_or_after(double x) const;

    double window_start_;
    double window_end_;
    std::vector<Segment> segments_;  // canonical: sorted, disjoint, merged
    TailSpec tail_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace tsc
