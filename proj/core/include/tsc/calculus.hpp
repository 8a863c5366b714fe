#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "tsc/timescale.hpp"

namespace tsc {

using Complex = std::complex<double>;

/// A function on a time scale. `value` is the pointwise evaluation used at
/// scattered points; `dense_value` is the rd-continuous representative used
/// inside dense-component quadrature. They differ only for functions carrying
/// point masses at right-dense points (which have Delta-measure zero and must
/// not be picked up by quadrature nodes).
class GridFunction {
  public:
    using Fn = std::function<Complex(double)>;

    GridFunction() = default;
    explicit GridFunction(Fn value) : value_(std::move(value)) {}
    GridFunction(Fn value, Fn dense) : value_(std::move(value)), dense_(std::move(dense)) {}

    static GridFunction constant(Complex c) {
        return GridFunction([c](double) { return c; });
    }

    Complex value(double t) const { return value_(t); }
    Complex dense_value(double t) const { return dense_ ? dense_(t) : value_(t); }
    bool has_dense_override() const { return static_cast<bool>(dense_); }

  private:
    Fn value_;
    Fn dense_;
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 40;
    int mesh_per_component = 64;  // cumulative-table nodes per dense component
};

/// Exponential decay envelope |f(eta)| <= coefficient * e_{(-)rate}(sigma(eta), s)
/// used to bound improper-integral tails. The rate must be positive.
struct DecayEnvelope {
    double coefficient;
    double rate;
};
using TailBound = DecayEnvelope;

/// Transform value plus convergence diagnostics.
struct TransformResult {
    Complex value{0.0};
    double truncation_point = 0.0;
    double tail_estimate = 0.0;
    bool converged = false;
    long evaluations = 0;
};

/// Partial integrals of f from s, tabulated at every scattered point of the
/// range plus a mesh inside each dense component. values[i] = integral over
/// [s, nodes[i])_T; nodes.front() == s with value 0.
struct CumulativeTable {
    std::vector<double> nodes;
    std::vector<Complex> values;

    double max_abs() const;
    std::size_t argmax_abs() const;
};

Complex delta_derivative(const TimeScale& ts, const GridFunction& f, double t,
                         const QuadratureConfig& cfg = {});

Complex delta_integral(const TimeScale& ts, const GridFunction& f, double a, double b,
                       const QuadratureConfig& cfg = {});

CumulativeTable cumulative(const TimeScale& ts, const GridFunction& f, double s, double t_max,
                           const QuadratureConfig& cfg = {});

/// With allow_partial the truncated value is returned (converged = false)
/// when the schedule is exhausted or the tail estimate stalls, instead of
/// throwing NoConvergence.
TransformResult improper_delta_integral(const TimeScale& ts, const GridFunction& f, double s,
                                        const QuadratureConfig& cfg, const DecayEnvelope& tail,
                                        bool allow_partial = false);

/// f(sigma(t)) - f(t) - mu(t) * f^Delta(t); zero by the shift identity.
Complex sigma_shift_residual(const TimeScale& ts, const GridFunction& f, double t,
                             const QuadratureConfig& cfg = {});

/// Residual of int f g^sigma = [F g] - int F g^Delta with F the cumulative of f.
Complex integration_by_parts_check(const TimeScale& ts, const GridFunction& f,
                                   const GridFunction& g, double s, double t,
                                   const QuadratureConfig& cfg = {});

/// Evaluates t -> integral of f over [s, t)_T from a prebuilt table, filling
/// the gap from the last table node by local quadrature.
class CumulativeFunction {
  public:
    CumulativeFunction(const TimeScale& ts, GridFunction f, double s, double t_max,
                       const QuadratureConfig& cfg = {});
    Complex operator()(double t) const;
    const CumulativeTable& table() const { return table_; }

  private:
    const TimeScale* ts_;
    GridFunction f_;
    QuadratureConfig cfg_;
    CumulativeTable table_;
};

}  // namespace tsc
