#pragma once

#include <optional>
#include <vector>

#include "tsc/calculus.hpp"
#include "tsc/hilger.hpp"

namespace tsc {

/// Exponent of e_f(t, s): either a regressive constant or a regressive
/// grid function (checked pointwise over the evaluation range).
class ExponentArg {
  public:
    static ExponentArg constant(Complex z) {
        ExponentArg a;
        a.z_ = z;
        return a;
    }
    static ExponentArg varying(GridFunction f) {
        ExponentArg a;
        a.f_ = std::move(f);
        return a;
    }

    bool is_constant() const { return !f_.has_value(); }
    Complex constant_value() const { return z_; }
    const GridFunction& fn() const { return *f_; }

  private:
    ExponentArg() = default;
    Complex z_{0.0};
    std::optional<GridFunction> f_;
};

/// Time-scale exponential e_f(t, s): product of (1 + mu f) over scattered
/// points times exp of the dense-part integral of f, accumulated in log
/// space with the sign of real negative factors tracked exactly.
/// For t < s the group inverse 1/e_f(s, t) is returned.
Complex exp_ts(const TimeScale& ts, const ExponentArg& arg, double t, double s,
               const QuadratureConfig& cfg = {});

inline Complex exp_ts(const TimeScale& ts, Complex z, double t, double s,
                      const QuadratureConfig& cfg = {}) {
    return exp_ts(ts, ExponentArg::constant(z), t, s, cfg);
}

/// e_{(-)z}(t, s) = 1/e_z(t, s).
Complex exp_ominus(const TimeScale& ts, Complex z, double t, double s,
                   const QuadratureConfig& cfg = {});

/// log|e_x(t, s)| for real positively regressive x; never overflows.
double log_exp_ts_real(const TimeScale& ts, double x, double t, double s,
                       const QuadratureConfig& cfg = {});

/// Generalized monomials h_n(t, s) for one anchor s, memoized level by level.
/// On dense components each h_n is the exact antiderivative polynomial of
/// h_{n-1}, so evaluation is closed-form; scattered points step exactly.
class MonomialTable {
  public:
    MonomialTable(const TimeScale& ts, double s, QuadratureConfig cfg = {});
    double value(int n, double t);

  private:
    struct AtomData {
        double start_value = 0.0;         // h_n at the cell start
        std::vector<double> poly;         // dense cells: coefficients in (x - start)
    };
    struct Level {
        std::vector<AtomData> atoms;
        double running = 0.0;             // h_n at the start of the next atom
    };

    void extend_right(double t);
    double eval_right(int n, double t);
    double eval_left(int n, double t) const;

    const TimeScale* ts_;
    double s_;
    QuadratureConfig cfg_;
    std::vector<GridCell> atoms_;
    TimeScale::CellCursor cursor_;
    std::vector<Level> levels_;
};

double monomial(const TimeScale& ts, int n, double t, double s, const QuadratureConfig& cfg = {});

/// Lambda(x; t, s) = exp(-x e_{(-)x}(t, s)), computed through log space so the
/// divergent t <= s branch underflows to the correct limit 0 without
/// intermediate overflow.
double lambda_fn(const TimeScale& ts, double x, double t, double s,
                 const QuadratureConfig& cfg = {});

struct LambdaSeries {
    double partial_sum;
    double last_term;
};

/// Truncated series sum_{l=0}^{L} (-1)^l s^l / l! * (e_{(-)s}(t,s))^l, which
/// converges to lambda_fn; the power identity collapses e_{(-)(l (.) s)} to
/// the l-th power of e_{(-)s}.
LambdaSeries lambda_series(const TimeScale& ts, double varsigma, double t, double s, int terms,
                           const QuadratureConfig& cfg = {});

/// x^lam * e_{(-)x}(t, s). Overflow of the divergent branch is reported as the
/// +infinity marker rather than an error.
double scaled_exp_decay(const TimeScale& ts, double lam, double t, double s, double x,
                        const QuadratureConfig& cfg = {});

/// e_x(t, s) - x^n h_n(t, s); nonnegative for x > 0, t >= s.
double taylor_lower_bound_check(const TimeScale& ts, double x, double t, double s, int n,
                                const QuadratureConfig& cfg = {});

/// Cached evaluator for products prod_i e_{z_i}(t, s)^{p_i} with constant
/// exponents and integer powers. Queries extend an internal table of
/// accumulated exponents along the scale, so monotone sweeps (transforms,
/// lattice cells) cost O(1) amortized per new point. Instances are not safe
/// for concurrent use; create one per thread of work.
class ExpProduct {
  public:
    struct Factor {
        Complex z;
        int power;
    };

    ExpProduct(const TimeScale& ts, double s, std::vector<Factor> factors,
               QuadratureConfig cfg = {});

    Complex at(double t);
    Complex at_sigma(double t);
    double log_abs_at(double t);
    double log_abs_at_sigma(double t);

  private:
    struct Accum {
        double log_abs = 0.0;
        double arg = 0.0;
        long neg = 0;

        Complex value() const;
    };

    Accum accum_at(double t);
    void extend_to(double t);
    Accum cross_scattered(const Accum& a, double point, double mu) const;

    const TimeScale* ts_;
    double s_;
    std::vector<Factor> factors_;
    Complex dense_rate_{0.0};
    QuadratureConfig cfg_;

    std::vector<GridCell> cells_;
    std::vector<Accum> at_start_;
    TimeScale::CellCursor cursor_;
    std::size_t hint_ = 0;
};

}  // namespace tsc
