#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsc/laplace.hpp"

namespace tsc {

/// Hypothesis data for the uniqueness check: a positively regressive alpha,
/// an increasing prefix varsigma_0 < varsigma_1 < ... of the divergent
/// sequence, and the modulation power range 0..n_max.
class LatticeSpec {
  public:
    LatticeSpec(Complex alpha, std::vector<double> varsigma_seq, int n_max);

    Complex alpha() const { return alpha_; }
    const std::vector<double>& varsigma() const { return varsigma_; }
    int n_max() const { return n_max_; }
    int k_max() const { return static_cast<int>(varsigma_.size()) - 1; }

  private:
    Complex alpha_;
    std::vector<double> varsigma_;
    int n_max_;
};

enum class NullVerdict { Null, NotNull, Inconclusive };

const char* to_string(NullVerdict v);

/// Outcome of the null-function test: the worst cumulative-integral magnitude
/// over all table nodes, with the three-way verdict (<= tol is null,
/// > 10*tol is not null, the band between is inconclusive).
struct NullReport {
    NullVerdict verdict;
    double max_cumulative;
    double worst_node;
    long nodes_checked;
    double tol;
};

struct LatticeCell {
    TransformResult result{};
    bool ok = false;
    std::string error;
};

/// Row-major matrix of modulated transforms indexed by (n, k).
struct LatticeSweepResult {
    int n_max = 0;
    int k_max = 0;
    std::vector<LatticeCell> cells;

    const LatticeCell& at(int n, int k) const {
        return cells[static_cast<std::size_t>(n) * (k_max + 1) + k];
    }
};

struct LerchVerdict {
    double hypothesis_max = 0.0;
    bool hypothesis_holds = false;
    NullReport null_report{};
    std::optional<std::pair<int, int>> witness;  // (n, k) of the largest |cell|
    bool falsification = false;                  // hypothesis_holds with a not-null f
    LatticeSweepResult sweep;
};

NullReport null_check(const TimeScale& ts, const GridFunction& f, double s, double t_max,
                      double tol, const QuadratureConfig& cfg = {});

/// Null closure under sigma-shifted smooth modulation: f_null * g(sigma(.)).
NullReport modulated_null_check(const TimeScale& ts, const GridFunction& f_null,
                                const GridFunction& g, double s, double t_max, double tol,
                                const QuadratureConfig& cfg = {});

/// Evaluates the (n, k) lattice of transforms
/// int f(eta) (e_{(-)varsigma_k}(sigma(eta), s))^n e_{(-)alpha}(sigma(eta), s) Delta(eta).
/// Per-cell failures are recorded and the sweep continues.
LatticeSweepResult lattice_sweep(const TimeScale& ts, const GridFunction& f, double s,
                                 const LatticeSpec& spec, double growth, double tol,
                                 const QuadratureConfig& cfg = {});

/// Runs the sweep and the null check, reporting whether the vanishing
/// hypothesis holds, the witness cell otherwise, and flagging the (never
/// expected) combination hypothesis_holds && not-null.
LerchVerdict lerch_verify(const TimeScale& ts, const GridFunction& f, double s,
                          const LatticeSpec& spec, double t_max, double tol, double growth = 0.0,
                          const QuadratureConfig& cfg = {});

/// Truncated integral of g against the Lambda kernel,
/// int_s^{r_trunc} g(eta) Lambda(varsigma; sigma(eta), t) Delta(eta).
Complex char_approx(const TimeScale& ts, const GridFunction& g, double s, double t,
                    double varsigma, double r_trunc, const QuadratureConfig& cfg = {});

/// Residual of chi_{[s,t)}(sigma(eta)) = chi_{[s,t)}(eta) + mu(eta) chi^Delta(eta),
/// evaluated with the exact difference quotient at scattered eta. Throws
/// DenseBoundary at the right-dense boundary eta = t where chi^Delta does not
/// exist.
double chi_shift_check(const TimeScale& ts, double s, double t, double eta);

/// On constant-graininess scales, builds the lattice realizing evaluation of
/// the plain transform at beta (+) ((n k) (.) varsigma): varsigma_k = k (.) varsigma
/// for k = 1..k_max. Verifies that every lattice point stays inside the
/// convergence region for the declared growth.
LatticeSpec constant_graininess_reduce(const TimeScale& ts, double s, double beta,
                                       double varsigma, double growth, int n_max, int k_max);

}  // namespace tsc
