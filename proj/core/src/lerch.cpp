#include "tsc/lerch.hpp"

#include <cmath>
#include <memory>

namespace tsc {

const char* to_string(NullVerdict v) {
    switch (v) {
        case NullVerdict::Null: return "null";
        case NullVerdict::NotNull: return "not_null";
        default: return "inconclusive";
    }
}

LatticeSpec::LatticeSpec(Complex alpha, std::vector<double> varsigma_seq, int n_max)
    : alpha_(alpha), varsigma_(std::move(varsigma_seq)), n_max_(n_max) {
    if (varsigma_.empty()) throw Error("lattice: varsigma sequence must be nonempty");
    if (n_max_ < 0) throw Error("lattice: n_max must be nonnegative");
    if (varsigma_.front() < 0) throw Error("lattice: varsigma values must be nonnegative");
    for (std::size_t i = 1; i < varsigma_.size(); ++i) {
        if (!(varsigma_[i] > varsigma_[i - 1])) {
            throw Error("lattice: varsigma sequence must be strictly increasing");
        }
    }
}

NullReport null_check(const TimeScale& ts, const GridFunction& f, double s, double t_max,
                      double tol, const QuadratureConfig& cfg) {
    if (!(t_max > s)) throw EmptyRange("null_check: t_max must exceed s");
    const CumulativeTable table = cumulative(ts, f, s, t_max, cfg);
    const double m = table.max_abs();
    const std::size_t worst = table.argmax_abs();

    NullVerdict verdict = NullVerdict::Inconclusive;
    if (m <= tol) {
        verdict = NullVerdict::Null;
    } else if (m > 10.0 * tol) {
        verdict = NullVerdict::NotNull;
    }
    return NullReport{verdict, m, table.nodes[worst], static_cast<long>(table.nodes.size()), tol};
}

NullReport modulated_null_check(const TimeScale& ts, const GridFunction& f_null,
                                const GridFunction& g, double s, double t_max, double tol,
                                const QuadratureConfig& cfg) {
    GridFunction product(
        [&ts, &f_null, &g](double eta) { return f_null.value(eta) * g.value(ts.sigma(eta)); },
        [&f_null, &g](double eta) { return f_null.dense_value(eta) * g.dense_value(eta); });
    return null_check(ts, product, s, t_max, tol, cfg);
}

LatticeSweepResult lattice_sweep(const TimeScale& ts, const GridFunction& f, double s,
                                 const LatticeSpec& spec, double growth, double tol,
                                 const QuadratureConfig& cfg) {
    if (!is_pos_regressive(ts, s, spec.alpha())) {
        throw Error("lattice_sweep: alpha must be positively regressive on [s, infinity)");
    }

    QuadratureConfig cell_cfg = cfg;
    cell_cfg.abs_tol = std::min(cfg.abs_tol, tol / 10.0);  // resolve cells below the verdict band

    LatticeSweepResult sweep;
    sweep.n_max = spec.n_max();
    sweep.k_max = spec.k_max();
    sweep.cells.resize(static_cast<std::size_t>(sweep.n_max + 1) * (sweep.k_max + 1));

    for (int n = 0; n <= sweep.n_max; ++n) {
        for (int k = 0; k <= sweep.k_max; ++k) {
            LatticeCell& cell = sweep.cells[static_cast<std::size_t>(n) * (sweep.k_max + 1) + k];
            std::vector<std::pair<Complex, int>> modulators{{spec.alpha(), 1}};
            const double vk = spec.varsigma()[static_cast<std::size_t>(k)];
            if (n > 0 && vk > 0) modulators.push_back({Complex(vk), n});
            try {
                cell.result = product_transform(ts, f, s, modulators, growth, cell_cfg);
                cell.ok = true;
            } catch (const Error& e) {
                cell.ok = false;
                cell.error = e.what();
            }
        }
    }
    return sweep;
}

LerchVerdict lerch_verify(const TimeScale& ts, const GridFunction& f, double s,
                          const LatticeSpec& spec, double t_max, double tol, double growth,
                          const QuadratureConfig& cfg) {
    LerchVerdict verdict;
    verdict.sweep = lattice_sweep(ts, f, s, spec, growth, tol, cfg);

    bool certifiable = true;
    double max_mag = 0.0;
    std::optional<std::pair<int, int>> witness;
    for (int n = 0; n <= verdict.sweep.n_max; ++n) {
        for (int k = 0; k <= verdict.sweep.k_max; ++k) {
            const LatticeCell& cell = verdict.sweep.at(n, k);
            if (!cell.ok || !cell.result.converged) {
                certifiable = false;
                continue;
            }
            const double mag = std::abs(cell.result.value);
            if (mag > max_mag) {
                max_mag = mag;
                witness = {n, k};
            }
        }
    }
    verdict.hypothesis_max = max_mag;
    verdict.hypothesis_holds = certifiable && max_mag <= tol;
    if (max_mag > tol) verdict.witness = witness;

    verdict.null_report = null_check(ts, f, s, t_max, tol, cfg);
    verdict.falsification =
        verdict.hypothesis_holds && verdict.null_report.verdict == NullVerdict::NotNull;
    return verdict;
}

Complex char_approx(const TimeScale& ts, const GridFunction& g, double s, double t,
                    double varsigma, double r_trunc, const QuadratureConfig& cfg) {
    if (!(varsigma > 0)) throw Error("char_approx: varsigma must be positive");
    ts.point(t);
    if (!(r_trunc >= s)) throw EmptyRange("char_approx: truncation point precedes s");

    // Lambda(varsigma; a, t) = exp(-varsigma e_{(-)varsigma}(a, t)); the inner
    // exponential is split as e_{(-)varsigma}(a, s) * e_{varsigma}(t, s) and
    // evaluated in log space so that a << t saturates to Lambda = 0 instead of
    // overflowing.
    auto walker = std::make_shared<ExpProduct>(
        ts, s, std::vector<ExpProduct::Factor>{{Complex(varsigma), -1}}, cfg);
    const double log_shift = log_exp_ts_real(ts, varsigma, t, s, cfg);

    auto lambda_from_log = [varsigma](double log_inner) {
        return std::exp(-varsigma * std::exp(log_inner));
    };

    GridFunction integrand(
        [&g, walker, log_shift, lambda_from_log](double eta) {
            return g.value(eta) * lambda_from_log(walker->log_abs_at_sigma(eta) + log_shift);
        },
        [&g, walker, log_shift, lambda_from_log](double eta) {
            return g.dense_value(eta) * lambda_from_log(walker->log_abs_at(eta) + log_shift);
        });
    return delta_integral(ts, integrand, s, r_trunc, cfg);
}

double chi_shift_check(const TimeScale& ts, double s, double t, double eta) {
    ts.point(s);
    ts.point(t);
    ts.point(eta);

    auto chi = [s, t](double x) { return (x >= s && x < t) ? 1.0 : 0.0; };

    const double mu = ts.graininess(eta);
    if (mu == 0.0) {
        if (std::abs(eta - t) <= kMembershipTol) {
            throw DenseBoundary("chi_shift_check: chi jumps at the right-dense point t");
        }
        return 0.0;  // sigma(eta) = eta and the mu-term vanishes
    }
    const double lhs = chi(ts.sigma(eta));
    const double jump = lhs - chi(eta);
    const double derivative = jump / mu;
    return lhs - (chi(eta) + mu * derivative);
}

LatticeSpec constant_graininess_reduce(const TimeScale& ts, double s, double beta,
                                       double varsigma, double growth, int n_max, int k_max) {
    const TimeScale::MuRange range = ts.mu_range(s);
    if (!std::isfinite(range.sup) || range.sup - range.min > 1e-12) {
        throw NonConstantGraininess("constant_graininess_reduce: mu is not constant on [s, infinity)");
    }
    const double h = range.min;
    if (!(varsigma > 0)) throw Error("constant_graininess_reduce: varsigma must be positive");
    if (k_max < 1) throw Error("constant_graininess_reduce: k_max must be at least 1");
    if (!is_pos_regressive(ts, s, Complex(beta))) {
        throw Error("constant_graininess_reduce: beta must be positively regressive");
    }
    if (!in_region(RegionSpec{h, growth}, Complex(beta))) {
        throw OutsideRegion("constant_graininess_reduce: beta is outside the convergence region");
    }

    // k = 0 would give varsigma_0 = 0; the sequence starts at k = 1.
    std::vector<double> seq;
    seq.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        seq.push_back(cdot(h, Complex(static_cast<double>(k)), Complex(varsigma)).real());
    }

    for (int n = 0; n <= n_max; ++n) {
        for (double vk : seq) {
            const Complex point =
                cplus(h, Complex(beta), cdot(h, Complex(static_cast<double>(n)), Complex(vk)));
            if (!in_region(RegionSpec{h, growth}, point)) {
                throw OutsideRegion("constant_graininess_reduce: lattice point leaves the region");
            }
        }
    }
    return LatticeSpec(Complex(beta), std::move(seq), n_max);
}

}  // namespace tsc
