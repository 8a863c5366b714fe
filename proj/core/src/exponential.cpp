#include "tsc/exponential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tsc {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

struct ExpAccum {
    double log_abs = 0.0;
    double arg = 0.0;
    long neg = 0;

    void factor(Complex w, int p, double eta) {
        if (w.imag() == 0.0) {
            const double r = w.real();
            if (std::abs(r) < kRegressiveTol) {
                throw NotRegressive("1 + mu*f vanishes at eta = " + fmt(eta));
            }
            if (r > 0) {
                log_abs += p * std::log(r);
            } else {
                log_abs += p * std::log(-r);
                neg += p;
            }
            return;
        }
        const double m = std::abs(w);
        if (m < kRegressiveTol) {
            throw NotRegressive("1 + mu*f vanishes at eta = " + fmt(eta));
        }
        log_abs += p * std::log(m);
        arg += p * std::arg(w);
    }

    void exponent(Complex e) {
        log_abs += e.real();
        arg += e.imag();
    }

    ExpAccum negated() const { return {-log_abs, -arg, neg}; }

    Complex value() const {
        const double m = std::exp(log_abs);
        const double sign = (neg % 2 != 0) ? -1.0 : 1.0;
        if (arg == 0.0) return Complex(sign * m, 0.0);
        return Complex(sign * m * std::cos(arg), sign * m * std::sin(arg));
    }
};

ExpAccum accumulate_exponent(const TimeScale& ts, const ExponentArg& arg, double a, double b,
                             const QuadratureConfig& cfg) {
    ExpAccum acc;
    for (const GridCell& c : ts.enumerate(a, b)) {
        if (c.kind == PointKind::Scattered) {
            const Complex fv = arg.is_constant() ? arg.constant_value() : arg.fn().value(c.start);
            acc.factor(1.0 + c.mu * fv, 1, c.start);
        } else if (arg.is_constant()) {
            acc.exponent(arg.constant_value() * c.length());
        } else {
            // xi_0(f) = f on dense parts, so the exponent is the plain integral
            acc.exponent(delta_integral(ts, arg.fn(), c.start, c.end, cfg));
        }
    }
    return acc;
}

}  // namespace

Complex exp_ts(const TimeScale& ts, const ExponentArg& arg, double t, double s,
               const QuadratureConfig& cfg) {
    if (t == s) {
        ts.point(s);
        return Complex(1.0);
    }
    ExpAccum acc = accumulate_exponent(ts, arg, std::min(s, t), std::max(s, t), cfg);
    if (t < s) acc = acc.negated();
    return acc.value();
}

Complex exp_ominus(const TimeScale& ts, Complex z, double t, double s,
                   const QuadratureConfig& cfg) {
    return 1.0 / exp_ts(ts, ExponentArg::constant(z), t, s, cfg);
}

double log_exp_ts_real(const TimeScale& ts, double x, double t, double s,
                       const QuadratureConfig& cfg) {
    if (t == s) {
        ts.point(s);
        return 0.0;
    }
    ExpAccum acc =
        accumulate_exponent(ts, ExponentArg::constant(Complex(x)), std::min(s, t), std::max(s, t), cfg);
    return (t < s) ? -acc.log_abs : acc.log_abs;
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

namespace {

double horner(const std::vector<double>& c, double dx) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * dx + c[i];
    return v;
}

std::vector<double> antiderivative(const std::vector<double>& c) {
    std::vector<double> out(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) out[k + 1] = c[k] / static_cast<double>(k + 1);
    return out;
}

bool cell_covers(const GridCell& c, double t) {
    if (c.kind == PointKind::Scattered) return std::abs(t - c.start) <= kMembershipTol;
    return t >= c.start - kMembershipTol && t < c.end;
}

}  // namespace

MonomialTable::MonomialTable(const TimeScale& ts, double s, QuadratureConfig cfg)
    : ts_(&ts), s_(s), cfg_(cfg), cursor_(ts.cells_from(s)) {}

void MonomialTable::extend_right(double t) {
    while (atoms_.empty() || (!cell_covers(atoms_.back(), t) && atoms_.back().start < t)) {
        if (!atoms_.empty()) {
            cursor_.advance();
            if (cursor_.done()) {
                throw NotInTimeScale("monomial: " + fmt(t) + " lies beyond the time scale");
            }
        }
        atoms_.push_back(cursor_.cell());
    }
}

double MonomialTable::eval_right(int n, double t) {
    extend_right(t);
    if (static_cast<int>(levels_.size()) <= n) {
        for (int l = static_cast<int>(levels_.size()); l <= n; ++l) {
            Level level;
            level.running = (l == 0) ? 1.0 : 0.0;
            levels_.push_back(std::move(level));
        }
    }
    for (int l = 0; l <= n; ++l) {
        Level& level = levels_[static_cast<std::size_t>(l)];
        while (level.atoms.size() < atoms_.size()) {
            const std::size_t j = level.atoms.size();
            const GridCell& c = atoms_[j];
            AtomData d;
            d.start_value = level.running;
            if (c.kind == PointKind::Dense) {
                if (l == 0) {
                    d.poly = {1.0};
                } else {
                    d.poly = antiderivative(levels_[static_cast<std::size_t>(l - 1)].atoms[j].poly);
                    d.poly[0] = d.start_value;
                }
                level.running = (c.end < kInf) ? horner(d.poly, c.end - c.start) : kInf;
            } else {
                level.running =
                    (l == 0) ? 1.0
                             : d.start_value +
                                   c.mu * levels_[static_cast<std::size_t>(l - 1)].atoms[j].start_value;
                if (l == 0) d.start_value = 1.0;
            }
            level.atoms.push_back(std::move(d));
        }
    }

    // locate the covering atom
    auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                               [](double v, const GridCell& c) { return v < c.start - kMembershipTol; });
    const std::size_t idx = static_cast<std::size_t>(std::distance(atoms_.begin(), it)) - 1;
    const GridCell& c = atoms_[idx];
    const AtomData& d = levels_[static_cast<std::size_t>(n)].atoms[idx];
    if (c.kind == PointKind::Scattered) return d.start_value;
    return horner(d.poly, t - c.start);
}

double MonomialTable::eval_left(int n, double t) const {
    const std::vector<GridCell> cells = ts_->enumerate(t, s_);
    const std::size_t m = cells.size();
    std::vector<std::vector<AtomData>> lv(static_cast<std::size_t>(n) + 1);

    for (int l = 0; l <= n; ++l) {
        auto& row = lv[static_cast<std::size_t>(l)];
        row.resize(m);
        double run = (l == 0) ? 1.0 : 0.0;  // h_l at the right edge (= s)
        for (std::size_t j = m; j-- > 0;) {
            const GridCell& c = cells[j];
            AtomData& d = row[j];
            if (c.kind == PointKind::Scattered) {
                d.start_value =
                    (l == 0) ? 1.0 : run - c.mu * lv[static_cast<std::size_t>(l - 1)][j].start_value;
            } else {
                if (l == 0) {
                    d.poly = {1.0};
                    d.start_value = 1.0;
                } else {
                    d.poly = antiderivative(lv[static_cast<std::size_t>(l - 1)][j].poly);
                    double partial = 0.0;
                    const double dx = c.end - c.start;
                    for (std::size_t k = d.poly.size(); k-- > 1;) partial = (partial + d.poly[k]) * dx;
                    d.poly[0] = run - partial;
                    d.start_value = d.poly[0];
                }
            }
            run = d.start_value;
        }
    }

    const GridCell& c0 = cells.front();
    const AtomData& d0 = lv[static_cast<std::size_t>(n)].front();
    if (c0.kind == PointKind::Scattered) return d0.start_value;
    return horner(d0.poly, t - c0.start);
}

double MonomialTable::value(int n, double t) {
    if (n < 0) throw Error("monomial: order must be nonnegative");
    ts_->point(t);
    if (t == s_) return (n == 0) ? 1.0 : 0.0;
    if (t > s_) return eval_right(n, t);
    return eval_left(n, t);
}

double monomial(const TimeScale& ts, int n, double t, double s, const QuadratureConfig& cfg) {
    MonomialTable table(ts, s, cfg);
    return table.value(n, t);
}

// ---------------------------------------------------------------------------
// Asymptotic quantities
// ---------------------------------------------------------------------------

double lambda_fn(const TimeScale& ts, double x, double t, double s, const QuadratureConfig& cfg) {
    if (!(x > 0)) throw Error("lambda_fn: x must be positive");
    const double log_ex = log_exp_ts_real(ts, x, t, s, cfg);
    const double w = std::exp(-log_ex);  // e_{(-)x}(t, s); overflow/underflow saturate correctly
    return std::exp(-x * w);
}

LambdaSeries lambda_series(const TimeScale& ts, double varsigma, double t, double s, int terms,
                           const QuadratureConfig& cfg) {
    if (!(varsigma > 0)) throw Error("lambda_series: varsigma must be positive");
    if (terms < 0) throw Error("lambda_series: term count must be nonnegative");
    const double w = std::exp(-log_exp_ts_real(ts, varsigma, t, s, cfg));
    const double u = -varsigma * w;
    double sum = 1.0;
    double term = 1.0;
    for (int l = 1; l <= terms; ++l) {
        term *= u / static_cast<double>(l);
        sum += term;
    }
    return {sum, term};
}

double scaled_exp_decay(const TimeScale& ts, double lam, double t, double s, double x,
                        const QuadratureConfig& cfg) {
    if (!(x > 0)) throw Error("scaled_exp_decay: x must be positive");
    const double log_ex = log_exp_ts_real(ts, x, t, s, cfg);
    return std::exp(lam * std::log(x) - log_ex);  // +inf marks the divergent branch
}

double taylor_lower_bound_check(const TimeScale& ts, double x, double t, double s, int n,
                                const QuadratureConfig& cfg) {
    if (!(x > 0)) throw Error("taylor_lower_bound_check: x must be positive");
    if (t < s) throw Error("taylor_lower_bound_check: requires t >= s");
    const double ex = std::exp(log_exp_ts_real(ts, x, t, s, cfg));
    const double hn = monomial(ts, n, t, s, cfg);
    return ex - std::pow(x, n) * hn;
}

// ---------------------------------------------------------------------------
// Cached exponential products
// ---------------------------------------------------------------------------

Complex ExpProduct::Accum::value() const {
    const double m = std::exp(log_abs);
    const double sign = (neg % 2 != 0) ? -1.0 : 1.0;
    if (arg == 0.0) return Complex(sign * m, 0.0);
    return Complex(sign * m * std::cos(arg), sign * m * std::sin(arg));
}

ExpProduct::ExpProduct(const TimeScale& ts, double s, std::vector<Factor> factors,
                       QuadratureConfig cfg)
    : ts_(&ts), s_(s), factors_(std::move(factors)), cfg_(cfg), cursor_(ts.cells_from(s)) {
    for (const Factor& f : factors_) dense_rate_ += static_cast<double>(f.power) * f.z;
    cells_.push_back(cursor_.cell());
    at_start_.push_back(Accum{});
}

ExpProduct::Accum ExpProduct::cross_scattered(const Accum& a, double point, double mu) const {
    ExpAccum tmp{a.log_abs, a.arg, a.neg};
    for (const Factor& f : factors_) {
        tmp.factor(1.0 + mu * f.z, f.power, point);
    }
    return Accum{tmp.log_abs, tmp.arg, tmp.neg};
}

void ExpProduct::extend_to(double t) {
    // stop as soon as the table reaches t; earlier cells are found by search
    while (!cell_covers(cells_.back(), t) && cells_.back().start < t) {
        const GridCell& last = cells_.back();
        Accum next = at_start_.back();
        if (last.kind == PointKind::Scattered) {
            next = cross_scattered(next, last.start, last.mu);
        } else {
            next.log_abs += dense_rate_.real() * last.length();
            next.arg += dense_rate_.imag() * last.length();
        }
        cursor_.advance();
        if (cursor_.done()) {
            throw NotInTimeScale("exp product: " + fmt(t) + " lies beyond the time scale");
        }
        cells_.push_back(cursor_.cell());
        at_start_.push_back(next);
    }
}

ExpProduct::Accum ExpProduct::accum_at(double t) {
    if (t == s_) return Accum{};
    if (t < s_) {
        ExpAccum acc;
        for (const GridCell& c : ts_->enumerate(t, s_)) {
            if (c.kind == PointKind::Scattered) {
                for (const Factor& f : factors_) acc.factor(1.0 + c.mu * f.z, f.power, c.start);
            } else {
                acc.exponent(dense_rate_ * c.length());
            }
        }
        acc = acc.negated();
        return Accum{acc.log_abs, acc.arg, acc.neg};
    }

    extend_to(t);
    std::size_t idx;
    if (hint_ < cells_.size() && cell_covers(cells_[hint_], t)) {
        idx = hint_;
    } else if (hint_ + 1 < cells_.size() && cell_covers(cells_[hint_ + 1], t)) {
        idx = hint_ + 1;
    } else {
        auto it = std::upper_bound(cells_.begin(), cells_.end(), t, [](double v, const GridCell& c) {
            return v < c.start - kMembershipTol;
        });
        idx = static_cast<std::size_t>(std::distance(cells_.begin(), it)) - 1;
    }
    hint_ = idx;

    const GridCell& c = cells_[idx];
    Accum a = at_start_[idx];
    if (c.kind == PointKind::Dense && t > c.start) {
        a.log_abs += dense_rate_.real() * (t - c.start);
        a.arg += dense_rate_.imag() * (t - c.start);
    }
    return a;
}

Complex ExpProduct::at(double t) { return accum_at(t).value(); }

Complex ExpProduct::at_sigma(double t) {
    const double mu = ts_->graininess(t);
    return (mu > 0) ? at(ts_->sigma(t)) : at(t);
}

double ExpProduct::log_abs_at(double t) { return accum_at(t).log_abs; }

double ExpProduct::log_abs_at_sigma(double t) {
    const double mu = ts_->graininess(t);
    return (mu > 0) ? log_abs_at(ts_->sigma(t)) : log_abs_at(t);
}

}  // namespace tsc
