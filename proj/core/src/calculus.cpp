#include "tsc/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace tsc {

namespace {

struct KahanSum {
    Complex sum{0.0};
    Complex comp{0.0};
    void add(Complex x) {
        const Complex y = x - comp;
        const Complex t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

// 15-point Kronrod / 7-point Gauss pair on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelEstimate {
    Complex k15{0.0};
    double err = 0.0;
};

template <class F>
PanelEstimate gk15(const F& f, double a, double b, long& evals) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const Complex fc = f(mid);
    Complex k15 = kWgk[7] * fc;
    Complex g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const Complex lo = f(mid - dx);
        const Complex hi = f(mid + dx);
        k15 += kWgk[i] * (lo + hi);
        if (i % 2 == 1) g7 += kWg[i / 2] * (lo + hi);
    }
    evals += 15;
    k15 *= half;
    g7 *= half;
    return {k15, std::abs(k15 - g7)};
}

struct Panel {
    double a;
    double b;
    Complex value;
    double err;
    int depth;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.a > y.a;
    }
};

// Globally adaptive bisection: subdivide the worst panel until the summed
// error estimate meets the budget. Discontinuities of bounded jump converge
// at one bit per level, so max_depth ~ 40 resolves them to ~1e-12.
template <class F>
Complex adaptive_quad(const F& f, double a, double b, double tol, const QuadratureConfig& cfg,
                      long& evals) {
    if (a == b) return Complex(0.0);

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
    auto first = gk15(f, a, b, evals);
    queue.push({a, b, first.k15, first.err, 0});
    double total_err = first.err;

    while (total_err > tol) {
        Panel worst = queue.top();
        queue.pop();
        if (worst.depth >= cfg.max_depth) {
            throw QuadratureFailure("adaptive quadrature: max depth exceeded on [" +
                                    std::to_string(worst.a) + ", " + std::to_string(worst.b) + "]");
        }
        total_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            auto est = gk15(f, lo, hi, evals);
            queue.push({lo, hi, est.k15, est.err, worst.depth + 1});
            total_err += est.err;
        }
        if (queue.size() > 200000) {
            throw QuadratureFailure("adaptive quadrature: panel budget exhausted");
        }
    }

    // Deterministic left-to-right summation over the final partition.
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    KahanSum sum;
    for (const Panel& p : panels) sum.add(p.value);
    return sum.sum;
}

double total_dense_length(const std::vector<GridCell>& cells) {
    double len = 0;
    for (const auto& c : cells) {
        if (c.kind == PointKind::Dense) len += c.length();
    }
    return len;
}

}  // namespace

double CumulativeTable::max_abs() const {
    double m = 0;
    for (const Complex& v : values) m = std::max(m, std::abs(v));
    return m;
}

std::size_t CumulativeTable::argmax_abs() const {
    std::size_t best = 0;
    double m = -1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) > m) {
            m = std::abs(values[i]);
            best = i;
        }
    }
    return best;
}

Complex delta_integral(const TimeScale& ts, const GridFunction& f, double a, double b,
                       const QuadratureConfig& cfg) {
    const std::vector<GridCell> cells = ts.enumerate(a, b);
    const double dense_len = total_dense_length(cells);

    long evals = 0;
    KahanSum sum;
    for (const GridCell& c : cells) {
        if (c.kind == PointKind::Scattered) {
            sum.add(c.mu * f.value(c.start));
            ++evals;
        } else {
            auto fn = [&f](double x) { return f.dense_value(x); };
            auto rough = gk15(fn, c.start, c.end, evals);
            const double tol =
                cfg.abs_tol * (dense_len > 0 ? c.length() / dense_len : 1.0) + cfg.rel_tol * std::abs(rough.k15);
            sum.add(adaptive_quad(fn, c.start, c.end, std::max(tol, 1e-300), cfg, evals));
        }
    }
    return sum.sum;
}

Complex delta_derivative(const TimeScale& ts, const GridFunction& f, double t,
                         const QuadratureConfig& cfg) {
    const double mu = ts.graininess(t);
    if (mu > 0) {
        return (f.value(ts.sigma(t)) - f.value(t)) / mu;
    }

    // Right-dense: locate the surrounding dense component.
    double lo = t;
    double hi = t;
    for (const auto& seg : ts.segments()) {
        if (const auto* d = std::get_if<DenseInterval>(&seg)) {
            if (t >= d->a - kMembershipTol && t <= d->b + kMembershipTol) {
                lo = d->a;
                hi = d->b;
                break;
            }
        }
    }
    if (std::holds_alternative<ContinuousTail>(ts.tail())) {
        if (t >= ts.window_end() - kMembershipTol && lo == t) lo = ts.window_end();
        if (hi >= ts.window_end() - kMembershipTol || t >= ts.window_end()) hi = kInf;
    }

    const double room_l = t - lo;
    const double room_r = hi - t;
    if (room_r <= 0) {
        throw NonDifferentiable("delta_derivative: no dense neighbourhood to the right");
    }

    double h0 = std::min(1e-2 * (1.0 + std::abs(t)), room_r / 4.0);
    const bool central = room_l >= h0;
    if (central) h0 = std::min(h0, room_l);

    constexpr int kLevels = 4;
    // error orders of the difference quotient: even for the symmetric stencil,
    // consecutive for the one-sided one; the extrapolation factors must match
    const int orders_central[kLevels - 1] = {2, 4, 6};
    const int orders_onesided[kLevels - 1] = {2, 3, 4};
    const int* orders = central ? orders_central : orders_onesided;

    Complex table[kLevels][kLevels];
    for (int k = 0; k < kLevels; ++k) {
        const double h = h0 / static_cast<double>(1 << k);
        if (central) {
            table[k][0] = (f.value(t + h) - f.value(t - h)) / (2.0 * h);
        } else {
            table[k][0] = (-3.0 * f.value(t) + 4.0 * f.value(t + h) - f.value(t + 2.0 * h)) / (2.0 * h);
        }
        for (int j = 1; j <= k; ++j) {
            const double p = std::pow(2.0, orders[j - 1]);
            table[k][j] = (p * table[k][j - 1] - table[k - 1][j - 1]) / (p - 1.0);
        }
    }
    const Complex est = table[kLevels - 1][kLevels - 1];
    const double err = std::abs(est - table[kLevels - 2][kLevels - 2]);
    if (err > 10.0 * cfg.rel_tol * (1.0 + std::abs(est)) + 1e-9) {
        throw NonDifferentiable("delta_derivative: difference quotient failed to stabilize");
    }
    return est;
}

CumulativeTable cumulative(const TimeScale& ts, const GridFunction& f, double s, double t_max,
                           const QuadratureConfig& cfg) {
    const std::vector<GridCell> cells = ts.enumerate(s, t_max);

    CumulativeTable table;
    KahanSum running;
    long evals = 0;
    auto push = [&](double node) {
        if (!table.nodes.empty() && table.nodes.back() == node) return;
        table.nodes.push_back(node);
        table.values.push_back(running.sum);
    };

    push(s);
    for (const GridCell& c : cells) {
        push(c.start);
        if (c.kind == PointKind::Scattered) {
            running.add(c.mu * f.value(c.start));
        } else {
            auto fn = [&f](double x) { return f.dense_value(x); };
            const int mesh = std::max(1, cfg.mesh_per_component);
            for (int i = 1; i <= mesh; ++i) {
                const double x0 = c.start + (c.length() * (i - 1)) / mesh;
                const double x1 = (i == mesh) ? c.end : c.start + (c.length() * i) / mesh;
                running.add(adaptive_quad(fn, x0, x1, cfg.abs_tol / mesh, cfg, evals));
                if (i < mesh) push(x1);
            }
        }
    }
    push(t_max);
    return table;
}

CumulativeFunction::CumulativeFunction(const TimeScale& ts, GridFunction f, double s, double t_max,
                                       const QuadratureConfig& cfg)
    : ts_(&ts), f_(std::move(f)), cfg_(cfg), table_(cumulative(ts, f_, s, t_max, cfg)) {}

Complex CumulativeFunction::operator()(double t) const {
    const auto& nodes = table_.nodes;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t + kMembershipTol);
    if (it == nodes.begin()) throw NotInTimeScale("cumulative: point precedes the table");
    const std::size_t idx = static_cast<std::size_t>(std::distance(nodes.begin(), it)) - 1;
    const double node = nodes[idx];
    if (std::abs(node - t) <= kMembershipTol) return table_.values[idx];
    long evals = 0;
    auto fn = [this](double x) { return f_.dense_value(x); };
    return table_.values[idx] + adaptive_quad(fn, node, t, cfg_.abs_tol, cfg_, evals);
}

TransformResult improper_delta_integral(const TimeScale& ts, const GridFunction& f, double s,
                                        const QuadratureConfig& cfg, const DecayEnvelope& tail,
                                        bool allow_partial) {
    if (!ts.unbounded_above()) {
        throw UnboundedWindowOnly("improper_delta_integral requires sup T = infinity");
    }
    if (!(tail.rate > 0) || !(tail.coefficient > 0)) {
        throw NoConvergence("improper_delta_integral: decay envelope absent");
    }

    auto give_up = [&](TransformResult& out, KahanSum& sum, double position, long evals,
                       const char* why) -> TransformResult {
        if (!allow_partial) throw NoConvergence(std::string("improper_delta_integral: ") + why);
        out.value = sum.sum;
        out.truncation_point = position;
        out.converged = false;
        out.evaluations = evals;
        return out;
    };

    TransformResult out;
    KahanSum sum;
    long evals = 0;

    // log of e_{(-)rate}(position, s), maintained incrementally along the walk
    double log_env = 0.0;
    // largest |f|/envelope ratio sampled since the last convergence check
    double recent_ratio = 0.0;
    bool sampled = false;

    const double dense_chunk0 = std::max(1.0, 2.0 / tail.rate);
    double dense_chunk = dense_chunk0;

    long units_done = 0;
    long next_check = 1;
    int checks = 0;
    int stalls = 0;
    double prev_estimate = kInf;
    double position = s;

    auto sample = [&](double abs_f, double log_env_here) {
        const double env = std::exp(log_env_here);
        const double r = (env > 0) ? abs_f / env : (abs_f > 0 ? kInf : 0.0);
        recent_ratio = std::max(recent_ratio, r);
        sampled = true;
    };

    TimeScale::CellCursor cur = ts.cells_from(s);
    while (true) {
        if (cur.done()) {
            throw UnboundedWindowOnly("improper_delta_integral: time scale ended unexpectedly");
        }
        const GridCell cell = cur.cell();

        if (cell.kind == PointKind::Scattered) {
            const Complex fv = f.value(cell.start);
            ++evals;
            const double log_after = log_env - std::log1p(tail.rate * cell.mu);
            sample(std::abs(fv), log_after);
            sum.add(cell.mu * fv);
            log_env = log_after;
            position = cell.end;
            cur.advance();
            ++units_done;
        } else {
            // dense piece; process a bounded chunk
            double hi = cell.end;
            bool chunked = false;
            if (!(hi < kInf)) {
                hi = cell.start + dense_chunk;
                chunked = true;
            }
            auto fn = [&f](double x) { return f.dense_value(x); };
            sum.add(adaptive_quad(fn, cell.start, hi, cfg.abs_tol * 0.25, cfg, evals));
            for (int i = 1; i <= 3; ++i) {
                const double x = cell.start + (hi - cell.start) * i / 3.0;
                sample(std::abs(f.dense_value(x)), log_env - tail.rate * (x - cell.start));
                ++evals;
            }
            log_env -= tail.rate * (hi - cell.start);
            position = hi;
            if (chunked) {
                // shrink the infinite cell in place by restarting the cursor
                cur = ts.cells_from(hi);
                dense_chunk *= 2.0;
            } else {
                cur.advance();
            }
            ++units_done;
        }

        if (units_done >= next_check) {
            next_check *= 2;
            ++checks;
            const double c_eff = sampled ? recent_ratio : tail.coefficient;
            out.tail_estimate = (c_eff / tail.rate) * std::exp(log_env);
            recent_ratio = 0.0;
            sampled = false;
            if (out.tail_estimate <= cfg.abs_tol) {
                out.value = sum.sum;
                out.truncation_point = position;
                out.converged = true;
                out.evaluations = evals;
                return out;
            }
            if (out.tail_estimate >= prev_estimate) {
                if (++stalls >= 8) return give_up(out, sum, position, evals, "tail estimate stalls");
            } else {
                stalls = 0;
            }
            prev_estimate = out.tail_estimate;
            if (checks > 60) return give_up(out, sum, position, evals, "truncation schedule exhausted");
        }
        if (evals > 50'000'000) {
            return give_up(out, sum, position, evals, "evaluation budget exhausted");
        }
    }
}

Complex sigma_shift_residual(const TimeScale& ts, const GridFunction& f, double t,
                             const QuadratureConfig& cfg) {
    const double mu = ts.graininess(t);
    const Complex fs = f.value(ts.sigma(t));
    return fs - f.value(t) - mu * delta_derivative(ts, f, t, cfg);
}

Complex integration_by_parts_check(const TimeScale& ts, const GridFunction& f,
                                   const GridFunction& g, double s, double t,
                                   const QuadratureConfig& cfg) {
    const CumulativeFunction F(ts, f, s, t, cfg);

    GridFunction fg_sigma(
        [&ts, &f, &g](double eta) { return f.value(eta) * g.value(ts.sigma(eta)); },
        [&f, &g](double eta) { return f.dense_value(eta) * g.dense_value(eta); });
    const Complex lhs = delta_integral(ts, fg_sigma, s, t, cfg);

    GridFunction F_gdelta([&ts, &F, &g, &cfg](double eta) {
        return F(eta) * delta_derivative(ts, g, eta, cfg);
    });
    const Complex boundary = F(t) * g.value(t);  // F(s) = 0
    const Complex rhs = boundary - delta_integral(ts, F_gdelta, s, t, cfg);
    return lhs - rhs;
}

}  // namespace tsc
