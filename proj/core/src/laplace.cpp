#include "tsc/laplace.hpp"

#include <cmath>
#include <memory>

namespace tsc {

RegionSpec convergence_region(const TimeScale& ts, double s, double growth) {
    return RegionSpec{ts.min_graininess(s), growth};
}

TransformResult product_transform(const TimeScale& ts, const GridFunction& f, double s,
                                  const std::vector<std::pair<Complex, int>>& modulators,
                                  double growth, const QuadratureConfig& cfg, bool force) {
    if (!ts.unbounded_above()) {
        throw UnboundedWindowOnly("laplace: transforms need sup T = infinity");
    }
    for (const auto& [z, p] : modulators) {
        if (p != 0 && !is_regressive(ts, s, z)) {
            throw NotRegressive("laplace: modulator is not regressive on [s, infinity)");
        }
    }

    // Combine the modulators into one point of the Hilger plane at h = mu_*
    // to test the sufficient region and derive the decay rate.
    const double h = ts.min_graininess(s);
    Complex combined = 0.0;
    for (const auto& [z, p] : modulators) {
        combined = cplus(h, combined, cdot(h, Complex(static_cast<double>(p)), z));
    }
    const RegionSpec region{h, growth};
    const bool inside = in_region(region, combined);
    if (!inside && !force) {
        throw OutsideRegion("laplace: evaluation point is outside C_{mu_*}(growth)");
    }

    double rate = hilger_re(h, combined) - growth;
    if (!(rate > 0)) rate = 1e-3;  // forced evaluation: probe with a nominal rate

    std::vector<ExpProduct::Factor> factors;
    factors.reserve(modulators.size());
    for (const auto& [z, p] : modulators) {
        if (p != 0) factors.push_back({z, -p});
    }
    auto walker = std::make_shared<ExpProduct>(ts, s, std::move(factors), cfg);

    GridFunction integrand(
        [&f, walker](double eta) { return f.value(eta) * walker->at_sigma(eta); },
        [&f, walker](double eta) { return f.dense_value(eta) * walker->at(eta); });

    const DecayEnvelope envelope{std::max(1.0, std::abs(f.value(s))), rate};
    return improper_delta_integral(ts, integrand, s, cfg, envelope, /*allow_partial=*/force);
}

TransformResult laplace(const TimeScale& ts, const GridFunction& f, double s, Complex z,
                        double growth, const QuadratureConfig& cfg, bool force) {
    return product_transform(ts, f, s, {{z, 1}}, growth, cfg, force);
}

TransformResult modulated_laplace(const TimeScale& ts, const GridFunction& f, double s, Complex z,
                                  Complex c, double growth, const QuadratureConfig& cfg,
                                  bool force) {
    return product_transform(ts, f, s, {{z, 1}, {c, 1}}, growth, cfg, force);
}

}  // namespace tsc
