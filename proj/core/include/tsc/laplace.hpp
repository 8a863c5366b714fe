#pragma once

#include "tsc/exponential.hpp"

namespace tsc {

/// The sufficient convergence region C_{mu_*(s)}(growth) for a determining
/// function with declared growth bound.
RegionSpec convergence_region(const TimeScale& ts, double s, double growth);

/// Laplace transform on the time scale: improper Delta-integral of
/// f(eta) e_{(-)z}(sigma(eta), s) from s, truncated on a doubling schedule
/// anchored at tail points, with an a-posteriori exponential tail estimate.
/// Outside the sufficient region the call throws OutsideRegion unless forced,
/// in which case the result may come back with converged = false.
TransformResult laplace(const TimeScale& ts, const GridFunction& f, double s, Complex z,
                        double growth, const QuadratureConfig& cfg = {}, bool force = false);

/// Transform of f modulated by e_{(-)c}(sigma(.), s), evaluated at z.
TransformResult modulated_laplace(const TimeScale& ts, const GridFunction& f, double s, Complex z,
                                  Complex c, double growth, const QuadratureConfig& cfg = {},
                                  bool force = false);

/// Shared engine: transform of f(eta) * prod_i e_{(-)z_i}(sigma(eta), s)^{p_i}.
/// `modulators` lists (z_i, p_i); laplace is the single-factor case.
TransformResult product_transform(const TimeScale& ts, const GridFunction& f, double s,
                                  const std::vector<std::pair<Complex, int>>& modulators,
                                  double growth, const QuadratureConfig& cfg, bool force = false);

}  // namespace tsc
