#pragma once

#include <complex>

#include "tsc/timescale.hpp"

namespace tsc {

using Complex = std::complex<double>;

/// 1 + h*z magnitudes below this count as the removed point -1/h.
inline constexpr double kRegressiveTol = 1e-14;

/// Hilger real part: (|1+hz| - 1)/h, with the h -> 0 limit Re(z).
double hilger_re(double h, Complex z);

/// Hilger imaginary part: Arg(1+hz)/h with principal Arg, limit Im(z).
double hilger_im(double h, Complex z);

/// Cylinder transform Log(1+hz)/h (principal branch); identity at h = 0.
/// The image lies in the strip Im in (-pi/h, pi/h].
Complex cylinder(double h, Complex z);

// Circle operations on the h-plane. They degenerate to +, -, * at h = 0.
Complex cplus(double h, Complex z, Complex w);   // z + w + h z w
Complex cminus(double h, Complex z, Complex w);  // (z - w)/(1 + h w)
Complex cneg(double h, Complex z);               // cminus(h, 0, z)
Complex cdot(double h, Complex lam, Complex z);  // ((1+hz)^lam - 1)/h

/// Convergence region {z : Re_h(z) > lambda}.
struct RegionSpec {
    double h;
    double lambda;
};

bool in_region(const RegionSpec& region, Complex z);

/// True when 1 + z*mu(t) stays away from zero for every graininess value
/// attained on [s, inf)_T. Checked against the attainable mu set analytically,
/// not by sampling.
bool is_regressive(const TimeScale& ts, double s, Complex z);

/// True when 1 + z*mu(t) is real and positive over [s, inf)_T. For scales
/// whose graininess takes a positive value this forces Im(z) = 0 (within
/// 1e-12); an unbounded graininess supremum additionally forces z >= 0.
bool is_pos_regressive(const TimeScale& ts, double s, Complex z);

}  // namespace tsc
