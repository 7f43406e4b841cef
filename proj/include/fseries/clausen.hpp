#pragma once

#include "fseries/rational.hpp"

namespace fseries::clausen {

/// Cl2(theta) = sum_{n>=1} sin(n theta)/n^2, any real theta.
/// Absolute accuracy ~1e-14 (validated against long direct sums in tests).
double cl2(double theta);

/// Cl2(2 pi f) for f in [0,1].
double cl2_frac(double f);

/// B2({f}) = f^2 - f + 1/6: closed form of (1/pi^2) sum cos(2 pi n f)/n^2.
inline double b2_frac(double f) { return (f - 1.0) * f + 1.0 / 6.0; }

/// Cl2(theta)/theta = 1 - log(theta) + S((theta/2pi)^2) for theta in (0, 1.3*pi).
/// The caller supplies log(theta) so it can come from exact arithmetic when
/// theta itself underflows.
double cl2_over_theta(double theta, double log_theta);

/// Stable slope [Cl2(2 pi (fx+df)) - Cl2(2 pi fx)] / (2 pi df) for fx and
/// fx+df in [0,1]. Every term carries an explicit df factor, so the result
/// stays meaningful when |df| is far below the double spacing around fx.
/// exact_fx/exact_fy supply the exact fractional parts; they are consulted
/// only when a point sits closer to 0 or 1 than doubles can represent.
double cl2_frac_slope(double fx, double df, const BigRat* exact_fx = nullptr,
                      const BigRat* exact_fy = nullptr);

}  // namespace fseries::clausen
