#pragma once

namespace lnayield {

/// Standard normal CDF, via erfc so both tails keep full relative precision.
double normal_cdf(double z);

/// z such that normal_cdf(z) == p. Rational starting point refined by Halley
/// steps against erfc; absolute error is well below 1e-9 over (1e-300, 1).
/// Throws ValidationError for p outside the open interval (0, 1).
double inverse_normal_cdf(double p);

}  // namespace lnayield
