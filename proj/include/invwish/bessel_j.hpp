#pragma once

namespace invwish {

/// Bessel function of the first kind J_nu(z) for nu > -1, z >= 0.
///
/// Ascending power series for z <= 12; beyond that, Hankel asymptotic
/// expansions at the fractional seed orders followed by three-term
/// recurrence in the order (forward below the turning point, Miller's
/// backward normalization above it).
double bessel_j(double nu, double z);

} // namespace invwish
