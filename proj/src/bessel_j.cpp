#include "invwish/bessel_j.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace invwish {

namespace {

constexpr double kSeriesCut = 12.0;

double series_j(double nu, double z) {
    // J_nu(z) = (z/2)^nu / Gamma(nu+1) * sum_k (-q)^k / (k! (nu+1)_k), q = z^2/4
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= -q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    const double log_pref = nu * std::log(0.5 * z) - std::lgamma(nu + 1.0);
    return std::exp(log_pref) * sum;
}

// Hankel asymptotic expansion, adequate for small orders and z > ~12.
double hankel_j(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    const double chi = z - (0.5 * nu + 0.25) * M_PI;
    double p = 1.0, q = 0.0;
    double a = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (8.0 * z * k);
        if (std::abs(a) >= prev) break; // asymptotic tail started to grow
        prev = std::abs(a);
        const int phase = k % 4;
        switch (phase) {
            case 0: p += a; break;
            case 1: q += a; break;
            case 2: p -= a; break;
            default: q -= a; break;
        }
        if (std::abs(a) < 1e-18) break;
    }
    return std::sqrt(2.0 / (M_PI * z)) * (std::cos(chi) * p - std::sin(chi) * q);
}

double recurrence_j(double nu, double z) {
    if (nu < 2.0) return hankel_j(nu, z); // small orders: expansion is direct
    const int m = static_cast<int>(std::floor(nu));
    const double frac = nu - m;
    if (nu <= 0.75 * z) {
        // forward in the order, stable below the turning point
        double jm1 = hankel_j(frac, z);
        double j = hankel_j(frac + 1.0, z);
        for (int k = 1; k < m; ++k) {
            const double jp1 = (2.0 * (frac + k) / z) * j - jm1;
            jm1 = j;
            j = jp1;
        }
        return j;
    }
    // Miller backward recurrence, normalized at the seed orders
    const int top = m + 40;
    double fp1 = 0.0;
    double f = 1e-30;
    double f_target = 0.0, f_seed0 = 0.0, f_seed1 = 0.0;
    for (int k = top; k >= 1; --k) {
        const double fm1 = (2.0 * (frac + k) / z) * f - fp1;
        fp1 = f;
        f = fm1;
        if (k - 1 == m) f_target = f;
        if (k - 1 == 1) f_seed1 = f;
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            fp1 *= 1e-250;
            f_target *= 1e-250;
            f_seed1 *= 1e-250;
        }
    }
    f_seed0 = f;
    const double j0 = hankel_j(frac, z);
    const double j1 = hankel_j(frac + 1.0, z);
    const double scale = (j0 * f_seed0 + j1 * f_seed1) / (f_seed0 * f_seed0 + f_seed1 * f_seed1);
    return scale * f_target;
}

} // namespace

double bessel_j(double nu, double z) {
    if (!(nu > -1.0)) throw std::invalid_argument("bessel_j: nu must be > -1");
    if (!(z >= 0.0)) throw std::invalid_argument("bessel_j: z must be >= 0");
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (z <= kSeriesCut) return series_j(nu, z);
    return recurrence_j(nu, z);
}

} // namespace invwish
