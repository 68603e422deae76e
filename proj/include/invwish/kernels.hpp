#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace invwish {

/// Christoffel-Darboux kernel of the Laguerre weight x^nu e^-x, built
/// from orthonormal wavefunctions evaluated by a scaled recurrence, so
/// it stays finite up to N ~ 500. The diagonal (|x-y| <= 1e-8 max(x,1))
/// switches to the wavefunction square sum.
double laguerre_kernel(double nu, int N, double x, double y);
double laguerre_kernel_diag(double nu, int N, double x);

/// Kernel of the 1/N-scaled spectrum: (2/(N x y)) L_N(2/(Nx), 2/(Ny)).
double rescaled_kernel(double nu, int N, double x, double y);
double rescaled_kernel_diag(double nu, int N, double x);

/// Hard-edge Bessel kernel
///   (sqrt(x) J_{nu+1}(sqrt x) J_nu(sqrt y) - sqrt(y) J_{nu+1}(sqrt y) J_nu(sqrt x)) / (2(x-y)),
/// analytic diagonal on |x-y| <= 1e-8 max(x,1).
double bessel_kernel(double nu, double x, double y);
double bessel_kernel_diag(double nu, double x);

/// Large-N limit of the rescaled kernel: (8/(xy)) J-kernel(8/x, 8/y).
double limit_kernel(double nu, double x, double y);
double limit_kernel_diag(double nu, double x);

/// int_0^delta x K_N(x,x) dx, computed after the substitution x = 2/(Nu)
/// which moves the integral to the smooth Laguerre side. Absolute
/// tolerance 1e-8; throws std::runtime_error on non-convergence with the
/// achieved estimate in the message.
double tail_integral_K(double nu, int N, double delta);

/// Oracle route: int_{R/N}^inf (1/N) L_N(y,y)/y dy directly on the
/// Laguerre diagonal.
double tail_integral_laguerre(double nu, int N, double R);

/// int_0^inf of the kernel diagonal (equals N for a rank-N projection);
/// used by trace tests. `laguerre_side` picks which diagonal to integrate.
double kernel_trace_laguerre(double nu, int N, double abs_tol = 1e-9);
double kernel_trace_rescaled(double nu, int N, double abs_tol = 1e-9);

/// Kernel family selector used by the CLI and grid tooling.
struct KernelSpec {
    enum class Family { laguerre, rescaled, bessel_limit, k_infinity };
    Family family;
    double nu;
    int N = 0; // required for laguerre / rescaled

    double operator()(double x, double y) const;
    double diag(double x) const;
};

/// Strictly increasing positive evaluation grid.
struct Grid {
    Eigen::VectorXd points;
    explicit Grid(Eigen::VectorXd pts);
};

} // namespace invwish
