#pragma once

#include <Eigen/Dense>

namespace invwish {

/// Monic orthogonal polynomial system given by its three-term recurrence
///   p_{k+1}(x) = (x - a[k]) p_k(x) - b[k] p_{k-1}(x),  p_0 = 1, p_{-1} = 0.
/// b[0] is unused. norm_sq[k] = <p_k, p_k> under the family weight.
struct MonicOPS {
    enum class Family { laguerre, bessel };

    Family family;
    double nu;
    int weight_dim;  // N for the bessel family, 0 for laguerre
    int degree_max;  // highest constructible degree
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd norm_sq;

    double eval(int n, double x) const;
    /// Fills out[0..n] with p_0(x)..p_n(x).
    void eval_all(int n, double x, double* out) const;
};

double laguerre_weight(double nu, double x);
/// w_N^nu(x) = x^(-nu-2N) exp(-2/x) on (0, inf).
double bessel_weight(double nu, int N, double x);

MonicOPS laguerre_monic(double nu, int degree_max);
double laguerre_monic_eval(double nu, int n, double x);
/// n! Gamma(n+nu+1), evaluated in the log domain; throws on overflow.
double laguerre_norm_sq(double nu, int n);

/// k-th moment of w_N^nu: 2^(k-nu-2N+1) Gamma(nu+2N-1-k), defined for
/// integer k with k < nu + 2N - 1.
double bessel_weight_moment(double nu, int N, int k);

/// Monic orthogonal polynomials of degree 0..N-1 for the weight w_N^nu,
/// built from the moment Hankel matrix by a Cholesky factorization in
/// double-double arithmetic (the moment map is severely ill-conditioned).
/// Throws std::runtime_error if a Hankel pivot loses positivity,
/// reporting the degree reached. Intended range N <= 20.
MonicOPS bessel_monic_construct(double nu, int N);

/// Closed-form norm of p_n(.; nu, N); strictly positive for n <= N-1.
double bessel_norm_sq(double nu, int N, int n);

/// Constant c in d/dx[w_N^nu p_n(.;nu,N)] = c w_{N+1}^nu p_{n+1}(.;nu,N+1).
/// The Pochhammer ratio telescopes to n - nu - 2N.
double backward_shift_constant(double nu, int N, int n);

/// Estimate of the same constant from the identity itself at one point x:
/// central finite difference of w_N^nu p_n divided by w_{N+1}^nu p_{n+1}.
double backward_shift_fit_constant(const MonicOPS& ops_n, const MonicOPS& ops_n1, int n, double x);
double backward_shift_fit_constant(double nu, int N, int n, double x);

/// |LHS - RHS| / (|RHS| + floor) of the derivative identity at x, with
/// LHS a central finite difference (h = 1e-6 max(1,x)). The floor is
/// 1e-2 times the local derivative scale of w_N p_n, so the residual
/// stays meaningful at joint zeros of both sides.
double backward_shift_residual(const MonicOPS& ops_n, const MonicOPS& ops_n1, int n, double x);
double backward_shift_residual(double nu, int N, int n, double x);

/// Recurrence coefficient table as CSV with header k,a_k,b_k.
std::string ops_recurrence_csv(const MonicOPS& ops);

/// Gram matrix <p_m, p_n> for m, n = 0..d_max under the family weight,
/// computed by composite quadrature with panel doubling until the
/// normalized entries stabilize. Independent of the closed-form norms;
/// this is the oracle for orthogonality and norm checks.
Eigen::MatrixXd ops_gram(const MonicOPS& ops, int d_max, double rel_tol = 1e-11);

} // namespace invwish
