#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "invwish/hermitian.hpp"
#include "invwish/stats.hpp"

namespace invwish {

/// Point of the ergodic parameter space: decreasing nonnegative alpha
/// lists (zeros trimmed from storage), gamma1, and delta with
/// sum(alpha+^2) + sum(alpha-^2) <= delta. gamma2 is the deficit.
struct OmegaPoint {
    Eigen::VectorXd alpha_plus;
    Eigen::VectorXd alpha_minus;
    double gamma1 = 0.0;
    double delta = 0.0;

    OmegaPoint() = default;
    OmegaPoint(Eigen::VectorXd ap, Eigen::VectorXd am, double g1, double d);

    double alpha_sq_sum() const;
    double gamma2() const { return delta - alpha_sq_sum(); }
};

/// Scaled-corner parameters of a dim-N spectrum:
/// alpha+_i = max(lambda_i, 0)/N, alpha-_i = max(-lambda_{N+1-i}, 0)/N,
/// gamma1 = Tr/N, delta = Tr^2-sum/N^2. At finite N, delta equals the
/// alpha square sum exactly, so gamma2() == 0.
OmegaPoint extract_omega(const Spectrum& spectrum);

struct CornerTrajectory {
    std::vector<int> dims;
    std::vector<OmegaPoint> points;
};

/// extract_omega along the eigenvalues of the top corners of one matrix.
CornerTrajectory corner_trajectory(const HermitianMatrix& x, const std::vector<int>& dims);

/// Characteristic function of the ergodic measure at omega:
/// exp(i gamma1 x - gamma2 x^2/2) prod e^{-i a+ x}/(1 - i a+ x) prod e^{i a- x}/(1 + i a- x).
/// truncation < 0 means "all stored alphas"; otherwise it must cover them.
std::complex<double> evaluate_F_omega(const OmegaPoint& omega, double x, int truncation = -1);

/// Diagnostics over a batch of trajectories sharing dims:
///  - top-mass concentration of delta at the largest dim (k_top terms);
///  - the DPP first-moment identity: mean of sum{alpha < delta_level}
///    against the tail quadrature, within 3 standard errors, at every dim;
///  - shrinking mean absolute successive difference of gamma1 across dims.
std::vector<TestReport> gamma_diagnostics(const std::vector<CornerTrajectory>& batch, int k_top,
                                          double nu, double delta_level,
                                          std::uint64_t seed = 0);

struct DecompositionRow {
    double r;
    std::complex<double> empirical;
    std::complex<double> predicted;
    double band; // 3(SE_A + SE_B) + bias allowance
    bool pass;
};

/// Integrated ergodic-decomposition cross-check on the (1,1) entry:
/// empirical mean of e^{i r X_11} over fresh draws against the mean of
/// F_omega-hat(r) over independent spectra, |A - B| within
/// 3 (SE_A + SE_B) + bias_allowance at every r.
TestReport decomposition_check(double nu, int N, long samples, const std::vector<double>& r_grid,
                               std::uint64_t seed, int threads = 1,
                               std::vector<DecompositionRow>* rows_out = nullptr,
                               double bias_allowance = 0.05, double alpha_scale = 1.0);

} // namespace invwish
