#pragma once

#include <Eigen/Dense>

#include "invwish/hermitian.hpp"
#include "invwish/rng.hpp"

namespace invwish {

struct EnsembleParams {
    double nu;
    int dim;

    EnsembleParams(double nu_, int dim_) : nu(nu_), dim(dim_) {
        if (!(nu > -1.0)) throw std::invalid_argument("EnsembleParams: nu must be > -1");
        if (dim < 1) throw std::invalid_argument("EnsembleParams: dim must be >= 1");
    }
};

/// rows x cols matrix of i.i.d. standard complex Gaussians, E|g|^2 = 1.
Eigen::MatrixXcd sample_ginibre(RngStream& rng, int rows, int cols);

/// Haar-distributed unitary via QR of a Ginibre matrix with the
/// R-diagonal phase correction.
Eigen::MatrixXcd sample_haar_unitary(RngStream& rng, int dim);

/// Complex Wishart Y with density det(Y)^nu e^{-Tr Y} on positive
/// matrices. Integer nu >= 0 uses Y = G G^* directly; other nu goes
/// through the spectral sampler plus an independent Haar conjugation.
HermitianMatrix sample_wishart(RngStream& rng, const EnsembleParams& params);

/// X = 2 Y^{-1}, density det(X)^{-nu-2N} e^{-2 Tr X^{-1}}. A draw with
/// condition number above 1e14 is resampled once, then reported.
HermitianMatrix sample_inverse_wishart(RngStream& rng, const EnsembleParams& params);

/// Laguerre eigenvalue ensemble prod x_i^nu e^{-x_i} Delta(x)^2 for any
/// real nu > -1, from the bidiagonal chi model.
Spectrum sample_laguerre_spectrum(RngStream& rng, const EnsembleParams& params);

/// Eigenvalue law of the inverse Wishart matrix: x_i = 2 / l_{N+1-i}
/// for a Laguerre draw l, reordered decreasing.
Spectrum sample_mu_spectrum(RngStream& rng, const EnsembleParams& params);

/// One step of the corner Markov kernel: eigenvalues of the top N x N
/// corner of U^* diag(x) U with U Haar on U(N+1). The output interlaces
/// the input (enforced within 1e-10 relative slack).
Spectrum sample_corner_given_spectrum(RngStream& rng, const Spectrum& x);

} // namespace invwish
