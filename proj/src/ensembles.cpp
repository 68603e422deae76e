#include "invwish/ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace invwish {

namespace {

bool integer_nu(double nu) {
    return nu >= 0.0 && std::abs(nu - std::round(nu)) < 1e-12;
}

Eigen::VectorXd laguerre_spectrum_ascending(RngStream& rng, double nu, int N) {
    // Bidiagonal model: B lower bidiagonal with d_i^2 ~ Gamma(nu + N - i),
    // s_i^2 ~ Gamma(N - 1 - i); eigenvalues of B B^T follow the Laguerre
    // ensemble with weight x^nu e^{-x}.
    Eigen::VectorXd d(N), s(std::max(N - 1, 1));
    for (int i = 0; i < N; ++i) d[i] = std::sqrt(rng.next_gamma(nu + N - i));
    for (int i = 0; i + 1 < N; ++i) s[i] = std::sqrt(rng.next_gamma(static_cast<double>(N - 1 - i)));
    Eigen::VectorXd diag(N), sub(std::max(N - 1, 1));
    for (int i = 0; i < N; ++i) diag[i] = d[i] * d[i] + (i > 0 ? s[i - 1] * s[i - 1] : 0.0);
    for (int i = 0; i + 1 < N; ++i) sub[i] = d[i] * s[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(std::max(N - 1, 0)), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sample_laguerre_spectrum: tridiagonal eigensolver failed");
    return es.eigenvalues();
}

HermitianMatrix hermitize(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    return HermitianMatrix(h);
}

} // namespace

Eigen::MatrixXcd sample_ginibre(RngStream& rng, int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("sample_ginibre: rows, cols must be >= 1");
    Eigen::MatrixXcd g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = rng.next_complex_gaussian();
    return g;
}

Eigen::MatrixXcd sample_haar_unitary(RngStream& rng, int dim) {
    if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dim must be >= 1");
    const Eigen::MatrixXcd g = sample_ginibre(rng, dim, dim);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const std::complex<double> rjj = r(j, j);
        const double mag = std::abs(rjj);
        q.col(j) *= mag > 0.0 ? rjj / mag : 1.0;
    }
    return q;
}

HermitianMatrix sample_wishart(RngStream& rng, const EnsembleParams& params) {
    const int N = params.dim;
    if (integer_nu(params.nu)) {
        const int cols = N + static_cast<int>(std::lround(params.nu));
        const Eigen::MatrixXcd g = sample_ginibre(rng, N, cols);
        return hermitize(g * g.adjoint());
    }
    const Eigen::VectorXd l = laguerre_spectrum_ascending(rng, params.nu, N);
    const Eigen::MatrixXcd u = sample_haar_unitary(rng, N);
    return hermitize(u * l.cast<std::complex<double>>().asDiagonal() * u.adjoint());
}

HermitianMatrix sample_inverse_wishart(RngStream& rng, const EnsembleParams& params) {
    const int N = params.dim;
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (integer_nu(params.nu)) {
            const HermitianMatrix y = sample_wishart(rng, params);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(y.matrix(), Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues()[0], hi = es.eigenvalues()[N - 1];
            if (!(lo > 0.0) || hi / lo > 1e14) continue;
            const Eigen::MatrixXcd inv =
                y.matrix().llt().solve(Eigen::MatrixXcd::Identity(N, N));
            return hermitize(2.0 * inv);
        }
        const Eigen::VectorXd l = laguerre_spectrum_ascending(rng, params.nu, N);
        if (!(l[0] > 0.0) || l[N - 1] / l[0] > 1e14) continue;
        Eigen::VectorXd x(N);
        for (int i = 0; i < N; ++i) x[i] = 2.0 / l[i];
        const Eigen::MatrixXcd u = sample_haar_unitary(rng, N);
        return hermitize(u * x.cast<std::complex<double>>().asDiagonal() * u.adjoint());
    }
    throw std::runtime_error(
        "sample_inverse_wishart: two draws in a row exceeded condition number 1e14");
}

Spectrum sample_laguerre_spectrum(RngStream& rng, const EnsembleParams& params) {
    const Eigen::VectorXd asc = laguerre_spectrum_ascending(rng, params.nu, params.dim);
    return Spectrum(asc.reverse(), /*positive=*/true);
}

Spectrum sample_mu_spectrum(RngStream& rng, const EnsembleParams& params) {
    const Eigen::VectorXd asc = laguerre_spectrum_ascending(rng, params.nu, params.dim);
    Eigen::VectorXd x(params.dim);
    for (int i = 0; i < params.dim; ++i) x[i] = 2.0 / asc[i]; // smallest l -> largest x
    return Spectrum(x, /*positive=*/true);
}

Spectrum sample_corner_given_spectrum(RngStream& rng, const Spectrum& x) {
    const int n1 = x.dim();
    if (n1 < 2) throw std::invalid_argument("sample_corner_given_spectrum: need dim >= 2");
    const Eigen::MatrixXcd u = sample_haar_unitary(rng, n1);
    const Eigen::MatrixXcd m =
        u.adjoint() * x.values().cast<std::complex<double>>().asDiagonal() * u;
    const HermitianMatrix h = hermitize(m);
    Eigen::VectorXd y = eigenvalues_of(corner(h, n1 - 1)).values();
    const double slack = 1e-10 * std::max(1.0, x.values().cwiseAbs().maxCoeff());
    for (int i = 0; i < n1 - 1; ++i) {
        if (y[i] > x[i] + slack || y[i] < x[i + 1] - slack)
            throw std::runtime_error("sample_corner_given_spectrum: interlacing violated");
        y[i] = std::min(std::max(y[i], x[i + 1]), x[i]);
    }
    return Spectrum(y);
}

} // namespace invwish
