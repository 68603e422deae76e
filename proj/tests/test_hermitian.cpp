#include <doctest.h>

#include <Eigen/Dense>
#include <complex>

#include "invwish/ensembles.hpp"
#include "invwish/hermitian.hpp"
#include "invwish/rng.hpp"

using namespace invwish;
using Cplx = std::complex<double>;

namespace {

HermitianMatrix random_hermitian(RngStream& rng, int n, double scale = 1.0) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = scale * rng.next_complex_gaussian();
    return HermitianMatrix(0.5 * (g + g.adjoint()).eval());
}

} // namespace

TEST_CASE("eigen_decompose: analytic 2x2 and identity") {
    Eigen::MatrixXcd a(2, 2);
    a << 2, 1, 1, 2;
    const EigenDecomposition ed = eigen_decompose(HermitianMatrix(a));
    CHECK(ed.spectrum[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ed.spectrum[1] == doctest::Approx(1.0).epsilon(1e-12));

    const HermitianMatrix id5(Eigen::MatrixXcd::Identity(5, 5));
    const EigenDecomposition e5 = eigen_decompose(id5);
    for (int i = 0; i < 5; ++i) CHECK(e5.spectrum[i] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(unitarity_residual(e5.basis) <= 1e-10);
}

TEST_CASE("eigen_decompose: reconstruction, unitarity, trace identities on seeded matrices") {
    RngStream rng(2024, 0);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 63); // dims 2..64
        const HermitianMatrix a = random_hermitian(rng, n);
        const EigenDecomposition ed = eigen_decompose(a);
        CHECK(unitarity_residual(ed.basis) <= 1e-10);
        const Eigen::MatrixXcd rec = ed.basis *
                                     ed.spectrum.values().cast<Cplx>().asDiagonal() *
                                     ed.basis.adjoint();
        const double res = (rec - a.matrix()).cwiseAbs().maxCoeff();
        CHECK(res <= 1e-9 * std::max(1.0, a.max_abs()));
        for (int i = 0; i + 1 < n; ++i) CHECK(ed.spectrum[i] >= ed.spectrum[i + 1]);
        const double tol = 1e-9 * n * std::max(1.0, a.max_abs());
        CHECK(std::abs(ed.spectrum.values().sum() - a.trace()) <= tol);
        const double tr2 = (a.matrix() * a.matrix()).trace().real();
        CHECK(std::abs(ed.spectrum.values().squaredNorm() - tr2) <=
              tol * std::max(1.0, a.max_abs()) * n);
    }
}

TEST_CASE("eigen_decompose is deterministic") {
    RngStream r1(7, 3), r2(7, 3);
    const HermitianMatrix a = random_hermitian(r1, 12);
    const HermitianMatrix b = random_hermitian(r2, 12);
    const EigenDecomposition ea = eigen_decompose(a), eb = eigen_decompose(b);
    CHECK((ea.spectrum.values() - eb.spectrum.values()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ea.basis - eb.basis).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("corner: diag example, identity case, idempotence, range errors") {
    Eigen::MatrixXcd d = Eigen::Vector3cd(3, 2, 1).asDiagonal();
    const HermitianMatrix a(d);
    const HermitianMatrix c2 = corner(a, 2);
    CHECK(c2.dim() == 2);
    CHECK(c2.matrix()(0, 0).real() == 3.0);
    CHECK(c2.matrix()(1, 1).real() == 2.0);

    const HermitianMatrix full = corner(a, 3);
    CHECK((full.matrix() - a.matrix()).cwiseAbs().maxCoeff() == 0.0);

    RngStream rng(5, 1);
    const HermitianMatrix r = random_hermitian(rng, 7);
    const HermitianMatrix via = corner(corner(r, 5), 3);
    const HermitianMatrix direct = corner(r, 3);
    CHECK((via.matrix() - direct.matrix()).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(corner(a, 0), std::invalid_argument);
    CHECK_THROWS_AS(corner(a, 4), std::invalid_argument);
}

TEST_CASE("corner spectra satisfy Cauchy interlacing on positive-definite draws") {
    for (int rep = 0; rep < 100; ++rep) {
        RngStream rng(31, rep);
        const HermitianMatrix a = sample_wishart(rng, EnsembleParams(0.0, 6));
        const Spectrum lam = eigenvalues_of(a);
        const Spectrum mu = eigenvalues_of(corner(a, 5));
        const double slack = 1e-10 * std::max(1.0, a.max_abs());
        for (int i = 0; i < 5; ++i) {
            CHECK(lam[i] >= mu[i] - slack);
            CHECK(mu[i] >= lam[i + 1] - slack);
        }
    }
}

TEST_CASE("conjugate: identity cases, spectral invariance, errors") {
    RngStream rng(11, 0);
    const HermitianMatrix a = random_hermitian(rng, 6);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(6, 6);
    CHECK((conjugate(a, id).matrix() - a.matrix()).cwiseAbs().maxCoeff() <= 1e-15);

    const Eigen::MatrixXcd u = sample_haar_unitary(rng, 6);
    const HermitianMatrix i6(Eigen::MatrixXcd::Identity(6, 6));
    CHECK((conjugate(i6, u).matrix() - id).cwiseAbs().maxCoeff() <= 1e-12);

    const Spectrum before = eigenvalues_of(a);
    const Spectrum after = eigenvalues_of(conjugate(a, u));
    CHECK((before.values() - after.values()).cwiseAbs().maxCoeff() <= 1e-9);

    CHECK_THROWS_AS(conjugate(a, Eigen::MatrixXcd::Identity(4, 4)), std::invalid_argument);
    CHECK_THROWS_AS(conjugate(a, 2.0 * id), std::invalid_argument);
}

TEST_CASE("HermitianMatrix construction: symmetrization and rejection") {
    Eigen::MatrixXcd bad(2, 2);
    bad << Cplx(1, 0), Cplx(2, 0), Cplx(2.5, 0), Cplx(1, 0); // asymmetry 0.5
    CHECK_THROWS_AS(HermitianMatrix{bad}, std::invalid_argument);

    Eigen::MatrixXcd near(2, 2);
    near << Cplx(1, 1e-13), Cplx(0, 1), Cplx(0, -1), Cplx(2, 0);
    const HermitianMatrix h(near);
    CHECK(h.matrix()(0, 0).imag() == 0.0); // diagonal made exactly real
    CHECK((h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);

    CHECK(h.to_debug_json().find("\"dim\": 2") != std::string::npos);
}

TEST_CASE("Spectrum invariants") {
    Eigen::VectorXd up(2);
    up << 1.0, 2.0;
    CHECK_THROWS_AS(Spectrum{up}, std::invalid_argument);
    Eigen::VectorXd mixed(2);
    mixed << 1.0, -1.0;
    CHECK_THROWS_AS(Spectrum(mixed, true), std::invalid_argument);
    CHECK_NOTHROW(Spectrum(mixed, false));
}
