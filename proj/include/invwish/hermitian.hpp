#pragma once

#include <Eigen/Dense>
#include <string>

namespace invwish {

/// Ordered real eigenvalue vector, weakly decreasing.
class Spectrum {
public:
    explicit Spectrum(Eigen::VectorXd values, bool positive = false);

    int dim() const { return static_cast<int>(values_.size()); }
    const Eigen::VectorXd& values() const { return values_; }
    double operator[](int i) const { return values_[i]; }
    bool positive() const { return positive_; }

    double sum() const { return values_.sum(); }

private:
    Eigen::VectorXd values_;
    bool positive_;
};

/// Dense complex Hermitian matrix. Construction checks the asymmetry
/// residual against an absolute 1e-12 tolerance, then symmetrizes
/// exactly, so downstream code can rely on A = A^* to the bit.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const Eigen::MatrixXcd& m, double asym_tol = 1e-12);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }

    double trace() const { return m_.trace().real(); }
    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }

    /// Debug dump: {"dim": N, "re": [...], "im": [...]} with row-major
    /// entry arrays, floats at 17 significant digits.
    std::string to_debug_json() const;

private:
    Eigen::MatrixXcd m_;
};

struct EigenDecomposition {
    Spectrum spectrum;
    Eigen::MatrixXcd basis; // unitary, columns are eigenvectors matching spectrum order
};

/// Full eigen-decomposition with eigenvalues sorted weakly decreasing.
/// Deterministic for fixed input; throws std::runtime_error on solver
/// non-convergence (reporting the matrix dimension).
EigenDecomposition eigen_decompose(const HermitianMatrix& a);

/// Eigenvalues only, sorted weakly decreasing.
Spectrum eigenvalues_of(const HermitianMatrix& a);

/// Top-left m x m corner.
HermitianMatrix corner(const HermitianMatrix& a, int m);

/// U^* A U for unitary U (checked to 1e-10), re-symmetrized.
HermitianMatrix conjugate(const HermitianMatrix& a, const Eigen::MatrixXcd& u);

/// max |U^*U - I|; used both for input validation and in tests.
double unitarity_residual(const Eigen::MatrixXcd& u);

} // namespace invwish
