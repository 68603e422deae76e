#include "invwish/hermitian.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace invwish {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Spectrum::Spectrum(Eigen::VectorXd values, bool positive)
    : values_(std::move(values)), positive_(positive) {
    if (values_.size() == 0) throw std::invalid_argument("Spectrum: empty value vector");
    for (int i = 0; i + 1 < values_.size(); ++i) {
        if (values_[i] < values_[i + 1])
            throw std::invalid_argument("Spectrum: values must be weakly decreasing");
    }
    if (positive_ && !(values_[values_.size() - 1] > 0.0))
        throw std::invalid_argument("Spectrum: positive flag set but smallest value is not > 0");
}

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& m, double asym_tol) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw std::invalid_argument("HermitianMatrix: matrix must be square and nonempty");
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > asym_tol)
        throw std::invalid_argument("HermitianMatrix: asymmetry " + g17(asym) +
                                    " exceeds tolerance " + g17(asym_tol));
    m_ = 0.5 * (m + m.adjoint());
    // exact-zero imaginary diagonal
    for (int i = 0; i < m_.rows(); ++i) m_(i, i) = std::complex<double>(m_(i, i).real(), 0.0);
}

std::string HermitianMatrix::to_debug_json() const {
    std::ostringstream os;
    os << "{\"dim\": " << dim() << ", \"re\": [";
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            os << (i == 0 && j == 0 ? "" : ", ") << g17(m_(i, j).real());
    os << "], \"im\": [";
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            os << (i == 0 && j == 0 ? "" : ", ") << g17(m_(i, j).imag());
    os << "]}";
    return os.str();
}

double unitarity_residual(const Eigen::MatrixXcd& u) {
    const int n = static_cast<int>(u.rows());
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

EigenDecomposition eigen_decompose(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigen_decompose: no convergence at dim " +
                                 std::to_string(a.dim()) + ", |A|_max = " + g17(a.max_abs()));
    // solver returns ascending order; reverse to the weakly decreasing convention
    Eigen::VectorXd vals = es.eigenvalues().reverse();
    Eigen::MatrixXcd vecs = es.eigenvectors().rowwise().reverse();
    return EigenDecomposition{Spectrum(std::move(vals)), std::move(vecs)};
}

Spectrum eigenvalues_of(const HermitianMatrix& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues_of: no convergence at dim " +
                                 std::to_string(a.dim()) + ", |A|_max = " + g17(a.max_abs()));
    return Spectrum(es.eigenvalues().reverse());
}

HermitianMatrix corner(const HermitianMatrix& a, int m) {
    if (m < 1 || m > a.dim())
        throw std::invalid_argument("corner: m = " + std::to_string(m) +
                                    " out of range [1, " + std::to_string(a.dim()) + "]");
    return HermitianMatrix(a.matrix().topLeftCorner(m, m));
}

HermitianMatrix conjugate(const HermitianMatrix& a, const Eigen::MatrixXcd& u) {
    if (u.rows() != u.cols() || u.rows() != a.dim())
        throw std::invalid_argument("conjugate: dimension mismatch");
    const double res = unitarity_residual(u);
    if (res > 1e-10)
        throw std::invalid_argument("conjugate: matrix is not unitary, residual " + g17(res));
    Eigen::MatrixXcd b = u.adjoint() * a.matrix() * u;
    b = 0.5 * (b + b.adjoint()).eval();
    return HermitianMatrix(b);
}

} // namespace invwish
