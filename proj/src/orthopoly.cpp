#include "invwish/orthopoly.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "invwish/dd.hpp"
#include "invwish/quadrature.hpp"

namespace invwish {

double MonicOPS::eval(int n, double x) const {
    if (n < 0 || n > degree_max)
        throw std::invalid_argument("MonicOPS::eval: degree " + std::to_string(n) +
                                    " outside [0, " + std::to_string(degree_max) + "]");
    double pm1 = 0.0, p = 1.0;
    for (int k = 0; k < n; ++k) {
        const double pp = (x - a[k]) * p - b[k] * pm1;
        pm1 = p;
        p = pp;
    }
    return p;
}

void MonicOPS::eval_all(int n, double x, double* out) const {
    if (n < 0 || n > degree_max)
        throw std::invalid_argument("MonicOPS::eval_all: degree out of range");
    double pm1 = 0.0, p = 1.0;
    out[0] = 1.0;
    for (int k = 0; k < n; ++k) {
        const double pp = (x - a[k]) * p - b[k] * pm1;
        pm1 = p;
        p = pp;
        out[k + 1] = p;
    }
}

double laguerre_weight(double nu, double x) {
    if (x <= 0.0) return 0.0;
    return std::exp(nu * std::log(x) - x);
}

double bessel_weight(double nu, int N, double x) {
    if (x <= 0.0) return 0.0;
    return std::exp((-nu - 2.0 * N) * std::log(x) - 2.0 / x);
}

MonicOPS laguerre_monic(double nu, int degree_max) {
    if (!(nu > -1.0)) throw std::invalid_argument("laguerre_monic: nu must be > -1");
    if (degree_max < 0) throw std::invalid_argument("laguerre_monic: degree_max must be >= 0");
    MonicOPS ops;
    ops.family = MonicOPS::Family::laguerre;
    ops.nu = nu;
    ops.weight_dim = 0;
    ops.degree_max = degree_max;
    ops.a.resize(std::max(degree_max, 1));
    ops.b.resize(degree_max + 1);
    for (int k = 0; k < degree_max; ++k) ops.a[k] = 2.0 * k + nu + 1.0;
    for (int k = 0; k <= degree_max; ++k) ops.b[k] = k * (k + nu);
    ops.norm_sq.resize(degree_max + 1);
    for (int n = 0; n <= degree_max; ++n) ops.norm_sq[n] = laguerre_norm_sq(nu, n);
    return ops;
}

double laguerre_monic_eval(double nu, int n, double x) {
    if (!(nu > -1.0)) throw std::invalid_argument("laguerre_monic_eval: nu must be > -1");
    if (n < 0) throw std::invalid_argument("laguerre_monic_eval: n must be >= 0");
    double pm1 = 0.0, p = 1.0;
    for (int k = 0; k < n; ++k) {
        const double pp = (x - (2.0 * k + nu + 1.0)) * p - k * (k + nu) * pm1;
        pm1 = p;
        p = pp;
    }
    return p;
}

double laguerre_norm_sq(double nu, int n) {
    if (!(nu > -1.0)) throw std::invalid_argument("laguerre_norm_sq: nu must be > -1");
    if (n < 0) throw std::invalid_argument("laguerre_norm_sq: n must be >= 0");
    const double lg = std::lgamma(n + 1.0) + std::lgamma(n + nu + 1.0);
    if (lg > 709.0)
        throw std::runtime_error("laguerre_norm_sq: overflow at n = " + std::to_string(n) +
                                 ", nu = " + std::to_string(nu));
    return std::exp(lg);
}

double bessel_weight_moment(double nu, int N, int k) {
    if (!(nu > -1.0) || N < 1) throw std::invalid_argument("bessel_weight_moment: need nu > -1, N >= 1");
    if (k < 0 || !(k < nu + 2.0 * N - 1.0))
        throw std::invalid_argument("bessel_weight_moment: k = " + std::to_string(k) +
                                    " outside the integrable range [0, nu+2N-1)");
    return std::exp((k - nu - 2.0 * N + 1.0) * M_LN2 + std::lgamma(nu + 2.0 * N - 1.0 - k));
}

MonicOPS bessel_monic_construct(double nu, int N) {
    if (!(nu > -1.0) || N < 1) throw std::invalid_argument("bessel_monic_construct: need nu > -1, N >= 1");
    const double A = nu + 2.0 * N;

    // normalized moments mhat_k = m_k / m_0 as an exact-ratio product chain
    const int n_mom = 2 * N - 1;
    std::vector<DD> mhat(n_mom);
    mhat[0] = DD(1.0);
    for (int k = 1; k < n_mom; ++k) mhat[k] = mhat[k - 1] * (DD(2.0) / DD(A - 1.0 - k));

    // Cholesky H = R^T R of the Hankel matrix H_ij = mhat_{i+j}
    std::vector<std::vector<DD>> R(N, std::vector<DD>(N));
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i <= j; ++i) {
            DD s = mhat[i + j];
            for (int k = 0; k < i; ++k) s = s - R[k][i] * R[k][j];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::runtime_error(
                        "bessel_monic_construct: Hankel positivity lost at degree " +
                        std::to_string(j) + " (nu = " + std::to_string(nu) +
                        ", N = " + std::to_string(N) + ")");
                R[i][j] = sqrt(s);
            } else {
                R[i][j] = s / R[i][i];
            }
        }
    }

    MonicOPS ops;
    ops.family = MonicOPS::Family::bessel;
    ops.nu = nu;
    ops.weight_dim = N;
    ops.degree_max = N - 1;
    ops.a.setZero(std::max(N - 1, 1));
    ops.b.setZero(N);
    for (int k = 0; k + 1 <= N - 1; ++k) {
        DD ak = R[k][k + 1] / R[k][k];
        if (k > 0) ak = ak - R[k - 1][k] / R[k - 1][k - 1];
        ops.a[k] = static_cast<double>(ak);
    }
    for (int k = 1; k <= N - 1; ++k) {
        const DD ratio = R[k][k] / R[k - 1][k - 1];
        ops.b[k] = static_cast<double>(ratio * ratio);
        if (!(ops.b[k] > 0.0))
            throw std::runtime_error("bessel_monic_construct: nonpositive recurrence b at k = " +
                                     std::to_string(k));
    }
    const double m0 = bessel_weight_moment(nu, N, 0);
    ops.norm_sq.resize(N);
    for (int k = 0; k < N; ++k)
        ops.norm_sq[k] = static_cast<double>(R[k][k] * R[k][k]) * m0;
    return ops;
}

double bessel_norm_sq(double nu, int N, int n) {
    if (!(nu > -1.0) || N < 1) throw std::invalid_argument("bessel_norm_sq: need nu > -1, N >= 1");
    if (n < 0 || n > N - 1)
        throw std::invalid_argument("bessel_norm_sq: n = " + std::to_string(n) +
                                    " outside [0, N-1]");
    const double A = nu + 2.0 * N;
    double poch = 1.0; // (n - nu - 2N + 1)_n
    for (int i = 1; i <= n; ++i) poch *= n - A + i;
    const double tail = 2.0 * n - A + 1.0; // negative throughout the valid range
    const double log_mag = (2.0 * n - A + 1.0) * M_LN2 + std::lgamma(A - n) + std::lgamma(n + 1.0);
    return -std::exp(log_mag) / (poch * poch * tail);
}

double backward_shift_constant(double nu, int N, int n) {
    return n - nu - 2.0 * N;
}

double backward_shift_fit_constant(const MonicOPS& ops_n, const MonicOPS& ops_n1, int n, double x) {
    const double nu = ops_n.nu;
    const int N = ops_n.weight_dim;
    const double h = 1e-6 * std::max(1.0, x);
    const auto g = [&](double t) { return bessel_weight(nu, N, t) * ops_n.eval(n, t); };
    const double fd = (g(x + h) - g(x - h)) / (2.0 * h);
    const double denom = bessel_weight(nu, N + 1, x) * ops_n1.eval(n + 1, x);
    return fd / denom;
}

double backward_shift_fit_constant(double nu, int N, int n, double x) {
    const MonicOPS ops_n = bessel_monic_construct(nu, N);
    const MonicOPS ops_n1 = bessel_monic_construct(nu, N + 1);
    return backward_shift_fit_constant(ops_n, ops_n1, n, x);
}

double backward_shift_residual(const MonicOPS& ops_n, const MonicOPS& ops_n1, int n, double x) {
    const double nu = ops_n.nu;
    const int N = ops_n.weight_dim;
    const double h = 1e-6 * std::max(1.0, x);
    const auto g = [&](double t) { return bessel_weight(nu, N, t) * ops_n.eval(n, t); };
    const double gp = g(x + h), gm = g(x - h);
    const double lhs = (gp - gm) / (2.0 * h);
    const double rhs = backward_shift_constant(nu, N, n) * bessel_weight(nu, N + 1, x) *
                       ops_n1.eval(n + 1, x);
    // where both sides vanish together (roots of p_{n+1}) a bare |RHS|
    // denominator amplifies finite-difference noise; the floor carries the
    // local derivative scale of the weighted polynomial instead
    const double scale_floor = 1e-2 * (std::abs(gp) + std::abs(gm)) / (2.0 * std::max(1.0, x));
    return std::abs(lhs - rhs) / (std::abs(rhs) + scale_floor + 1e-300);
}

double backward_shift_residual(double nu, int N, int n, double x) {
    const MonicOPS ops_n = bessel_monic_construct(nu, N);
    const MonicOPS ops_n1 = bessel_monic_construct(nu, N + 1);
    return backward_shift_residual(ops_n, ops_n1, n, x);
}

std::string ops_recurrence_csv(const MonicOPS& ops) {
    std::ostringstream os;
    os << "k,a_k,b_k\n";
    char buf[96];
    for (int k = 0; k < ops.degree_max; ++k) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", k, ops.a[k], ops.b[k]);
        os << buf;
    }
    return os.str();
}

namespace {

// One composite-quadrature sweep of the Gram matrix with the given panel
// counts. v holds the weighted polynomial vector at a node, so the Gram
// accumulates as a sum of outer products.
Eigen::MatrixXd gram_sweep(const MonicOPS& ops, int d_max, int panels_near, int panels_far) {
    const int d1 = d_max + 1;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d1, d1);
    std::vector<double> v(d1), r(d1);
    const double nu = ops.nu;

    const bool bessel = ops.family == MonicOPS::Family::bessel;
    const double A = bessel ? nu + 2.0 * ops.weight_dim : 0.0;
    // power substitution x = t^mm on the near segment tames the x^nu endpoint
    const int mm = std::max(1, static_cast<int>(std::ceil(3.01 / (nu + 1.0))));
    const double far_hi = bessel ? 3.0 * A + 100.0
                                 : 3.0 * (2.0 * d_max + std::max(nu, 0.0)) + 100.0;

    auto eval_v = [&](double x) {
        if (!bessel) {
            ops.eval_all(d_max, x, r.data());
            const double sw = std::exp(0.5 * (nu * std::log(x) - x));
            for (int k = 0; k < d1; ++k) v[k] = r[k] * sw;
            return;
        }
        // reversed polynomials r_k(u) = u^k p_k(2/u) stay bounded where the
        // monic values would overflow; the weight splits as
        // <p_m, p_n> = 2^(1-A) int r_m r_n u^(A-2-m-n) e^(-u) du
        const double u = x;
        double rm1 = 0.0, rk = 1.0;
        r[0] = 1.0;
        for (int k = 0; k < d_max; ++k) {
            const double rp = (2.0 - ops.a[k] * u) * rk - ops.b[k] * u * u * rm1;
            rm1 = rk;
            rk = rp;
            r[k + 1] = rp;
        }
        const double base = 0.5 * ((A - 2.0) * std::log(u) - u + (1.0 - A) * M_LN2);
        for (int k = 0; k < d1; ++k) {
            const double s = std::exp(base - k * std::log(u));
            v[k] = r[k] * s;
        }
    };

    auto add_node = [&](double x, double w) {
        eval_v(x);
        for (int m = 0; m < d1; ++m) {
            if (v[m] == 0.0) continue;
            for (int n = m; n < d1; ++n) g(m, n) += w * v[m] * v[n];
        }
    };

    using detail::kKronrodNodes;
    using detail::kKronrodWeights;
    auto sweep_panel = [&](double lo, double hi, bool power_map) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int i = 0; i < 15; ++i) {
            const int j = i < 8 ? i : 14 - i;
            const double t = i < 8 ? c - h * kKronrodNodes[j] : c + h * kKronrodNodes[j];
            const double w = h * kKronrodWeights[j];
            if (power_map) {
                const double x = std::pow(t, mm);
                if (x > 0.0) add_node(x, w * mm * std::pow(t, mm - 1));
            } else {
                add_node(t, w);
            }
        }
    };

    for (int p = 0; p < panels_near; ++p)
        sweep_panel(static_cast<double>(p) / panels_near, static_cast<double>(p + 1) / panels_near,
                    true);
    for (int p = 0; p < panels_far; ++p)
        sweep_panel(1.0 + (far_hi - 1.0) * p / panels_far, 1.0 + (far_hi - 1.0) * (p + 1) / panels_far,
                    false);

    for (int m = 0; m < d1; ++m)
        for (int n = 0; n < m; ++n) g(m, n) = g(n, m);
    return g;
}

} // namespace

Eigen::MatrixXd ops_gram(const MonicOPS& ops, int d_max, double rel_tol) {
    if (d_max < 0 || d_max > ops.degree_max)
        throw std::invalid_argument("ops_gram: d_max out of range");
    int near = 16, far = 64;
    Eigen::MatrixXd prev = gram_sweep(ops, d_max, near, far);
    for (int level = 0; level < 8; ++level) {
        near *= 2;
        far *= 2;
        Eigen::MatrixXd cur = gram_sweep(ops, d_max, near, far);
        double worst = 0.0;
        for (int m = 0; m <= d_max; ++m)
            for (int n = 0; n <= d_max; ++n) {
                const double scale = std::sqrt(cur(m, m) * cur(n, n));
                worst = std::max(worst, std::abs(cur(m, n) - prev(m, n)) / scale);
            }
        prev = cur;
        if (worst < rel_tol) return prev;
    }
    return prev;
}

} // namespace invwish
