#pragma once

#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace invwish {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
inline constexpr double kGaussWeights[4] = {
    0.12948496616886969327, 0.27970539148927666790,
    0.38183005050511894495, 0.41795918367346938776};

template <class F>
inline void gk15(F&& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    // index 7 is the center node
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodNodes[i]);
        fv[14 - i] = f(c + h * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    double kres = kKronrodWeights[7] * fv[7];
    double gres = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 7; ++i) kres += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) {
        const int j = 2 * i + 1; // Gauss nodes sit at the odd Kronrod indices
        gres += kGaussWeights[i] * (fv[j] + fv[14 - j]);
    }
    value = kres * h;
    err = std::abs((kres - gres) * h);
}

struct Panel {
    double err;
    double value;
    double a;
    double b;
    bool operator<(const Panel& o) const { return err < o.err; }
};

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration on [a, b].
/// Subdivides the interval with the largest local error estimate until
/// the total estimate falls below max(abs_tol, rel_tol * |I|).
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10,
                              double rel_tol = 1e-12, int max_panels = 4000) {
    QuadResult r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    std::priority_queue<detail::Panel> heap;
    double total = 0.0, total_err = 0.0;
    double v, e;
    detail::gk15(f, a, b, v, e);
    r.evaluations += 15;
    heap.push({e, v, a, b});
    total = v;
    total_err = e;
    int panels = 1;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) && panels < max_panels) {
        detail::Panel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {
            // interval exhausted at machine precision; keep its estimate
            total_err -= p.err;
            continue;
        }
        double v1, e1, v2, e2;
        detail::gk15(f, p.a, mid, v1, e1);
        detail::gk15(f, mid, p.b, v2, e2);
        r.evaluations += 30;
        total += v1 + v2 - p.value;
        total_err += e1 + e2 - p.err;
        heap.push({e1, v1, p.a, mid});
        heap.push({e2, v2, mid, p.b});
        ++panels;
    }
    r.value = total;
    r.error_estimate = total_err;
    r.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
    return r;
}

/// Integral over [a, infinity) via the map x = a + t/(1-t).
/// The integrand must decay fast enough for the mapped function to
/// vanish at t -> 1 (all uses here are exponentially decaying).
template <class F>
QuadResult integrate_upper_infinite(F&& f, double a, double abs_tol = 1e-10,
                                    double rel_tol = 1e-12, int max_panels = 4000) {
    auto g = [&f, a](double t) {
        const double om = 1.0 - t;
        const double x = a + t / om;
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx / (om * om);
    };
    return integrate_adaptive(g, 0.0, 1.0, abs_tol, rel_tol, max_panels);
}

} // namespace invwish
