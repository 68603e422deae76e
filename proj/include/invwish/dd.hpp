#pragma once

#include <cmath>

namespace invwish {

/// Double-double value (~31 significant decimal digits), used only for
/// the moment-matrix Cholesky where plain doubles exhaust their
/// precision. Dekker/Knuth error-free transforms with FMA products.
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    DD(double h) : hi(h), lo(0.0) {}
    DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace ddops {

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace ddops

inline DD operator+(DD a, DD b) {
    DD s = ddops::two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return ddops::quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    DD p = ddops::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return ddops::quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
    const double q1 = a.hi / b.hi;
    DD r = a - b * DD(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * DD(q2);
    const double q3 = r.hi / b.hi;
    DD q = ddops::quick_two_sum(q1, q2);
    return q + DD(q3);
}

inline DD sqrt(DD a) {
    if (a.hi == 0.0 && a.lo == 0.0) return {0.0, 0.0};
    const double s = std::sqrt(a.hi);
    DD r = a - DD(s) * DD(s);
    const double corr = r.hi / (2.0 * s);
    return ddops::quick_two_sum(s, corr);
}

inline bool operator>(DD a, double b) { return a.hi > b || (a.hi == b && a.lo > 0.0); }
inline bool operator<(DD a, double b) { return a.hi < b || (a.hi == b && a.lo < 0.0); }

} // namespace invwish
