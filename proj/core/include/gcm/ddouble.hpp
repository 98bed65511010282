#ifndef GCM_DDOUBLE_HPP
#define GCM_DDOUBLE_HPP

#include <cmath>
#include <cstdint>

namespace gcm {

// Double-double value: unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
// Gives ~106 bits of significand with double's exponent range.
struct DDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DDouble() = default;
    constexpr DDouble(double x) : hi(x), lo(0.0) {}
    constexpr DDouble(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

// |a| >= |b| assumed.
inline DDouble quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DDouble two_sum(double a, double b) {
    double s = a + b;
    double v = s - a;
    return {s, (a - (s - v)) + (b - v)};
}

inline DDouble two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace dd_detail

inline DDouble operator+(DDouble a, DDouble b) {
    DDouble s = dd_detail::two_sum(a.hi, b.hi);
    DDouble t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DDouble operator-(DDouble a) { return {-a.hi, -a.lo}; }
inline DDouble operator-(DDouble a, DDouble b) { return a + (-b); }

inline DDouble operator*(DDouble a, DDouble b) {
    DDouble p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DDouble operator/(DDouble a, DDouble b) {
    double q1 = a.hi / b.hi;
    DDouble r = a - b * DDouble(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DDouble(q2);
    double q3 = r.hi / b.hi;
    DDouble q = dd_detail::quick_two_sum(q1, q2);
    return q + DDouble(q3);
}

inline DDouble& operator+=(DDouble& a, DDouble b) { return a = a + b; }
inline DDouble& operator-=(DDouble& a, DDouble b) { return a = a - b; }
inline DDouble& operator*=(DDouble& a, DDouble b) { return a = a * b; }
inline DDouble& operator/=(DDouble& a, DDouble b) { return a = a / b; }

inline bool operator<(DDouble a, DDouble b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DDouble a, DDouble b) { return b < a; }
inline bool operator==(DDouble a, DDouble b) { return a.hi == b.hi && a.lo == b.lo; }

inline DDouble dd_abs(DDouble a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline DDouble dd_ldexp(DDouble a, int k) { return {std::ldexp(a.hi, k), std::ldexp(a.lo, k)}; }

inline constexpr DDouble dd_ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
inline constexpr DDouble dd_pi{3.141592653589793116e+00, 1.224646799147353207e-16};

namespace dd_detail {

// exp of the reduced argument, |r| <= ln(2)/2.
inline DDouble exp_taylor(DDouble r) {
    DDouble sum(1.0);
    DDouble term(1.0);
    for (int i = 1; i <= 26; ++i) {
        term = term * r / DDouble(double(i));
        sum += term;
        if (std::fabs(term.hi) < 1e-35) break;
    }
    return sum;
}

} // namespace dd_detail

// exp for arguments where the result is representable in double range.
inline DDouble dd_exp(DDouble x) {
    if (x.hi > 709.0) return {HUGE_VAL, 0.0};
    if (x.hi < -745.0) return {0.0, 0.0};
    double kd = std::nearbyint(x.hi / dd_ln2.hi);
    DDouble r = x - dd_ln2 * DDouble(kd);
    return dd_ldexp(dd_detail::exp_taylor(r), int(kd));
}

// log for positive arguments; one Newton step on the double estimate.
inline DDouble dd_log(DDouble x) {
    double l0 = std::log(x.hi);
    DDouble e = dd_exp(DDouble(-l0));
    return DDouble(l0) + x * e - DDouble(1.0);
}

// Extended-range double-double: value = m * 2^e with |m.hi| in [1, 2) or m = 0.
// Used where magnitudes leave double's exponent range (interpolation tables,
// Weierstrass-type basis products) while ~32 significant digits are kept.
struct XDouble {
    DDouble m;
    std::int64_t e = 0;

    XDouble() = default;
};

inline XDouble x_normalize(DDouble m, std::int64_t e) {
    XDouble r;
    if (m.hi == 0.0) return r;
    int ex;
    std::frexp(m.hi, &ex); // |m.hi| in [2^(ex-1), 2^ex)
    int shift = ex - 1;
    r.m = dd_ldexp(m, -shift);
    r.e = e + shift;
    return r;
}

inline XDouble x_from(DDouble v) { return x_normalize(v, 0); }
inline XDouble x_from(double v) { return x_normalize(DDouble(v), 0); }

inline bool x_is_zero(XDouble a) { return a.m.hi == 0.0; }
inline int x_sign(XDouble a) { return a.m.hi > 0.0 ? 1 : (a.m.hi < 0.0 ? -1 : 0); }
inline XDouble operator-(XDouble a) { a.m = -a.m; return a; }

inline XDouble operator*(XDouble a, XDouble b) {
    if (x_is_zero(a) || x_is_zero(b)) return {};
    return x_normalize(a.m * b.m, a.e + b.e);
}

inline XDouble operator/(XDouble a, XDouble b) {
    return x_normalize(a.m / b.m, a.e - b.e);
}

inline XDouble operator+(XDouble a, XDouble b) {
    if (x_is_zero(a)) return b;
    if (x_is_zero(b)) return a;
    std::int64_t d = a.e - b.e;
    if (d > 110) return a;
    if (d < -110) return b;
    if (d >= 0) return x_normalize(a.m + dd_ldexp(b.m, int(-d)), a.e);
    return x_normalize(b.m + dd_ldexp(a.m, int(d)), b.e);
}

inline XDouble operator-(XDouble a, XDouble b) { return a + (-b); }

inline XDouble& operator+=(XDouble& a, XDouble b) { return a = a + b; }
inline XDouble& operator*=(XDouble& a, XDouble b) { return a = a * b; }

inline double x_to_double(XDouble a) {
    if (x_is_zero(a)) return 0.0;
    if (a.e > 1023) return a.m.hi > 0 ? HUGE_VAL : -HUGE_VAL;
    if (a.e < -1070) return 0.0;
    return std::ldexp(a.m.hi, int(a.e)) + std::ldexp(a.m.lo, int(a.e));
}

// natural log of |a|
inline DDouble x_log_abs(XDouble a) {
    return dd_log(dd_abs(a.m)) + dd_ln2 * DDouble(double(a.e));
}

// exp with unconstrained magnitude
inline XDouble x_exp(DDouble x) {
    double kd = std::nearbyint(x.hi / dd_ln2.hi);
    DDouble r = x - dd_ln2 * DDouble(kd);
    return x_normalize(dd_detail::exp_taylor(r), std::int64_t(kd));
}

// |a| <=> |b|
inline int x_cmp_abs(XDouble a, XDouble b) {
    if (x_is_zero(a)) return x_is_zero(b) ? 0 : -1;
    if (x_is_zero(b)) return 1;
    if (a.e != b.e) return a.e < b.e ? -1 : 1;
    DDouble ma = dd_abs(a.m), mb = dd_abs(b.m);
    if (ma == mb) return 0;
    return ma < mb ? -1 : 1;
}

// Neumaier compensated accumulator for plain doubles.
struct CompensatedSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

} // namespace gcm

#endif
