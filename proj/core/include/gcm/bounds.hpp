#ifndef GCM_BOUNDS_HPP
#define GCM_BOUNDS_HPP

#include "gcm/specfun.hpp"

namespace gcm::bounds {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kE = 2.71828182845904523536028747135266250;
// phase thresholds of the Gaussian core model rates
inline constexpr double kFourPiOverE = 4.0 * kPi / kE;
inline constexpr double kPiTimesE = kPi * kE;

// The triple (n, alpha, rho) plus the derived radius r, where r satisfies
// vol(B_{r/2}^n(0)) = rho. The potential is f(t) = exp(-alpha t^2).
struct BoundParams {
    int n = 0;
    double alpha = 0.0;
    double rho = 0.0;
    double r = 0.0;
};

BoundParams make_params(int n, double alpha, double rho);

enum class BoundKind {
    main_lower,
    expectation,
    cond_expectation,
    dual_cap,
    invpow_upper,
    invpow_lower,
    asymptotic_rate,
    lattice_energy,
};

const char* kind_name(BoundKind k);

struct BoundResult {
    double value = 0.0;
    double log_value = 0.0; // natural log; meaningful even when value over/underflows
    BoundKind kind = BoundKind::main_lower;
    long terms_used = 0;
    double tail_bound = 0.0; // bound on the truncation remainder
    BoundParams params;
};

// Series lower bound: n/(2^{n-1} (n/2)!^2) sum_m lam_m^{n-2}/J_{n/2-1}(lam_m)^2
// f(lam_m/(pi r)), evaluated in log space with a Gaussian-tail stopping rule.
BoundResult main_lower_bound(const BoundParams& p, double tol = 1e-10);
// Same with a caller-provided zero table for order n/2 (reused across calls).
BoundResult main_lower_bound(const BoundParams& p, double tol,
                             specfun::BesselZeroTable& zeros);

// Main bound divided by (pi/alpha)^{n/2}.
BoundResult normalized_main_bound(const BoundParams& p, double tol = 1e-10);

// rho (pi/alpha)^{n/2}
BoundResult expectation_bound(const BoundParams& p);

// (rho/(1-1/(2n))) (pi/alpha)^{n/2} Q(n/2, alpha r_c^2), vol(B_{r_c}^n) = 1/n
BoundResult conditional_expectation_bound(const BoundParams& p);

// (rho/(1 - vol(B_{r_cut}^n)/k_div)) (pi/alpha)^{n/2} Q(n/2, alpha r_cut^2)
BoundResult general_truncated_expectation(const BoundParams& p, double r_cut, double k_div);

// rho (pi/alpha)^{n/2} Q(n/2, alpha r_d^2), vol(B_{r_d}^n) = 1/rho
BoundResult dual_cap(const BoundParams& p);

// n-th-root growth rates of the lower and upper bounds as n -> infinity.
struct RatePair {
    double lower_rate = 0.0;
    double upper_rate = 0.0;
};
RatePair asymptotic_rate(double alpha);

// Large-n term profile of the normalized sum: terms near m = cn + d sqrt(n)
// behave like rho exp(-pi K d^2) sqrt(K/n).
struct AsymptoticProfile {
    double c = 0.0;
    double K = 0.0;      // 4 pi alpha / (4 pi / e - alpha)
    double t_m = 0.0;    // sqrt(4 pi / (alpha e))
    double peak_index = 0.0; // c * n
    bool defined = false;    // false when alpha >= 4 pi / e (c = 0, K unset)
    int n = 0;
    double rho = 0.0;

    double predicted_term(double d) const;
};
AsymptoticProfile gaussian_profile(const BoundParams& p);

// Max over integer m with |m - cn| <= window * sigma_m of
// |actual_normalized_term / predicted_term - 1|, where sigma_m = sqrt(n/(2 pi K))
// is the index-space standard deviation of the predicted Gaussian.
double profile_agreement(const BoundParams& p, double window);

// Exact finite-n upper bound for f(t) = 1/t^{n+s} with vol(B_r^n) = 1/n:
// (rho/(1-1/(2n))) (n pi^{n/2}/Gamma(n/2+1)) r^{-s}/s.
BoundResult inverse_power_upper_bound(int n, double s, double rho);
// log of the asymptotic form (2 rho / s) pi^{(n+s)/2} e^{s/2} / Gamma((n+s)/2)
double inverse_power_upper_asymptotic_log(int n, double s, double rho);

// Lower bound: int_0^{4 pi/e} E_low(alpha) alpha^{(n+s)/2-1}/Gamma((n+s)/2) dalpha.
BoundResult inverse_power_lower_bound(int n, double s, double rho, double tol = 1e-8);

} // namespace gcm::bounds

#endif
