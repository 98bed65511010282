#ifndef GCM_SPECFUN_HPP
#define GCM_SPECFUN_HPP

#include <vector>

#include "gcm/ddouble.hpp"

namespace gcm::specfun {

// Positive zeros lambda_1 < lambda_2 < ... of J_order together with
// J_{order-1} evaluated at each zero (the derivative of J_order there, up to
// the -(order/x) J_order term which vanishes at a zero).
struct BesselZeroTable {
    double order = 0.0;
    std::vector<double> zeros;
    std::vector<double> companion_values;
};

// Approximation to the m-th negative zero of the Airy function Ai from the
// T(t) expansion at t = 3*pi*(4m-1)/8, truncated after the stated terms.
struct AiryZeroApprox {
    int index = 0;
    double value = 0.0;
    int series_order = 0;
};

// (log |v|, sign) representation; sign == 0 means v == 0.
struct SignedLog {
    double log_abs = 0.0;
    int sign = 0;
};

// J_order(x) and J_{order+1}(x) from one evaluation pass.
struct BesselPair {
    SignedLog jnu;
    SignedLog jnup1;
};

double bessel_j(double order, double x);
SignedLog bessel_j_signed_log(double order, double x);
BesselPair bessel_j_pair(double order, double x);

BesselZeroTable bessel_zeros(double order, int count);

AiryZeroApprox airy_zero(int m);

double log_gamma(double x);
DDouble log_gamma_dd(DDouble x);

// Q(s, x) = Gamma(s, x) / Gamma(s), the regularized upper incomplete gamma.
double reg_gamma_upper(double s, double x);
double log_reg_gamma_upper(double s, double x);

// ln vol(B_radius^n(0)) = (n/2) ln pi + n ln radius - ln Gamma(n/2 + 1)
double log_ball_volume(int n, double radius);

} // namespace gcm::specfun

#endif
