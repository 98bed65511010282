#ifndef GCM_INTERP_HPP
#define GCM_INTERP_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "gcm/bounds.hpp"

namespace gcm::interp {

enum class Precision { standard, extended };

// Truncated auxiliary function: the Hermite interpolation p_M of z -> e^{alpha z}
// at the doubled nodes u_{2j-1} = u_{2j} = -(lambda_j/(pi r))^2, held in the
// product basis B_k(z) = prod_{j>k} (1 - z/u_j) with coefficients H_k >= 0.
struct AuxFunction {
    bounds::BoundParams params;
    int M = 0;
    Precision precision = Precision::extended;
    std::vector<double> nodes;      // u_1 >= u_2 >= ... >= u_M (nonpositive, doubled)
    std::vector<double> radii;      // lambda_j/(pi r), j = 1..M/2
    std::vector<double> companions; // J_{n/2-1}(lambda_j)
    std::vector<XDouble> coeffs;    // H_1..H_M (index k-1), extended range
    const char* basis_tag = "newton-reversed/product";
};

// Builds the divided-difference table over the reversed node order and maps
// it into the product basis. Extended precision is required for M > 60.
AuxFunction build_aux(const bounds::BoundParams& params, int M,
                      Precision prec = Precision::extended);

// p_M(-t^2) for t >= 0 (polynomial, defined beyond the node range too).
double aux_eval(const AuxFunction& h, double t);

// rho hhat(0) - h(0) evaluated two ways: (a) the summation-formula route
// sum_m w_m p_M(-t_m^2) over the available radii, and (b) rho S_n
// (int_0^T p_M(-t^2) t^{n-1} dt + Gaussian continuation past the last node)
// minus p_M(0). Returns route (a); |a - b| lands in tail_bound and a
// disagreement beyond 100 * quadrature_tol (absolute) raises an error.
bounds::BoundResult lp_bound_via_aux(const AuxFunction& h, double quadrature_tol);

struct MinorantReport {
    double max_violation = 0.0;
    double argmax = 0.0;
};
// max over the grid of p_M(-t^2) - exp(-alpha t^2); positive means violation.
MinorantReport verify_minorant(const AuxFunction& h, double t_max, int grid_points);

// Minimum Gram eigenvalue over random point sets for the root-peeled kernel
// J_nu(|x-y|) / (|x-y|^nu prod_{i<=k} (1 - |x-y|^2/lambda_i^2)), nu = n/2-1.
double psd_sample_check(int n, int k, int num_points, int num_trials, std::uint64_t seed);

// |vol(B_{r/2}^n) int h* - 1| for h*(x) = c0 J_{n/2}(pi r |x|)^2 / (pi r |x|)^n,
// by radial quadrature between Bessel zeros with a Richardson-accelerated tail.
double bgf_residual(int n, double rho);

// Residual of the finite partial-fraction identity
// 1/(z-u0) = sum_{k=0}^M 1/(z-u_k) prod_{j=k+1}^M (1-u0/u_j)/(1-z/u_j).
// node_seed == 0 uses u_j = -j^2; otherwise |u_j| = Theta(j^2) jittered.
double alg_identity_residual(std::complex<double> u0, std::complex<double> z,
                             std::uint64_t node_seed, int M);

} // namespace gcm::interp

#endif
