#include "gcm/interp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gcm/errors.hpp"
#include "gcm/specfun.hpp"

namespace gcm::interp {

using bounds::BoundParams;
using bounds::BoundResult;
using bounds::kPi;

namespace {

// log of n / (2^{n-1} (n/2)!^2)
double weight_prefactor_log(int n) {
    DDouble v = dd_log(DDouble(double(n))) - DDouble(double(n - 1)) * dd_ln2 -
                DDouble(2.0) * specfun::log_gamma_dd(DDouble(0.5 * n + 1.0));
    return double(v);
}

// surface area of the unit sphere: n pi^{n/2} / Gamma(n/2+1)
double log_sphere_surface(int n) {
    DDouble v = dd_log(DDouble(double(n))) + DDouble(0.5 * n) * dd_log(dd_pi) -
                specfun::log_gamma_dd(DDouble(0.5 * n + 1.0));
    return double(v);
}

// divided-difference table of e^{alpha z} over the reversed (deepest-first)
// node order, extended range + double-double significands
std::vector<XDouble> dd_table_extended(const std::vector<double>& x, double alpha) {
    const int M = int(x.size());
    std::vector<XDouble> expx(M), a(M);
    for (int i = 0; i < M; ++i) {
        expx[i] = x_exp(DDouble(alpha) * DDouble(x[i]));
        a[i] = expx[i];
    }
    XDouble xalpha = x_from(alpha);
    for (int k = 1; k < M; ++k) {
        for (int i = M - 1; i >= k; --i) {
            if (x[i] == x[i - k]) {
                a[i] = xalpha * expx[i]; // repeated node: derivative alpha e^{alpha u}
            } else {
                DDouble gap = DDouble(x[i]) - DDouble(x[i - k]);
                a[i] = (a[i] - a[i - 1]) / x_from(gap);
            }
        }
    }
    return a;
}

// plain-double variant for the standard-precision path (M <= 60); deep
// entries may flush to zero, which only perturbs coefficients that are
// themselves far below the significance threshold
std::vector<XDouble> dd_table_standard(const std::vector<double>& x, double alpha) {
    const int M = int(x.size());
    std::vector<double> expx(M), a(M);
    for (int i = 0; i < M; ++i) {
        expx[i] = std::exp(alpha * x[i]);
        a[i] = expx[i];
    }
    for (int k = 1; k < M; ++k) {
        for (int i = M - 1; i >= k; --i) {
            if (x[i] == x[i - k])
                a[i] = alpha * expx[i];
            else
                a[i] = (a[i] - a[i - 1]) / (x[i] - x[i - k]);
        }
    }
    std::vector<XDouble> out(M);
    for (int i = 0; i < M; ++i) {
        if (!std::isfinite(a[i]))
            throw precision_error("build_aux: standard-precision table overflowed");
        out[i] = x_from(a[i]);
    }
    return out;
}

XDouble eval_product_basis(const AuxFunction& h, DDouble z) {
    const int M = h.M;
    XDouble B = x_from(1.0);
    XDouble total = h.coeffs[M - 1] * B; // H_M
    for (int k = M - 1; k >= 1; --k) {
        DDouble factor = DDouble(1.0) - z / DDouble(h.nodes[k]); // u_{k+1}
        B = B * x_from(factor);
        total = total + h.coeffs[k - 1] * B;
    }
    return total;
}

// remainder majorant for the summation-formula tail past lam_last (same
// envelope argument as the series bound)
double tail_majorant_log(int n, double pref, double alpha, double c, double lam_last) {
    double x0 = lam_last - kPi / 2.0;
    if (x0 <= 0.0) return HUGE_VAL;
    double lam_peak = std::sqrt(std::max(0.0, (n - 1) * c * c / (2.0 * alpha)));
    if (x0 <= lam_peak) return HUGE_VAL;
    double lq = specfun::log_reg_gamma_upper(0.5 * n, alpha * (x0 / c) * (x0 / c));
    return pref + std::log(2.0) + 0.5 * n * (2.0 * std::log(c) - std::log(alpha)) +
           specfun::log_gamma(0.5 * n) + lq;
}

// Gauss-Legendre nodes (24-point) on [-1, 1], positive half
const double kGLX24[12] = {
    0.064056892862605626085, 0.191118867473616309159, 0.315042679696163374387,
    0.433793507626045138487, 0.545421471388839535658, 0.648093651936975569252,
    0.740124191578554364244, 0.820001985973902921954, 0.886415527004401034213,
    0.938274552002732758524, 0.974728555971309498198, 0.995187219997021360180};
const double kGLW24[12] = {
    0.127938195346752156974, 0.125837456346828296121, 0.121670472927803391204,
    0.115505668053725601353, 0.107444270115965634783, 0.097618652104113888270,
    0.086190161531953275917, 0.073346481411080305734, 0.059298584915436780746,
    0.044277438817419806169, 0.028531388628933663181, 0.012341229799987199547};

// 12-point subset used for the embedded error estimate
const double kGLX12[6] = {0.125233408511468915472, 0.367831498998180193753,
                          0.587317954286617447297, 0.769902674194304687037,
                          0.904117256370474856678, 0.981560634246719250691};
const double kGLW12[6] = {0.249147045813402785001, 0.233492536538354808761,
                          0.203167426723065921749, 0.160078328543346226335,
                          0.106939325995318430960, 0.047175336386511827195};

double gl_panel(const AuxFunction& h, double a, double b, int n, bool coarse) {
    double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    CompensatedSum s;
    const double* gx = coarse ? kGLX12 : kGLX24;
    const double* gw = coarse ? kGLW12 : kGLW24;
    int half = coarse ? 6 : 12;
    for (int j = 0; j < half; ++j) {
        for (double sgn : {-1.0, 1.0}) {
            double t = c + sgn * hw * gx[j];
            DDouble z = -(DDouble(t) * DDouble(t));
            double p = x_to_double(eval_product_basis(h, z));
            s.add(gw[j] * std::pow(t, n - 1) * p);
        }
    }
    return hw * s.value();
}

// J_nu(d)/d^nu, continuous at d = 0; nu = -1/2 handled in closed form
double j_over_pow(double nu, double d) {
    if (nu == -0.5) return std::sqrt(2.0 / kPi) * std::cos(d);
    if (d == 0.0) return std::exp(-nu * std::log(2.0) - specfun::log_gamma(nu + 1.0));
    if (d < 0.5) {
        double d24 = 0.25 * d * d;
        double term = std::exp(-nu * std::log(2.0) - specfun::log_gamma(nu + 1.0));
        double sum = term;
        for (int k = 1; k < 40; ++k) {
            term *= -d24 / (double(k) * (nu + k));
            sum += term;
            if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
        }
        return sum;
    }
    return specfun::bessel_j(nu, d) / std::pow(d, nu);
}

// derivative of G(d) = J_nu(d)/d^nu at a zero of J_nu
double g_prime_at_zero(double nu, double lam, double companion) {
    if (nu == -0.5) return -std::sqrt(2.0 / kPi) * std::sin(lam);
    return companion / std::pow(lam, nu); // J_{nu-1}(lam)/lam^nu
}

// Jacobi eigenvalue iteration for small symmetric matrices
double min_eigenvalue(std::vector<double> m, int n) {
    auto at = [&](int i, int j) -> double& { return m[i * n + j]; };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double ccos = 1.0 / std::sqrt(t * t + 1.0);
                double ssin = t * ccos;
                for (int i = 0; i < n; ++i) {
                    double aip = at(i, p), aiq = at(i, q);
                    at(i, p) = ccos * aip - ssin * aiq;
                    at(i, q) = ssin * aip + ccos * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double api = at(p, i), aqi = at(q, i);
                    at(p, i) = ccos * api - ssin * aqi;
                    at(q, i) = ssin * api + ccos * aqi;
                }
            }
        }
    }
    double mn = m[0];
    for (int i = 1; i < n; ++i) mn = std::min(mn, at(i, i));
    return mn;
}

} // namespace

AuxFunction build_aux(const BoundParams& params, int M, Precision prec) {
    if (M < 2 || M > 400 || (M % 2) != 0)
        throw domain_error("build_aux: M must be even and within [2, 400]");
    if (prec == Precision::standard && M > 60)
        throw domain_error("build_aux: extended precision is mandatory for M > 60");

    AuxFunction h;
    h.params = params;
    h.M = M;
    h.precision = prec;

    auto table = specfun::bessel_zeros(0.5 * params.n, M / 2);
    double pir = kPi * params.r;
    h.radii.resize(M / 2);
    h.companions = table.companion_values;
    h.nodes.resize(M);
    for (int j = 0; j < M / 2; ++j) {
        double t = table.zeros[j] / pir;
        h.radii[j] = t;
        double u = -(t * t);
        h.nodes[2 * j] = u;
        h.nodes[2 * j + 1] = u;
    }

    std::vector<double> x(h.nodes.rbegin(), h.nodes.rend()); // deepest first
    auto a = (prec == Precision::extended) ? dd_table_extended(x, params.alpha)
                                           : dd_table_standard(x, params.alpha);

    // H_k = a[M-k] * prod_{j=k+1}^M |u_j|
    h.coeffs.resize(M);
    XDouble prod = x_from(1.0);
    for (int k = M; k >= 1; --k) {
        h.coeffs[k - 1] = a[M - k] * prod;
        prod = prod * x_from(std::fabs(h.nodes[k - 1]));
    }

    // Sign test: the product-basis coefficients are nonnegative in exact
    // arithmetic; a violation beyond rounding noise means the table has lost
    // all significant digits.
    XDouble hmax{};
    for (const auto& c : h.coeffs)
        if (x_cmp_abs(c, hmax) > 0) hmax = c;
    double neg_tol = (prec == Precision::extended ? 1e-24 : 1e-13) * x_to_double(hmax);
    for (int k = 0; k < M; ++k) {
        if (x_sign(h.coeffs[k]) < 0 && -x_to_double(h.coeffs[k]) > neg_tol)
            throw precision_error("build_aux: coefficient sign violation at k=" +
                                  std::to_string(k + 1) + " (precision exhausted)");
    }
    return h;
}

double aux_eval(const AuxFunction& h, double t) {
    if (t < 0.0) throw domain_error("aux_eval: t must be >= 0");
    // the double-rounded square matches how the nodes were formed, so node
    // radii evaluate bit-exactly at their node (every vanished basis factor
    // is exactly zero there)
    DDouble z(-(t * t));
    return x_to_double(eval_product_basis(h, z));
}

BoundResult lp_bound_via_aux(const AuxFunction& h, double quadrature_tol) {
    if (!(quadrature_tol > 0.0)) throw domain_error("lp_bound_via_aux: bad quadrature_tol");
    const BoundParams& p = h.params;
    const int half = h.M / 2;
    double pir = kPi * p.r;
    double pref = weight_prefactor_log(p.n);

    // route (a): summation formula over the interpolation radii; terms past
    // the double-underflow horizon contribute nothing representable
    CompensatedSum suma;
    for (int m = 0; m < half; ++m) {
        double t = h.radii[m];
        if (p.alpha * t * t > 740.0) break;
        double lam = t * pir;
        double lw = pref + (p.n - 2) * std::log(lam) -
                    2.0 * std::log(std::fabs(h.companions[m]));
        DDouble z(h.nodes[2 * m]); // exact node
        double pm = x_to_double(eval_product_basis(h, z));
        suma.add(std::exp(lw) * pm);
    }
    double value_a = suma.value();
    double tail_f = std::exp(tail_majorant_log(p.n, pref, p.alpha, pir, h.radii[half - 1] * pir));

    // route (b): direct radial quadrature of the truncated polynomial up to
    // the last node, Gaussian continuation beyond it
    double h0 = aux_eval(h, 0.0);
    CompensatedSum fine, coarse;
    double prev_t = 0.0;
    double t_cut = 0.0;
    // The limit function dips negative between radii with amplitudes that
    // decay outward; the truncated polynomial tracks it until truncation
    // error takes over, visible as the first regrowth of the dip amplitude
    // far below the Gaussian. Integration stops there (and in any case once
    // a dip exceeds h(0) <= 1, impossible for the positive-definite limit).
    bool dipped = false;
    double prev_dip = 0.0;
    for (int m = 0; m < half; ++m) {
        double t = h.radii[m];
        if (p.alpha * t * t > 140.0) break;
        double mid = 0.5 * (prev_t + t);
        double pm = aux_eval(h, mid);
        double fm = std::exp(-p.alpha * mid * mid);
        if (pm < 0.0) {
            double dip = -pm;
            if (dip > 1.0) break;
            if (dipped && dip > prev_dip && fm < 1e-3 * dip) break;
            dipped = true;
            prev_dip = dip;
        }
        fine.add(gl_panel(h, prev_t, t, p.n, false));
        coarse.add(gl_panel(h, prev_t, t, p.n, true));
        prev_t = t;
        t_cut = t;
    }
    if (t_cut == 0.0)
        throw domain_error("lp_bound_via_aux: no usable node radius below the underflow horizon");
    double quad_err = std::fabs(fine.value() - coarse.value());
    // int_T^inf e^{-alpha t^2} t^{n-1} dt = Gamma(n/2) Q(n/2, alpha T^2) / (2 alpha^{n/2})
    double lgauss = specfun::log_gamma(0.5 * p.n) +
                    specfun::log_reg_gamma_upper(0.5 * p.n, p.alpha * t_cut * t_cut) -
                    std::log(2.0) - 0.5 * p.n * std::log(p.alpha);
    double integral = fine.value() + std::exp(lgauss);
    double hhat0 = std::exp(log_sphere_surface(p.n)) * integral;
    double value_b = p.rho * hhat0 - h0;

    double disagreement = std::fabs(value_a - value_b);
    if (disagreement > 100.0 * quadrature_tol)
        throw disagreement_error(
            "lp_bound_via_aux: summation and quadrature routes differ by " +
            std::to_string(disagreement) + " (value " + std::to_string(value_a) + ")");

    BoundResult res;
    res.kind = bounds::BoundKind::main_lower;
    res.params = p;
    res.value = value_a;
    res.log_value = std::log(value_a);
    res.terms_used = half;
    res.tail_bound = disagreement + tail_f + quad_err;
    return res;
}

MinorantReport verify_minorant(const AuxFunction& h, double t_max, int grid_points) {
    if (grid_points < 1000) throw domain_error("verify_minorant: need >= 1000 grid points");
    if (!(t_max > 0.0)) throw domain_error("verify_minorant: t_max must be > 0");
    MinorantReport rep;
    rep.max_violation = -HUGE_VAL;
    for (int i = 0; i <= grid_points; ++i) {
        double t = t_max * double(i) / grid_points;
        double diff = aux_eval(h, t) - std::exp(-h.params.alpha * t * t);
        if (diff > rep.max_violation) {
            rep.max_violation = diff;
            rep.argmax = t;
        }
    }
    return rep;
}

double psd_sample_check(int n, int k, int num_points, int num_trials, std::uint64_t seed) {
    if (n < 1 || n > 8) throw domain_error("psd_sample_check: n must lie in [1, 8]");
    if (k < 0 || k > 10) throw domain_error("psd_sample_check: k must lie in [0, 10]");
    if (num_points < 1 || num_points > 12)
        throw domain_error("psd_sample_check: num_points must lie in [1, 12]");
    if (num_trials < 1) throw domain_error("psd_sample_check: num_trials must be >= 1");

    double nu = 0.5 * n - 1.0;
    std::vector<double> lams(k + 1), gprime(k + 1);
    if (nu == -0.5) {
        for (int i = 0; i <= k; ++i) {
            lams[i] = (i + 0.5) * kPi;
            gprime[i] = g_prime_at_zero(nu, lams[i], 0.0);
        }
    } else {
        auto t = specfun::bessel_zeros(nu, k + 1);
        for (int i = 0; i <= k; ++i) {
            lams[i] = t.zeros[i];
            gprime[i] = g_prime_at_zero(nu, lams[i], t.companion_values[i]);
        }
    }

    auto kernel = [&](double d) -> double {
        // nearest peeled zero, if within the continuity window
        int near = -1;
        for (int i = 0; i < k; ++i)
            if (std::fabs(d - lams[i]) < 1e-4) near = i;
        double denom = 1.0;
        for (int i = 0; i < k; ++i) {
            if (i == near) continue;
            denom *= 1.0 - d * d / (lams[i] * lams[i]);
        }
        if (near < 0) return j_over_pow(nu, d) / denom;
        // G(d)/(1 - d^2/lam^2) = -lam^2/(d+lam) * G(d)/(d-lam), with
        // G(d)/(d-lam) ~ G'(lam) (1 - (d-lam)(2nu+1)/(2lam)) from the ODE
        double lam = lams[near];
        double gslope = gprime[near] * (1.0 - (d - lam) * (2.0 * nu + 1.0) / (2.0 * lam));
        return -lam * lam / (d + lam) * gslope / denom;
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 4.0 * lams[k]);
    double diag = kernel(0.0);
    double min_eig = HUGE_VAL;
    std::vector<double> pts(num_points * n), gram(num_points * num_points);
    for (int trial = 0; trial < num_trials; ++trial) {
        for (auto& c : pts) c = unif(rng);
        for (int i = 0; i < num_points; ++i) {
            for (int j = i; j < num_points; ++j) {
                double d2 = 0.0;
                for (int c = 0; c < n; ++c) {
                    double diff = pts[i * n + c] - pts[j * n + c];
                    d2 += diff * diff;
                }
                double v = (i == j) ? diag : kernel(std::sqrt(d2));
                gram[i * num_points + j] = v;
                gram[j * num_points + i] = v;
            }
        }
        min_eig = std::min(min_eig, min_eigenvalue(gram, num_points));
    }
    return min_eig;
}

double bgf_residual(int n, double rho) {
    if (n < 1 || n > 32) throw domain_error("bgf_residual: n must lie in [1, 32]");
    if (!(rho > 0.0)) throw domain_error("bgf_residual: rho must be > 0");
    double nu = 0.5 * n;
    BoundParams p = bounds::make_params(n, 1.0, rho);
    double pir = kPi * p.r;
    // c0 = (2^{n/2} Gamma(n/2+1))^2 normalizes h*(0) = 1
    double lc0 = 2.0 * (nu * std::log(2.0) + specfun::log_gamma(nu + 1.0));
    double lsn = log_sphere_surface(n);

    const int K = 512; // zero-to-zero panels
    auto zt = specfun::bessel_zeros(nu, K + 1);
    // h*(t) = c0 [J_nu(y)/y^nu]^2 with y = pi r t (y^n = y^{2 nu} at nu = n/2)
    auto integrand = [&](double t) {
        double y = pir * t;
        double g = j_over_pow(nu, y);
        return std::exp(lc0) * g * g * std::pow(t, n - 1);
    };
    auto gl12 = [&](double a, double b) {
        static const double gx[6] = {0.125233408511468915472, 0.367831498998180193753,
                                     0.587317954286617447297, 0.769902674194304687037,
                                     0.904117256370474856678, 0.981560634246719250691};
        static const double gw[6] = {0.249147045813402785001, 0.233492536538354808761,
                                     0.203167426723065921749, 0.160078328543346226335,
                                     0.106939325995318430960, 0.047175336386511827195};
        double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        double s = 0.0;
        for (int j = 0; j < 6; ++j)
            for (double sgn : {-1.0, 1.0}) s += gw[j] * integrand(c + sgn * hw * gx[j]);
        return hw * s;
    };

    // partial sums over panel counts K/4, K/2, K and two Richardson stages
    std::vector<double> radii(K + 1);
    for (int i = 0; i <= K; ++i) radii[i] = zt.zeros[i] / pir;
    auto partial = [&](int panels) {
        CompensatedSum s;
        s.add(gl12(0.0, radii[0]));
        for (int i = 0; i < panels; ++i) s.add(gl12(radii[i], radii[i + 1]));
        return s.value();
    };
    double s1 = partial(K / 4), s2 = partial(K / 2), s3 = partial(K);
    double r1 = 2.0 * s2 - s1; // kills the 1/K tail term
    double r2 = 2.0 * s3 - s2;
    double extrap = (4.0 * r2 - r1) / 3.0; // kills 1/K^2
    double total = std::exp(lsn) * extrap;
    return std::fabs(rho * total - 1.0);
}

double alg_identity_residual(std::complex<double> u0, std::complex<double> z,
                             std::uint64_t node_seed, int M) {
    if (M < 0) throw domain_error("alg_identity_residual: M must be >= 0");
    std::vector<std::complex<double>> u(M);
    std::mt19937_64 rng(node_seed);
    std::uniform_real_distribution<double> unif(0.8, 1.2);
    for (int j = 1; j <= M; ++j) {
        double scale = node_seed == 0 ? 1.0 : unif(rng);
        u[j - 1] = std::complex<double>(-scale * double(j) * double(j), 0.0);
    }
    for (const auto& uj : u)
        if (z == uj) throw domain_error("alg_identity_residual: z collides with a node");
    if (z == u0) throw domain_error("alg_identity_residual: z collides with u0");

    // suffix products prod_{j=k+1}^M (1-u0/u_j)/(1-z/u_j)
    std::vector<std::complex<double>> suffix(M + 1);
    suffix[M] = 1.0;
    for (int k = M - 1; k >= 0; --k)
        suffix[k] = suffix[k + 1] * ((1.0 - u0 / u[k]) / (1.0 - z / u[k]));

    std::complex<double> rhs = 0.0;
    rhs += suffix[0] / (z - u0); // k = 0 term
    for (int k = 1; k <= M; ++k) rhs += suffix[k] / (z - u[k - 1]);
    std::complex<double> lhs = 1.0 / (z - u0);
    return std::abs(lhs - rhs);
}

} // namespace gcm::interp
