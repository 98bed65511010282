#include "gcm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gcm/errors.hpp"

namespace gcm::bounds {

using specfun::BesselZeroTable;

namespace {

// Streaming log-sum-exp of positive terms given by their natural logs.
struct LogSumExp {
    double shift = -HUGE_VAL;
    CompensatedSum sum;
    long count = 0;

    void add(double log_term) {
        if (log_term == -HUGE_VAL) {
            ++count;
            return;
        }
        if (count == 0 || log_term > shift) {
            double factor = (count == 0) ? 0.0 : std::exp(shift - log_term);
            double scaled = sum.value() * factor;
            sum = CompensatedSum();
            sum.add(scaled);
            shift = log_term;
        }
        sum.add(std::exp(log_term - shift));
        ++count;
    }
    double log_value() const {
        double s = sum.value();
        if (count == 0 || s <= 0.0) return -HUGE_VAL;
        return shift + std::log(s);
    }
};

double derived_radius_log(int n, double log_vol) {
    // solve log_ball_volume(n, r) = log_vol for log r
    DDouble lr = (DDouble(log_vol) + specfun::log_gamma_dd(DDouble(0.5 * n + 1.0)) -
                  DDouble(0.5 * n) * dd_log(dd_pi)) /
                 DDouble(double(n));
    return double(lr);
}

void validate(const BoundParams& p) {
    if (p.n < 1) throw domain_error("bounds: dimension n must be >= 1");
    if (!(p.alpha > 0.0)) throw domain_error("bounds: alpha must be > 0");
    if (!(p.rho > 0.0)) throw domain_error("bounds: rho must be > 0");
    if (!(p.r > 0.0)) throw domain_error("bounds: derived radius invalid");
}

void validate_tol(double tol) {
    if (!(tol > 0.0) || tol > 1e-6)
        throw domain_error("bounds: tol must lie in (0, 1e-6]");
}

// log of the term prefactor n / (2^{n-1} (n/2)!^2)
double main_prefactor_log(int n) {
    DDouble v = dd_log(DDouble(double(n))) - DDouble(double(n - 1)) * dd_ln2 -
                DDouble(2.0) * specfun::log_gamma_dd(DDouble(0.5 * n + 1.0));
    return double(v);
}

void grow_table(BesselZeroTable& t, double order, int need) {
    if (int(t.zeros.size()) >= need && t.order == order) return;
    t = specfun::bessel_zeros(order, std::max(need, 16));
}

// Remainder majorant past lam_last: terms t_m <= 2 exp(pref) (pi/2) lam^{n-1}
// e^{-alpha lam^2/c^2} (envelope lam J^2 ~ 2/pi with slack 2), zeros spaced
// >= pi/2, so the remainder is at most (2/pi) times the integral of that
// envelope from lam_last - pi/2. Returns the log of the bound.
double tail_majorant_log(int n, double pref, double alpha, double c, double lam_last) {
    double x0 = lam_last - kPi / 2.0;
    if (x0 <= 0.0) return HUGE_VAL;
    // decreasing integrand required
    double lam_peak = std::sqrt(std::max(0.0, (n - 1) * c * c / (2.0 * alpha)));
    if (x0 <= lam_peak) return HUGE_VAL;
    double lq = specfun::log_reg_gamma_upper(0.5 * n, alpha * (x0 / c) * (x0 / c));
    return pref + std::log(2.0) + 0.5 * n * (2.0 * std::log(c) - std::log(alpha)) +
           specfun::log_gamma(0.5 * n) + lq;
}

BoundResult main_lower_impl(const BoundParams& p, double tol, BesselZeroTable& table,
                            long m_cap, bool allow_partial) {
    validate(p);
    validate_tol(tol);
    double nu = 0.5 * p.n;
    double pref = main_prefactor_log(p.n);
    double pir = kPi * p.r;

    AsymptoticProfile prof = gaussian_profile(p);
    long m_min = std::max<long>(8, long(std::ceil(2.0 * prof.peak_index)));

    LogSumExp acc;
    double tail_log = HUGE_VAL;
    long m = 0;
    bool partial = false;
    while (true) {
        ++m;
        if (m > m_cap) {
            // A partial sum of nonnegative terms is still a valid lower bound;
            // callers that integrate over alpha use this in regions whose
            // total contribution is negligible.
            if (allow_partial) {
                --m;
                partial = true;
                break;
            }
            throw convergence_error("main_lower_bound: series did not converge within " +
                                    std::to_string(m_cap) + " terms");
        }
        if (m > long(table.zeros.size()))
            grow_table(table, nu, int(std::max<long>(2 * m, 64)));
        double lam = table.zeros[m - 1];
        double cj = table.companion_values[m - 1];
        double t = lam / pir;
        double lt = pref + (p.n - 2) * std::log(lam) - 2.0 * std::log(std::fabs(cj)) -
                    p.alpha * t * t;
        acc.add(lt);
        if (m >= m_min) {
            double ls = acc.log_value();
            if (lt < ls + std::log(tol)) {
                tail_log = tail_majorant_log(p.n, pref, p.alpha, pir, lam);
                if (tail_log < ls + std::log(tol)) break;
            }
        }
    }

    BoundResult res;
    res.kind = BoundKind::main_lower;
    res.params = p;
    res.terms_used = m;
    res.log_value = acc.log_value();
    res.value = std::exp(res.log_value);
    res.tail_bound = partial ? HUGE_VAL : std::exp(tail_log);
    return res;
}

BoundResult main_lower_impl(const BoundParams& p, double tol, BesselZeroTable& table) {
    return main_lower_impl(p, tol, table, 10L * p.n + 10000L, false);
}

} // namespace

BoundParams make_params(int n, double alpha, double rho) {
    if (n < 1) throw domain_error("make_params: dimension n must be >= 1");
    if (!(alpha > 0.0)) throw domain_error("make_params: alpha must be > 0");
    if (!(rho > 0.0)) throw domain_error("make_params: rho must be > 0");
    BoundParams p;
    p.n = n;
    p.alpha = alpha;
    p.rho = rho;
    // vol(B_{r/2}^n) = rho
    p.r = 2.0 * std::exp(derived_radius_log(n, std::log(rho)));
    return p;
}

const char* kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::main_lower: return "main_lower";
        case BoundKind::expectation: return "expectation";
        case BoundKind::cond_expectation: return "cond_expectation";
        case BoundKind::dual_cap: return "dual_cap";
        case BoundKind::invpow_upper: return "invpow_upper";
        case BoundKind::invpow_lower: return "invpow_lower";
        case BoundKind::asymptotic_rate: return "asymptotic_rate";
        case BoundKind::lattice_energy: return "lattice_energy";
    }
    return "unknown";
}

BoundResult main_lower_bound(const BoundParams& p, double tol) {
    BesselZeroTable table;
    return main_lower_impl(p, tol, table);
}

BoundResult main_lower_bound(const BoundParams& p, double tol, BesselZeroTable& zeros) {
    return main_lower_impl(p, tol, zeros);
}

BoundResult normalized_main_bound(const BoundParams& p, double tol) {
    BoundResult r = main_lower_bound(p, tol);
    double shift = 0.5 * p.n * (std::log(kPi) - std::log(p.alpha));
    r.log_value -= shift;
    r.value = std::exp(r.log_value);
    r.tail_bound *= std::exp(-shift);
    return r;
}

BoundResult expectation_bound(const BoundParams& p) {
    validate(p);
    BoundResult res;
    res.kind = BoundKind::expectation;
    res.params = p;
    res.log_value = std::log(p.rho) + 0.5 * p.n * (std::log(kPi) - std::log(p.alpha));
    res.value = std::exp(res.log_value);
    return res;
}

BoundResult conditional_expectation_bound(const BoundParams& p) {
    validate(p);
    if (p.n <= 1) throw domain_error("conditional_expectation_bound: requires n > 1");
    double log_rc = derived_radius_log(p.n, -std::log(double(p.n)));
    double rc2 = std::exp(2.0 * log_rc);
    BoundResult res;
    res.kind = BoundKind::cond_expectation;
    res.params = p;
    res.log_value = std::log(p.rho) - std::log1p(-0.5 / p.n) +
                    0.5 * p.n * (std::log(kPi) - std::log(p.alpha)) +
                    specfun::log_reg_gamma_upper(0.5 * p.n, p.alpha * rc2);
    res.value = std::exp(res.log_value);
    return res;
}

BoundResult general_truncated_expectation(const BoundParams& p, double r_cut, double k_div) {
    validate(p);
    if (r_cut < 0.0) throw domain_error("general_truncated_expectation: r_cut must be >= 0");
    if (!(k_div >= 2.0)) throw domain_error("general_truncated_expectation: k_div must be >= 2");
    double vol = r_cut == 0.0 ? 0.0 : std::exp(specfun::log_ball_volume(p.n, r_cut));
    if (!(vol < k_div))
        throw domain_error("general_truncated_expectation: vol(B_r_cut) must stay below k_div");
    double lq = r_cut == 0.0 ? 0.0
                             : specfun::log_reg_gamma_upper(0.5 * p.n, p.alpha * r_cut * r_cut);
    BoundResult res;
    res.kind = BoundKind::cond_expectation;
    res.params = p;
    res.log_value = std::log(p.rho) - std::log1p(-vol / k_div) +
                    0.5 * p.n * (std::log(kPi) - std::log(p.alpha)) + lq;
    res.value = std::exp(res.log_value);
    return res;
}

BoundResult dual_cap(const BoundParams& p) {
    validate(p);
    double log_rd = derived_radius_log(p.n, -std::log(p.rho));
    double rd2 = std::exp(2.0 * log_rd);
    BoundResult res;
    res.kind = BoundKind::dual_cap;
    res.params = p;
    res.log_value = std::log(p.rho) + 0.5 * p.n * (std::log(kPi) - std::log(p.alpha)) +
                    specfun::log_reg_gamma_upper(0.5 * p.n, p.alpha * rd2);
    res.value = std::exp(res.log_value);
    return res;
}

RatePair asymptotic_rate(double alpha) {
    if (!(alpha > 0.0)) throw domain_error("asymptotic_rate: alpha must be > 0");
    RatePair r;
    r.lower_rate = alpha < kFourPiOverE ? std::sqrt(kPi / alpha)
                                        : 0.5 * std::exp(1.0 - alpha * kE / (8.0 * kPi));
    r.upper_rate = alpha <= kPiTimesE
                       ? std::sqrt(kPi / alpha)
                       : std::sqrt(kPi / alpha) * std::exp(0.5 - alpha / (2.0 * kPiTimesE));
    return r;
}

double AsymptoticProfile::predicted_term(double d) const {
    if (!defined) return 0.0;
    return rho * std::exp(-kPi * K * d * d) * std::sqrt(K / double(n));
}

AsymptoticProfile gaussian_profile(const BoundParams& p) {
    validate(p);
    AsymptoticProfile prof;
    prof.n = p.n;
    prof.rho = p.rho;
    prof.t_m = std::sqrt(4.0 * kPi / (p.alpha * kE));
    if (p.alpha >= kFourPiOverE) {
        prof.defined = false; // c = 0, K left unset
        return prof;
    }
    prof.defined = true;
    prof.c = (std::sqrt(prof.t_m * prof.t_m - 1.0) - std::acos(1.0 / prof.t_m)) / (2.0 * kPi);
    prof.K = 4.0 * kPi * p.alpha / (kFourPiOverE - p.alpha);
    prof.peak_index = prof.c * p.n;
    return prof;
}

double profile_agreement(const BoundParams& p, double window) {
    validate(p);
    if (!(window > 0.0)) throw domain_error("profile_agreement: window must be > 0");
    if (p.alpha >= kFourPiOverE)
        throw domain_error("profile_agreement: requires alpha < 4 pi / e");
    AsymptoticProfile prof = gaussian_profile(p);
    if (prof.peak_index < 5.0)
        throw domain_error("profile_agreement: requires c * n >= 5");

    double sqn = std::sqrt(double(p.n));
    double sigma_m = sqn / std::sqrt(2.0 * kPi * prof.K); // index-space std dev
    long mlo = std::max(1L, long(std::ceil(prof.peak_index - window * sigma_m)));
    long mhi = long(std::floor(prof.peak_index + window * sigma_m));
    BesselZeroTable table = specfun::bessel_zeros(0.5 * p.n, int(mhi));

    double pref = main_prefactor_log(p.n) - 0.5 * p.n * (std::log(kPi) - std::log(p.alpha));
    double pir = kPi * p.r;
    double worst = 0.0;
    for (long m = mlo; m <= mhi; ++m) {
        double lam = table.zeros[m - 1];
        double cj = table.companion_values[m - 1];
        double t = lam / pir;
        double lt = pref + (p.n - 2) * std::log(lam) - 2.0 * std::log(std::fabs(cj)) -
                    p.alpha * t * t;
        double d = (double(m) - prof.peak_index) / sqn;
        double dev = std::fabs(std::exp(lt) / prof.predicted_term(d) - 1.0);
        worst = std::max(worst, dev);
    }
    return worst;
}

BoundResult inverse_power_upper_bound(int n, double s, double rho) {
    if (n <= 1) throw domain_error("inverse_power_upper_bound: requires n > 1");
    if (!(s > 0.0)) throw domain_error("inverse_power_upper_bound: requires s > 0");
    if (!(rho > 0.0)) throw domain_error("inverse_power_upper_bound: requires rho > 0");
    double log_r = derived_radius_log(n, -std::log(double(n)));
    DDouble lv = DDouble(std::log(rho)) - DDouble(std::log1p(-0.5 / n)) +
                 dd_log(DDouble(double(n))) + DDouble(0.5 * n) * dd_log(dd_pi) -
                 specfun::log_gamma_dd(DDouble(0.5 * n + 1.0)) - DDouble(s * log_r) -
                 dd_log(DDouble(s));
    BoundResult res;
    res.kind = BoundKind::invpow_upper;
    res.params.n = n;
    res.params.alpha = 0.0;
    res.params.rho = rho;
    res.params.r = std::exp(log_r);
    res.log_value = double(lv);
    res.value = std::exp(res.log_value);
    return res;
}

double inverse_power_upper_asymptotic_log(int n, double s, double rho) {
    if (n <= 1 || !(s > 0.0) || !(rho > 0.0))
        throw domain_error("inverse_power_upper_asymptotic_log: bad arguments");
    DDouble lv = dd_log(DDouble(2.0 * rho / s)) + DDouble(0.5 * (n + s)) * dd_log(dd_pi) +
                 DDouble(0.5 * s) - specfun::log_gamma_dd(DDouble(0.5 * (n + s)));
    return double(lv);
}

BoundResult inverse_power_lower_bound(int n, double s, double rho, double tol) {
    if (n < 1) throw domain_error("inverse_power_lower_bound: requires n >= 1");
    if (!(s > 0.0)) throw domain_error("inverse_power_lower_bound: requires s > 0");
    if (!(rho > 0.0)) throw domain_error("inverse_power_lower_bound: requires rho > 0");
    if (!(tol > 0.0) || tol > 1e-2)
        throw domain_error("inverse_power_lower_bound: tol must lie in (0, 1e-2]");

    // I = int_0^A E(alpha) alpha^{(n+s)/2-1} dalpha / Gamma((n+s)/2),  A = 4 pi/e.
    // Substituting alpha = u^2 removes the endpoint singularity for s >= 1:
    // I = 2 int_0^{sqrt(A)} E(u^2) u^{n+s-1} du / Gamma((n+s)/2).
    BesselZeroTable table;
    double lgam = double(specfun::log_gamma_dd(DDouble(0.5 * (n + s))));
    // Near alpha = 0 the series peak index grows like n/sqrt(alpha); terms
    // past the cap are dropped (partial sums stay valid lower bounds) and the
    // affected region contributes O(u^2) relative mass to the integral.
    auto log_integrand = [&](double u) {
        BoundParams p = make_params(n, u * u, rho);
        BoundResult e = main_lower_impl(p, 1e-9, table, 400000, true);
        return e.log_value + (n + s - 1.0) * std::log(u) + std::log(2.0) - lgam;
    };

    // 20-point Gauss-Legendre nodes/weights on [-1, 1]
    static const double gx[10] = {
        0.076526521133497333755, 0.227785851141645078080, 0.373706088715419560673,
        0.510867001950827098004, 0.636053680726515025453, 0.746331906460150792614,
        0.839116971822218823395, 0.912234428251325905868, 0.963971927277913791268,
        0.993128599185094924786};
    static const double gw[10] = {
        0.152753387130725850698, 0.149172986472603746788, 0.142096109318382051329,
        0.131688638449176626898, 0.118194531961518417312, 0.101930119817240435037,
        0.083276741576704748725, 0.062672048334109063570, 0.040601429800386941331,
        0.017614007139152118312};

    double umax = std::sqrt(kFourPiOverE);
    auto integrate = [&](int panels) {
        LogSumExp acc;
        for (int ip = 0; ip < panels; ++ip) {
            double a = umax * ip / panels, b = umax * (ip + 1) / panels;
            double c = 0.5 * (a + b), h = 0.5 * (b - a);
            for (int j = 0; j < 10; ++j) {
                for (double sgn : {-1.0, 1.0}) {
                    double u = c + sgn * h * gx[j];
                    acc.add(log_integrand(u) + std::log(gw[j] * h));
                }
            }
        }
        return acc.log_value();
    };

    double prev = integrate(8);
    double cur = 0.0;
    double change = HUGE_VAL;
    int panels_used = 0;
    for (int panels = 16; panels <= 512; panels *= 2) {
        cur = integrate(panels);
        change = std::fabs(std::expm1(prev - cur));
        prev = cur;
        panels_used = panels;
        if (change < tol) break;
    }
    if (change >= tol)
        throw convergence_error("inverse_power_lower_bound: quadrature did not converge");

    BoundResult res;
    res.kind = BoundKind::invpow_lower;
    res.params.n = n;
    res.params.alpha = 0.0;
    res.params.rho = rho;
    res.params.r = 0.0;
    res.log_value = cur;
    res.value = std::exp(cur);
    res.tail_bound = res.value * change;
    res.terms_used = panels_used;
    return res;
}

} // namespace gcm::bounds
