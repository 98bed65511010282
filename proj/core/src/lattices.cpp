#include "gcm/lattices.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcm/errors.hpp"

namespace gcm::lattices {

namespace {

using i128 = __int128;

constexpr long long kInt64Max = 0x7fffffffffffffffLL;

long long checked_narrow(i128 v, const char* what) {
    if (v > i128(kInt64Max) || v < -i128(kInt64Max))
        throw overflow_error(std::string(what) + ": count exceeds 64-bit range");
    return (long long)v;
}

// sigma_k(m) in 128-bit
i128 sigma_pow(int k, long long m) {
    i128 s = 0;
    for (long long d = 1; d * d <= m; ++d) {
        if (m % d) continue;
        long long e = m / d;
        i128 pd = 1, pe = 1;
        for (int i = 0; i < k; ++i) {
            pd *= d;
            pe *= e;
        }
        s += pd;
        if (e != d) s += pe;
    }
    return s;
}

// coefficients of prod_{m>=1} (1 - q^m) up to degree N (pentagonal numbers)
std::vector<long long> euler_product(int N) {
    std::vector<long long> p(N + 1, 0);
    p[0] = 1;
    for (long long k = 1;; ++k) {
        long long g1 = k * (3 * k - 1) / 2;
        long long g2 = k * (3 * k + 1) / 2;
        if (g1 > N && g2 > N) break;
        long long sgn = (k % 2) ? -1 : 1;
        if (g1 <= N) p[g1] += sgn;
        if (g2 <= N) p[g2] += sgn;
    }
    return p;
}

std::vector<long long> poly_mul(const std::vector<long long>& a, const std::vector<long long>& b,
                                int N) {
    std::vector<long long> c(N + 1, 0);
    for (int i = 0; i <= N; ++i) {
        if (!a[i]) continue;
        for (int j = 0; i + j <= N; ++j) {
            if (!b[j]) continue;
            i128 t = i128(a[i]) * b[j] + c[i + j];
            c[i + j] = checked_narrow(t, "ramanujan_tau");
        }
    }
    return c;
}

// direct enumeration helpers ------------------------------------------------

std::vector<long long> zn_counts(int n, long long max_norm) {
    // coefficients of theta3^n by iterated convolution
    std::vector<long long> r1(max_norm + 1, 0);
    r1[0] = 1;
    for (long long m = 1; m * m <= max_norm; ++m) r1[m * m] = 2;
    std::vector<long long> acc(max_norm + 1, 0);
    acc[0] = 1;
    for (int i = 0; i < n; ++i) {
        std::vector<long long> next(max_norm + 1, 0);
        for (long long a = 0; a <= max_norm; ++a) {
            if (!acc[a]) continue;
            for (long long b = 0; a + b <= max_norm; ++b) {
                if (!r1[b]) continue;
                i128 t = i128(acc[a]) * r1[b] + next[a + b];
                next[a + b] = checked_narrow(t, "theta_coefficients(Zn)");
            }
        }
        acc = std::move(next);
    }
    return acc;
}

std::vector<long long> a2_counts(long long max_norm) {
    // Gram [[2,1],[1,2]]: norm(i,j) = 2(i^2 + i j + j^2)
    std::vector<long long> c(max_norm + 1, 0);
    long long B = (long long)std::sqrt((double)max_norm) + 2;
    for (long long i = -B; i <= B; ++i)
        for (long long j = -B; j <= B; ++j) {
            long long q = 2 * (i * i + i * j + j * j);
            if (q > 0 && q <= max_norm) ++c[q];
        }
    return c;
}

std::vector<long long> d4_counts(long long max_norm) {
    // integer vectors with even coordinate sum
    std::vector<long long> c(max_norm + 1, 0);
    long long B = (long long)std::sqrt((double)max_norm) + 1;
    for (long long a = -B; a <= B; ++a)
        for (long long b = -B; b <= B; ++b)
            for (long long x = -B; x <= B; ++x)
                for (long long y = -B; y <= B; ++y) {
                    if ((a + b + x + y) & 1) continue;
                    long long q = a * a + b * b + x * x + y * y;
                    if (q > 0 && q <= max_norm) ++c[q];
                }
    return c;
}

std::vector<ThetaCoefficient> compress(const std::vector<long long>& counts) {
    std::vector<ThetaCoefficient> out;
    for (long long q = 1; q < (long long)counts.size(); ++q)
        if (counts[q]) out.push_back({q, counts[q]});
    return out;
}

std::vector<ThetaCoefficient> generate(const LatticeModel& model, long long max_norm) {
    switch (model.name) {
        case LatticeName::Zn:
            return compress(zn_counts(model.dim, max_norm));
        case LatticeName::A2:
            return compress(a2_counts(max_norm));
        case LatticeName::D4:
            return compress(d4_counts(max_norm));
        case LatticeName::E8: {
            std::vector<ThetaCoefficient> out;
            for (long long m = 1; 2 * m <= max_norm; ++m)
                out.push_back({2 * m, checked_narrow(240 * sigma_pow(3, m),
                                                     "theta_coefficients(E8)")});
            return out;
        }
        case LatticeName::Leech: {
            if (max_norm > 128)
                throw overflow_error("theta_coefficients(Leech): supported up to norm 128");
            auto tau = ramanujan_tau(int(std::max<long long>(1, max_norm / 2)));
            std::vector<ThetaCoefficient> out;
            for (long long m = 1; 2 * m <= max_norm; ++m) {
                i128 t = sigma_pow(11, m) - tau[m - 1];
                if (t % 691 != 0)
                    throw precision_error("theta_coefficients(Leech): 691 divisibility failed");
                long long count = checked_narrow(i128(65520) * (t / 691),
                                                 "theta_coefficients(Leech)");
                if (count) out.push_back({2 * m, count});
            }
            return out;
        }
    }
    throw domain_error("theta_coefficients: unknown lattice");
}

std::filesystem::path cache_path(const LatticeModel& model, const std::string& cache_dir) {
    return std::filesystem::path(cache_dir) / (model.label + ".theta");
}

bool load_cache(const LatticeModel& model, const std::string& cache_dir, long long max_norm,
                std::vector<ThetaCoefficient>& out) {
    std::ifstream in(cache_path(model, cache_dir));
    if (!in) return false;
    std::vector<ThetaCoefficient> coeffs;
    long long norm, count;
    while (in >> norm >> count) coeffs.push_back({norm, count});
    if (coeffs.empty() || coeffs.back().norm < max_norm) return false;
    out.clear();
    for (const auto& c : coeffs)
        if (c.norm <= max_norm) out.push_back(c);
    return true;
}

void store_cache(const LatticeModel& model, const std::string& cache_dir,
                 const std::vector<ThetaCoefficient>& coeffs) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    std::ofstream out(cache_path(model, cache_dir));
    for (const auto& c : coeffs) out << c.norm << " " << c.count << "\n";
}

} // namespace

LatticeModel make_lattice(LatticeName name, int zn_dim) {
    LatticeModel m;
    m.name = name;
    switch (name) {
        case LatticeName::Zn:
            if (zn_dim < 1) throw domain_error("make_lattice: Zn needs dimension >= 1");
            m.dim = zn_dim;
            m.det_covolume = 1.0;
            m.label = "Z" + std::to_string(zn_dim);
            break;
        case LatticeName::A2:
            m.dim = 2;
            m.det_covolume = std::sqrt(3.0);
            m.label = "A2";
            break;
        case LatticeName::D4:
            m.dim = 4;
            m.det_covolume = 2.0;
            m.label = "D4";
            break;
        case LatticeName::E8:
            m.dim = 8;
            m.det_covolume = 1.0;
            m.label = "E8";
            break;
        case LatticeName::Leech:
            m.dim = 24;
            m.det_covolume = 1.0;
            m.label = "Leech";
            break;
    }
    return m;
}

LatticeModel lattice_from_label(const std::string& label) {
    if (label == "A2") return make_lattice(LatticeName::A2);
    if (label == "D4") return make_lattice(LatticeName::D4);
    if (label == "E8") return make_lattice(LatticeName::E8);
    if (label == "Leech") return make_lattice(LatticeName::Leech);
    if (!label.empty() && label[0] == 'Z') {
        int n = 0;
        try {
            n = std::stoi(label.substr(1));
        } catch (...) {
            throw domain_error("lattice_from_label: bad label '" + label + "'");
        }
        return make_lattice(LatticeName::Zn, n);
    }
    throw domain_error("lattice_from_label: bad label '" + label + "'");
}

std::vector<ThetaCoefficient> theta_coefficients(const LatticeModel& model, long long max_norm,
                                                 const std::string& cache_dir) {
    if (max_norm < 1) throw domain_error("theta_coefficients: max_norm too small");
    if (!cache_dir.empty()) {
        std::vector<ThetaCoefficient> cached;
        if (load_cache(model, cache_dir, max_norm, cached)) return cached;
    }
    auto coeffs = generate(model, max_norm);
    if (!cache_dir.empty()) store_cache(model, cache_dir, coeffs);
    return coeffs;
}

std::vector<long long> ramanujan_tau(int m_max) {
    if (m_max < 1 || m_max > 64)
        throw domain_error("ramanujan_tau: m_max must lie in [1, 64]");
    int N = m_max - 1; // need q^{m-1} coefficients of prod(1-q^m)^24
    auto p = euler_product(N);
    auto p2 = poly_mul(p, p, N);   // ^2
    auto p4 = poly_mul(p2, p2, N); // ^4
    auto p8 = poly_mul(p4, p4, N); // ^8
    auto p24 = poly_mul(poly_mul(p8, p8, N), p8, N);
    std::vector<long long> tau(m_max);
    for (int m = 1; m <= m_max; ++m) tau[m - 1] = p24[m - 1];
    return tau;
}

bounds::BoundResult lattice_energy(const LatticeModel& model, double alpha, double rho,
                                   double tol, const std::string& cache_dir) {
    if (!(alpha > 0.0)) throw domain_error("lattice_energy: alpha must be > 0");
    if (!(rho > 0.0)) throw domain_error("lattice_energy: rho must be > 0");
    if (!(tol > 0.0) || tol > 1e-10)
        throw domain_error("lattice_energy: tol must lie in (0, 1e-10]");
    int n = model.dim;
    double s2 = std::pow(rho * model.det_covolume, 2.0 / n);
    double aeff = alpha / s2; // energy = sum N(l^2) exp(-aeff l^2)

    bounds::BoundResult res;
    res.kind = bounds::BoundKind::lattice_energy;
    res.params = bounds::make_params(n, alpha, rho);

    if (model.name == LatticeName::Zn) {
        // theta3^n - 1 via the one-dimensional factorization
        CompensatedSum th;
        th.add(1.0);
        for (long long m = 1;; ++m) {
            double t = 2.0 * std::exp(-aeff * double(m) * double(m));
            if (t < 1e-18) break;
            th.add(t);
            if (m > 100000) throw convergence_error("lattice_energy: theta series stalled");
        }
        double lt = double(n) * std::log(th.value());
        res.log_value = lt >= 700.0 ? lt : std::log(std::expm1(lt));
        res.value = std::exp(res.log_value);
        res.terms_used = 0;
        res.tail_bound = res.value * 1e-14;
        return res;
    }

    long long max_norm = 16;
    while (true) {
        auto coeffs = theta_coefficients(model, max_norm, cache_dir);
        CompensatedSum sum;
        long long shells = 0;
        double tail = HUGE_VAL;
        double env_log = -HUGE_VAL; // log of max count(q)/q^n over observed shells
        for (const auto& c : coeffs) {
            sum.add(double(c.count) * std::exp(-aeff * double(c.norm)));
            env_log = std::max(env_log,
                               std::log(double(c.count)) - double(n) * std::log(double(c.norm)));
            ++shells;
        }
        if (!coeffs.empty()) {
            // Shell counts obey count(q) <= C q^n for the crude envelope C
            // observed so far (true growth is q^{n/2-1}), so the remainder is
            // at most C int_L^infty x^n e^{-aeff x} dx.
            double L = double(coeffs.back().norm);
            double lt = env_log + specfun::log_gamma(double(n + 1)) -
                        (n + 1) * std::log(aeff) +
                        specfun::log_reg_gamma_upper(double(n + 1), aeff * L);
            tail = std::exp(lt);
        }
        if (tail <= tol * sum.value()) {
            res.log_value = std::log(sum.value());
            res.value = sum.value();
            res.terms_used = shells;
            res.tail_bound = tail;
            return res;
        }
        max_norm *= 2;
        if (max_norm > (1 << 22))
            throw convergence_error("lattice_energy: series did not converge");
    }
}

} // namespace gcm::lattices
