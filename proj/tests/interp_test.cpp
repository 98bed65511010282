#include <cmath>
#include <complex>

#include "doctest.h"
#include "gcm/bounds.hpp"
#include "gcm/errors.hpp"
#include "gcm/interp.hpp"

using namespace gcm;
using namespace gcm::bounds;
using namespace gcm::interp;

TEST_CASE("build_aux with M = 2 is the tangent line at the first node") {
    auto p = make_params(2, kPi, 1.0);
    auto h = build_aux(p, 2, Precision::standard);
    double u1 = h.nodes[0];
    REQUIRE(u1 < 0.0);
    // two-fold Hermite at one point: p2(z) = e^{a u1} (1 + a (z - u1))
    for (double t : {0.0, 0.3, 0.9, 1.4}) {
        double z = -t * t;
        double expect = std::exp(kPi * u1) * (1.0 + kPi * (z - u1));
        CHECK(std::fabs(aux_eval(h, t) - expect) <= 1e-14 * std::fabs(expect) + 1e-16);
    }
}

TEST_CASE("build_aux node layout and validation") {
    auto p = make_params(2, kPi, 1.0);
    auto h = build_aux(p, 40, Precision::extended);
    REQUIRE(h.nodes.size() == 40);
    REQUIRE(h.radii.size() == 20);
    for (int j = 0; j < 20; ++j) {
        CHECK(h.nodes[2 * j] == h.nodes[2 * j + 1]); // doubled
        CHECK(h.nodes[2 * j] == -h.radii[j] * h.radii[j]);
        if (j) CHECK(h.nodes[2 * j] < h.nodes[2 * j - 2]); // decreasing
    }
    // |u_j| = Theta(j^2): implementation-computed envelope constants
    for (int j = 1; j <= 20; ++j) {
        double uj = std::fabs(h.nodes[2 * j - 1]);
        CHECK(uj > 0.15 * j * j);
        CHECK(uj < 15.0 * j * j);
    }
    CHECK_THROWS_AS(build_aux(p, 3, Precision::extended), domain_error);
    CHECK_THROWS_AS(build_aux(p, 402, Precision::extended), domain_error);
    CHECK_THROWS_AS(build_aux(p, 62, Precision::standard), domain_error);
}

TEST_CASE("product-basis coefficients are nonnegative") {
    for (double alpha : {kPi / 2.0, kPi, 2.0 * kPi}) {
        for (double rho : {0.5, 1.0, 2.0}) {
            auto h = build_aux(make_params(2, alpha, rho), 40, Precision::extended);
            for (const auto& c : h.coeffs) CHECK(x_to_double(c) >= -1e-20);
        }
    }
    // larger table, still nonnegative
    auto h = build_aux(make_params(2, kPi, 1.0), 240, Precision::extended);
    for (const auto& c : h.coeffs) CHECK(x_to_double(c) >= -1e-20);
}

TEST_CASE("interpolation residuals vanish at the nodes") {
    auto p = make_params(2, kPi, 1.0);
    auto h = build_aux(p, 120, Precision::extended);
    for (int j = 0; j < 16; ++j) {
        double t = h.radii[j];
        double f = std::exp(-kPi * t * t);
        CHECK(std::fabs(aux_eval(h, t) - f) <= 1e-10 * f);
    }
    // evaluation beyond the node range stays defined (a polynomial)
    double beyond = aux_eval(h, h.radii.back() * 1.05);
    CHECK(std::isfinite(beyond));
}

TEST_CASE("h(0) convergence in M, pinned regression") {
    auto p = make_params(2, kPi, 1.0);
    // frozen from a 40-digit rerun of the same construction
    struct Pin { int M; double h0; };
    for (auto [M, ref] : {Pin{60, 0.394753583591}, Pin{120, 0.406978071228},
                          Pin{200, 0.412025858015}, Pin{240, 0.413302269549}}) {
        auto h = build_aux(p, M, Precision::extended);
        double h0 = aux_eval(h, 0.0);
        CHECK(std::fabs(h0 - ref) <= 1e-9);
        CHECK(h0 <= 1.0);
    }
    // Cauchy in M with shrinking increments
    double d1 = 0.406978071228 - 0.394753583591; // M: 60 -> 120
    double d2 = 0.413302269549 - 0.406978071228; // M: 120 -> 240
    CHECK(d2 < d1);
    CHECK(d2 > 0.0);
}

TEST_CASE("lp_bound_via_aux reproduces the series bound") {
    // Table 1 anchors through the interpolation route
    auto h2 = build_aux(make_params(2, kPi, 1.0), 200, Precision::extended);
    auto r2 = lp_bound_via_aux(h2, 1e-4);
    CHECK(std::fabs(r2.value - 0.15702654) <= 1e-6);
    auto h1 = build_aux(make_params(1, kPi, 1.0), 120, Precision::extended);
    auto r1 = lp_bound_via_aux(h1, 1e-4);
    CHECK(std::fabs(r1.value - 0.08643481) <= 1e-6);
    // cross-module oracle equivalence on a spot grid (full grid in acceptance)
    for (int n : {1, 2, 4}) {
        for (double alpha : {kPi / 2.0, 2.0 * kPi}) {
            auto p = make_params(n, alpha, 1.0);
            auto h = build_aux(p, 160, Precision::extended);
            auto via = lp_bound_via_aux(h, 1e-4);
            auto direct = main_lower_bound(p);
            CHECK(std::fabs(via.value - direct.value) <= 1e-6 * direct.value);
        }
    }
}

TEST_CASE("lp_bound_via_aux is Cauchy in M where truncation is visible") {
    // soft potential at low density: the node radii m/(2 rho) grow slowly, so
    // small M genuinely truncates the summation route
    auto p = make_params(1, 0.5, 2.0);
    double v8 = lp_bound_via_aux(build_aux(p, 8, Precision::standard), 1e-2).value;
    double v16 = lp_bound_via_aux(build_aux(p, 16, Precision::standard), 1e-2).value;
    double v32 = lp_bound_via_aux(build_aux(p, 32, Precision::standard), 1e-3).value;
    double v64 = lp_bound_via_aux(build_aux(p, 64, Precision::extended), 1e-3).value;
    CHECK(v8 < v16);
    CHECK(v16 < v32);
    CHECK(std::fabs(v32 - v64) < std::fabs(v16 - v32));
    CHECK(std::fabs(v16 - v32) < std::fabs(v8 - v16));
    CHECK(std::fabs(v64 - main_lower_bound(p).value) <= 1e-8);
}

TEST_CASE("oracle equivalence extends to n = 8") {
    for (auto [alpha, rho] : {std::pair{kPi, 1.0}, std::pair{2.0 * kPi, 2.0}}) {
        auto p = make_params(8, alpha, rho);
        auto h = build_aux(p, 160, Precision::extended);
        auto via = lp_bound_via_aux(h, 1e-4);
        auto direct = main_lower_bound(p);
        CHECK(std::fabs(via.value / direct.value - 1.0) <= 1e-6);
    }
}

TEST_CASE("lp_bound_via_aux raises on route disagreement at absurd tolerance") {
    auto h = build_aux(make_params(2, kPi, 1.0), 60, Precision::extended);
    CHECK_THROWS_AS(lp_bound_via_aux(h, 1e-12), disagreement_error);
}

TEST_CASE("verify_minorant") {
    auto p = make_params(2, kPi, 1.0);
    auto h = build_aux(p, 200, Precision::extended);
    double tmax = 0.9 * h.radii.back();
    auto rep = verify_minorant(h, tmax, 4000);
    CHECK(rep.max_violation <= 1e-8);
    // strictly below the Gaussian between consecutive node radii
    for (int j = 0; j < 10; ++j) {
        double t = 0.5 * (h.radii[j] + h.radii[j + 1]);
        CHECK(aux_eval(h, t) < std::exp(-kPi * t * t));
    }
    CHECK_THROWS_AS(verify_minorant(h, tmax, 10), domain_error);
}

TEST_CASE("psd_sample_check") {
    // 1x1 matrix: the 0-distance limit 1/(2^nu Gamma(nu+1)) > 0
    double one = psd_sample_check(3, 0, 1, 3, 42);
    CHECK(one > 0.0);
    CHECK(std::fabs(one - 1.0 / (std::sqrt(2.0) * std::tgamma(1.5))) <= 1e-12);

    double scale3 = 1.0 / (std::sqrt(2.0) * std::tgamma(1.5));
    CHECK(psd_sample_check(3, 0, 8, 200, 7) >= -1e-9 * scale3);
    double scale2 = 1.0; // nu = 0: kernel(0) = 1
    CHECK(psd_sample_check(2, 3, 8, 200, 11) >= -1e-9 * scale2);
    // n = 1 exercises the nu = -1/2 cosine closed form
    CHECK(psd_sample_check(1, 2, 6, 100, 3) >= -1e-9 * std::sqrt(2.0 / kPi));
    CHECK_THROWS_AS(psd_sample_check(9, 0, 4, 1, 1), domain_error);
    CHECK_THROWS_AS(psd_sample_check(3, 11, 4, 1, 1), domain_error);
    CHECK_THROWS_AS(psd_sample_check(3, 0, 13, 1, 1), domain_error);
}

TEST_CASE("bgf_residual") {
    CHECK(bgf_residual(1, 1.0) <= 1e-8);
    CHECK(bgf_residual(2, 1.0) <= 1e-7);
    CHECK(bgf_residual(8, 1.0) <= 1e-6);
    CHECK(bgf_residual(2, 0.5) <= 1e-7);
    CHECK_THROWS_AS(bgf_residual(33, 1.0), domain_error);
}

TEST_CASE("alg_identity_residual") {
    using cd = std::complex<double>;
    CHECK(alg_identity_residual(cd(-0.5, 0.0), cd(1.0, 1.0), 0, 0) == 0.0);
    double lhs = std::abs(1.0 / (cd(1.0, 1.0) - cd(-0.5, 0.0)));
    CHECK(alg_identity_residual(cd(-0.5, 0.0), cd(1.0, 1.0), 0, 30) <= 1e-12 * lhs);
    // jittered Theta(j^2) nodes
    CHECK(alg_identity_residual(cd(-2.0, 0.3), cd(0.7, -1.1), 99, 40) <= 1e-11);
    // collision with node u_5 = -25
    CHECK_THROWS_AS(alg_identity_residual(cd(-0.5, 0.0), cd(-25.0, 0.0), 0, 30), domain_error);
}
