#include <doctest.h>

#include <cmath>
#include <vector>

#include "invwish/ensembles.hpp"
#include "invwish/kernels.hpp"
#include "invwish/quadrature.hpp"
#include "invwish/stats.hpp"

using namespace invwish;

TEST_CASE("histogram: degenerate batch, mass conservation, errors") {
    Eigen::VectorXd edges = Eigen::VectorXd::LinSpaced(11, 0.0, 10.0);
    Eigen::VectorXd two = Eigen::VectorXd::Constant(2, 3.5);
    std::vector<Spectrum> batch(5, Spectrum(two));
    const Histogram h = empirical_rho1(batch, edges);
    const Eigen::VectorXd d = h.density();
    for (int b = 0; b < 10; ++b) {
        if (b == 3) CHECK(d[b] == doctest::Approx(2.0 / 1.0)); // both points in [3,4)
        else CHECK(d[b] == 0.0);
    }
    long long total = 0;
    for (long long c : h.counts) total += c;
    CHECK(total == h.placed);
    CHECK(h.placed + h.out_of_range == 10);

    CHECK_THROWS_AS(empirical_rho1({}, edges), std::invalid_argument);
    Eigen::VectorXd bad(2);
    bad << 1.0, 1.0;
    CHECK_THROWS_AS(Histogram{bad}, std::invalid_argument);

    const std::string csv = h.to_csv();
    CHECK(csv.rfind("lo,hi,count,density\n", 0) == 0);
    long lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 11);
}

TEST_CASE("empirical rho1 mass approximates the particle count") {
    // At (nu, N) = (0, 10) roughly 0.33 of a particle sits above 50 and
    // 0.05 above 400, so the 2% mass check needs the wider interval.
    const int n = 10000;
    Eigen::VectorXd edges = Eigen::VectorXd::LinSpaced(41, 0.0, 400.0);
    std::vector<Spectrum> batch;
    batch.reserve(n);
    for (int i = 0; i < n; ++i) {
        RngStream r(50, i);
        batch.push_back(sample_mu_spectrum(r, EnsembleParams(0.0, 10)));
    }
    const Histogram h = empirical_rho1(batch, edges);
    const Eigen::VectorXd d = h.density();
    double mass = 0.0;
    for (int b = 0; b < 40; ++b) mass += d[b] * (edges[b + 1] - edges[b]);
    CHECK(std::abs(mass - 10.0) <= 0.02 * 10.0);
}

TEST_CASE("scaled spectra match the kernel diagonal bin by bin") {
    const int n = 10000, N = 30, nbins = 30;
    const double lo = 0.05, hi = 5.0;
    Eigen::VectorXd edges = Eigen::VectorXd::LinSpaced(nbins + 1, lo, hi);
    Histogram h(edges);
    for (int i = 0; i < n; ++i) {
        RngStream r(51, i);
        const Spectrum sp = sample_mu_spectrum(r, EnsembleParams(0.0, N));
        for (int k = 0; k < N; ++k) h.add_point(sp[k] / N);
        ++h.total_samples;
    }
    for (int b = 0; b < nbins; ++b) {
        const auto f = [&](double x) { return rescaled_kernel_diag(0.0, N, x); };
        const double expect = n * integrate_adaptive(f, edges[b], edges[b + 1], 1e-9, 1e-9).value;
        const double z = (h.counts[b] - expect) / std::sqrt(std::max(expect, 1.0));
        CHECK(std::abs(z) < 4.0);
    }
}

TEST_CASE("ks_two_sample: identical, separated, and validation") {
    std::vector<double> a{0.1, 0.2, 0.5, 0.9};
    TestReport same = ks_two_sample(a, a, "same");
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    std::vector<double> u1(10000), u2(10000);
    RngStream ra(52, 0), rb(52, 1);
    for (auto& v : u1) v = ra.next_unit();
    for (auto& v : u2) v = 0.5 + rb.next_unit();
    const TestReport sep = ks_two_sample(std::move(u1), std::move(u2), "separated");
    CHECK(sep.p_value < 1e-6);

    CHECK_THROWS_AS(ks_two_sample({}, {1.0}, "empty"), std::invalid_argument);
}

TEST_CASE("distribution tails: frozen references") {
    // reference values from an independent statistics package
    CHECK(chi_square_sf(10.0, 10.0) == doctest::Approx(0.44049328506521257).epsilon(1e-10));
    CHECK(chi_square_sf(31.41, 20.0) == doctest::Approx(0.05000523920231515).epsilon(1e-10));
    CHECK(chi_square_sf(3.2, 7.5) == doctest::Approx(0.8965569460733172).epsilon(1e-10));
    CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-10));
    CHECK(kolmogorov_sf(1.5) == doctest::Approx(0.022217962616525127).epsilon(1e-10));
    CHECK(chi_square_sf(0.0, 5.0) == 1.0);
}

TEST_CASE("consistency test passes at (0,3) and has power against a wrong nu") {
    const auto reports = consistency_test(0.0, 3, 10000, 11, 1);
    REQUIRE(reports.size() == 3);
    for (const TestReport& r : reports) CHECK(r.pass);

    // negative control: top eigenvalue at nu=0 vs nu=2, N=3
    const int n = 10000;
    std::vector<double> top0(n), top2(n);
    for (int i = 0; i < n; ++i) {
        RngStream r0(53, i), r2(54, i);
        top0[i] = sample_mu_spectrum(r0, EnsembleParams(0.0, 3))[0];
        top2[i] = sample_mu_spectrum(r2, EnsembleParams(2.0, 3))[0];
    }
    CHECK(ks_two_sample(std::move(top0), std::move(top2), "nu-mismatch").p_value < 0.01);
}

TEST_CASE("consistency and dpp test argument validation") {
    CHECK_THROWS_AS(consistency_test(0.0, 3, 100, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(dpp_correlation_test(0.0, 5, 20000, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(dpp_correlation_test(0.0, 30, 500, 1, 1), std::invalid_argument);
}

TEST_CASE("dpp correlation test at (0,30), with the limit-kernel mismatch logged") {
    const auto reports = dpp_correlation_test(0.0, 30, 10000, 13, 1);
    REQUIRE(reports.size() == 2);
    for (const TestReport& r : reports) {
        INFO(r.name, " statistic ", r.statistic, " p ", r.p_value);
        CHECK(r.pass);
    }

    // finite-size discrepancy scan (informational): the same empirical
    // one-point histogram lies further from the N -> infinity diagonal
    // than from the finite-N one near the origin
    const int n = 10000, N = 30, nbins = 12;
    const double lo = 0.01, hi = 1.0;
    Eigen::VectorXd edges = Eigen::VectorXd::LinSpaced(nbins + 1, lo, hi);
    Histogram h(edges);
    for (int i = 0; i < n; ++i) {
        RngStream r(13, i);
        const Spectrum sp = sample_mu_spectrum(r, EnsembleParams(0.0, N));
        for (int k = 0; k < N; ++k) h.add_point(sp[k] / N);
        ++h.total_samples;
    }
    double chi_n = 0.0, chi_inf = 0.0;
    for (int b = 0; b < nbins; ++b) {
        const auto fN = [&](double x) { return rescaled_kernel_diag(0.0, N, x); };
        const auto fI = [&](double x) { return limit_kernel_diag(0.0, x); };
        const double eN = n * integrate_adaptive(fN, edges[b], edges[b + 1], 1e-9, 1e-9).value;
        const double eI = n * integrate_adaptive(fI, edges[b], edges[b + 1], 1e-9, 1e-9).value;
        chi_n += (h.counts[b] - eN) * (h.counts[b] - eN) / eN;
        chi_inf += (h.counts[b] - eI) * (h.counts[b] - eI) / eI;
    }
    MESSAGE("finite-N chi-square ", chi_n, " vs limit-kernel chi-square ", chi_inf);
}
