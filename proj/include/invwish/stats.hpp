#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "invwish/hermitian.hpp"
#include "invwish/rng.hpp"

namespace invwish {

struct Histogram {
    Eigen::VectorXd edges;            // strictly increasing, len(counts)+1
    std::vector<long long> counts;
    long long total_samples = 0;      // number of draws contributing
    long long placed = 0;             // points that landed in a bin
    long long out_of_range = 0;

    explicit Histogram(Eigen::VectorXd bin_edges);
    void add_point(double x);
    void add_spectrum(const Spectrum& s);
    /// rho1 estimate per bin: counts / (total_samples * width).
    Eigen::VectorXd density() const;
    std::string to_csv() const; // lo,hi,count,density
};

struct TestReport {
    std::string name;
    double statistic = 0.0;
    double p_value = 1.0;
    double threshold = 0.0;
    bool pass = false;
    long long samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    std::string to_json() const; // one line, schema {"name",...,"seed":[s,t]}
};

/// One-point intensity estimate from a batch of same-dimension spectra.
Histogram empirical_rho1(const std::vector<Spectrum>& batch, const Eigen::VectorXd& edges);

/// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double lambda);
/// Upper tail of chi-square with k degrees of freedom.
double chi_square_sf(double x, double k);

/// Two-sample Kolmogorov-Smirnov test; asymptotic p-value with the
/// standard small-sample correction factor. Passes iff p > 0.01.
TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, const std::string& name,
                         std::uint64_t seed = 0, std::uint64_t stream = 0);

/// Corner-consistency Monte Carlo: three per-ordered-eigenvalue KS
/// comparisons (matrix corner route, corner-kernel route, and the two
/// routes against each other), Bonferroni-corrected at family level 0.01.
std::vector<TestReport> consistency_test(double nu, int N, long samples, std::uint64_t seed,
                                         int threads = 1);

/// Determinantal law of the 1/N-scaled spectrum: chi-square comparison
/// of the binned one-point intensity against the kernel diagonal, and of
/// pair counts on a coarse 2D grid against the 2x2 determinant
/// predictions. Both must reach p > 0.01.
std::vector<TestReport> dpp_correlation_test(double nu, int N, long samples, std::uint64_t seed,
                                             int threads = 1);

} // namespace invwish
