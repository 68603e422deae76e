#include "invwish/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "invwish/ensembles.hpp"
#include "invwish/io.hpp"
#include "invwish/kernels.hpp"
#include "invwish/parallel.hpp"
#include "invwish/quadrature.hpp"

namespace invwish {

Histogram::Histogram(Eigen::VectorXd bin_edges) : edges(std::move(bin_edges)) {
    if (edges.size() < 2) throw std::invalid_argument("Histogram: need at least two edges");
    for (int i = 0; i + 1 < edges.size(); ++i)
        if (!(edges[i] < edges[i + 1]))
            throw std::invalid_argument("Histogram: edges must be strictly increasing");
    counts.assign(edges.size() - 1, 0);
}

void Histogram::add_point(double x) {
    if (x < edges[0] || x >= edges[edges.size() - 1]) {
        ++out_of_range;
        return;
    }
    const double* begin = edges.data();
    const double* end = begin + edges.size();
    const int bin = static_cast<int>(std::upper_bound(begin, end, x) - begin) - 1;
    ++counts[bin];
    ++placed;
}

void Histogram::add_spectrum(const Spectrum& s) {
    for (int i = 0; i < s.dim(); ++i) add_point(s[i]);
    ++total_samples;
}

Eigen::VectorXd Histogram::density() const {
    if (total_samples == 0) throw std::runtime_error("Histogram: no samples");
    Eigen::VectorXd d(static_cast<int>(counts.size()));
    for (size_t b = 0; b < counts.size(); ++b) {
        const double width = edges[b + 1] - edges[b];
        d[static_cast<int>(b)] = counts[b] / (static_cast<double>(total_samples) * width);
    }
    return d;
}

std::string Histogram::to_csv() const {
    std::ostringstream os;
    os << "lo,hi,count,density\n";
    const Eigen::VectorXd d = density();
    for (size_t b = 0; b < counts.size(); ++b)
        os << g17(edges[b]) << "," << g17(edges[b + 1]) << "," << counts[b] << ","
           << g17(d[static_cast<int>(b)]) << "\n";
    return os.str();
}

std::string TestReport::to_json() const {
    std::ostringstream os;
    os << "{\"name\": \"" << name << "\", \"statistic\": " << g17(statistic)
       << ", \"p_value\": " << g17(p_value) << ", \"threshold\": " << g17(threshold)
       << ", \"pass\": " << (pass ? "true" : "false") << ", \"samples\": " << samples
       << ", \"seed\": [" << seed << ", " << stream << "]}";
    return os.str();
}

Histogram empirical_rho1(const std::vector<Spectrum>& batch, const Eigen::VectorXd& edges) {
    if (batch.empty()) throw std::invalid_argument("empirical_rho1: empty batch");
    const int dim = batch.front().dim();
    Histogram h(edges);
    for (const Spectrum& s : batch) {
        if (s.dim() != dim) throw std::invalid_argument("empirical_rho1: mixed dimensions");
        h.add_spectrum(s);
    }
    return h;
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    for (int j = 1; j <= 101; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

namespace {

// regularized incomplete gamma P(a, x) (series) and Q(a, x) (continued fraction)
double gamma_p_series(double a, double x) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double chi_square_sf(double x, double k) {
    if (x <= 0.0) return 1.0;
    const double a = 0.5 * k, hx = 0.5 * x;
    if (hx < a + 1.0) return std::min(1.0, std::max(0.0, 1.0 - gamma_p_series(a, hx)));
    return std::min(1.0, std::max(0.0, gamma_q_cf(a, hx)));
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, const std::string& name,
                         std::uint64_t seed, std::uint64_t stream) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty input");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double xa = a[ia], xb = b[ib];
        if (xa <= xb) ++ia;
        if (xb <= xa) ++ib;
        d = std::max(d, std::abs(ia / na - ib / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    TestReport r;
    r.name = name;
    r.statistic = d;
    r.p_value = kolmogorov_sf(lambda);
    r.threshold = 0.01;
    r.pass = r.p_value > r.threshold;
    r.samples = static_cast<long long>(a.size());
    r.seed = seed;
    r.stream = stream;
    return r;
}

namespace {

TestReport per_eigenvalue_ks(const std::vector<std::vector<double>>& lhs,
                             const std::vector<std::vector<double>>& rhs,
                             const std::string& name, long samples, std::uint64_t seed) {
    const int n = static_cast<int>(lhs.size());
    TestReport r;
    r.name = name;
    r.threshold = 0.01 / n; // Bonferroni across the ordered eigenvalues
    r.p_value = 1.0;
    r.statistic = 0.0;
    r.pass = true;
    for (int i = 0; i < n; ++i) {
        const TestReport ki = ks_two_sample(lhs[i], rhs[i], name + "/coord" + std::to_string(i));
        r.statistic = std::max(r.statistic, ki.statistic);
        r.p_value = std::min(r.p_value, ki.p_value);
        if (ki.p_value <= r.threshold) r.pass = false;
    }
    r.samples = samples;
    r.seed = seed;
    return r;
}

} // namespace

std::vector<TestReport> consistency_test(double nu, int N, long samples, std::uint64_t seed,
                                         int threads) {
    if (N < 1) throw std::invalid_argument("consistency_test: N must be >= 1");
    if (samples < 1000) throw std::invalid_argument("consistency_test: need samples >= 1000");
    const EnsembleParams at_n(nu, N), at_n1(nu, N + 1);

    // per-ordered-coordinate value arrays for the three routes and the
    // two independent reference batches
    std::vector<std::vector<double>> route_a(N), route_b(N), ref_a(N), ref_b(N);
    for (int i = 0; i < N; ++i) {
        route_a[i].resize(samples);
        route_b[i].resize(samples);
        ref_a[i].resize(samples);
        ref_b[i].resize(samples);
    }

    parallel_for(samples, threads, [&](long s) {
        {
            RngStream rng(seed, 4 * static_cast<std::uint64_t>(s));
            const HermitianMatrix x = sample_inverse_wishart(rng, at_n1);
            const Spectrum y = eigenvalues_of(corner(x, N));
            for (int i = 0; i < N; ++i) route_a[i][s] = y[i];
        }
        {
            RngStream rng(seed, 4 * static_cast<std::uint64_t>(s) + 1);
            const Spectrum y = sample_mu_spectrum(rng, at_n);
            for (int i = 0; i < N; ++i) ref_a[i][s] = y[i];
        }
        {
            RngStream rng(seed, 4 * static_cast<std::uint64_t>(s) + 2);
            const Spectrum x = sample_mu_spectrum(rng, at_n1);
            const Spectrum y = sample_corner_given_spectrum(rng, x);
            for (int i = 0; i < N; ++i) route_b[i][s] = y[i];
        }
        {
            RngStream rng(seed, 4 * static_cast<std::uint64_t>(s) + 3);
            const Spectrum y = sample_mu_spectrum(rng, at_n);
            for (int i = 0; i < N; ++i) ref_b[i][s] = y[i];
        }
    });

    const std::string suffix = "(nu=" + g17(nu) + ",N=" + std::to_string(N) + ")";
    std::vector<TestReport> reports;
    reports.push_back(
        per_eigenvalue_ks(route_a, ref_a, "consistency/matrix-corner-vs-mu" + suffix, samples, seed));
    reports.push_back(
        per_eigenvalue_ks(route_b, ref_b, "consistency/corner-kernel-vs-mu" + suffix, samples, seed));
    reports.push_back(
        per_eigenvalue_ks(route_a, route_b, "consistency/matrix-vs-kernel-route" + suffix, samples, seed));
    return reports;
}

namespace {

struct MergedChiSquare {
    double statistic = 0.0;
    int cells = 0;
};

// chi-square over cells with expectation >= 5; smaller cells pool into one
MergedChiSquare merged_chi_square(const std::vector<double>& observed,
                                  const std::vector<double>& expected) {
    MergedChiSquare m;
    double pool_o = 0.0, pool_e = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] >= 5.0) {
            const double d = observed[i] - expected[i];
            m.statistic += d * d / expected[i];
            ++m.cells;
        } else {
            pool_o += observed[i];
            pool_e += expected[i];
        }
    }
    if (pool_e >= 5.0) {
        const double d = pool_o - pool_e;
        m.statistic += d * d / pool_e;
        ++m.cells;
    }
    return m;
}

} // namespace

std::vector<TestReport> dpp_correlation_test(double nu, int N, long samples, std::uint64_t seed,
                                             int threads) {
    if (N < 10) throw std::invalid_argument("dpp_correlation_test: N must be >= 10");
    if (samples < 10000) throw std::invalid_argument("dpp_correlation_test: need samples >= 10^4");
    const EnsembleParams params(nu, N);

    const double lo = 0.01, hi = 5.0;
    const int nbins = 30, ncoarse = 6;
    std::vector<std::vector<double>> scaled(samples);
    parallel_for(samples, threads, [&](long s) {
        RngStream rng(seed, static_cast<std::uint64_t>(s));
        const Spectrum sp = sample_mu_spectrum(rng, params);
        std::vector<double> v(N);
        for (int i = 0; i < N; ++i) v[i] = sp[i] / N;
        scaled[s] = std::move(v);
    });

    // one-point observed counts
    std::vector<double> obs1(nbins, 0.0);
    const double w1 = (hi - lo) / nbins, w2 = (hi - lo) / ncoarse;
    auto bin1 = [&](double x) { return std::min(static_cast<int>((x - lo) / w1), nbins - 1); };
    auto bin2 = [&](double x) { return std::min(static_cast<int>((x - lo) / w2), ncoarse - 1); };
    for (const auto& v : scaled)
        for (double x : v)
            if (x >= lo && x < hi) ++obs1[bin1(x)];

    std::vector<double> exp1(nbins, 0.0);
    for (int b = 0; b < nbins; ++b) {
        const auto f = [&](double x) { return rescaled_kernel_diag(nu, N, x); };
        exp1[b] = samples * integrate_adaptive(f, lo + b * w1, lo + (b + 1) * w1, 1e-9, 1e-9).value;
    }
    const MergedChiSquare m1 = merged_chi_square(obs1, exp1);

    // two-point predictions: E[pairs in A x B] per draw is
    // int_A K int_B K - int int_{A x B} K(x,y)^2
    std::vector<double> cell_intensity(ncoarse, 0.0);
    for (int b = 0; b < ncoarse; ++b) {
        const auto f = [&](double x) { return rescaled_kernel_diag(nu, N, x); };
        cell_intensity[b] = integrate_adaptive(f, lo + b * w2, lo + (b + 1) * w2, 1e-9, 1e-9).value;
    }
    // K(x,y)^2 has a sharp ridge along the diagonal (its y-mass at fixed x
    // is K(x,x) by the projection property), so the inner integral must be
    // adaptive; the outer integrand is then smooth
    auto cross_sq = [&](int a, int b) {
        const double ax = lo + a * w2, bx = lo + b * w2;
        const auto outer = [&](double x) {
            const auto inner = [&](double y) {
                const double k = rescaled_kernel(nu, N, x, y);
                return k * k;
            };
            return integrate_adaptive(inner, bx, bx + w2, 1e-9, 1e-8).value;
        };
        return integrate_adaptive(outer, ax, ax + w2, 1e-7, 1e-7).value;
    };
    const int ncells = ncoarse * ncoarse;
    std::vector<double> mu_pair(ncells, 0.0); // per-draw expected pair count
    for (int a = 0; a < ncoarse; ++a)
        for (int b = 0; b < ncoarse; ++b)
            mu_pair[a * ncoarse + b] = cell_intensity[a] * cell_intensity[b] - cross_sq(a, b);

    // keep cells whose total expectation clears the usual mass-5 rule and
    // pool the remainder
    std::vector<int> cell_slot(ncells, -1);
    int kept = 0;
    double pooled_mu = 0.0;
    for (int c = 0; c < ncells; ++c) {
        if (samples * mu_pair[c] >= 5.0)
            cell_slot[c] = kept++;
        else
            pooled_mu += mu_pair[c];
    }
    const bool use_pool = samples * pooled_mu >= 5.0;
    const int C = kept + (use_pool ? 1 : 0);

    // Pair counts of one draw are strongly correlated across cells, so the
    // statistic is the Hotelling quadratic form with the empirical
    // covariance of the per-draw cell vector; it is asymptotically
    // chi-square with C degrees of freedom.
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(C);
    for (int c = 0; c < ncells; ++c) {
        if (cell_slot[c] >= 0) mu[cell_slot[c]] = mu_pair[c];
        else if (use_pool) mu[C - 1] += mu_pair[c];
    }
    Eigen::VectorXd sum_t = Eigen::VectorXd::Zero(C);
    Eigen::MatrixXd sum_tt = Eigen::MatrixXd::Zero(C, C);
    Eigen::VectorXd t(C);
    for (const auto& v : scaled) {
        t.setZero();
        std::vector<int> idx;
        idx.reserve(v.size());
        for (double x : v) idx.push_back(x >= lo && x < hi ? bin2(x) : -1);
        for (size_t i = 0; i < v.size(); ++i) {
            if (idx[i] < 0) continue;
            for (size_t j = 0; j < v.size(); ++j) {
                if (i == j || idx[j] < 0) continue;
                const int c = idx[i] * ncoarse + idx[j];
                const int slot = cell_slot[c] >= 0 ? cell_slot[c] : (use_pool ? C - 1 : -1);
                if (slot >= 0) t[slot] += 1.0;
            }
        }
        sum_t += t;
        sum_tt += t * t.transpose();
    }
    const double n = static_cast<double>(samples);
    const Eigen::VectorXd mean = sum_t / n;
    const Eigen::MatrixXd cov =
        (sum_tt - n * mean * mean.transpose()) / (n - 1.0);
    const Eigen::VectorXd diff = mean - mu;
    const double t2 = n * diff.dot(cov.ldlt().solve(diff));

    const std::string suffix = "(nu=" + g17(nu) + ",N=" + std::to_string(N) + ")";

    TestReport one_point;
    one_point.name = "dpp-correlations/one-point" + suffix;
    one_point.statistic = m1.statistic;
    one_point.p_value = chi_square_sf(m1.statistic, m1.cells);
    one_point.threshold = 0.01;
    one_point.pass = one_point.p_value > 0.01;
    one_point.samples = samples;
    one_point.seed = seed;

    TestReport two_point;
    two_point.name = "dpp-correlations/two-point" + suffix;
    two_point.statistic = t2;
    two_point.p_value = chi_square_sf(t2, C);
    two_point.threshold = 0.01;
    two_point.pass = two_point.p_value > 0.01;
    two_point.samples = samples;
    two_point.seed = seed;

    return {one_point, two_point};
}

} // namespace invwish
