#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "wldp/freeprob.hpp"
#include "wldp/montecarlo.hpp"

using namespace wldp;
using wldp::mc::WignerEnsembleConfig;

TEST_CASE("sample_wigner: symmetry, scaling, centering") {
    WignerEnsembleConfig cfg{laws::sparse_gaussian(0.5), 400, 1, 99, std::nullopt};
    auto x = mc::sample_wigner(cfg, 0);
    double var = 0.0;
    double mean = 0.0;
    long count = 0;
    for (int i = 0; i < cfg.n; ++i) {
        for (int j = 0; j < cfg.n; ++j) {
            CHECK(x.at(i, j) == x.at(j, i));
        }
        for (int j = i + 1; j < cfg.n; ++j) {
            var += x.at(i, j) * x.at(i, j);
            mean += x.at(i, j);
            ++count;
        }
    }
    CHECK(var / count * cfg.n == doctest::Approx(1.0).epsilon(0.1));
    CHECK(std::abs(mean / count * std::sqrt(double(cfg.n))) < 0.05);
}

TEST_CASE("sample_tilted_wigner: zero tilt is bit-identical to the plain sampler") {
    auto law = laws::sparse_gaussian(0.5);
    WignerEnsembleConfig plain{law, 60, 1, 4242, std::nullopt};
    WignerEnsembleConfig tilted{law, 60, 1, 4242,
                                mc::Tilt{0.0, mc::uniform_direction(60)}};
    auto a = mc::sample_wigner(plain, 3);
    auto b = mc::sample_tilted_wigner(tilted, 3);
    CHECK(a.data() == b.data());
}

TEST_CASE("sample_tilted_wigner: zero tilt matches in distribution across seeds") {
    auto law = laws::rademacher();
    WignerEnsembleConfig plain{law, 40, 1, 1, std::nullopt};
    WignerEnsembleConfig tilted{law, 40, 1, 2, mc::Tilt{0.0, mc::uniform_direction(40)}};
    std::vector<double> xs;
    std::vector<double> ys;
    for (int k = 0; k < 4; ++k) {
        auto a = mc::sample_wigner(plain, k);
        auto b = mc::sample_tilted_wigner(tilted, k);
        for (int i = 0; i < 40; ++i) {
            for (int j = i; j < 40; ++j) {
                xs.push_back(a.at(i, j));
                ys.push_back(b.at(i, j));
            }
        }
    }
    CHECK(oracles::ks_two_sample_pvalue(xs, ys) > 0.01);
}

TEST_CASE("sample_tilted_wigner: gaussian quadratic-form mean near 2 theta") {
    const int n = 200;
    const int samples = 200;
    auto e = mc::uniform_direction(n);
    WignerEnsembleConfig cfg{laws::gaussian(), n, samples, 7, mc::Tilt{1.0, e}};
    double mean = 0.0;
    for (int k = 0; k < samples; ++k) {
        auto x = mc::sample_tilted_wigner(cfg, k);
        double quad = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += x.at(i, j) * e[j];
            quad += e[i] * row;
        }
        mean += quad;
    }
    CHECK(std::abs(mean / samples - 2.0) < 0.1);
}

TEST_CASE("sample_tilted_wigner: rademacher entry mean is tanh(gamma)") {
    const int n = 30;
    auto e = mc::uniform_direction(n);
    const double theta = 1.2;
    WignerEnsembleConfig cfg{laws::rademacher(), n, 1, 11, mc::Tilt{theta, e}};
    // every off-diagonal entry carries gamma = 2 theta / sqrt(N)
    const double gamma = 2.0 * theta / std::sqrt(double(n));
    double sum = 0.0;
    long cnt = 0;
    const int samples = 400;
    for (int k = 0; k < samples; ++k) {
        auto m = mc::sample_tilted_wigner(cfg, k);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                sum += m.at(i, j) * std::sqrt(double(n));
                ++cnt;
            }
        }
    }
    const double expected = std::tanh(gamma);
    const double sd = 1.0 / std::sqrt(double(cnt));
    CHECK(std::abs(sum / cnt - expected) < 4.0 * sd);
}

TEST_CASE("tilt_log_normalizer: closed form for the uniform direction") {
    auto law = laws::sparse_gaussian(0.5);
    const int n = 50;
    const double theta = 0.9;
    const double logz = mc::tilt_log_normalizer(law, n, theta, mc::uniform_direction(n));
    const double off = law.log_laplace(2.0 * theta / std::sqrt(double(n)));
    const double diag = law.log_laplace(std::sqrt(2.0 / n) * theta);
    CHECK(logz == doctest::Approx(n * (n - 1) / 2.0 * off + n * diag).epsilon(1e-10));
}

TEST_CASE("semicircle_ks: quantiles, point mass, GOE sample") {
    const int n = 500;
    std::vector<double> q(n);
    for (int i = 0; i < n; ++i) {
        // quantile by bisection on the semicircle CDF
        const double target = (i + 0.5) / n;
        double lo = -2.0;
        double hi = 2.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (freeprob::semicircle_cdf(mid) < target ? lo : hi) = mid;
        }
        q[i] = 0.5 * (lo + hi);
    }
    CHECK(mc::semicircle_ks(q) <= 0.5 / n + 1e-6);

    std::vector<double> zeros(100, 0.0);
    CHECK(mc::semicircle_ks(zeros) == doctest::Approx(0.5).epsilon(1e-12));

    WignerEnsembleConfig cfg{laws::gaussian(), 300, 1, 31, std::nullopt};
    auto full = mc::eig_full(mc::sample_wigner(cfg, 0), false);
    CHECK(mc::semicircle_ks(full.values) <= 0.08);
}

TEST_CASE("localization_stats: concentrated, uniform, synthetic profiles") {
    {
        std::vector<double> u(100, 0.0);
        u[0] = 1.0;
        auto st = mc::localization_stats(u, 0.2, 0.5);
        CHECK(st.deloc_violation_count == 1);
        CHECK(st.bucket_count == 0);
        CHECK(st.bucket_mass == 0.0);
    }
    {
        const int n = 256;
        auto st = mc::localization_stats(mc::uniform_direction(n), 0.3, 1.0);
        // |u_i| = n^{-1/2} <= eps n^{-1/4} whenever eps >= n^{-1/4}
        CHECK(st.deloc_violation_count == 0);
        CHECK(st.small_mass == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        const int n = 400;
        const double v = 0.8;
        const double r2 = 0.6;
        const int k = static_cast<int>(std::floor(v * std::sqrt(double(n))));
        std::vector<double> u(n, 0.0);
        const double big = std::sqrt(r2) * std::pow(double(n), -0.25);
        double used = 0.0;
        for (int i = 0; i < k; ++i) {
            u[i] = big;
            used += big * big;
        }
        for (int i = k; i < n; ++i) u[i] = std::sqrt((1.0 - used) / (n - k));
        auto st = mc::localization_stats(u, 0.05, r2);
        CHECK(st.bucket_count == k);
        CHECK(st.bucket_mass == doctest::Approx(used).epsilon(1e-12));
        CHECK(st.bucket_mass + st.small_mass <= 1.0 + 1e-9);

        // permutation invariance of the masses
        std::reverse(u.begin(), u.end());
        auto st2 = mc::localization_stats(u, 0.05, r2);
        CHECK(st2.bucket_count == st.bucket_count);
        CHECK(st2.bucket_mass == doctest::Approx(st.bucket_mass));
        CHECK(st2.small_mass == doctest::Approx(st.small_mass));
    }
}

TEST_CASE("localized_direction: shape and normalization") {
    const int n = 300;
    auto e = mc::localized_direction(n, 0.7, 0.5);
    double norm = 0.0;
    for (double x : e) norm += x * x;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    const int k = static_cast<int>(std::floor(0.7 * std::sqrt(double(n))));
    auto st = mc::localization_stats(e, 0.05, 0.5);
    CHECK(st.bucket_count >= k); // the filler mass may land in-band too
    CHECK_THROWS_AS(mc::localized_direction(100, 50.0, 1.0), InvalidParameters);
}

TEST_CASE("tail_estimate_direct: certainty at x = 0 and monotonicity in x") {
    auto law = laws::gaussian();
    auto p0 = mc::tail_estimate_direct(law, 50, 0.0, 40, 5);
    CHECK(p0.p_hat == doctest::Approx(1.0));
    double prev = 2.0;
    for (double x : {1.0, 1.5, 2.0, 2.5}) {
        auto p = mc::tail_estimate_direct(law, 50, x, 40, 5);
        CHECK(p.p_hat <= prev + 1e-12);
        prev = p.p_hat;
    }
}

TEST_CASE("tail_estimate_tilted: unbiased weights and zero-theta degeneration") {
    auto law = laws::gaussian();
    // indicator-free: the change-of-measure identity makes the weight mean
    // 1; a small tilt keeps the weight spread within Monte Carlo reach
    auto est = mc::tail_estimate_tilted(law, 40, -1e9, 0.1, 200, 3, std::nullopt);
    const double mean_w = std::exp(-est.log_p_per_n * 40);
    CHECK(std::abs(mean_w - 1.0) <= 3.0 * est.stderr * 40 * mean_w + 0.05);

    // theta = 0 with the one-sided event reproduces the direct estimator
    const double x = 1.2;
    auto direct = mc::tail_estimate_direct(law, 40, x, 100, 9);
    auto tilted = mc::tail_estimate_tilted(law, 40, x, 0.0, 100, 9, std::nullopt);
    CHECK(std::exp(-tilted.log_p_per_n * 40) == doctest::Approx(direct.p_hat).epsilon(1e-12));

    CHECK_THROWS_AS(mc::tail_estimate_tilted(law, 40, 50.0, 1.0, 50, 3, 0.05),
                    DegenerateWeights);
}

TEST_CASE("bbp_experiment: smoke run at modest size") {
    auto sum = mc::bbp_experiment(laws::gaussian(), 150, 1.0, mc::uniform_direction(150), 12, 21);
    CHECK(sum.predicted_lambda_max == doctest::Approx(2.5));
    CHECK(sum.predicted_overlap_sq == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(std::abs(sum.mean_lambda_max - 2.5) < 0.2);
    CHECK(std::abs(sum.mean_overlap_sq - 0.75) < 0.12);
}
