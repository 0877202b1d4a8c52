#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "wldp/laws.hpp"

using namespace wldp;

namespace {

std::vector<laws::EntryLaw> builtins() {
    std::vector<laws::EntryLaw> v;
    v.push_back(laws::gaussian());
    v.push_back(laws::rademacher());
    v.push_back(laws::sparse_gaussian(0.5));
    v.push_back(laws::gauss_rademacher_mix(0.6, 0.5, 1.5));
    v.push_back(laws::rademacher_mixture({0.96, 0.04}, {0.0, 5.0}));
    v.push_back(laws::three_point(0.2));
    return v;
}

// Gaussian + weak symmetric atoms whose psi bumps below the plateau: the
// law is non-monotone with A = B, so it fits none of the named regimes.
laws::EntryLaw non_monotone_mixture() {
    laws::MixtureSpec spec;
    spec.gauss_variance = 1.3;
    spec.gauss_weight = (1.0 - 0.02 * 9.0) / 1.3;
    spec.atoms = {{-3.0, 0.01}, {3.0, 0.01}, {0.0, 1.0 - spec.gauss_weight - 0.02}};
    return laws::mixture("bump_mix", spec);
}

} // namespace

TEST_CASE("builtin invariants: L(0), symmetry, unit variance, sub-gaussian bound") {
    for (const auto& law : builtins()) {
        CAPTURE(law.name());
        CHECK(law.log_laplace(0.0) == 0.0);
        for (int i = 1; i <= 100; ++i) {
            const double x = 0.08 * i;
            CHECK(std::abs(law.log_laplace(x) - law.log_laplace(-x)) <= 1e-12);
        }
        CHECK(std::abs(2.0 * laws::psi(law, 1e-3) - 1.0) <= 1e-4);

        const auto tails = laws::tail_constants(law);
        for (int i = 0; i <= 200; ++i) {
            const double x = 0.1 * i;
            CHECK(law.log_laplace(x) <= 0.5 * tails.A * x * x + 1e-9);
        }
    }
}

TEST_CASE("psi: gaussian is 1/2, sparse gaussian matches its formula") {
    auto g = laws::gaussian();
    for (double x : {0.0, 0.3, 2.0, 17.0}) CHECK(laws::psi(g, x) == doctest::Approx(0.5));

    auto sp = laws::sparse_gaussian(0.5);
    for (double x : {0.5, 1.0, 3.0, 8.0}) {
        const double expected = std::log(0.5 * std::exp(x * x) + 0.5) / (x * x);
        CHECK(laws::psi(sp, x) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(2.0 * laws::psi(sp, 1600.0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(laws::psi(sp, 0.0) == 0.5);
}

TEST_CASE("tail_constants: declared and scanned values") {
    auto t_sp = laws::tail_constants(laws::sparse_gaussian(0.5));
    CHECK(t_sp.A == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(t_sp.B == doctest::Approx(2.0).epsilon(1e-12));

    auto t_g = laws::tail_constants(laws::gaussian());
    CHECK(t_g.A == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t_g.B == doctest::Approx(1.0).epsilon(1e-12));

    auto t_tp = laws::tail_constants(laws::three_point(0.2));
    CHECK(t_tp.B == 0.0);
    CHECK(t_tp.A > 1.0);
    CHECK(t_tp.A == doctest::Approx(1.1548277).epsilon(1e-4));
    REQUIRE(t_tp.m_star.has_value());
    CHECK(*t_tp.m_star == doctest::Approx(1.53747).epsilon(1e-3));
    REQUIRE(t_tp.psi_second_at_mstar.has_value());
    CHECK(*t_tp.psi_second_at_mstar < 0.0);
}

TEST_CASE("tail extrapolation: agrees with the declared plateau or reports instability") {
    CHECK(laws::tail_b_extrapolate(laws::sparse_gaussian(0.5)) ==
          doctest::Approx(2.0).epsilon(1e-5));
    CHECK(laws::tail_b_extrapolate(laws::gaussian()) == doctest::Approx(1.0).epsilon(1e-9));
    // atom tails approach B = 0 at a 1/x rate, too slowly for the doubling
    // scan to settle before the cutoff
    CHECK_THROWS_AS(laws::tail_b_extrapolate(laws::three_point(0.2)), NonStableTail);
}

TEST_CASE("classify: regimes across the builtin families") {
    for (double p : {0.1, 0.3, 0.5, 0.9}) {
        auto law = laws::sparse_gaussian(p);
        auto cls = laws::classify(law, laws::tail_constants(law));
        CAPTURE(p);
        CHECK(cls.tag == laws::RegimeTag::IncreasingPsi);
    }
    {
        auto law = laws::gaussian();
        CHECK(laws::classify(law, laws::tail_constants(law)).tag ==
              laws::RegimeTag::SharpSubGaussian);
    }
    {
        auto law = laws::rademacher();
        CHECK(laws::classify(law, laws::tail_constants(law)).tag ==
              laws::RegimeTag::SharpSubGaussian);
    }
    for (double p : {0.05, 0.2, 0.3}) {
        auto law = laws::three_point(p);
        auto cls = laws::classify(law, laws::tail_constants(law));
        CAPTURE(p);
        CHECK(cls.tag == laws::RegimeTag::CompactCase);
    }
    {
        // p > 1/3 flips the three-point law to sharp sub-Gaussian
        auto law = laws::three_point(0.4);
        CHECK(laws::classify(law, laws::tail_constants(law)).tag ==
              laws::RegimeTag::SharpSubGaussian);
    }
    {
        auto law = laws::gauss_rademacher_mix(0.6, 0.5, 1.5);
        auto cls = laws::classify(law, laws::tail_constants(law));
        CHECK(cls.tag == laws::RegimeTag::IncreasingPsi);
    }
    {
        auto law = non_monotone_mixture();
        auto tails = laws::tail_constants(law);
        CHECK(tails.A == doctest::Approx(1.3).epsilon(1e-6));
        auto cls = laws::classify(law, tails);
        CHECK(cls.tag == laws::RegimeTag::Unclassified);
        CHECK(cls.monotonicity_violations > 0);
    }
}

TEST_CASE("sample: atoms, frequencies, unit variance") {
    num::RngStream rng(2024, 0);
    auto rad = laws::rademacher();
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double v = laws::sample(rad, rng);
        CHECK((v == 1.0 || v == -1.0));
        mean += v;
    }
    CHECK(std::abs(mean / 100000) < 0.02);

    auto sp = laws::sparse_gaussian(0.3);
    int zeros = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        if (laws::sample(sp, rng) == 0.0) ++zeros;
    }
    // 3 sigma binomial band around 1 - p
    const double sigma = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::abs(double(zeros) / n - 0.7) < 3.0 * sigma + 1e-9);

    for (const auto& law : builtins()) {
        CAPTURE(law.name());
        num::RngStream r2(555, 7);
        double s2 = 0.0;
        const int m = 1000000;
        for (int i = 0; i < m; ++i) {
            const double v = laws::sample(law, r2);
            s2 += v * v;
        }
        CHECK(std::abs(s2 / m - 1.0) < 0.01);
    }
}

TEST_CASE("sample_tilted: gaussian mean shift and rademacher reweighting") {
    num::RngStream rng(99, 1);
    auto g = laws::gaussian();
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) mean += laws::sample_tilted(g, 2.0, rng);
    CHECK(std::abs(mean / 100000 - 2.0) < 0.02);

    auto rad = laws::rademacher();
    const double gamma = 0.8;
    int plus = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        if (laws::sample_tilted(rad, gamma, rng) > 0.0) ++plus;
    }
    const double p_expected = std::exp(gamma) / (2.0 * std::cosh(gamma));
    const double sigma = std::sqrt(p_expected * (1.0 - p_expected) / n);
    CHECK(std::abs(double(plus) / n - p_expected) < 4.0 * sigma);
}

TEST_CASE("sample_tilted: zero tilt is the plain sampler, same stream bit for bit") {
    for (const auto& law : builtins()) {
        CAPTURE(law.name());
        num::RngStream a(7, 3);
        num::RngStream b(7, 3);
        for (int i = 0; i < 200; ++i) {
            CHECK(laws::sample(law, a) == laws::sample_tilted(law, 0.0, b));
        }
    }
}

TEST_CASE("sample_tilted: zero tilt matches the law in distribution") {
    auto law = laws::sparse_gaussian(0.5);
    num::RngStream a(31, 0);
    num::RngStream b(31, 99);
    std::vector<double> xs(20000);
    std::vector<double> ys(20000);
    for (auto& v : xs) v = laws::sample(law, a);
    for (auto& v : ys) v = laws::sample_tilted(law, 0.0, b);
    CHECK(oracles::ks_two_sample_pvalue(xs, ys) > 0.01);
}

TEST_CASE("sample_tilted: empirical mean equals L'(gamma) within 4 sigma") {
    for (const auto& law : builtins()) {
        CAPTURE(law.name());
        for (double gamma : {0.4, 1.1}) {
            num::RngStream rng(4242, 17);
            const int n = 200000;
            double sum = 0.0;
            double sumsq = 0.0;
            for (int i = 0; i < n; ++i) {
                const double v = laws::sample_tilted(law, gamma, rng);
                sum += v;
                sumsq += v * v;
            }
            const double mean = sum / n;
            const double sd = std::sqrt((sumsq / n - mean * mean) / n);
            CHECK(std::abs(mean - law.log_laplace_prime(gamma)) < 4.0 * sd + 1e-12);
        }
    }
}

TEST_CASE("constructors: parameter constraints named and enforced") {
    CHECK_THROWS_AS(laws::sparse_gaussian(0.0), InvalidParameters);
    CHECK_THROWS_AS(laws::sparse_gaussian(1.0), InvalidParameters);
    CHECK_THROWS_AS(laws::three_point(-0.1), InvalidParameters);
    // a B + (1-a) b^2 = 1 violated
    CHECK_THROWS_AS(laws::gauss_rademacher_mix(0.5, 0.5, 1.5), InvalidParameters);
    CHECK_THROWS_AS(laws::rademacher_mixture({0.5, 0.4}, {1.0, 1.0}), InvalidParameters);
    CHECK_THROWS_AS(laws::rademacher_mixture({0.5, 0.5}, {1.0, 2.0}), InvalidParameters);
    // the valid mix law of the paper's example family
    auto mix = laws::gauss_rademacher_mix(0.6, 0.5, 1.5);
    const auto& spec = mix.mixture();
    const double L1 = mix.log_laplace(1.3);
    const double expected = std::log(0.6 * std::exp(0.75 * 1.69) + 0.4 * std::cosh(0.65));
    CHECK(L1 == doctest::Approx(expected).epsilon(1e-12));
    CHECK(spec.gauss_variance == 1.5);
}

TEST_CASE("three_point: L matches the closed form") {
    auto law = laws::three_point(0.2);
    for (double x : {0.3, 1.0, 2.7}) {
        const double expected = std::log(0.2 * (std::cosh(x / std::sqrt(0.2)) - 1.0) + 1.0);
        CHECK(law.log_laplace(x) == doctest::Approx(expected).epsilon(1e-12));
    }
}
