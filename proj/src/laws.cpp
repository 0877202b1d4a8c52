#include "wldp/laws.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>

namespace wldp::laws {

namespace {

constexpr double kPsiSmallX = 1e-4;
constexpr double kClassificationMargin = 1e-3; // separates B < A from A = B
constexpr double kMonotoneSlack = 1e-9;        // grid-noise decreases ignored

double logsumexp(const std::vector<double>& t) {
    const double m = *std::max_element(t.begin(), t.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : t) s += std::exp(v - m);
    return m + std::log(s);
}

} // namespace

double MixtureSpec::total_mass() const {
    double s = gauss_weight;
    for (const auto& a : atoms) s += a.mass;
    return s;
}

double MixtureSpec::variance() const {
    double v = gauss_weight * gauss_variance;
    for (const auto& a : atoms) v += a.mass * a.value * a.value;
    return v;
}

EntryLaw::EntryLaw(std::string name, MixtureSpec mix, Support support, bool has_density)
    : name_(std::move(name)), mix_(std::move(mix)), support_(support), has_density_(has_density) {
    if (mix_.gauss_weight < 0.0 || (mix_.gauss_weight > 0.0 && mix_.gauss_variance <= 0.0)) {
        throw InvalidParameters(name_ + ": Gaussian component needs weight >= 0, variance > 0");
    }
    for (const auto& a : mix_.atoms) {
        if (a.mass < 0.0) throw InvalidParameters(name_ + ": negative atom mass");
    }
    if (std::abs(mix_.total_mass() - 1.0) > 1e-12) {
        throw InvalidParameters(name_ + ": component masses must sum to 1");
    }
    if (std::abs(mix_.variance() - 1.0) > 1e-12) {
        throw InvalidParameters(name_ + ": law must have unit variance");
    }
    if (mix_.gauss_weight > 0.0) log_masses_.push_back(std::log(mix_.gauss_weight));
    for (const auto& a : mix_.atoms) {
        log_masses_.push_back(a.mass > 0.0 ? std::log(a.mass)
                                           : -std::numeric_limits<double>::infinity());
    }
    std::vector<double> at0(log_masses_);
    log_total_ = logsumexp(at0);
}

double EntryLaw::log_laplace(double x) const {
    return log_laplace_shifted(x, 0.0);
}

double EntryLaw::log_laplace_shifted(double x, double zeta) const {
    // Hot path inside the Gibbs quadratures: no allocation, two passes.
    const double x2 = x * x;
    const double gauss_coef = 0.5 * mix_.gauss_variance - zeta;
    std::size_t k = 0;
    double m = -std::numeric_limits<double>::infinity();
    if (mix_.gauss_weight > 0.0) {
        m = log_masses_[k++] + gauss_coef * x2;
    }
    for (const auto& a : mix_.atoms) {
        m = std::max(m, log_masses_[k++] + a.value * x - zeta * x2);
    }
    double s = 0.0;
    k = 0;
    if (mix_.gauss_weight > 0.0) {
        s += std::exp(log_masses_[k++] + gauss_coef * x2 - m);
    }
    for (const auto& a : mix_.atoms) {
        s += std::exp(log_masses_[k++] + a.value * x - zeta * x2 - m);
    }
    return m + std::log(s) - log_total_;
}

double EntryLaw::log_laplace_prime(double x) const {
    const double lse = log_laplace(x) + log_total_;
    double d = 0.0;
    std::size_t k = 0;
    if (mix_.gauss_weight > 0.0) {
        const double t = log_masses_[k++] + 0.5 * mix_.gauss_variance * x * x;
        d += mix_.gauss_variance * x * std::exp(t - lse);
    }
    for (const auto& a : mix_.atoms) {
        const double t = log_masses_[k++] + a.value * x;
        d += a.value * std::exp(t - lse);
    }
    return d;
}

double EntryLaw::tail_linear() const {
    double m = 0.0;
    for (const auto& a : mix_.atoms) m = std::max(m, std::abs(a.value));
    return m;
}

double psi(const EntryLaw& law, double x) {
    if (std::abs(x) <= kPsiSmallX) return 0.5;
    return law.log_laplace(x) / (x * x);
}

TailConstants tail_constants(const EntryLaw& law, const num::Tolerances& tol) {
    TailConstants out;
    out.B = law.declared_b();

    // Grid scan for an interior maximum of psi, widened while the best
    // point keeps sitting at the right edge (then the sup is the plateau).
    double x_max = 50.0;
    const int n = 2048;
    double best_x = 0.0;
    double best_v = 0.5; // psi(0)
    for (;;) {
        best_x = 0.0;
        best_v = 0.5;
        for (int i = 1; i <= n; ++i) {
            const double x = x_max * i / n;
            const double v = psi(law, x);
            if (v > best_v) {
                best_v = v;
                best_x = x;
            }
        }
        if (best_x < 0.98 * x_max || x_max > 1e4) break;
        x_max *= 2.0;
    }

    double interior = 0.5;
    std::optional<double> m_star;
    if (best_x > 0.0 && best_x < 0.98 * x_max) {
        const double cell = x_max / n;
        auto r = num::maximize_1d([&law](double x) { return psi(law, x); },
                                  std::max(best_x - cell, kPsiSmallX), best_x + cell, tol, 64);
        interior = r.max;
        m_star = r.argmax;
    }

    out.A = 2.0 * std::max({0.5, interior, 0.5 * out.B});
    if (std::abs(out.A - out.B) < 1e-9) out.A = out.B;

    if (m_star && 2.0 * interior > std::max(1.0, out.B) + 1e-7) {
        out.m_star = m_star;
        out.psi_second_at_mstar =
            num::derivative([&law](double x) { return psi(law, x); }, *m_star, 2, tol);
    }
    return out;
}

double tail_b_extrapolate(const EntryLaw& law) {
    double x = 50.0;
    double prev = psi(law, x);
    while (x <= 1e6) {
        x *= 2.0;
        const double cur = psi(law, x);
        if (std::abs(cur - prev) <= 1e-6) return 2.0 * cur;
        prev = cur;
    }
    throw NonStableTail(law.name() + ": psi plateau did not stabilize by x = 1e6");
}

LawClassification classify(const EntryLaw& law, const TailConstants& tails,
                           const num::Tolerances&) {
    LawClassification c;

    const int n = 2048;
    const double lo = std::log(1e-3);
    const double hi = std::log(50.0 * std::max(1.0, tails.m_star.value_or(1.0)));
    double prev = psi(law, std::exp(lo));
    double prev2 = prev;
    for (int i = 1; i < n; ++i) {
        const double x = std::exp(lo + (hi - lo) * i / (n - 1));
        const double cur = psi(law, x);
        if (cur < prev - kMonotoneSlack) {
            ++c.monotonicity_violations;
            c.worst_decrease = std::max(c.worst_decrease, prev - cur);
        }
        if (i >= 2 && prev > prev2 + kMonotoneSlack && prev > cur + kMonotoneSlack) {
            ++c.maxima_count;
        }
        prev2 = prev;
        prev = cur;
    }

    if (tails.A <= 1.0 + kClassificationMargin) {
        c.tag = RegimeTag::SharpSubGaussian;
    } else if (std::abs(tails.A - tails.B) <= kClassificationMargin &&
               c.monotonicity_violations == 0) {
        c.tag = RegimeTag::IncreasingPsi;
    } else if (tails.B < tails.A - kClassificationMargin && tails.m_star &&
               tails.psi_second_at_mstar && *tails.psi_second_at_mstar < 0.0 &&
               c.maxima_count == 1) {
        c.tag = RegimeTag::CompactCase;
    } else {
        c.tag = RegimeTag::Unclassified;
    }
    return c;
}

const char* regime_tag_name(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::SharpSubGaussian: return "SharpSubGaussian";
        case RegimeTag::IncreasingPsi: return "IncreasingPsi";
        case RegimeTag::CompactCase: return "CompactCase";
        case RegimeTag::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

double sample(const EntryLaw& law, num::RngStream& rng) {
    const auto& mix = law.mixture();
    double u = rng.uniform();
    if (mix.gauss_weight > 0.0) {
        if (u < mix.gauss_weight) return rng.normal() * std::sqrt(mix.gauss_variance);
        u -= mix.gauss_weight;
    }
    for (const auto& a : mix.atoms) {
        if (u < a.mass) return a.value;
        u -= a.mass;
    }
    return mix.atoms.empty() ? rng.normal() * std::sqrt(mix.gauss_variance)
                             : mix.atoms.back().value;
}

double sample_tilted(const EntryLaw& law, double gamma, num::RngStream& rng) {
    if (gamma == 0.0) return sample(law, rng);
    if (!std::isfinite(law.log_laplace(gamma))) {
        throw TiltOutOfRange(law.name() + ": L(gamma) not finite");
    }
    const auto& mix = law.mixture();

    // Tilted component log-weights: the Gaussian picks up gamma^2 v / 2 and
    // shifts its mean to gamma v; an atom at a is reweighted by e^{gamma a}.
    std::vector<double> lw;
    lw.reserve(mix.atoms.size() + 1);
    if (mix.gauss_weight > 0.0) {
        lw.push_back(std::log(mix.gauss_weight) + 0.5 * gamma * gamma * mix.gauss_variance);
    }
    for (const auto& a : mix.atoms) {
        lw.push_back(a.mass > 0.0 ? std::log(a.mass) + gamma * a.value
                                  : -std::numeric_limits<double>::infinity());
    }
    const double norm = logsumexp(lw);

    double u = rng.uniform();
    std::size_t k = 0;
    if (mix.gauss_weight > 0.0) {
        const double w = std::exp(lw[k++] - norm);
        if (u < w) {
            return gamma * mix.gauss_variance + rng.normal() * std::sqrt(mix.gauss_variance);
        }
        u -= w;
    }
    for (std::size_t i = 0; i < mix.atoms.size(); ++i, ++k) {
        const double w = std::exp(lw[k] - norm);
        if (u < w) return mix.atoms[i].value;
        u -= w;
    }
    return mix.atoms.empty()
               ? gamma * mix.gauss_variance + rng.normal() * std::sqrt(mix.gauss_variance)
               : mix.atoms.back().value;
}

EntryLaw gaussian() {
    MixtureSpec m;
    m.gauss_weight = 1.0;
    m.gauss_variance = 1.0;
    return EntryLaw("gaussian", m, Support::WholeLine, true);
}

EntryLaw rademacher() {
    MixtureSpec m;
    m.atoms = {{-1.0, 0.5}, {1.0, 0.5}};
    return EntryLaw("rademacher", m, Support::Discrete, false);
}

EntryLaw sparse_gaussian(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameters("sparse_gaussian: need p in (0,1)");
    MixtureSpec m;
    m.gauss_weight = p;
    m.gauss_variance = 1.0 / p;
    m.atoms = {{0.0, 1.0 - p}};
    return EntryLaw("sparse_gaussian(p=" + std::to_string(p) + ")", m, Support::Mixture, false);
}

EntryLaw gauss_rademacher_mix(double a, double b, double gauss_variance) {
    if (!(a > 0.0 && a < 1.0)) throw InvalidParameters("gauss_rademacher_mix: need a in (0,1)");
    if (!(gauss_variance > 0.0)) {
        throw InvalidParameters("gauss_rademacher_mix: need Gaussian variance B > 0");
    }
    if (std::abs(a * gauss_variance + (1.0 - a) * b * b - 1.0) > 1e-12) {
        throw InvalidParameters("gauss_rademacher_mix: constraint a*B + (1-a)*b^2 = 1 violated");
    }
    MixtureSpec m;
    m.gauss_weight = a;
    m.gauss_variance = gauss_variance;
    m.atoms = {{-b, 0.5 * (1.0 - a)}, {b, 0.5 * (1.0 - a)}};
    return EntryLaw("gauss_rademacher_mix(a=" + std::to_string(a) + ",b=" + std::to_string(b) +
                        ",B=" + std::to_string(gauss_variance) + ")",
                    m, Support::Mixture, false);
}

EntryLaw rademacher_mixture(const std::vector<double>& weights, const std::vector<double>& atoms) {
    if (weights.size() != atoms.size() || weights.empty()) {
        throw InvalidParameters("rademacher_mixture: weights and atoms must pair up");
    }
    double sw = 0.0;
    double sv = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw InvalidParameters("rademacher_mixture: negative weight");
        sw += weights[i];
        sv += weights[i] * atoms[i] * atoms[i];
    }
    if (std::abs(sw - 1.0) > 1e-12) {
        throw InvalidParameters("rademacher_mixture: constraint sum(alpha_i) = 1 violated");
    }
    if (std::abs(sv - 1.0) > 1e-12) {
        throw InvalidParameters("rademacher_mixture: constraint sum(alpha_i beta_i^2) = 1 violated");
    }
    MixtureSpec m;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (atoms[i] == 0.0) {
            m.atoms.push_back({0.0, weights[i]});
        } else {
            m.atoms.push_back({-atoms[i], 0.5 * weights[i]});
            m.atoms.push_back({atoms[i], 0.5 * weights[i]});
        }
    }
    return EntryLaw("rademacher_mixture(k=" + std::to_string(weights.size()) + ")", m,
                    Support::Discrete, false);
}

EntryLaw three_point(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidParameters("three_point: need p in (0,1)");
    const double s = 1.0 / std::sqrt(p);
    MixtureSpec m;
    m.atoms = {{-s, 0.5 * p}, {0.0, 1.0 - p}, {s, 0.5 * p}};
    return EntryLaw("three_point(p=" + std::to_string(p) + ")", m, Support::Discrete, false);
}

EntryLaw mixture(const std::string& name, const MixtureSpec& spec) {
    const bool has_density = spec.gauss_weight > 0.0 && spec.atoms.empty();
    const Support support = spec.gauss_weight > 0.0
                                ? (spec.atoms.empty() ? Support::WholeLine : Support::Mixture)
                                : Support::Discrete;
    return EntryLaw(name, spec, support, has_density);
}

} // namespace wldp::laws
