#pragma once
#include <optional>
#include <string>
#include <vector>

#include "wldp/numerics.hpp"
#include "wldp/rng.hpp"

namespace wldp::laws {

struct Atom {
    double value = 0.0;
    double mass = 0.0;
};

// Every entry law this artifact constructs is a mixture of one centered
// Gaussian component and finitely many atoms. That structure is what makes
// the log-Laplace transform analytic and the exponential tilt exactly
// samplable (the tilt reweights components and shifts the Gaussian mean).
struct MixtureSpec {
    double gauss_weight = 0.0;
    double gauss_variance = 0.0;
    std::vector<Atom> atoms;

    double total_mass() const;
    double variance() const;
};

enum class Support { WholeLine, Discrete, Mixture };

class EntryLaw {
public:
    EntryLaw(std::string name, MixtureSpec mix, Support support, bool has_density);

    const std::string& name() const { return name_; }
    const MixtureSpec& mixture() const { return mix_; }
    Support support() const { return support_; }
    bool has_density() const { return has_density_; }

    // Log-Laplace transform L(x) = log E[e^{xT}] and its derivative,
    // evaluated in log-sum-exp form; exact L(0) = 0 and even in x.
    double log_laplace(double x) const;
    double log_laplace_prime(double x) const;

    // L(x) - zeta x^2 with the shift folded into each component exponent.
    // The naive difference cancels catastrophically when zeta x^2 is large
    // against an O(1) result; here the Gaussian coefficient v/2 - zeta is
    // formed once, exactly.
    double log_laplace_shifted(double x, double zeta) const;

    // Envelope L(x) <= (tail_quadratic/2) x^2 + tail_linear |x| for all x.
    double tail_quadratic() const { return mix_.gauss_variance; }
    double tail_linear() const;

    // Tail curvature constant B declared by the mixture structure.
    double declared_b() const { return mix_.gauss_weight > 0.0 ? mix_.gauss_variance : 0.0; }

private:
    std::string name_;
    MixtureSpec mix_;
    Support support_;
    bool has_density_;
    std::vector<double> log_masses_;
    double log_total_;

    friend double sample(const EntryLaw&, num::RngStream&);
    friend double sample_tilted(const EntryLaw&, double, num::RngStream&);
};

struct TailConstants {
    double A = 1.0;
    double B = 0.0;
    std::optional<double> m_star;
    std::optional<double> psi_second_at_mstar;
};

enum class RegimeTag { SharpSubGaussian, IncreasingPsi, CompactCase, Unclassified };

const char* regime_tag_name(RegimeTag tag);

struct LawClassification {
    RegimeTag tag = RegimeTag::Unclassified;
    int monotonicity_violations = 0;
    double worst_decrease = 0.0;
    int maxima_count = 0;
};

// psi(x) = L(x)/x^2; exact value 1/2 below |x| = 1e-4 where the quotient
// would cancel (unit variance makes that exact to O(x^2)).
double psi(const EntryLaw& law, double x);

TailConstants tail_constants(const EntryLaw& law, const num::Tolerances& tol = {});

// Doubling-scan estimate of B = 2 lim psi; throws NonStableTail when the
// plateau has not stabilized within 1e-6 by X = 1e6. The declared mixture
// value is what tail_constants actually uses; this is the generic check.
double tail_b_extrapolate(const EntryLaw& law);

LawClassification classify(const EntryLaw& law, const TailConstants& tails,
                           const num::Tolerances& tol = {});

// Exact draw from the law / from e^{gamma x} dmu / e^{L(gamma)}. A zero
// tilt takes the identical code path as sample(), bit for bit.
double sample(const EntryLaw& law, num::RngStream& rng);
double sample_tilted(const EntryLaw& law, double gamma, num::RngStream& rng);

EntryLaw gaussian();
EntryLaw rademacher();
EntryLaw sparse_gaussian(double p);
EntryLaw gauss_rademacher_mix(double a, double b, double gauss_variance);
EntryLaw rademacher_mixture(const std::vector<double>& weights, const std::vector<double>& atoms);
EntryLaw three_point(double p);
EntryLaw mixture(const std::string& name, const MixtureSpec& spec);

} // namespace wldp::laws
