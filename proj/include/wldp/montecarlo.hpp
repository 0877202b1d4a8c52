#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "wldp/eigen.hpp"
#include "wldp/laws.hpp"
#include "wldp/rng.hpp"

namespace wldp::mc {

struct Tilt {
    double theta = 0.0;
    std::vector<double> direction; // unit vector, checked to 1e-12
};

struct WignerEnsembleConfig {
    laws::EntryLaw law;
    int n = 100;
    int n_samples = 1;
    std::uint64_t seed = 0;
    std::optional<Tilt> tilt;
};

struct SpectrumStats {
    double lambda_max = 0.0;
    double ks_to_semicircle = 0.0;
    double spectral_radius = 0.0;
    std::vector<double> top_eigenvector; // retained on demand
};

struct LocalizationStats {
    double epsilon = 0.0;
    double r2 = 0.0;
    int bucket_count = 0;        // |I_{r2,eps}|
    double bucket_mass = 0.0;    // sum u_i^2 over the bucket
    double small_mass = 0.0;     // sum u_i^2 over off-bucket entries below eps N^exponent
    double overlap_sq = 0.0;     // <u, e>^2 against the tilt direction
    int deloc_violation_count = 0;
};

// Entry scaling: sqrt(N) X_ij ~ mu off-diagonal, sqrt(N/2) X_ii ~ mu.
SymMat sample_wigner(const WignerEnsembleConfig& cfg, std::uint64_t sample_index);

// Independent per-entry tilts gamma_ij = 2 theta sqrt(N) e_i e_j (i < j),
// gamma_ii = sqrt(2N) theta e_i^2. theta = 0 reduces bit-exactly to
// sample_wigner under the same stream.
SymMat sample_tilted_wigner(const WignerEnsembleConfig& cfg, std::uint64_t sample_index);

// Log of E exp(theta N <e, X e>) = sum over entries of L(gamma); exact for
// independent entries, evaluated in log space.
double tilt_log_normalizer(const laws::EntryLaw& law, int n, double theta,
                           const std::vector<double>& direction);

// Kolmogorov distance between the empirical spectral CDF and F_sigma.
double semicircle_ks(const std::vector<double>& eigenvalues);

std::vector<double> uniform_direction(int n);

// Localized profile: floor(v sqrt(N)) entries at sqrt(r2) N^{-1/4}, the
// remaining mass spread uniformly; normalized to unit length.
std::vector<double> localized_direction(int n, double v, double r2);

LocalizationStats localization_stats(const std::vector<double>& u, double epsilon, double r2,
                                     double threshold_exponent = -0.25,
                                     const std::vector<double>* tilt_direction = nullptr);

struct BbpSummary {
    double mean_lambda_max = 0.0;
    double stderr_lambda_max = 0.0;
    double predicted_lambda_max = 0.0; // K_sigma(2 theta), supercritical only
    double mean_overlap_sq = 0.0;
    double stderr_overlap_sq = 0.0;
    double predicted_overlap_sq = 0.0; // -G_sigma^2 / G_sigma' at the outlier
    int n_samples = 0;
};

BbpSummary bbp_experiment(const laws::EntryLaw& law, int n, double theta,
                          const std::vector<double>& direction, int n_samples,
                          std::uint64_t seed);

struct TailEstimate {
    double p_hat = 0.0;
    double stderr = 0.0;
};

TailEstimate tail_estimate_direct(const laws::EntryLaw& law, int n, double x, int n_samples,
                                  std::uint64_t seed);

struct TiltedTailEstimate {
    double log_p_per_n = 0.0; // -(1/N) log of the importance-sampling estimate
    double stderr = 0.0;      // delta-method error of the same quantity
    double ess = 0.0;         // effective sample size of the windowed weights
    int hits = 0;
};

// Importance sampling under the rank-one tilt: P(A) = E_tilt[1_A w] with
// w = Z e^{-theta N <e,Xe>}. delta=nullopt uses the one-sided event
// lambda_max >= x (the theta = 0 degeneration of tail_estimate_direct).
TiltedTailEstimate tail_estimate_tilted(const laws::EntryLaw& law, int n, double x, double theta,
                                        int n_samples, std::uint64_t seed,
                                        std::optional<double> delta = 0.1);

} // namespace wldp::mc
