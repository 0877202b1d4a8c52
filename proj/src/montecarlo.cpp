#include "wldp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wldp/freeprob.hpp"
#include "wldp/parallel.hpp"

namespace wldp::mc {

namespace {

void check_direction(const std::vector<double>& e, int n) {
    if (static_cast<int>(e.size()) != n) {
        throw InvalidParameters("tilt direction length must equal N");
    }
    double s = 0.0;
    for (double v : e) s += v * v;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-12) {
        throw InvalidParameters("tilt direction must be a unit vector");
    }
}

double top_eigenvalue(const SymMat& x, std::uint64_t salt) {
    try {
        return eig_top(x, static_cast<unsigned>(salt * 2654435761u + 1u)).value;
    } catch (const NoConvergence&) {
        return eig_full(x, false).values.back();
    }
}

} // namespace

SymMat sample_wigner(const WignerEnsembleConfig& cfg, std::uint64_t sample_index) {
    if (cfg.tilt) throw InvalidParameters("sample_wigner: config carries a tilt");
    const int n = cfg.n;
    num::RngStream rng = num::rng_stream(cfg.seed, sample_index);
    SymMat x(n);
    const double off = 1.0 / std::sqrt(static_cast<double>(n));
    const double diag = std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double xi = laws::sample(cfg.law, rng);
            const double v = (i == j) ? xi * diag : xi * off;
            x.at(i, j) = v;
            x.at(j, i) = v;
        }
    }
    return x;
}

SymMat sample_tilted_wigner(const WignerEnsembleConfig& cfg, std::uint64_t sample_index) {
    if (!cfg.tilt) throw InvalidParameters("sample_tilted_wigner: config lacks a tilt");
    const int n = cfg.n;
    const double theta = cfg.tilt->theta;
    const std::vector<double>& e = cfg.tilt->direction;
    check_direction(e, n);

    num::RngStream rng = num::rng_stream(cfg.seed, sample_index);
    SymMat x(n);
    const double sqn = std::sqrt(static_cast<double>(n));
    const double off = 1.0 / sqn;
    const double diag = std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double gamma = (i == j) ? std::sqrt(2.0 * n) * theta * e[i] * e[i]
                                          : 2.0 * theta * sqn * e[i] * e[j];
            const double xi = laws::sample_tilted(cfg.law, gamma, rng);
            const double v = (i == j) ? xi * diag : xi * off;
            x.at(i, j) = v;
            x.at(j, i) = v;
        }
    }
    return x;
}

double tilt_log_normalizer(const laws::EntryLaw& law, int n, double theta,
                           const std::vector<double>& e) {
    check_direction(e, n);
    const double sqn = std::sqrt(static_cast<double>(n));
    double logz = 0.0;
    for (int i = 0; i < n; ++i) {
        logz += law.log_laplace(std::sqrt(2.0 * n) * theta * e[i] * e[i]);
        for (int j = i + 1; j < n; ++j) {
            logz += law.log_laplace(2.0 * theta * sqn * e[i] * e[j]);
        }
    }
    return logz;
}

double semicircle_ks(const std::vector<double>& eigenvalues) {
    std::vector<double> s(eigenvalues);
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = freeprob::semicircle_cdf(s[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

std::vector<double> uniform_direction(int n) {
    return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
}

std::vector<double> localized_direction(int n, double v, double r2) {
    if (!(v > 0.0 && r2 > 0.0)) throw InvalidParameters("localized_direction: need v, r2 > 0");
    const int k = std::min(n, static_cast<int>(std::floor(v * std::sqrt(static_cast<double>(n)))));
    const double big = std::sqrt(r2) * std::pow(static_cast<double>(n), -0.25);
    const double used = k * big * big;
    if (used >= 1.0 || k == 0) {
        throw InvalidParameters("localized_direction: localized block carries mass >= 1");
    }
    std::vector<double> e(n, std::sqrt((1.0 - used) / (n - k)));
    for (int i = 0; i < k; ++i) e[i] = big;
    double norm = 0.0;
    for (double x : e) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : e) x /= norm;
    return e;
}

LocalizationStats localization_stats(const std::vector<double>& u, double epsilon, double r2,
                                     double threshold_exponent,
                                     const std::vector<double>* tilt_direction) {
    const double n = static_cast<double>(u.size());
    LocalizationStats out;
    out.epsilon = epsilon;
    out.r2 = r2;

    const double bucket_scale = std::sqrt(r2) * std::pow(n, -0.25);
    const double small_threshold = epsilon * std::pow(n, threshold_exponent);
    for (double ui : u) {
        const double a = std::abs(ui);
        const double ratio = a / bucket_scale;
        if (ratio >= 1.0 - epsilon && ratio <= 1.0 + epsilon) {
            ++out.bucket_count;
            out.bucket_mass += ui * ui;
        } else if (a <= small_threshold) {
            out.small_mass += ui * ui;
        }
        if (a > small_threshold) ++out.deloc_violation_count;
    }
    if (tilt_direction) {
        double dot = 0.0;
        for (std::size_t i = 0; i < u.size() && i < tilt_direction->size(); ++i) {
            dot += u[i] * (*tilt_direction)[i];
        }
        out.overlap_sq = dot * dot;
    }
    return out;
}

BbpSummary bbp_experiment(const laws::EntryLaw& law, int n, double theta,
                          const std::vector<double>& direction, int n_samples,
                          std::uint64_t seed) {
    check_direction(direction, n);
    WignerEnsembleConfig cfg{law, n, n_samples, seed, Tilt{theta, direction}};

    std::vector<double> lambdas(n_samples);
    std::vector<double> overlaps(n_samples);
    parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t k) {
        const SymMat x = sample_tilted_wigner(cfg, k);
        TopEig top;
        try {
            top = eig_top(x, static_cast<unsigned>(k + 1));
        } catch (const NoConvergence&) {
            auto full = eig_full(x, true);
            top.value = full.values.back();
            top.vector = full.vectors.back();
        }
        lambdas[k] = top.value;
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += top.vector[i] * direction[i];
        overlaps[k] = dot * dot;
    });

    auto mean_stderr = [](const std::vector<double>& v) {
        const double n_ = static_cast<double>(v.size());
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n_;
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var = v.size() > 1 ? var / (n_ - 1.0) : 0.0;
        return std::make_pair(mean, std::sqrt(var / n_));
    };

    BbpSummary out;
    out.n_samples = n_samples;
    std::tie(out.mean_lambda_max, out.stderr_lambda_max) = mean_stderr(lambdas);
    std::tie(out.mean_overlap_sq, out.stderr_overlap_sq) = mean_stderr(overlaps);
    if (2.0 * theta > 1.0) {
        const double x = freeprob::k_sigma(2.0 * theta);
        out.predicted_lambda_max = x;
        const double g = freeprob::g_sigma(x);
        const double gp = 0.5 * (1.0 - x / std::sqrt(x * x - 4.0));
        out.predicted_overlap_sq = -g * g / gp;
    } else {
        out.predicted_lambda_max = 2.0;
        out.predicted_overlap_sq = 0.0;
    }
    return out;
}

TailEstimate tail_estimate_direct(const laws::EntryLaw& law, int n, double x, int n_samples,
                                  std::uint64_t seed) {
    WignerEnsembleConfig cfg{law, n, n_samples, seed, std::nullopt};
    std::vector<char> hit(n_samples, 0);
    parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t k) {
        const SymMat m = sample_wigner(cfg, k);
        hit[k] = top_eigenvalue(m, k) >= x ? 1 : 0;
    });
    const double hits = std::accumulate(hit.begin(), hit.end(), 0.0);
    const double p = hits / n_samples;
    return {p, std::sqrt(p * (1.0 - p) / n_samples)};
}

TiltedTailEstimate tail_estimate_tilted(const laws::EntryLaw& law, int n, double x, double theta,
                                        int n_samples, std::uint64_t seed,
                                        std::optional<double> delta) {
    const std::vector<double> e = uniform_direction(n);
    WignerEnsembleConfig cfg{law, n, n_samples, seed, Tilt{theta, e}};
    const double logz = tilt_log_normalizer(law, n, theta, e);

    std::vector<double> logw(n_samples);
    std::vector<char> hit(n_samples, 0);
    parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t k) {
        const SymMat m = sample_tilted_wigner(cfg, k);
        double quad = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += m.at(i, j) * e[j];
            quad += e[i] * row;
        }
        logw[k] = logz - theta * n * quad;
        const double lambda = top_eigenvalue(m, k);
        hit[k] = delta ? (std::abs(lambda - x) <= *delta ? 1 : 0) : (lambda >= x ? 1 : 0);
    });

    double max_log = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_samples; ++k) {
        if (hit[k]) max_log = std::max(max_log, logw[k]);
    }
    int hits = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        if (!hit[k]) continue;
        ++hits;
        const double w = std::exp(logw[k] - max_log);
        sum += w;
        sum_sq += w * w;
    }
    if (hits == 0 || sum_sq <= 0.0) {
        throw DegenerateWeights("tail_estimate_tilted: no samples landed in the window");
    }
    const double ess = sum * sum / sum_sq;
    if (ess < 10.0) {
        throw DegenerateWeights("tail_estimate_tilted: effective sample size below 10");
    }

    // p_hat = mean(1 w); both the mean and the scatter carry the same
    // max_log shift, so the delta-method ratio is shift-free.
    const double mean_shifted = sum / n_samples;
    double var_shifted = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const double w = hit[k] ? std::exp(logw[k] - max_log) : 0.0;
        var_shifted += (w - mean_shifted) * (w - mean_shifted);
    }
    var_shifted /= n_samples > 1 ? (n_samples - 1.0) : 1.0;
    const double stderr_shifted = std::sqrt(var_shifted / n_samples);

    TiltedTailEstimate out;
    out.log_p_per_n = -(max_log + std::log(mean_shifted)) / n;
    out.stderr = stderr_shifted / (mean_shifted * n);
    out.ess = ess;
    out.hits = hits;
    return out;
}

} // namespace wldp::mc
