// Acceptance suite: one pass/fail line per criterion, timed. Exit code is
// nonzero when any gating criterion fails; the final tilted-sampling trend
// is diagnostic only.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wldp/annealed.hpp"
#include "wldp/freeprob.hpp"
#include "wldp/montecarlo.hpp"
#include "wldp/numerics.hpp"
#include "wldp/rate.hpp"

using namespace wldp;
namespace fp = wldp::freeprob;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const char* name, bool gating, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const char* tag = out.pass ? (gating ? "PASS" : "SOFT-PASS") : (gating ? "FAIL" : "SOFT-FAIL");
    std::printf("%-9s criterion %2d (%6.2fs)  %s%s%s\n", tag, id, secs, name,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass && gating) ++g_failures;
}

// Brute maximizer for oracle duty: dense grid plus golden refinement,
// written out here so it shares nothing with the library path.
double brute_max(const std::function<double(double)>& f, double lo, double hi, int n) {
    double bx = lo;
    double bv = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double v = f(x);
        if (v > bv) {
            bv = v;
            bx = x;
        }
    }
    double a = std::max(lo, bx - (hi - lo) / n);
    double b = std::min(hi, bx + (hi - lo) / n);
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 120 && b - a > 1e-12; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
        bv = std::max({bv, f1, f2});
    }
    return bv;
}

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// Curves shared between the bound, asymptote, and convexity criteria.
struct SharedCurves {
    std::optional<rate::RateCurve> sparse9;
    std::optional<rate::RateCurve> gauss9;
};
SharedCurves g_curves;

} // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);

    run_criterion(1, "I_GOE closed form vs quadrature, 200 points on [2,10], 1e-8", true, [] {
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double x = 2.0 + 8.0 * i / 200.0;
            const double quad =
                i == 0 ? 0.0
                       : 0.5 * num::integrate(
                                   [](double y) { return std::sqrt(y * y - 4.0); }, 2.0, x);
            worst = std::max(worst, std::abs(*fp::i_goe(x) - quad));
        }
        return Outcome{worst <= 1e-8, "max |closed - quad| = " + fmt2(worst)};
    });

    run_criterion(2, "variational identity sup{J - theta^2} = I_GOE, 50 points, 1e-6", true, [] {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double x = 2.0 + 8.0 * i / 49.0;
            worst = std::max(worst, std::abs(fp::i_goe_variational(x) - *fp::i_goe(x)));
        }
        return Outcome{worst <= 1e-6, "max deviation = " + fmt2(worst)};
    });

    run_criterion(3, "small-theta regime F = theta^2 for sparse_gaussian(1/2) on [0, 0.5]", true,
                  [] {
                      annealed::AnnealedF f(laws::sparse_gaussian(0.5));
                      double worst = 0.0;
                      for (int i = 0; i <= 25; ++i) {
                          const double theta = 0.5 * i / 25.0;
                          worst = std::max(worst,
                                           std::abs(f.value(theta).value - theta * theta));
                      }
                      return Outcome{worst <= 1e-6, "max |F - theta^2| = " + fmt2(worst)};
                  });

    run_criterion(4, "gaussian Gibbs closed forms zeta_C, R(C) within 1e-8", true, [] {
        auto gs = annealed::GibbsSolver::for_law(laws::gaussian());
        double worst = 0.0;
        for (double c : {1e-3, 0.1, 1.0, 10.0}) {
            const double zeta_expected = 0.5 + 0.5 / c;
            const double r_expected = 0.5 * c + 0.5 + 0.5 * std::log(2.0 * kPi * c);
            worst = std::max(worst, std::abs(gs->zeta_of_c(c) - zeta_expected));
            worst = std::max(worst, std::abs(gs->r_of_c(c) - r_expected));
        }
        return Outcome{worst <= 1e-8, "max deviation = " + fmt2(worst)};
    });

    run_criterion(5, "R small-C asymptote at C = 1e-3 for sparse_gaussian(1/2), 0.05", true, [] {
        auto gs = annealed::GibbsSolver::for_law(laws::sparse_gaussian(0.5));
        const double c = 1e-3;
        const double dev = std::abs(gs->r_of_c(c) - 0.5 - 0.5 * std::log(2.0 * kPi * c));
        return Outcome{dev <= 0.05, "|R - asymptote| = " + fmt2(dev)};
    });

    run_criterion(6, "structured vs brute alpha-grid F agreement, 20 thetas each, 1e-5", true, [] {
        double worst = 0.0;
        {
            annealed::AnnealedF f(laws::sparse_gaussian(0.5));
            const auto& gs = f.solver();
            for (int i = 0; i < 20; ++i) {
                const double theta = 1.1 + 0.25 * i;
                const double mine = f.value(theta).value;
                const double brute = std::max(
                    theta * theta,
                    brute_max([&](double a) { return gs.k_theta(theta, a); }, 1e-6, 1.0 - 1e-6,
                              4096));
                worst = std::max(worst, std::abs(mine - brute));
            }
        }
        {
            annealed::AnnealedF f(laws::three_point(0.2));
            const double A = f.tails().A;
            for (int i = 0; i < 20; ++i) {
                const double theta = 1.3 + 0.45 * i;
                const double u = theta * theta * (A - 1.0);
                const double mine = f.value(theta).value;
                auto V = [&](double a) {
                    return u * a * a + theta * theta + 0.5 * std::log(1.0 - a);
                };
                const double brute =
                    std::max(theta * theta, brute_max(V, 1e-9, 1.0 - 1e-12, 4096));
                worst = std::max(worst, std::abs(mine - brute));
            }
        }
        return Outcome{worst <= 1e-5, "max |structured - brute| = " + fmt2(worst)};
    });

    run_criterion(7, "compact explicit formula vs maximize_1d(V), theta in [2,20], 1e-8", true,
                  [] {
                      double worst = 0.0;
                      for (double A : {1.5, 2.0, 5.0}) {
                          for (int i = 0; i <= 9; ++i) {
                              const double theta = 2.0 + 18.0 * i / 9.0;
                              const double u = theta * theta * (A - 1.0);
                              const double root = std::sqrt(1.0 - 1.0 / u);
                              const double ap = 0.5 * (1.0 + root);
                              const double closed =
                                  0.25 * u * (1.0 + root) * (1.0 + root) + theta * theta +
                                  0.5 * std::log(1.0 - root) - 0.5 * std::log(2.0);
                              auto V = [&](double a) {
                                  return u * a * a + theta * theta + 0.5 * std::log(1.0 - a);
                              };
                              auto grid = num::maximize_1d(V, 0.5, 1.0 - 1e-12);
                              worst = std::max(worst, std::abs(closed - grid.max));
                              worst = std::max(worst, std::abs(closed - V(ap)));
                          }
                      }
                      return Outcome{worst <= 1e-8, "max |closed - grid| = " + fmt2(worst)};
                  });

    run_criterion(8, "rate bounds I <= I_GOE and I(2) = 0 across non-gaussian builtins", true, [] {
        double worst_bound = -1e300;
        double worst_edge = 0.0;
        auto check_curve = [&](const laws::EntryLaw& law, const std::vector<double>& grid,
                               std::optional<rate::RateCurve>* keep) {
            annealed::AnnealedF f(law);
            auto curve = rate::rate_curve(f, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double I = *curve.points[i].value;
                worst_bound = std::max(worst_bound, I - *curve.goe_reference[i]);
                if (grid[i] == 2.0) worst_edge = std::max(worst_edge, std::abs(I));
            }
            if (keep) *keep = std::move(curve);
        };
        std::vector<double> nine(9);
        for (int i = 0; i < 9; ++i) nine[i] = 2.0 + i;
        check_curve(laws::sparse_gaussian(0.5), nine, &g_curves.sparse9);
        check_curve(laws::rademacher(), {2.0, 4.0, 6.0, 8.0, 10.0}, nullptr);
        check_curve(laws::gauss_rademacher_mix(0.6, 0.5, 1.5), {2.0, 4.0, 6.0, 8.0, 10.0},
                    nullptr);
        check_curve(laws::rademacher_mixture({0.96, 0.04}, {0.0, 5.0}),
                    {2.0, 4.0, 6.0, 8.0, 10.0}, nullptr);
        check_curve(laws::three_point(0.2), {2.0, 4.0, 6.0, 8.0, 10.0}, nullptr);
        return Outcome{worst_bound <= 1e-8 && worst_edge <= 1e-8,
                       "max I - I_GOE = " + fmt2(worst_bound) +
                           ", |I(2)| = " + fmt2(worst_edge)};
    });

    run_criterion(9, "GOE window agreement for the A = 1.5 mix on [2, 2.12132], 1e-4", true, [] {
        annealed::AnnealedF f(laws::gauss_rademacher_mix(0.6, 0.5, 1.5));
        auto window = rate::goe_window(f.tails());
        if (!window) return Outcome{false, "window missing"};
        double worst = 0.0;
        for (int i = 0; i <= 5; ++i) {
            const double x = 2.0 + (window->second - 2.0) * i / 5.0;
            auto p = rate::rate_point(f, x);
            worst = std::max(worst, std::abs(*p.value - *fp::i_goe(x)));
        }
        return Outcome{worst <= 1e-4, "max |I - I_GOE| = " + fmt2(worst) + " on [2, " +
                                          fmt2(window->second) + "]"};
    });

    run_criterion(10, "asymptote I(50) 4A/2500 in [0.9, 1.1]", true, [] {
        std::string detail;
        bool ok = true;
        {
            annealed::AnnealedF f(laws::sparse_gaussian(0.5));
            const double ratio = *rate::rate_point(f, 50.0).value * 4.0 * f.tails().A / 2500.0;
            ok = ok && ratio >= 0.9 && ratio <= 1.1;
            detail += "sparse: " + fmt2(ratio);
        }
        {
            annealed::AnnealedF f(laws::three_point(0.2));
            const double ratio = *rate::rate_point(f, 50.0).value * 4.0 * f.tails().A / 2500.0;
            ok = ok && ratio >= 0.9 && ratio <= 1.1;
            detail += ", three_point: " + fmt2(ratio);
        }
        return Outcome{ok, detail};
    });

    run_criterion(11, "convexity of F and I: second differences >= -1e-6", true, [] {
        double worst = 1e300;
        {
            annealed::AnnealedF f(laws::sparse_gaussian(0.5));
            std::vector<double> v;
            for (int i = 0; i <= 40; ++i) v.push_back(f.value(0.05 + 0.2 * i).value);
            for (std::size_t i = 2; i < v.size(); ++i) {
                worst = std::min(worst, v[i] - 2.0 * v[i - 1] + v[i - 2]);
            }
        }
        {
            annealed::AnnealedF f(laws::three_point(0.2));
            const double t0 = f.compact_validity_threshold();
            std::vector<double> v;
            for (int i = 0; i <= 30; ++i) v.push_back(f.value(t0 + 0.3 * i).value);
            for (std::size_t i = 2; i < v.size(); ++i) {
                worst = std::min(worst, v[i] - 2.0 * v[i - 1] + v[i - 2]);
            }
        }
        if (!g_curves.gauss9) {
            annealed::AnnealedF g(laws::gaussian());
            std::vector<double> nine(9);
            for (int i = 0; i < 9; ++i) nine[i] = 2.0 + i;
            g_curves.gauss9 = rate::rate_curve(g, nine);
        }
        for (const auto* curve : {&*g_curves.sparse9, &*g_curves.gauss9}) {
            for (std::size_t i = 2; i < curve->points.size(); ++i) {
                if (curve->points[i].validity && curve->points[i - 1].validity &&
                    curve->points[i - 2].validity) {
                    worst = std::min(worst, *curve->points[i].value -
                                                2.0 * *curve->points[i - 1].value +
                                                *curve->points[i - 2].value);
                }
            }
        }
        return Outcome{worst >= -1e-6, "min second difference = " + fmt2(worst)};
    });

    run_criterion(12, "Monte Carlo bulk: N=300, 50 gaussian samples", true, [] {
        mc::WignerEnsembleConfig cfg{laws::gaussian(), 300, 50, 2026, std::nullopt};
        double sum_l = 0.0;
        double sum_ks = 0.0;
        for (int k = 0; k < 50; ++k) {
            auto full = mc::eig_full(mc::sample_wigner(cfg, k), false);
            sum_l += full.values.back();
            sum_ks += mc::semicircle_ks(full.values);
        }
        const double ml = sum_l / 50.0;
        const double mks = sum_ks / 50.0;
        return Outcome{ml >= 1.85 && ml <= 2.05 && mks <= 0.08,
                       "mean lambda_max = " + fmt2(ml) + ", mean KS = " + fmt2(mks)};
    });

    run_criterion(13, "BBP transition: tilted N=300, 50 samples", true, [] {
        auto e = mc::uniform_direction(300);
        auto super = mc::bbp_experiment(laws::gaussian(), 300, 1.0, e, 50, 2027);
        auto sub = mc::bbp_experiment(laws::gaussian(), 300, 0.4, e, 50, 2028);
        const bool ok = std::abs(super.mean_lambda_max - 2.5) <= 0.1 &&
                        std::abs(super.mean_overlap_sq - 0.75) <= 0.05 &&
                        sub.mean_lambda_max <= 2.15 &&
                        super.mean_lambda_max - sub.mean_lambda_max >= 0.3;
        return Outcome{ok, "super lambda = " + fmt2(super.mean_lambda_max) +
                               ", overlap^2 = " + fmt2(super.mean_overlap_sq) +
                               ", sub lambda = " + fmt2(sub.mean_lambda_max)};
    });

    run_criterion(14, "eigensolver oracle: eig_top vs eig_full, invariants", true, [] {
        double worst_gap = 0.0;
        double worst_inv = 0.0;
        for (int t = 0; t < 20; ++t) {
            num::RngStream rng(900 + t, 0);
            mc::SymMat m(100);
            for (int i = 0; i < 100; ++i) {
                for (int j = i; j < 100; ++j) {
                    const double v = rng.normal();
                    m.at(i, j) = v;
                    m.at(j, i) = v;
                }
            }
            auto full = mc::eig_full(m, false);
            auto top = mc::eig_top(m, 7 + t);
            worst_gap = std::max(worst_gap,
                                 std::abs(top.value - full.values.back()) / m.norm_1());
            double sum = 0.0;
            double sum2 = 0.0;
            for (double v : full.values) {
                sum += v;
                sum2 += v * v;
            }
            worst_inv = std::max(worst_inv, std::abs(sum - m.trace()) /
                                                std::max(1.0, std::abs(m.trace())));
            worst_inv = std::max(worst_inv, std::abs(sum2 - m.frobenius_sq()) /
                                                m.frobenius_sq());
        }
        return Outcome{worst_gap <= 1e-8 && worst_inv <= 1e-6,
                       "max scaled top gap = " + fmt2(worst_gap) +
                           ", max invariant dev = " + fmt2(worst_inv)};
    });

    run_criterion(15,
                  "diagnostic: tilted IS estimates trend toward I_GOE(2.5) (non-gating)", false,
                  [] {
                      const double target = *fp::i_goe(2.5);
                      std::string detail = "target " + fmt2(target) + ":";
                      double final_est = 0.0;
                      for (int n : {50, 100, 200}) {
                          auto est = mc::tail_estimate_tilted(laws::gaussian(), n, 2.5, 1.0, 300,
                                                              3000 + n, 0.1);
                          detail += " N=" + std::to_string(n) + " -> " + fmt2(est.log_p_per_n);
                          final_est = est.log_p_per_n;
                      }
                      const bool ok = std::abs(final_est - target) <= 0.3 * target;
                      return Outcome{ok, detail};
                  });

    if (g_failures > 0) {
        std::printf("%d gating criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all gating criteria passed\n");
    return 0;
}
