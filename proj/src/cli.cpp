#include "wldp/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wldp/annealed.hpp"
#include "wldp/lawspec.hpp"
#include "wldp/montecarlo.hpp"
#include "wldp/parallel.hpp"
#include "wldp/rate.hpp"

namespace wldp::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v, const char* missing = "nan") {
    return v ? fmt(*v) : missing;
}

// All output goes through a named sink so identical configs produce
// byte-identical files.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") {
            out_ = &std::cout;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!file_->good()) throw InvalidParameters("cannot open output path: " + path);
            out_ = file_.get();
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_ = nullptr;
};

void write_header(std::ostream& os, const std::string& command, const ordered_json& config) {
    ordered_json h;
    h["artifact"] = "wigner-ldp";
    h["version"] = kVersion;
    h["command"] = command;
    h["config"] = config;
    os << "# " << h.dump() << "\n";
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw InvalidParameters("steps must be >= 1");
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i) {
        g[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    }
    return g;
}

struct TiltDirSpec {
    bool uniform = true;
    double v = 0.0;
    double r2 = 0.0;
};

TiltDirSpec parse_tilt_dir(const std::string& s) {
    if (s == "uniform") return {};
    if (s.rfind("loc:", 0) == 0) {
        TiltDirSpec d;
        d.uniform = false;
        if (std::sscanf(s.c_str() + 4, "%lf,%lf", &d.v, &d.r2) != 2) {
            throw InvalidParameters("tilt-dir loc form is loc:<v>,<r2>");
        }
        return d;
    }
    throw InvalidParameters("tilt-dir must be 'uniform' or 'loc:<v>,<r2>'");
}

struct Options {
    std::string law_spec;
    std::string out = "-";
    double xmin = 2.0, xmax = 10.0;
    double theta_min = 0.0, theta_max = 4.0;
    int steps = 50;
    int n = 100;
    int samples = 20;
    std::uint64_t seed = 1;
    double tilt_theta = 0.0;
    std::string tilt_dir = "uniform";
    bool full_spectrum = false;
    bool emit_theta = false;
    bool allow_upper_bound = false;
    double epsilon = 0.2;
    double r2 = 0.0;
    double threshold_exponent = -0.25;
    double x = 2.5;
    double delta = 0.1;
    std::string n_list = "50,100,200";
    std::string emit_spec;
    double grid_max = 10.0;
    int grid_steps = 200;
};

int cmd_igoe(const Options& o) {
    Sink sink(o.out);
    ordered_json cfg{{"xmin", o.xmin}, {"xmax", o.xmax}, {"steps", o.steps}, {"seed", o.seed}};
    write_header(sink.stream(), "igoe", cfg);
    sink.stream() << "x,I_GOE\n";
    for (double x : linspace(o.xmin, o.xmax, o.steps)) {
        sink.stream() << fmt(x) << "," << fmt_opt(freeprob::i_goe(x), "inf") << "\n";
    }
    return 0;
}

int cmd_laws_inspect(const Options& o) {
    auto law = lawspec::parse(o.law_spec);
    auto tails = laws::tail_constants(law);
    auto cls = laws::classify(law, tails);

    if (!o.emit_spec.empty()) {
        std::ofstream f(o.emit_spec);
        if (!f.good()) throw InvalidParameters("cannot open emit-spec path: " + o.emit_spec);
        f << lawspec::to_json_text(law);
    }

    Sink sink(o.out);
    ordered_json cfg{{"law", o.law_spec}, {"grid_max", o.grid_max},
                     {"grid_steps", o.grid_steps}, {"seed", o.seed}};
    write_header(sink.stream(), "laws-inspect", cfg);
    ordered_json info;
    info["name"] = law.name();
    info["A"] = tails.A;
    info["B"] = tails.B;
    info["m_star"] = tails.m_star ? ordered_json(*tails.m_star) : ordered_json(nullptr);
    info["psi_second_at_mstar"] =
        tails.psi_second_at_mstar ? ordered_json(*tails.psi_second_at_mstar) : ordered_json(nullptr);
    info["classification"] = laws::regime_tag_name(cls.tag);
    info["monotonicity_violations"] = cls.monotonicity_violations;
    info["maxima_count"] = cls.maxima_count;
    sink.stream() << "# law " << info.dump() << "\n";
    sink.stream() << "x,psi\n";
    for (double x : linspace(0.0, o.grid_max, o.grid_steps)) {
        sink.stream() << fmt(x) << "," << fmt(laws::psi(law, x)) << "\n";
    }
    return 0;
}

int cmd_fcurve(const Options& o) {
    auto law = lawspec::parse(o.law_spec);
    annealed::AnnealedF f(law);

    Sink sink(o.out);
    ordered_json cfg{{"law", o.law_spec}, {"theta_min", o.theta_min},
                     {"theta_max", o.theta_max}, {"steps", o.steps}, {"seed", o.seed}};
    write_header(sink.stream(), "fcurve", cfg);
    sink.stream() << "theta,F,regime,alpha_opt,zeta_opt,validity\n";
    for (double theta : linspace(o.theta_min, o.theta_max, o.steps)) {
        const auto p = f.value(theta);
        sink.stream() << fmt(theta) << "," << fmt(p.value) << "," << annealed::f_regime_name(p.regime)
                      << "," << fmt_opt(p.alpha_opt) << "," << fmt_opt(p.zeta_opt) << ","
                      << (p.validity ? 1 : 0) << "\n";
    }
    return 0;
}

int cmd_rate(const Options& o) {
    auto law = lawspec::parse(o.law_spec);
    annealed::AnnealedF f(law);
    if (f.classification().tag == laws::RegimeTag::Unclassified && !o.allow_upper_bound) {
        throw WrongRegime(law.name() +
                          " is Unclassified; pass --allow-upper-bound for the I_GOE-bounded curve");
    }
    const auto curve = rate::rate_curve(f, linspace(o.xmin, o.xmax, o.steps));

    Sink sink(o.out);
    ordered_json cfg{{"law", o.law_spec}, {"xmin", o.xmin}, {"xmax", o.xmax},
                     {"steps", o.steps}, {"emit_theta", o.emit_theta},
                     {"allow_upper_bound", o.allow_upper_bound}, {"seed", o.seed}};
    write_header(sink.stream(), "rate", cfg);
    ordered_json meta{{"law", curve.law_name},
                      {"A", curve.tails.A},
                      {"B", curve.tails.B},
                      {"classification", laws::regime_tag_name(curve.regime)}};
    if (auto w = rate::goe_window(curve.tails)) {
        meta["goe_window"] = {w->first, w->second};
    }
    // Operational x_mu proxy: first grid point with theta* past theta_0 and
    // a clean single-maximizer scan (emitted as metadata only).
    if (o.emit_theta) {
        if (auto t0 = f.theta_zero()) {
            for (const auto& p : curve.points) {
                if (!p.value) continue;
                if (p.theta_star > *t0 &&
                    rate::theta_star_uniqueness_report(f, p.x).clean) {
                    meta["x_mu_proxy"] = p.x;
                    break;
                }
            }
        }
    }
    sink.stream() << "# rate " << meta.dump() << "\n";
    sink.stream() << (o.emit_theta ? "x,I,I_GOE,theta_star,validity,theta_cluster,theta_spread\n"
                                   : "x,I,I_GOE,theta_star,validity\n");
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i];
        sink.stream() << fmt(p.x) << "," << fmt_opt(p.value, "inf") << ","
                      << fmt_opt(curve.goe_reference[i], "inf") << "," << fmt(p.theta_star) << ","
                      << (p.validity ? 1 : 0);
        if (o.emit_theta) {
            if (p.x >= freeprob::kEdge) {
                auto rep = rate::theta_star_uniqueness_report(f, p.x);
                sink.stream() << "," << rep.cluster_count << "," << fmt(rep.spread);
            } else {
                sink.stream() << ",0,0";
            }
        }
        sink.stream() << "\n";
    }
    return 0;
}

std::optional<mc::Tilt> make_tilt(const Options& o, int n) {
    if (o.tilt_theta <= 0.0) return std::nullopt;
    const auto dir = parse_tilt_dir(o.tilt_dir);
    return mc::Tilt{o.tilt_theta, dir.uniform ? mc::uniform_direction(n)
                                              : mc::localized_direction(n, dir.v, dir.r2)};
}

int cmd_simulate(const Options& o) {
    auto law = lawspec::parse(o.law_spec);
    mc::WignerEnsembleConfig cfg{law, o.n, o.samples, o.seed, make_tilt(o, o.n)};

    Sink sink(o.out);
    ordered_json jcfg{{"law", o.law_spec}, {"N", o.n},      {"samples", o.samples},
                      {"seed", o.seed},    {"tilt_theta", o.tilt_theta},
                      {"tilt_dir", o.tilt_dir}, {"full_spectrum", o.full_spectrum}};
    write_header(sink.stream(), "simulate", jcfg);
    sink.stream() << "sample,lambda_max,ks,overlap_sq\n";

    std::vector<mc::SpectrumStats> stats(o.samples);
    std::vector<std::vector<double>> spectra(o.full_spectrum ? o.samples : 0);
    wldp::parallel_for(static_cast<std::size_t>(o.samples), [&](std::size_t k) {
        const mc::SymMat x =
            cfg.tilt ? mc::sample_tilted_wigner(cfg, k) : mc::sample_wigner(cfg, k);
        auto full = mc::eig_full(x, false);
        mc::SpectrumStats s;
        s.lambda_max = full.values.back();
        s.spectral_radius = std::max(std::abs(full.values.front()), std::abs(full.values.back()));
        s.ks_to_semicircle = mc::semicircle_ks(full.values);
        if (cfg.tilt) {
            try {
                s.top_eigenvector = mc::eig_top(x, static_cast<unsigned>(k + 1)).vector;
            } catch (const NoConvergence&) {
                s.top_eigenvector = mc::eig_full(x, true).vectors.back();
            }
        }
        if (o.full_spectrum) spectra[k] = full.values;
        stats[k] = std::move(s);
    });

    double sum_l = 0.0;
    double sum_ks = 0.0;
    double sum_ov = 0.0;
    for (int k = 0; k < o.samples; ++k) {
        const auto& s = stats[k];
        double overlap = std::numeric_limits<double>::quiet_NaN();
        if (cfg.tilt) {
            double dot = 0.0;
            for (int i = 0; i < o.n; ++i) dot += s.top_eigenvector[i] * cfg.tilt->direction[i];
            overlap = dot * dot;
            sum_ov += overlap;
        }
        sink.stream() << k << "," << fmt(s.lambda_max) << "," << fmt(s.ks_to_semicircle) << ","
                      << fmt(overlap) << "\n";
        sum_l += s.lambda_max;
        sum_ks += s.ks_to_semicircle;
    }
    if (o.full_spectrum) {
        sink.stream() << "# spectrum rows: sample,index,lambda\n";
        for (int k = 0; k < o.samples; ++k) {
            for (std::size_t i = 0; i < spectra[k].size(); ++i) {
                sink.stream() << "# spec " << k << "," << i << "," << fmt(spectra[k][i]) << "\n";
            }
        }
    }
    ordered_json summary{{"mean_lambda_max", sum_l / o.samples},
                         {"mean_ks", sum_ks / o.samples}};
    if (cfg.tilt) summary["mean_overlap_sq"] = sum_ov / o.samples;
    sink.stream() << "# summary " << summary.dump() << "\n";
    return 0;
}

int cmd_localize(const Options& o) {
    auto law = lawspec::parse(o.law_spec);
    auto tilt = make_tilt(o, o.n);
    if (!tilt) throw InvalidParameters("localize requires --tilt-theta > 0");
    const auto dir = parse_tilt_dir(o.tilt_dir);
    const double r2 = o.r2 > 0.0 ? o.r2 : (!dir.uniform ? dir.r2 : 0.0);
    if (!(r2 > 0.0)) throw InvalidParameters("localize requires --r2 (or a loc: tilt direction)");
    mc::WignerEnsembleConfig cfg{law, o.n, o.samples, o.seed, tilt};

    Sink sink(o.out);
    ordered_json jcfg{{"law", o.law_spec}, {"N", o.n},
                      {"samples", o.samples}, {"seed", o.seed},
                      {"tilt_theta", o.tilt_theta}, {"tilt_dir", o.tilt_dir},
                      {"epsilon", o.epsilon}, {"r2", r2},
                      {"threshold_exponent", o.threshold_exponent}};
    write_header(sink.stream(), "localize", jcfg);
    sink.stream() << "sample,lambda_max,epsilon,r2,bucket_count,bucket_mass,small_mass,"
                     "overlap_sq,deloc_violation_count\n";

    std::vector<std::pair<double, mc::LocalizationStats>> rows(o.samples);
    wldp::parallel_for(static_cast<std::size_t>(o.samples), [&](std::size_t k) {
        const mc::SymMat x = mc::sample_tilted_wigner(cfg, k);
        mc::TopEig top;
        try {
            top = mc::eig_top(x, static_cast<unsigned>(k + 1));
        } catch (const NoConvergence&) {
            auto full = mc::eig_full(x, true);
            top.value = full.values.back();
            top.vector = full.vectors.back();
        }
        rows[k] = {top.value, mc::localization_stats(top.vector, o.epsilon, r2,
                                                     o.threshold_exponent,
                                                     &cfg.tilt->direction)};
    });
    for (int k = 0; k < o.samples; ++k) {
        const auto& [lambda, st] = rows[k];
        sink.stream() << k << "," << fmt(lambda) << "," << fmt(st.epsilon) << "," << fmt(st.r2)
                      << "," << st.bucket_count << "," << fmt(st.bucket_mass) << ","
                      << fmt(st.small_mass) << "," << fmt(st.overlap_sq) << ","
                      << st.deloc_violation_count << "\n";
    }
    return 0;
}

int cmd_tilt(const Options& o) {
    auto law = lawspec::parse(o.law_spec);
    std::vector<int> ns;
    {
        std::stringstream ss(o.n_list);
        std::string item;
        while (std::getline(ss, item, ',')) ns.push_back(std::stoi(item));
    }
    if (ns.empty()) throw InvalidParameters("tilt requires a nonempty --N list");

    Sink sink(o.out);
    ordered_json cfg{{"law", o.law_spec}, {"N", o.n_list}, {"x", o.x},
                     {"theta", o.tilt_theta}, {"samples", o.samples},
                     {"seed", o.seed}, {"delta", o.delta}};
    write_header(sink.stream(), "tilt", cfg);
    sink.stream() << "N,log_p_per_N,stderr,ess,hits\n";
    for (int n : ns) {
        const auto est =
            mc::tail_estimate_tilted(law, n, o.x, o.tilt_theta, o.samples, o.seed, o.delta);
        sink.stream() << n << "," << fmt(est.log_p_per_n) << "," << fmt(est.stderr) << ","
                      << fmt(est.ess) << "," << est.hits << "\n";
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    Options o;
    CLI::App app{"wigner-ldp: large-deviation rate functions for sub-Gaussian Wigner matrices"};
    app.require_subcommand(1);

    auto add_law = [&](CLI::App* c) {
        c->add_option("--law", o.law_spec, "law spec: inline form or JSON file path")->required();
    };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output path (- = stdout)"); };
    auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "RNG seed"); };

    auto* laws_cmd = app.add_subcommand("laws", "entry-law utilities");
    auto* inspect = laws_cmd->add_subcommand("inspect", "print law constants and a psi grid");
    add_law(inspect);
    add_out(inspect);
    add_seed(inspect);
    inspect->add_option("--grid-max", o.grid_max, "psi grid upper end");
    inspect->add_option("--grid-steps", o.grid_steps, "psi grid point count");
    inspect->add_option("--emit-spec", o.emit_spec, "write canonical law JSON to this path");

    auto* igoe = app.add_subcommand("igoe", "GOE rate function curve");
    igoe->add_option("--xmin", o.xmin);
    igoe->add_option("--xmax", o.xmax);
    igoe->add_option("--steps", o.steps);
    add_out(igoe);
    add_seed(igoe);

    auto* fcurve = app.add_subcommand("fcurve", "annealed spherical integral F(theta)");
    add_law(fcurve);
    fcurve->add_option("--theta-min", o.theta_min);
    fcurve->add_option("--theta-max", o.theta_max);
    fcurve->add_option("--steps", o.steps);
    add_out(fcurve);
    add_seed(fcurve);

    auto* rate_cmd = app.add_subcommand("rate", "rate function I(x) with GOE reference");
    add_law(rate_cmd);
    rate_cmd->add_option("--xmin", o.xmin);
    rate_cmd->add_option("--xmax", o.xmax);
    rate_cmd->add_option("--steps", o.steps);
    rate_cmd->add_flag("--emit-theta", o.emit_theta, "add maximizer-uniqueness columns");
    rate_cmd->add_flag("--allow-upper-bound", o.allow_upper_bound,
                       "accept Unclassified laws (upper-bound-only output)");
    add_out(rate_cmd);
    add_seed(rate_cmd);

    auto* simulate = app.add_subcommand("simulate", "Wigner ensemble Monte Carlo");
    add_law(simulate);
    simulate->add_option("--N", o.n);
    simulate->add_option("--samples", o.samples);
    simulate->add_option("--tilt-theta", o.tilt_theta);
    simulate->add_option("--tilt-dir", o.tilt_dir, "uniform | loc:<v>,<r2>");
    simulate->add_flag("--full-spectrum", o.full_spectrum);
    add_out(simulate);
    add_seed(simulate);

    auto* localize = app.add_subcommand("localize", "eigenvector localization statistics");
    add_law(localize);
    localize->add_option("--N", o.n);
    localize->add_option("--samples", o.samples);
    localize->add_option("--tilt-theta", o.tilt_theta);
    localize->add_option("--tilt-dir", o.tilt_dir);
    localize->add_option("--epsilon", o.epsilon);
    localize->add_option("--r2", o.r2);
    localize->add_option("--threshold-exponent", o.threshold_exponent,
                         "delocalization threshold exponent (default -1/4)");
    add_out(localize);
    add_seed(localize);

    auto* tilt = app.add_subcommand("tilt", "tilted importance-sampling tail estimates");
    add_law(tilt);
    tilt->add_option("--N", o.n_list, "comma-separated N list");
    tilt->add_option("--x", o.x);
    tilt->add_option("--theta", o.tilt_theta);
    tilt->add_option("--samples", o.samples);
    tilt->add_option("--delta", o.delta, "half-width of the tail window");
    add_out(tilt);
    add_seed(tilt);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (inspect->parsed()) return cmd_laws_inspect(o);
        if (igoe->parsed()) return cmd_igoe(o);
        if (fcurve->parsed()) return cmd_fcurve(o);
        if (rate_cmd->parsed()) return cmd_rate(o);
        if (simulate->parsed()) return cmd_simulate(o);
        if (localize->parsed()) return cmd_localize(o);
        if (tilt->parsed()) return cmd_tilt(o);
        std::cerr << "no command given\n";
        return 2;
    } catch (const InvalidParameters& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const OutOfDomain& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const TiltOutOfRange& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const WrongRegime& e) {
        std::cerr << "regime failure: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    }
}

} // namespace wldp::cli
