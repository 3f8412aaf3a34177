// collapse_lab: command-line harness for the random-walk collapse experiments.
// Subcommands: born, walk, gue, diffusion, distance, decompose, pattern.
// Exit codes: 0 ok, 2 bad configuration, 3 I/O failure, 4 --check failed.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "clab/config.hpp"
#include "clab/csvio.hpp"
#include "clab/detector.hpp"
#include "clab/diffusion.hpp"
#include "clab/errors.hpp"
#include "clab/gue.hpp"
#include "clab/hilbert.hpp"
#include "clab/manifest.hpp"
#include "clab/semiclassics.hpp"
#include "clab/stats.hpp"
#include "clab/version.hpp"
#include "clab/walk.hpp"

namespace {

namespace fs = std::filesystem;
using clab::csvio::cell;
using clab::csvio::CsvWriter;

struct CommonOpts {
    std::string out = "out";
    std::uint64_t seed = 1;
    std::uint64_t runs = 0; // per-subcommand default applied at registration
    bool check = false;
    std::string config_path;
};

struct OutputSink {
    fs::path dir;
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, std::string>> checksums;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void put(const std::string& name, const CsvWriter& csv) {
        csv.write(dir / name);
        checksums.emplace_back(name, clab::csvio::fnv1a_file(dir / name));
    }
    void finish() const {
        clab::manifest::RunManifest m;
        m.subcommand = subcommand;
        m.config = config;
        m.checksums = checksums;
        m.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        clab::manifest::write(m, dir);
    }
};

OutputSink make_sink(const std::string& subcommand, const CommonOpts& common) {
    OutputSink sink;
    sink.dir = common.out;
    std::error_code ec;
    fs::create_directories(sink.dir, ec);
    if (ec) throw clab::Error("cannot create output directory: " + sink.dir.string());
    sink.subcommand = subcommand;
    return sink;
}

std::string dstr(double v) { return clab::csvio::format_double(v); }

// ---------------------------------------------------------------- walk/born

struct WalkCmdOpts {
    double a = -10.0;
    double b = 10.0;
    double alpha_sq = 0.25;
    double step_tau = 1.0;
    double step_s = 1.0;
    double drift_h = 0.5;
    double delta_detect = 1.0;
    std::string distribution = "fixed";
    std::string absorb_mode = "joint";
    std::uint64_t max_steps = 1000000;
    double reflect_at = 0.0; // 0 = auto (delta_z0), negative = disabled
};

clab::walk::WalkConfig to_walk_config(const WalkCmdOpts& o, std::uint64_t seed) {
    clab::walk::WalkConfig cfg;
    cfg.a = o.a;
    cfg.b = o.b;
    cfg.alpha_sq = o.alpha_sq;
    cfg.beta_sq = 1.0 - o.alpha_sq;
    cfg.step_tau = o.step_tau;
    cfg.step_s = o.step_s;
    cfg.drift_h = o.drift_h;
    cfg.delta_detect = o.delta_detect;
    cfg.max_steps = o.max_steps;
    cfg.seed = seed;
    if (o.distribution == "fixed") cfg.distribution = clab::walk::StepDistribution::FixedMagnitude;
    else if (o.distribution == "normal") cfg.distribution = clab::walk::StepDistribution::Normal;
    else throw clab::ConfigError("distribution must be fixed or normal");
    if (o.absorb_mode == "joint") cfg.absorb_mode = clab::walk::AbsorbMode::Joint;
    else if (o.absorb_mode == "tau_only") cfg.absorb_mode = clab::walk::AbsorbMode::TauOnly;
    else throw clab::ConfigError("absorb_mode must be joint or tau_only");
    if (o.reflect_at > 0.0) cfg.reflect_at = o.reflect_at;
    else if (o.reflect_at < 0.0) cfg.reflect_at = std::nullopt;
    cfg.validate();
    return cfg;
}

void snapshot_walk_opts(OutputSink& sink, const WalkCmdOpts& o, const CommonOpts& c) {
    sink.config = {
        {"a", dstr(o.a)},
        {"b", dstr(o.b)},
        {"alpha_sq", dstr(o.alpha_sq)},
        {"step_tau", dstr(o.step_tau)},
        {"step_s", dstr(o.step_s)},
        {"drift_h", dstr(o.drift_h)},
        {"delta_detect", dstr(o.delta_detect)},
        {"distribution", o.distribution},
        {"absorb_mode", o.absorb_mode},
        {"max_steps", std::to_string(o.max_steps)},
        {"reflect_at", dstr(o.reflect_at)},
        {"runs", std::to_string(c.runs)},
        {"seed", std::to_string(c.seed)},
        {"out", c.out},
        {"check", c.check ? "1" : "0"},
    };
}

int cmd_born(const WalkCmdOpts& o, const CommonOpts& common) {
    OutputSink sink = make_sink("born", common);
    snapshot_walk_opts(sink, o, common);
    const clab::walk::WalkConfig cfg = to_walk_config(o, common.seed);
    const auto res = clab::walk::ensemble_run(cfg, common.runs);

    CsvWriter outcomes({"run", "outcome", "steps_taken"});
    for (std::uint64_t i = 0; i < res.per_run.size(); ++i)
        outcomes.add_row({cell(i), clab::walk::outcome_name(res.per_run[i].first),
                          cell(res.per_run[i].second)});
    sink.put("outcomes.csv", outcomes);

    const double beta_sq = cfg.beta_sq;
    const double half =
        clab::stats::kZ99 * std::sqrt(beta_sq * (1.0 - beta_sq) /
                                      std::max<std::uint64_t>(1, res.slit_a + res.slit_b));
    const bool pass = res.slit_a + res.slit_b > 0 &&
                      std::abs(res.freq_b_conditional - beta_sq) <= half;
    CsvWriter summary({"n_runs", "slit_a", "slit_b", "none", "freq_b_conditional",
                       "freq_b_unconditional", "beta_sq", "ci99_lo", "ci99_hi", "verdict"});
    summary.add_row({cell(res.n_runs), cell(res.slit_a), cell(res.slit_b), cell(res.none),
                     cell(res.freq_b_conditional), cell(res.freq_b_unconditional), cell(beta_sq),
                     cell(std::max(0.0, beta_sq - half)), cell(std::min(1.0, beta_sq + half)),
                     pass ? "pass" : "fail"});
    sink.put("summary.csv", summary);
    sink.finish();

    std::cout << "born: slit_b frequency " << dstr(res.freq_b_conditional) << " vs |beta|^2 "
              << dstr(beta_sq) << " (" << (pass ? "pass" : "fail") << ")\n";
    return (common.check && !pass) ? 4 : 0;
}

int cmd_walk(const WalkCmdOpts& o, const CommonOpts& common) {
    OutputSink sink = make_sink("walk", common);
    snapshot_walk_opts(sink, o, common);
    const clab::walk::WalkConfig cfg = to_walk_config(o, common.seed);
    const double dz0 = cfg.delta_z0();

    CsvWriter traj({"run", "step", "tau", "s", "mu_z", "delta_z"});
    bool all_absorbed_localized = true;
    for (std::uint64_t run = 0; run < common.runs; ++run) {
        clab::Rng rng = clab::Rng::stream(cfg.seed, run);
        const auto out = clab::walk::run_collapse(cfg, rng, /*record_trajectory=*/true);
        for (const auto& p : out.trajectory)
            traj.add_row({cell(run), cell(p.step), cell(p.tau), cell(p.s), cell(p.tau),
                          cell(dz0 * std::exp(-p.s))});
        if (out.absorbed_at == clab::walk::Outcome::None) {
            all_absorbed_localized = false;
        } else if (!out.trajectory.empty()) {
            const auto& last = out.trajectory.back();
            if (dz0 * std::exp(-last.s) >= cfg.delta_detect &&
                cfg.absorb_mode == clab::walk::AbsorbMode::Joint)
                all_absorbed_localized = false;
        }
    }
    sink.put("trajectory.csv", traj);
    sink.finish();
    std::cout << "walk: wrote " << common.runs << " trajectories\n";
    return (common.check && !all_absorbed_localized) ? 4 : 0;
}

// ----------------------------------------------------------------------- gue

struct GueCmdOpts {
    int dim = 64;
    double scale = 1.0;
    int induced_samples = 10000;
    int frame_size = 32;
    double dt = 0.0; // 0 = auto from the 0.02 rad RMS step default
};

int cmd_gue(const GueCmdOpts& o, const CommonOpts& common) {
    OutputSink sink = make_sink("gue", common);
    sink.config = {
        {"dim", std::to_string(o.dim)},
        {"scale", dstr(o.scale)},
        {"induced_samples", std::to_string(o.induced_samples)},
        {"frame_size", std::to_string(o.frame_size)},
        {"dt", dstr(o.dt)},
        {"runs", std::to_string(common.runs)},
        {"seed", std::to_string(common.seed)},
        {"out", common.out},
        {"check", common.check ? "1" : "0"},
    };

    clab::gue::GueParams params{o.dim, o.scale, common.seed};
    const int draws = static_cast<int>(common.runs);

    // Entry statistics.
    clab::Rng rng = clab::Rng::stream(common.seed, 0);
    std::vector<double> diag, off_re, off_im;
    for (int d = 0; d < draws; ++d) {
        const auto h = clab::gue::sample_gue(params, rng);
        for (int i = 0; i < o.dim; ++i) {
            diag.push_back(h(i, i).real());
            for (int j = i + 1; j < o.dim; ++j) {
                off_re.push_back(h(i, j).real());
                off_im.push_back(h(i, j).imag());
            }
        }
    }
    const double dv = clab::stats::variance(diag);
    const double orv = clab::stats::variance(off_re);
    const double oiv = clab::stats::variance(off_im);
    const double ratio = dv / orv;

    // Spacing statistics.
    clab::Rng rng2 = clab::Rng::stream(common.seed, 1);
    const auto spacings = clab::gue::bulk_unfolded_spacings(params, draws, rng2);
    const double ks = clab::stats::ks_statistic(spacings, clab::gue::wigner_surmise_cdf);

    clab::stats::Histogram hist(0.0, 0.05, 80);
    for (double s : spacings) hist.add(s);
    CsvWriter spacing_csv({"s_lo", "s_hi", "count", "wigner_pdf"});
    for (int i = 0; i < hist.n_bins(); ++i) {
        const double mid = 0.5 * (hist.bin_lo(i) + hist.bin_hi(i));
        spacing_csv.add_row({cell(hist.bin_lo(i)), cell(hist.bin_hi(i)), cell(hist.counts[i]),
                             cell(clab::gue::wigner_surmise_pdf(mid))});
    }
    sink.put("spacing_hist.csv", spacing_csv);

    // Induced (dtau, ds) components on a two-Gaussian state.
    const clab::hilbert::Grid grid(-16.0, 16.0, 4096);
    const auto ga = clab::hilbert::make_gaussian({-8.0, 0.5, 0.0}, grid);
    const auto gb = clab::hilbert::make_gaussian({8.0, 0.5, 0.0}, grid);
    const auto phi = clab::hilbert::superpose({0.5, 0.0}, ga, {std::sqrt(0.75), 0.0}, gb);
    clab::Rng rng3 = clab::Rng::stream(common.seed, 2);
    const auto frame = clab::gue::build_manifold_frame(phi, o.frame_size, rng3);
    clab::gue::GueParams fparams{o.frame_size, o.scale, common.seed};
    const double dt = o.dt > 0.0 ? o.dt : clab::gue::dt_for_rms_step(fparams);
    const auto steps = clab::gue::induced_manifold_steps(frame, fparams, dt, o.induced_samples,
                                                         rng3);
    std::vector<double> dtau, ds;
    for (const auto& p : steps) {
        dtau.push_back(p[0]);
        ds.push_back(p[1]);
    }
    const double corr = clab::stats::correlation(dtau, ds);
    const double var_ratio = clab::stats::variance(dtau) / clab::stats::variance(ds);

    CsvWriter summary({"dim", "draws", "diag_var", "offdiag_re_var", "offdiag_im_var",
                       "diag_offdiag_ratio", "ks_spacing", "induced_samples", "corr_tau_s",
                       "var_ratio_tau_s"});
    summary.add_row({cell(o.dim), cell(draws), cell(dv), cell(orv), cell(oiv), cell(ratio),
                     cell(ks), cell(o.induced_samples), cell(corr), cell(var_ratio)});
    sink.put("gue_summary.csv", summary);
    sink.finish();

    const bool pass = std::abs(ratio - 2.0) <= 0.1 && ks < 0.05 && std::abs(corr) < 0.05 &&
                      std::abs(var_ratio - 1.0) <= 0.1;
    std::cout << "gue: diag/offdiag " << dstr(ratio) << ", KS " << dstr(ks) << ", corr "
              << dstr(corr) << " (" << (pass ? "pass" : "fail") << ")\n";
    return (common.check && !pass) ? 4 : 0;
}

// ----------------------------------------------------------------- diffusion

struct DiffusionCmdOpts {
    double d_coeff = 0.5;
    double a = -10.0;
    double b = 10.0;
    double c = 5.0;
    double t_final = 10.0;
    int n_nodes = 801;
};

int cmd_diffusion(const DiffusionCmdOpts& o, const CommonOpts& common) {
    OutputSink sink = make_sink("diffusion", common);
    sink.config = {
        {"d_coeff", dstr(o.d_coeff)}, {"a", dstr(o.a)},
        {"b", dstr(o.b)},             {"c", dstr(o.c)},
        {"t_final", dstr(o.t_final)}, {"n_nodes", std::to_string(o.n_nodes)},
        {"runs", std::to_string(common.runs)},
        {"seed", std::to_string(common.seed)},
        {"out", common.out},          {"check", common.check ? "1" : "0"},
    };

    clab::diffusion::DiffusionProblem p;
    p.diffusion_coefficient = o.d_coeff;
    p.domain = clab::diffusion::Domain::AbsorbingInterval;
    p.lo = o.a;
    p.hi = o.b;
    p.sources = {{o.c, 1.0}};
    p.t_final = o.t_final;
    p.n_nodes = o.n_nodes;
    const auto snap = clab::diffusion::solve(p);
    CsvWriter density({"z", "rho"});
    for (std::size_t i = 0; i < snap.x.size(); ++i)
        density.add_row({cell(snap.x[i]), cell(snap.density[i])});
    sink.put("density.csv", density);

    const auto split = clab::diffusion::splitting_probabilities(o.d_coeff, o.a, o.b, o.c,
                                                                o.n_nodes);
    const double pb_exact = clab::walk::gambler_ruin_probability(o.c, o.a, o.b);
    CsvWriter splitting({"c", "a", "b", "p_a", "p_b", "p_a_analytic", "p_b_analytic",
                         "converged"});
    splitting.add_row({cell(o.c), cell(o.a), cell(o.b), cell(split.p_lo), cell(split.p_hi),
                       cell(1.0 - pb_exact), cell(pb_exact), cell(split.converged)});
    sink.put("splitting.csv", splitting);
    sink.finish();

    const bool pass = split.converged && std::abs(split.p_hi - pb_exact) <= 1e-3;
    std::cout << "diffusion: splitting (" << dstr(split.p_lo) << ", " << dstr(split.p_hi)
              << ") vs analytic (" << dstr(1.0 - pb_exact) << ", " << dstr(pb_exact) << ") ("
              << (pass ? "pass" : "fail") << ")\n";
    return (common.check && !pass) ? 4 : 0;
}

// ------------------------------------------------------------------ distance

struct DistanceCmdOpts {
    double slit_a = 0.0;
    double slit_b = 1e-5;
    double delta = 1e-9;
    double width_ratio = 100.0;
    double det_length = 0.0; // 0 = half the slit separation
    double det_cell = 0.0;   // 0 = det_length / 100
    double epsilon = 1e-4;
    int n_points = 65536;
};

int cmd_distance(const DistanceCmdOpts& o, const CommonOpts& common) {
    OutputSink sink = make_sink("distance", common);
    sink.config = {
        {"slit_a", dstr(o.slit_a)},       {"slit_b", dstr(o.slit_b)},
        {"delta", dstr(o.delta)},         {"width_ratio", dstr(o.width_ratio)},
        {"det_length", dstr(o.det_length)}, {"det_cell", dstr(o.det_cell)},
        {"epsilon", dstr(o.epsilon)},     {"n_points", std::to_string(o.n_points)},
        {"runs", std::to_string(common.runs)},
        {"seed", std::to_string(common.seed)},
        {"out", common.out},              {"check", common.check ? "1" : "0"},
    };

    using clab::hilbert::GaussianParams;
    const double sep = o.slit_b - o.slit_a;
    if (sep <= 0.0) throw clab::ConfigError("slit_b must exceed slit_a");
    const double wide = o.width_ratio * o.delta;
    const double det_len = o.det_length > 0.0 ? o.det_length : 0.5 * sep;
    const double det_cell = o.det_cell > 0.0 ? o.det_cell : det_len / 100.0;
    const clab::hilbert::Grid grid(o.slit_a - 0.2 * sep, o.slit_b + 0.3 * sep, o.n_points);

    const GaussianParams pa{o.slit_a, o.delta, 0.0};
    const GaussianParams pb{o.slit_b, o.delta, 0.0};
    const GaussianParams pb_wide{o.slit_b, wide, 0.0};
    const GaussianParams pb_shift{o.slit_b - 10.0 * o.delta, o.delta, 0.0};

    // Log-space overlaps (the grid cannot represent these magnitudes).
    const double rho_widened =
        std::acos(std::exp(clab::hilbert::gaussian_overlap_analytic(pb, pb_wide).log_magnitude));
    const double log_displaced =
        clab::hilbert::gaussian_overlap_analytic(pb, pb_shift).log_magnitude;
    const double log_cross = clab::hilbert::gaussian_overlap_analytic(pa, pb_wide).log_magnitude;

    clab::detector::DetectorConfig det;
    det.center = o.slit_b;
    det.length = det_len;
    det.cell_size = det_cell;
    det.epsilon = o.epsilon;
    const auto cls = clab::detector::make_class(det, pb, grid);

    const auto gb = clab::hilbert::make_gaussian(pb, grid);
    const auto ga = clab::hilbert::make_gaussian(pa, grid);
    const auto gb_shift = clab::hilbert::make_gaussian(pb_shift, grid);
    const auto gb_wide = clab::hilbert::make_gaussian(pb_wide, grid);
    const auto equal_sup = clab::hilbert::superpose({std::numbers::sqrt2 / 2.0, 0.0}, ga,
                                                    {std::numbers::sqrt2 / 2.0, 0.0}, gb);

    const bool in_ref = clab::detector::is_physical_eigenstate(gb, cls);
    const bool in_shift = clab::detector::is_physical_eigenstate(gb_shift, cls);
    const bool in_wide = clab::detector::is_physical_eigenstate(gb_wide, cls);
    const bool in_sup = clab::detector::is_physical_eigenstate(equal_sup, cls);
    const double dist_sup = clab::detector::class_distance(equal_sup, cls);

    CsvWriter row({"slit_a", "slit_b", "delta", "width_ratio", "rho_widened",
                   "log_overlap_displaced", "log_overlap_cross", "dist_superposition",
                   "in_class_reference", "in_class_displaced", "in_class_widened",
                   "in_class_superposition"});
    row.add_row({cell(o.slit_a), cell(o.slit_b), cell(o.delta), cell(o.width_ratio),
                 cell(rho_widened), cell(log_displaced), cell(log_cross), cell(dist_sup),
                 cell(in_ref), cell(in_shift), cell(in_wide), cell(in_sup)});
    sink.put("distances.csv", row);
    sink.finish();

    const bool pass = std::abs(rho_widened - 1.429) <= 0.002 &&
                      std::abs(log_displaced + 12.5) <= 0.01 && in_ref && in_shift && in_wide &&
                      !in_sup && std::abs(dist_sup - std::numbers::pi / 4.0) <= 2e-3;
    std::cout << "distance: rho(width x" << dstr(o.width_ratio) << ") = " << dstr(rho_widened)
              << " rad, log overlap(10 delta) = " << dstr(log_displaced) << " ("
              << (pass ? "pass" : "fail") << ")\n";
    return (common.check && !pass) ? 4 : 0;
}

// ----------------------------------------------------------------- decompose

struct DecomposeCmdOpts {
    double mass = 1.0;
    double hbar = 1.0;
    double sigma = 0.5;
    double momentum = 2.0;
    double omega = 2.0;
    double center = 10.0;
};

int cmd_decompose(const DecomposeCmdOpts& o, const CommonOpts& common) {
    OutputSink sink = make_sink("decompose", common);
    sink.config = {
        {"mass", dstr(o.mass)},     {"hbar", dstr(o.hbar)},
        {"sigma", dstr(o.sigma)},   {"momentum", dstr(o.momentum)},
        {"omega", dstr(o.omega)},   {"center", dstr(o.center)},
        {"runs", std::to_string(common.runs)},
        {"seed", std::to_string(common.seed)},
        {"out", common.out},        {"check", common.check ? "1" : "0"},
    };

    const clab::hilbert::Grid grid(-24.0, 24.0, 4096);
    auto run_case = [&](const char* name, double p, bool harmonic) {
        clab::semiclassics::ParticleParams params;
        params.mass = o.mass;
        params.hbar = o.hbar;
        params.packet = {harmonic ? o.center : 0.0, o.sigma, p};
        if (harmonic) {
            params.potential.resize(static_cast<std::size_t>(grid.n_points));
            for (int k = 0; k < grid.n_points; ++k) {
                const double z = grid.node(k);
                params.potential[static_cast<std::size_t>(k)] =
                    0.5 * o.mass * o.omega * o.omega * z * z;
            }
        }
        const auto d = clab::semiclassics::velocity_decomposition(params, grid);
        const double rel = std::abs(d.numeric_total - d.analytic_sum()) / d.numeric_total;
        return std::tuple<std::string, clab::semiclassics::Decomposition, double>(name, d, rel);
    };

    CsvWriter csv({"case", "mass", "hbar", "sigma", "momentum", "omega", "classical_term",
                   "acceleration_term", "spreading_term", "analytic_sum", "numeric_total",
                   "rel_error"});
    bool pass = true;
    for (const auto& [name, d, rel] :
         {run_case("free", 0.0, false), run_case("boosted", o.momentum, false),
          run_case("harmonic", o.momentum, true)}) {
        csv.add_row({name, cell(o.mass), cell(o.hbar), cell(o.sigma),
                     cell(name == std::string("free") ? 0.0 : o.momentum),
                     cell(name == std::string("harmonic") ? o.omega : 0.0),
                     cell(d.classical_term), cell(d.acceleration_term), cell(d.spreading_term),
                     cell(d.analytic_sum()), cell(d.numeric_total), cell(rel)});
        if (rel > 0.01) pass = false;
    }
    sink.put("decompose.csv", csv);
    sink.finish();
    std::cout << "decompose: wrote free/boosted/harmonic rows (" << (pass ? "pass" : "fail")
              << ")\n";
    return (common.check && !pass) ? 4 : 0;
}

// ------------------------------------------------------------------- pattern

struct PatternCmdOpts {
    double alpha_sq = 0.5;
    double sigma = 3.0;
    double k = 2.0;
    double separation = 0.0;
};

int cmd_pattern(const PatternCmdOpts& o, const CommonOpts& common) {
    OutputSink sink = make_sink("pattern", common);
    sink.config = {
        {"alpha_sq", dstr(o.alpha_sq)}, {"sigma", dstr(o.sigma)},
        {"k", dstr(o.k)},               {"separation", dstr(o.separation)},
        {"runs", std::to_string(common.runs)},
        {"seed", std::to_string(common.seed)},
        {"out", common.out},            {"check", common.check ? "1" : "0"},
    };

    const clab::hilbert::Grid grid(-20.0, 20.0, 4096);
    const std::complex<double> alpha(std::sqrt(o.alpha_sq), 0.0);
    const std::complex<double> beta(std::sqrt(1.0 - o.alpha_sq), 0.0);
    const clab::hilbert::GaussianParams pa{-0.5 * o.separation, o.sigma, +o.k};
    const clab::hilbert::GaussianParams pb{+0.5 * o.separation, o.sigma, -o.k};

    const auto inc = clab::semiclassics::screen_pattern(alpha, beta, pa, pb, true, grid);
    const auto coh = clab::semiclassics::screen_pattern(alpha, beta, pa, pb, false, grid);

    CsvWriter csv({"z", "p_incoherent", "p_coherent"});
    for (int i = 0; i < grid.n_points; ++i)
        csv.add_row({cell(grid.node(i)), cell(inc[static_cast<std::size_t>(i)]),
                     cell(coh[static_cast<std::size_t>(i)])});
    sink.put("pattern.csv", csv);

    // Cross-term check against independently built marginals.
    const auto wa = clab::hilbert::make_gaussian(pa, grid);
    const auto wb = clab::hilbert::make_gaussian(pb, grid);
    double max_cross = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
        const double expect = std::norm(alpha) * std::norm(wa.amp[i]) +
                              std::norm(beta) * std::norm(wb.amp[i]);
        max_cross = std::max(max_cross, std::abs(inc[static_cast<std::size_t>(i)] - expect));
    }
    const double vis = clab::semiclassics::fringe_visibility(coh, grid, -2.0 * o.sigma,
                                                             2.0 * o.sigma);
    const double expected_vis = 2.0 * std::abs(alpha) * std::abs(beta);

    CsvWriter summary({"alpha_sq", "visibility_coherent", "expected_visibility",
                       "max_cross_incoherent"});
    summary.add_row({cell(o.alpha_sq), cell(vis), cell(expected_vis), cell(max_cross)});
    sink.put("pattern_summary.csv", summary);
    sink.finish();

    const bool pass = max_cross < 1e-10 &&
                      (o.separation > 0.0 || std::abs(vis - expected_vis) <= 1e-3);
    std::cout << "pattern: visibility " << dstr(vis) << " (expected " << dstr(expected_vis)
              << "), max cross " << dstr(max_cross) << " (" << (pass ? "pass" : "fail") << ")\n";
    return (common.check && !pass) ? 4 : 0;
}

// -------------------------------------------------------------- CLI plumbing

// Inject file-held key=value pairs as synthetic arguments ahead of the user's
// flags: command-line values win, unknown file keys are rejected by the
// parser.
std::vector<std::string> expand_config(const std::string& sub,
                                       const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::vector<std::string> out;
    for (const auto& [k, v] : clab::config::load_file(path)) {
        if (k == "subcommand") {
            if (v != sub)
                throw clab::ConfigError("config is for subcommand '" + v + "', not '" + sub + "'");
            continue;
        }
        if (k == "config") throw clab::ConfigError("config files cannot nest");
        out.push_back("--" + k + "=" + v);
    }
    out.insert(out.end(), args.begin(), args.end());
    return out;
}

template <typename T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& var, const std::string& desc) {
    return app->add_option(name, var, desc)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_common(CLI::App* app, CommonOpts& c, std::uint64_t default_runs) {
    c.runs = default_runs;
    opt(app, "--out", c.out, "output directory");
    opt(app, "--seed", c.seed, "master seed; per-run streams derive from it");
    opt(app, "--runs", c.runs, "ensemble size / number of draws");
    opt(app, "--config", c.config_path, "key=value config file (flags override)");
    app->add_flag("--check", c.check, "verify the expected statistics; exit 4 on failure");
}

void add_walk_opts(CLI::App* app, WalkCmdOpts& o) {
    opt(app, "--a", o.a, "lower slit position");
    opt(app, "--b", o.b, "upper slit position");
    opt(app, "--alpha_sq", o.alpha_sq, "|alpha|^2 of the initial superposition");
    opt(app, "--step_tau", o.step_tau, "tau step magnitude");
    opt(app, "--step_s", o.step_s, "s step magnitude");
    opt(app, "--drift_h", o.drift_h, "drift per step in s");
    opt(app, "--delta_detect", o.delta_detect, "localization threshold on delta_z");
    opt(app, "--distribution", o.distribution, "step law: fixed | normal");
    opt(app, "--absorb_mode", o.absorb_mode, "absorption rule: joint | tau_only");
    opt(app, "--max_steps", o.max_steps, "step budget per run");
    opt(app, "--reflect_at", o.reflect_at,
        "reflecting bound on delta_z (0 = initial delta_z, negative = off)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"collapse-lab: random-walk collapse and Born-rule experiments"};
    app.set_version_flag("--version", clab::kVersion);
    app.require_subcommand(1);

    CommonOpts born_common, walk_common, gue_common, diff_common, dist_common, dec_common,
        pat_common;
    WalkCmdOpts born_opts, walk_opts;
    GueCmdOpts gue_opts;
    DiffusionCmdOpts diff_opts;
    DistanceCmdOpts dist_opts;
    DecomposeCmdOpts dec_opts;
    PatternCmdOpts pat_opts;

    CLI::App* born = app.add_subcommand("born", "absorption frequencies vs the Born rule");
    add_common(born, born_common, 1500);
    add_walk_opts(born, born_opts);

    CLI::App* walk = app.add_subcommand("walk", "individual (tau, s) trajectories");
    add_common(walk, walk_common, 3);
    add_walk_opts(walk, walk_opts);

    CLI::App* gue = app.add_subcommand("gue", "GUE ensemble statistics");
    add_common(gue, gue_common, 1000);
    opt(gue, "--dim", gue_opts.dim, "matrix dimension");
    opt(gue, "--scale", gue_opts.scale, "entry standard-deviation unit d");
    opt(gue, "--induced_samples", gue_opts.induced_samples, "draws for (dtau, ds) diagnostics");
    opt(gue, "--frame_size", gue_opts.frame_size, "orthonormal frame size");
    opt(gue, "--dt", gue_opts.dt, "step angle (0 = auto for 0.02 rad RMS)");

    CLI::App* diff = app.add_subcommand("diffusion", "diffusion density and splitting");
    add_common(diff, diff_common, 1);
    opt(diff, "--d_coeff", diff_opts.d_coeff, "diffusion coefficient");
    opt(diff, "--a", diff_opts.a, "lower absorbing end");
    opt(diff, "--b", diff_opts.b, "upper absorbing end");
    opt(diff, "--c", diff_opts.c, "source position");
    opt(diff, "--t_final", diff_opts.t_final, "snapshot time for density.csv");
    opt(diff, "--n_nodes", diff_opts.n_nodes, "spatial nodes");

    CLI::App* dist = app.add_subcommand("distance", "state distances and detector classes");
    add_common(dist, dist_common, 1);
    opt(dist, "--slit_a", dist_opts.slit_a, "lower slit position");
    opt(dist, "--slit_b", dist_opts.slit_b, "upper slit position");
    opt(dist, "--delta", dist_opts.delta, "slit-state width");
    opt(dist, "--width_ratio", dist_opts.width_ratio, "width ratio of the widened state");
    opt(dist, "--det_length", dist_opts.det_length, "detector length (0 = half separation)");
    opt(dist, "--det_cell", dist_opts.det_cell, "detector cell size (0 = length/100)");
    opt(dist, "--epsilon", dist_opts.epsilon, "class-membership tolerance");
    opt(dist, "--n_points", dist_opts.n_points, "grid points");

    CLI::App* dec = app.add_subcommand("decompose", "state-speed decomposition check");
    add_common(dec, dec_common, 1);
    opt(dec, "--mass", dec_opts.mass, "particle mass");
    opt(dec, "--hbar", dec_opts.hbar, "hbar");
    opt(dec, "--sigma", dec_opts.sigma, "packet width");
    opt(dec, "--momentum", dec_opts.momentum, "packet momentum for the boosted case");
    opt(dec, "--omega", dec_opts.omega, "harmonic frequency");
    opt(dec, "--center", dec_opts.center, "packet center for the harmonic case");

    CLI::App* pat = app.add_subcommand("pattern", "screen densities with/without detector");
    add_common(pat, pat_common, 1);
    opt(pat, "--alpha_sq", pat_opts.alpha_sq, "|alpha|^2 of the superposition");
    opt(pat, "--sigma", pat_opts.sigma, "spread packet width at the screen");
    opt(pat, "--k", pat_opts.k, "packet wavenumber (+k and -k arms)");
    opt(pat, "--separation", pat_opts.separation, "packet center separation (0 = full overlap)");

    std::vector<std::string> raw(argv + 1, argv + argc);
    try {
        std::string sub;
        if (!raw.empty() && !raw[0].empty() && raw[0][0] != '-') sub = raw[0];
        std::vector<std::string> rest(raw.begin() + (sub.empty() ? 0 : 1), raw.end());
        if (!sub.empty()) rest = expand_config(sub, rest);
        std::vector<std::string> full;
        if (!sub.empty()) full.push_back(sub);
        full.insert(full.end(), rest.begin(), rest.end());
        // CLI11 parses reversed argument vectors.
        std::vector<std::string> reversed(full.rbegin(), full.rend());
        app.parse(reversed);

        if (born->parsed()) return cmd_born(born_opts, born_common);
        if (walk->parsed()) return cmd_walk(walk_opts, walk_common);
        if (gue->parsed()) return cmd_gue(gue_opts, gue_common);
        if (diff->parsed()) return cmd_diffusion(diff_opts, diff_common);
        if (dist->parsed()) return cmd_distance(dist_opts, dist_common);
        if (dec->parsed()) return cmd_decompose(dec_opts, dec_common);
        if (pat->parsed()) return cmd_pattern(pat_opts, pat_common);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << clab::kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const clab::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const clab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
