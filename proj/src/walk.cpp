#include "clab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "clab/errors.hpp"

namespace clab::walk {

namespace {

double draw_step(double magnitude, StepDistribution dist, Rng& rng) {
    if (dist == StepDistribution::FixedMagnitude) return magnitude * rng.sign();
    return magnitude * rng.gauss();
}

// Lower reflecting bound in s corresponding to delta_z <= reflect_at.
std::optional<double> s_floor(const WalkConfig& cfg) {
    if (!cfg.reflect_at && cfg.delta_z0() > 0.0) return 0.0; // default: reflect at delta_z0
    if (cfg.reflect_at && *cfg.reflect_at > 0.0 && cfg.delta_z0() > 0.0)
        return std::log(cfg.delta_z0() / *cfg.reflect_at);
    return std::nullopt;
}

unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("COLLAPSE_LAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

} // namespace

double WalkConfig::delta_z0() const { return std::sqrt(alpha_sq * beta_sq) * (b - a); }

void WalkConfig::validate() const {
    if (!(a < b)) throw ConfigError("walk: require a < b");
    if (alpha_sq < 0.0 || beta_sq < 0.0 || std::abs(alpha_sq + beta_sq - 1.0) > 1e-12)
        throw ConfigError("walk: alpha_sq + beta_sq must equal 1");
    if (step_tau < 0.0 || step_s < 0.0) throw ConfigError("walk: step sizes must be >= 0");
    if (drift_h < 0.0) throw ConfigError("walk: drift must be >= 0");
    if (!(delta_detect > 0.0) || delta_detect >= (b - a) / 2.0)
        throw ConfigError("walk: require 0 < delta_detect < (b-a)/2");
    if (reflect_at && *reflect_at <= 0.0) throw ConfigError("walk: reflect_at must be positive");
}

std::pair<double, double> walk_step(std::pair<double, double> state, const WalkConfig& cfg,
                                    Rng& rng) {
    const double xi = draw_step(cfg.step_tau, cfg.distribution, rng);
    const double eta = draw_step(cfg.step_s, cfg.distribution, rng);
    double tau = state.first + xi;
    double s = state.second + cfg.drift_h + eta;
    if (const auto floor = s_floor(cfg); floor && s < *floor) s = 2.0 * *floor - s;
    return {tau, s};
}

WalkOutcome run_collapse(const WalkConfig& cfg, Rng& rng, bool record_trajectory) {
    cfg.validate();
    const double dz0 = cfg.delta_z0();
    auto delta_ok = [&](double s) { return dz0 * std::exp(-s) < cfg.delta_detect; };

    WalkOutcome out;
    double tau = cfg.tau0();
    double s = 0.0;
    // Long runs are decimated on the fly: past 2e5 recorded points, keep
    // every other one and double the stride.
    std::uint64_t stride = 1;
    auto record = [&](std::uint64_t step, bool force = false) {
        if (!record_trajectory || (!force && step % stride != 0)) return;
        out.trajectory.push_back({step, tau, s});
        if (out.trajectory.size() >= 200000) {
            std::vector<TrajectoryPoint> kept;
            kept.reserve(out.trajectory.size() / 2 + 1);
            for (std::size_t i = 0; i < out.trajectory.size(); i += 2)
                kept.push_back(out.trajectory[i]);
            out.trajectory = std::move(kept);
            stride *= 2;
        }
    };
    record(0);

    // A run that starts on a boundary is decided immediately.
    if (tau <= cfg.a || tau >= cfg.b) {
        if (cfg.absorb_mode == AbsorbMode::TauOnly || delta_ok(s)) {
            out.absorbed_at = (tau >= cfg.b) ? Outcome::SlitB : Outcome::SlitA;
            out.final_tau = tau;
            out.final_s = s;
            return out;
        }
    }

    for (std::uint64_t step = 1; step <= cfg.max_steps; ++step) {
        auto next = walk_step({tau, s}, cfg, rng);
        tau = next.first;
        s = next.second;
        out.steps_taken = step;
        if (tau <= cfg.a || tau >= cfg.b) {
            const Outcome side = (tau >= cfg.b) ? Outcome::SlitB : Outcome::SlitA;
            if (cfg.absorb_mode == AbsorbMode::TauOnly || delta_ok(s)) {
                record(step, /*force=*/true);
                out.absorbed_at = side;
                out.final_tau = tau;
                out.final_s = s;
                return out;
            }
            // Boundary reached too early: fold tau back and keep walking.
            tau = (side == Outcome::SlitB) ? 2.0 * cfg.b - tau : 2.0 * cfg.a - tau;
        }
        record(step);
    }
    out.absorbed_at = Outcome::None;
    out.final_tau = tau;
    out.final_s = s;
    return out;
}

double gambler_ruin_probability(double mu_z, double a, double b) {
    if (!(a < b) || mu_z < a || mu_z > b)
        throw OutOfIntervalError("gambler_ruin: mu_z outside [a, b]");
    return (mu_z - a) / (b - a);
}

EnsembleResult ensemble_run(const WalkConfig& cfg, std::uint64_t n_runs) {
    cfg.validate();
    EnsembleResult res;
    res.n_runs = n_runs;
    res.per_run.assign(n_runs, {Outcome::None, 0});
    if (n_runs > 0) {
        const unsigned n_threads =
            static_cast<unsigned>(std::min<std::uint64_t>(thread_cap(), n_runs));
        auto worker = [&](unsigned t) {
            for (std::uint64_t i = t; i < n_runs; i += n_threads) {
                Rng rng = Rng::stream(cfg.seed, i);
                const WalkOutcome o = run_collapse(cfg, rng, /*record_trajectory=*/false);
                res.per_run[i] = {o.absorbed_at, o.steps_taken};
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker, t);
        worker(0);
        for (auto& th : pool) th.join();
    }
    for (const auto& [o, steps] : res.per_run) {
        (void)steps;
        if (o == Outcome::SlitA) ++res.slit_a;
        else if (o == Outcome::SlitB) ++res.slit_b;
        else ++res.none;
    }
    const std::uint64_t absorbed = res.slit_a + res.slit_b;
    res.freq_b_conditional =
        absorbed ? static_cast<double>(res.slit_b) / static_cast<double>(absorbed) : 0.0;
    res.freq_b_unconditional =
        n_runs ? static_cast<double>(res.slit_b) / static_cast<double>(n_runs) : 0.0;
    res.ci99 = stats::binomial_ci(res.slit_b, absorbed, stats::kZ99);
    return res;
}

stats::Histogram tau_marginal_histogram(const WalkConfig& cfg, std::uint64_t n_runs,
                                        std::uint64_t n_steps, double lo, double bin_width,
                                        int n_bins) {
    cfg.validate();
    stats::Histogram hist(lo, bin_width, n_bins);
    for (std::uint64_t i = 0; i < n_runs; ++i) {
        Rng rng = Rng::stream(cfg.seed, i);
        double tau = cfg.tau0();
        double s = 0.0;
        for (std::uint64_t k = 0; k < n_steps; ++k) {
            auto next = walk_step({tau, s}, cfg, rng);
            tau = next.first;
            s = next.second;
        }
        hist.add(tau);
    }
    return hist;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::SlitA: return "slit_a";
        case Outcome::SlitB: return "slit_b";
        default: return "none";
    }
}

} // namespace clab::walk
