#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "clab/rng.hpp"
#include "clab/stats.hpp"

namespace clab::walk {

enum class StepDistribution { FixedMagnitude, Normal };

// Absorption semantics at the tau boundaries. Joint: a boundary hit counts
// only when delta_z < delta_detect; otherwise tau is folded back and the walk
// continues. TauOnly: the first boundary hit ends the run regardless.
enum class AbsorbMode { Joint, TauOnly };

enum class Outcome { SlitA, SlitB, None };

struct WalkConfig {
    double a = -10.0;
    double b = 10.0;
    double alpha_sq = 0.25;
    double beta_sq = 0.75;
    double step_tau = 1.0;
    double step_s = 1.0;
    double drift_h = 0.5;
    double delta_detect = 1.0;
    StepDistribution distribution = StepDistribution::FixedMagnitude;
    AbsorbMode absorb_mode = AbsorbMode::Joint;
    std::uint64_t max_steps = 1000000;
    std::uint64_t seed = 0;
    // Reflecting bound on delta_z; defaults to the initial delta_z (its
    // maximum over the two-state family). nullopt disables reflection.
    std::optional<double> reflect_at = std::nullopt;

    double tau0() const { return alpha_sq * a + beta_sq * b; }
    double delta_z0() const;
    void validate() const;
};

struct TrajectoryPoint {
    std::uint64_t step = 0;
    double tau = 0.0;
    double s = 0.0;
};

struct WalkOutcome {
    Outcome absorbed_at = Outcome::None;
    std::uint64_t steps_taken = 0;
    double final_tau = 0.0;
    double final_s = 0.0;
    std::vector<TrajectoryPoint> trajectory;
};

// One step: tau += xi, s += h + eta, with the reflecting fold in s.
std::pair<double, double> walk_step(std::pair<double, double> state, const WalkConfig& cfg,
                                    Rng& rng);

WalkOutcome run_collapse(const WalkConfig& cfg, Rng& rng, bool record_trajectory = true);

// (mu_z - a) / (b - a).
double gambler_ruin_probability(double mu_z, double a, double b);

struct EnsembleResult {
    std::uint64_t n_runs = 0;
    std::uint64_t slit_a = 0;
    std::uint64_t slit_b = 0;
    std::uint64_t none = 0;
    double freq_b_conditional = 0.0;   // slit_b / (slit_a + slit_b)
    double freq_b_unconditional = 0.0; // slit_b / n_runs
    stats::Interval ci99;              // 99% binomial interval around the conditional frequency
    std::vector<std::pair<Outcome, std::uint64_t>> per_run; // (outcome, steps)
};

// Independent per-run streams derived from cfg.seed; deterministic regardless
// of the number of worker threads (capped by COLLAPSE_LAB_THREADS).
EnsembleResult ensemble_run(const WalkConfig& cfg, std::uint64_t n_runs);

// Distribution of tau after n_steps with boundaries disabled.
stats::Histogram tau_marginal_histogram(const WalkConfig& cfg, std::uint64_t n_runs,
                                        std::uint64_t n_steps, double lo, double bin_width,
                                        int n_bins);

const char* outcome_name(Outcome o);

} // namespace clab::walk
