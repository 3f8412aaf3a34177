#pragma once

#include <utility>
#include <vector>

#include "clab/hilbert.hpp"
#include "clab/stats.hpp"

namespace clab::diffusion {

enum class Domain { WholeLine, AbsorbingInterval };

struct DiffusionProblem {
    double diffusion_coefficient = 0.5;
    Domain domain = Domain::AbsorbingInterval;
    double lo = -10.0;
    double hi = 10.0;
    std::vector<std::pair<double, double>> sources; // (position, weight), weights sum to 1
    double t_final = 1.0;
    int n_nodes = 801;
    double dt = 0.0; // <= 0: chosen so D dt / dx^2 = 1

    void validate() const;
    double dx() const { return (hi - lo) / (n_nodes - 1); }
};

struct DiffusionResult {
    std::vector<double> x;
    std::vector<double> density;
    double absorbed_lo = 0.0;
    double absorbed_hi = 0.0;
    double interior_mass = 0.0;
    bool converged = true; // absorbing runs: absorbed mass >= 0.999

    double mass_total() const { return interior_mass + absorbed_lo + absorbed_hi; }
};

// Crank-Nicolson with Dirichlet ends. The absorbed-mass ledger uses the
// scheme's own boundary flux, so interior mass + ledger is conserved to
// roundoff.
DiffusionResult solve(const DiffusionProblem& problem);

// Limiting absorbed fractions (P_lo, P_hi) for a point source at c in [a, b];
// runs until the interior mass falls below 1e-3 (or t_max), converged flag
// reports whether it did.
struct SplittingResult {
    double p_lo = 0.0;
    double p_hi = 0.0;
    bool converged = false;
};
SplittingResult splitting_probabilities(double diffusion_coefficient, double a, double b,
                                        double c, int n_nodes = 801);

// Square root of the absorbing-interval solution whose free-space standard
// deviation is sigma, renormalized; approaches the Gaussian g_{c,sigma} for c
// away from the ends.
hilbert::Wavefunction interval_state(double c, double sigma, double a, double b,
                                     int n_nodes = 2001,
                                     double diffusion_coefficient = 0.5);

// L1 distance between a sample histogram and a density sampled on x-nodes.
double compare_histogram(const stats::Histogram& hist, const std::vector<double>& x,
                         const std::vector<double>& density);

} // namespace clab::diffusion
