#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

#include "clab/hilbert.hpp"
#include "clab/rng.hpp"

namespace clab::gue {

struct GueParams {
    int dim = 2;
    double scale = 1.0; // d: entry standard-deviation unit
    std::uint64_t seed = 0;
};

// Hermitian by construction (H = (A + A*)/sqrt(2), A iid complex normal):
// off-diagonal real/imag parts have variance scale^2 each, diagonal entries
// are real with variance 2 scale^2.
using HermitianMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

HermitianMatrix sample_gue(const GueParams& params, Rng& rng);

// v' = exp(-i H dt) v via eigendecomposition; exactly unitary up to roundoff.
StateVector evolve_step(const StateVector& v, const HermitianMatrix& h, double dt);

// Fresh independent Hamiltonian each step; returns v0 and all intermediates.
std::vector<StateVector> rm_walk(const StateVector& v0, int steps, double dt,
                                 const GueParams& params, Rng& rng);

// Step angle such that the RMS Fubini-Study displacement per walk step is rms.
double dt_for_rms_step(const GueParams& params, double rms = 0.02);

// Ascending eigenvalues.
Eigen::VectorXd eigenvalues(const HermitianMatrix& h);

// Nearest-neighbour spacings unfolded with the semicircle law, keeping only
// the central bulk of each spectrum.
std::vector<double> bulk_unfolded_spacings(const GueParams& params, int n_draws, Rng& rng,
                                           double edge_drop = 0.2);

double wigner_surmise_pdf(double s);
double wigner_surmise_cdf(double s);

// Orthonormal frame on the grid: [phi, unit tangent_tau, unit tangent_s,
// random smooth vectors], Gram-Schmidt orthonormalized.
struct ManifoldFrame {
    std::vector<hilbert::Wavefunction> vectors;
    int tau_index = 1;
    int s_index = 2;
};

ManifoldFrame build_manifold_frame(const hilbert::Wavefunction& phi, int size, Rng& rng);

// Projections of GUE-driven steps -i H phi dt onto the unit tangent_tau and
// tangent_s directions of the frame; one (dtau, ds) pair per draw.
std::vector<std::array<double, 2>> induced_manifold_steps(const ManifoldFrame& frame,
                                                          const GueParams& params, double dt,
                                                          int n_samples, Rng& rng);

} // namespace clab::gue
