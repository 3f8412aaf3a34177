#pragma once

#include "clab/hilbert.hpp"

namespace clab::spectral {

bool is_power_of_two(int n);

// FFT-based derivatives; require n_points to be a power of two. The state is
// treated as one period of a periodic function (tails must have decayed).
hilbert::Wavefunction derivative_fft(const hilbert::Wavefunction& psi);
hilbert::Wavefunction second_derivative_fft(const hilbert::Wavefunction& psi);

// Free Schroedinger propagator exp(-i hbar k^2 t / 2m) applied in k-space.
hilbert::Wavefunction free_evolve(const hilbert::Wavefunction& psi, double t, double mass,
                                  double hbar);

// 4th-order central differences, zero beyond the ends.
hilbert::Wavefunction derivative_central(const hilbert::Wavefunction& psi);
hilbert::Wavefunction second_derivative_central(const hilbert::Wavefunction& psi);

// Dispatch per grid size: spectral when possible, else central.
hilbert::Wavefunction second_derivative(const hilbert::Wavefunction& psi);

} // namespace clab::spectral
