#include "clab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

namespace clab::spectral {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftPair {
    fftw_plan fwd;
    fftw_plan bwd;
    std::vector<hilbert::cplx> buf;

    explicit FftPair(int n) : buf(n) {
        auto* p = reinterpret_cast<fftw_complex*>(buf.data());
        std::lock_guard<std::mutex> lock(plan_mutex());
        fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
};

// Wavenumber of mode j on n samples with spacing dz (period n*dz).
inline double mode_k(int j, int n, double dz) {
    const int jj = (j <= n / 2) ? j : j - n;
    return 2.0 * std::numbers::pi * jj / (n * dz);
}

template <typename PhaseFn>
hilbert::Wavefunction apply_in_k(const hilbert::Wavefunction& psi, PhaseFn factor) {
    const int n = psi.grid.n_points;
    FftPair fft(n);
    fft.buf = psi.amp;
    fftw_execute(fft.fwd);
    const double dz = psi.grid.dz();
    for (int j = 0; j < n; ++j) fft.buf[j] *= factor(mode_k(j, n, dz), j);
    fftw_execute(fft.bwd);
    hilbert::Wavefunction out(psi.grid);
    for (int j = 0; j < n; ++j) out.amp[j] = fft.buf[j] / static_cast<double>(n);
    return out;
}

} // namespace

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

hilbert::Wavefunction derivative_fft(const hilbert::Wavefunction& psi) {
    const int n = psi.grid.n_points;
    return apply_in_k(psi, [n](double k, int j) -> hilbert::cplx {
        if (j == n / 2) return 0.0; // drop the unpaired Nyquist mode
        return hilbert::cplx(0.0, k);
    });
}

hilbert::Wavefunction second_derivative_fft(const hilbert::Wavefunction& psi) {
    return apply_in_k(psi, [](double k, int) -> hilbert::cplx { return -k * k; });
}

hilbert::Wavefunction free_evolve(const hilbert::Wavefunction& psi, double t, double mass,
                                  double hbar) {
    return apply_in_k(psi, [=](double k, int) -> hilbert::cplx {
        return std::polar(1.0, -hbar * k * k * t / (2.0 * mass));
    });
}

hilbert::Wavefunction derivative_central(const hilbert::Wavefunction& psi) {
    const int n = psi.grid.n_points;
    const double dz = psi.grid.dz();
    hilbert::Wavefunction out(psi.grid);
    auto at = [&](int k) -> hilbert::cplx {
        return (k < 0 || k >= n) ? hilbert::cplx(0.0, 0.0) : psi.amp[k];
    };
    for (int k = 0; k < n; ++k)
        out.amp[k] = (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / (12.0 * dz);
    return out;
}

hilbert::Wavefunction second_derivative_central(const hilbert::Wavefunction& psi) {
    const int n = psi.grid.n_points;
    const double dz2 = psi.grid.dz() * psi.grid.dz();
    hilbert::Wavefunction out(psi.grid);
    auto at = [&](int k) -> hilbert::cplx {
        return (k < 0 || k >= n) ? hilbert::cplx(0.0, 0.0) : psi.amp[k];
    };
    for (int k = 0; k < n; ++k)
        out.amp[k] = (-at(k + 2) + 16.0 * at(k + 1) - 30.0 * at(k) + 16.0 * at(k - 1) -
                      at(k - 2)) /
                     (12.0 * dz2);
    return out;
}

hilbert::Wavefunction second_derivative(const hilbert::Wavefunction& psi) {
    if (is_power_of_two(psi.grid.n_points)) return second_derivative_fft(psi);
    return second_derivative_central(psi);
}

} // namespace clab::spectral
