#include "clab/gue.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clab/errors.hpp"

namespace clab::gue {

namespace {

using hilbert::cplx;
using hilbert::Wavefunction;

void check_params(const GueParams& p) {
    if (p.dim < 1) throw ConfigError("gue: dim must be >= 1");
    if (p.scale <= 0.0) throw ConfigError("gue: scale must be positive");
}

// Semicircle CDF for our normalization: support [-R, R], R = 2 d sqrt(2 N).
double semicircle_cdf(double lambda, double radius) {
    const double x = std::clamp(lambda / radius, -1.0, 1.0);
    return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / std::numbers::pi;
}

} // namespace

HermitianMatrix sample_gue(const GueParams& params, Rng& rng) {
    check_params(params);
    const int n = params.dim;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = params.scale * cplx(rng.gauss(), rng.gauss());
    return (a + a.adjoint()) / std::numbers::sqrt2;
}

StateVector evolve_step(const StateVector& v, const HermitianMatrix& h, double dt) {
    if (v.size() != h.rows() || h.rows() != h.cols())
        throw DimensionMismatchError("evolve_step: dimension mismatch");
    if (dt <= 0.0) throw ConfigError("evolve_step: dt must be positive");
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    const auto& vecs = solver.eigenvectors();
    Eigen::VectorXcd phases(v.size());
    for (int k = 0; k < v.size(); ++k)
        phases(k) = std::polar(1.0, -solver.eigenvalues()(k) * dt);
    return vecs * phases.asDiagonal() * (vecs.adjoint() * v);
}

std::vector<StateVector> rm_walk(const StateVector& v0, int steps, double dt,
                                 const GueParams& params, Rng& rng) {
    std::vector<StateVector> traj;
    traj.reserve(static_cast<std::size_t>(steps) + 1);
    traj.push_back(v0);
    for (int k = 0; k < steps; ++k) {
        const HermitianMatrix h = sample_gue(params, rng);
        traj.push_back(evolve_step(traj.back(), h, dt));
    }
    return traj;
}

double dt_for_rms_step(const GueParams& params, double rms) {
    // E||H v||^2 = 2 d^2 N for unit v, so the RMS step angle is d dt sqrt(2N).
    return rms / (params.scale * std::sqrt(2.0 * params.dim));
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& h) {
    Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
    return solver.eigenvalues();
}

std::vector<double> bulk_unfolded_spacings(const GueParams& params, int n_draws, Rng& rng,
                                           double edge_drop) {
    check_params(params);
    const int n = params.dim;
    const double radius = 2.0 * params.scale * std::sqrt(2.0 * n);
    const int lo = static_cast<int>(std::floor(edge_drop * n));
    const int hi = n - 1 - lo;
    std::vector<double> spacings;
    spacings.reserve(static_cast<std::size_t>(n_draws) * std::max(0, hi - lo));
    for (int d = 0; d < n_draws; ++d) {
        const Eigen::VectorXd ev = eigenvalues(sample_gue(params, rng));
        for (int i = lo; i < hi; ++i) {
            const double s = n * (semicircle_cdf(ev(i + 1), radius) -
                                  semicircle_cdf(ev(i), radius));
            spacings.push_back(s);
        }
    }
    return spacings;
}

double wigner_surmise_pdf(double s) {
    const double a = 4.0 / std::numbers::pi;
    return (32.0 / (std::numbers::pi * std::numbers::pi)) * s * s * std::exp(-a * s * s);
}

double wigner_surmise_cdf(double s) {
    if (s <= 0.0) return 0.0;
    const double a = 4.0 / std::numbers::pi;
    return std::erf(2.0 * s / std::sqrt(std::numbers::pi)) - a * s * std::exp(-a * s * s);
}

ManifoldFrame build_manifold_frame(const hilbert::Wavefunction& phi, int size, Rng& rng) {
    if (size < 3) throw ConfigError("frame size must be >= 3");
    ManifoldFrame frame;
    frame.vectors.reserve(static_cast<std::size_t>(size));

    auto project_out = [&](Wavefunction v) {
        for (const auto& e : frame.vectors) {
            const cplx c = hilbert::inner_product(e, v);
            for (int k = 0; k < v.grid.n_points; ++k) v.amp[k] -= c * e.amp[k];
        }
        return v;
    };
    auto push_unit = [&](Wavefunction v, bool required) {
        v = project_out(std::move(v));
        const double n = hilbert::norm(v);
        if (n < 1e-12) {
            if (required) throw FrameDegeneracyError("tangent direction degenerate in frame");
            return false;
        }
        for (auto& a : v.amp) a /= n;
        frame.vectors.push_back(std::move(v));
        return true;
    };

    Wavefunction root = phi;
    hilbert::normalize(root);
    frame.vectors.push_back(std::move(root));
    push_unit(hilbert::tangent_tau(phi), true);
    frame.tau_index = 1;
    push_unit(hilbert::tangent_s(phi), true);
    frame.s_index = 2;

    // Fill with random Gaussian bumps carrying random linear phases.
    const hilbert::Moments m = hilbert::moments(phi);
    const double spread = std::max(m.delta_z, 8.0 * phi.grid.dz());
    int guard = 0;
    while (static_cast<int>(frame.vectors.size()) < size) {
        if (++guard > 64 * size) throw FrameDegeneracyError("cannot complete frame");
        hilbert::GaussianParams g;
        g.center = m.mu_z + (2.0 * rng.uniform() - 1.0) * spread;
        g.width = spread * (0.1 + 0.4 * rng.uniform());
        g.momentum = (2.0 * rng.uniform() - 1.0) * 2.0 / g.width;
        try {
            push_unit(hilbert::make_gaussian(g, phi.grid), false);
        } catch (const Error&) {
            continue; // candidate fell outside the domain; draw another
        }
    }
    return frame;
}

std::vector<std::array<double, 2>> induced_manifold_steps(const ManifoldFrame& frame,
                                                          const GueParams& params, double dt,
                                                          int n_samples, Rng& rng) {
    GueParams p = params;
    p.dim = static_cast<int>(frame.vectors.size());
    std::vector<std::array<double, 2>> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    // phi is frame vector 0; the step -i H phi dt has frame coefficients
    // -i dt K(:,0), and the tangent components are its real inner products
    // with the unit tangents, i.e. dt Im K(tau,0) and dt Im K(s,0).
    for (int i = 0; i < n_samples; ++i) {
        const HermitianMatrix k = sample_gue(p, rng);
        out.push_back({dt * std::imag(k(frame.tau_index, 0)), dt * std::imag(k(frame.s_index, 0))});
    }
    return out;
}

} // namespace clab::gue
