#include "clab/detector.hpp"

#include <algorithm>
#include <cmath>

#include "clab/errors.hpp"

namespace clab::detector {

namespace {

using hilbert::cplx;
using hilbert::Grid;
using hilbert::Wavefunction;

// Integral of phi over [u0, u1] by trapezoid on the grid with linearly
// interpolated partial end segments.
cplx integrate_interval(const Wavefunction& phi, double u0, double u1) {
    const Grid& g = phi.grid;
    const double dz = g.dz();
    auto value = [&](double u) {
        const double x = (u - g.z_min) / dz;
        const int j = std::clamp(static_cast<int>(std::floor(x)), 0, g.n_points - 2);
        const double t = x - j;
        return phi.amp[j] * (1.0 - t) + phi.amp[j + 1] * t;
    };
    const int k0 = static_cast<int>(std::ceil((u0 - g.z_min) / dz));
    const int k1 = static_cast<int>(std::floor((u1 - g.z_min) / dz));
    cplx total(0.0, 0.0);
    if (k0 > k1) {
        // Both ends inside one grid cell.
        total = 0.5 * (value(u0) + value(u1)) * (u1 - u0);
        return total;
    }
    for (int k = k0; k < k1; ++k) total += 0.5 * (phi.amp[k] + phi.amp[k + 1]) * dz;
    const double left = g.node(k0) - u0;
    if (left > 0.0) total += 0.5 * (value(u0) + phi.amp[k0]) * left;
    const double right = u1 - g.node(k1);
    if (right > 0.0) total += 0.5 * (phi.amp[k1] + value(u1)) * right;
    return total;
}

} // namespace

int DetectorConfig::n_cells() const {
    return std::max(1, static_cast<int>(std::lround(length / cell_size)));
}

void DetectorConfig::validate() const {
    if (length <= 0.0 || cell_size <= 0.0) throw ConfigError("detector: lengths must be positive");
    if (cell_size > length) throw ConfigError("detector: cell_size must be <= length");
    if (epsilon <= 0.0 || epsilon >= 1.0) throw ConfigError("detector: epsilon must be in (0,1)");
}

double detection_probability(const Wavefunction& phi, const DetectorConfig& det) {
    det.validate();
    if (det.lo() < phi.grid.z_min || det.hi() > phi.grid.z_max)
        throw DetectorOutsideGridError("detector interval outside the grid domain");
    const int cells = det.n_cells();
    const double w = det.length / cells;
    double sum = 0.0;
    for (int k = 0; k < cells; ++k) {
        const double u0 = det.lo() + k * w;
        const cplx overlap = integrate_interval(phi, u0, u0 + w) / std::sqrt(w);
        sum += std::norm(overlap);
    }
    return std::min(sum, 1.0);
}

PhysicalEigenstateClass make_class(const DetectorConfig& det,
                                   const hilbert::GaussianParams& reference,
                                   const hilbert::Grid& grid, double r_sigma) {
    det.validate();
    PhysicalEigenstateClass cls;
    cls.det = det;
    cls.reference = reference;
    cls.r_sigma = r_sigma;
    cls.reference_probability = detection_probability(hilbert::make_gaussian(reference, grid), det);
    return cls;
}

bool is_physical_eigenstate(const Wavefunction& phi, const PhysicalEigenstateClass& cls) {
    return detection_probability(phi, cls.det) >= cls.reference_probability - cls.det.epsilon;
}

double class_distance(const Wavefunction& phi, const PhysicalEigenstateClass& cls) {
    const Wavefunction ref = hilbert::make_gaussian(cls.reference, phi.grid);
    const double sigma = cls.reference.width;

    // Candidate class members: squeeze/translate the reference, keeping the
    // r-sigma interval inside D. tau is relative to the reference center,
    // log-lambda scales the width down from sigma.
    auto member_overlap = [&](double tau, double loglam) -> double {
        const double lam = std::exp(loglam);
        const double mu = cls.reference.center + tau;
        const double width = sigma / lam;
        if (mu - cls.r_sigma * width < cls.det.lo() || mu + cls.r_sigma * width > cls.det.hi())
            return -1.0;
        try {
            const Wavefunction psi = hilbert::squeeze_translate(ref, tau, lam);
            return std::abs(hilbert::inner_product(phi, psi));
        } catch (const Error&) {
            return -1.0;
        }
    };

    const double half = 0.5 * cls.det.length;
    double tau_lo = cls.det.lo() - cls.reference.center + cls.r_sigma * sigma;
    double tau_hi = cls.det.hi() - cls.reference.center - cls.r_sigma * sigma;
    if (tau_lo > tau_hi) tau_lo = tau_hi = 0.0;
    // Widths range from the r-sigma containment limit down to grid resolution.
    const double ll_min = std::log(std::max(1e-300, sigma * cls.r_sigma / half));
    const double ll_max = std::log(std::max(1.0, sigma / (4.0 * phi.grid.dz())));
    double ll_lo = std::min(ll_min, 0.0), ll_hi = ll_max;

    double best = std::abs(hilbert::inner_product(phi, ref));
    double best_tau = 0.0, best_ll = 0.0;
    const int npts = 13;
    for (int round = 0; round < 8; ++round) {
        const double dtau = (tau_hi - tau_lo) / (npts - 1);
        const double dll = (ll_hi - ll_lo) / (npts - 1);
        for (int i = 0; i < npts; ++i) {
            for (int j = 0; j < npts; ++j) {
                const double tau = tau_lo + i * dtau;
                const double ll = ll_lo + j * dll;
                const double v = member_overlap(tau, ll);
                if (v > best) {
                    best = v;
                    best_tau = tau;
                    best_ll = ll;
                }
            }
        }
        // Shrink the box to twice the grid cell around the incumbent; the
        // maximum cannot be farther than one cell away.
        tau_lo = best_tau - 2.0 * dtau;
        tau_hi = best_tau + 2.0 * dtau;
        ll_lo = std::max(ll_min, best_ll - 2.0 * dll);
        ll_hi = std::min(ll_max, best_ll + 2.0 * dll);
    }
    return std::acos(std::clamp(best, 0.0, 1.0));
}

} // namespace clab::detector
