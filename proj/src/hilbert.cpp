#include "clab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clab/spectral.hpp"

namespace clab::hilbert {

namespace {

constexpr double kOutsideMassTol = 1e-8;

// Trapezoid weight for node k.
inline double weight(const Grid& g, int k) {
    return (k == 0 || k == g.n_points - 1) ? 0.5 * g.dz() : g.dz();
}

// Upper tail of the standard normal, Q(x) = P(Z > x).
inline double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

void check_same_grid(const Wavefunction& a, const Wavefunction& b) {
    if (a.grid != b.grid) throw GridMismatchError("states live on different grids");
}

} // namespace

double norm(const Wavefunction& psi) {
    double s = 0.0;
    for (int k = 0; k < psi.grid.n_points; ++k) s += std::norm(psi.amp[k]) * weight(psi.grid, k);
    return std::sqrt(s);
}

void normalize(Wavefunction& psi) {
    const double n = norm(psi);
    if (n <= 0.0) throw Error("cannot normalize a zero state");
    for (auto& a : psi.amp) a /= n;
}

Wavefunction make_gaussian(const GaussianParams& p, const Grid& grid, double hbar) {
    if (p.width <= 0.0) throw ConfigError("gaussian width must be positive");
    if (p.width < 4.0 * grid.dz())
        throw GridTooCoarseError("gaussian width under 4 grid spacings");
    if (p.center - 5.0 * p.width < grid.z_min || p.center + 5.0 * p.width > grid.z_max)
        throw SupportClippedError("5-sigma interval not inside the grid domain");
    const double outside = normal_tail((grid.z_max - p.center) / p.width) +
                           normal_tail((p.center - grid.z_min) / p.width);
    if (outside > kOutsideMassTol)
        throw SupportClippedError("gaussian mass outside the domain exceeds tolerance");

    Wavefunction psi(grid);
    const double amp0 = std::pow(2.0 * std::numbers::pi * p.width * p.width, -0.25);
    const double k_wave = p.momentum / hbar;
    for (int k = 0; k < grid.n_points; ++k) {
        const double z = grid.node(k);
        const double u = (z - p.center) / p.width;
        const double env = amp0 * std::exp(-0.25 * u * u);
        psi.amp[k] = std::polar(env, k_wave * z);
    }
    normalize(psi);
    return psi;
}

Wavefunction superpose(cplx ca, const Wavefunction& a, cplx cb, const Wavefunction& b) {
    check_same_grid(a, b);
    Wavefunction out(a.grid);
    for (int k = 0; k < a.grid.n_points; ++k) out.amp[k] = ca * a.amp[k] + cb * b.amp[k];
    normalize(out);
    return out;
}

Wavefunction superpose(cplx ca, const Wavefunction& a, cplx cb, const Wavefunction& b,
                       cplx cc, const Wavefunction& c) {
    check_same_grid(a, b);
    check_same_grid(a, c);
    Wavefunction out(a.grid);
    for (int k = 0; k < a.grid.n_points; ++k)
        out.amp[k] = ca * a.amp[k] + cb * b.amp[k] + cc * c.amp[k];
    normalize(out);
    return out;
}

cplx inner_product(const Wavefunction& psi, const Wavefunction& phi) {
    check_same_grid(psi, phi);
    cplx s(0.0, 0.0);
    for (int k = 0; k < psi.grid.n_points; ++k)
        s += std::conj(psi.amp[k]) * phi.amp[k] * weight(psi.grid, k);
    return s;
}

double fubini_study_distance(const Wavefunction& psi, const Wavefunction& phi) {
    const double overlap = std::min(1.0, std::abs(inner_product(psi, phi)));
    return std::acos(overlap);
}

OverlapLog gaussian_overlap_analytic(const GaussianParams& p1, const GaussianParams& p2,
                                     double hbar) {
    if (p1.width <= 0.0 || p2.width <= 0.0) throw ConfigError("gaussian width must be positive");
    const double s1 = p1.width, s2 = p2.width;
    const double ss = s1 * s1 + s2 * s2;
    const double da = p1.center - p2.center;
    const double kappa = (p2.momentum - p1.momentum) / hbar;
    OverlapLog out;
    out.log_magnitude = 0.5 * std::log(2.0 * s1 * s2 / ss) - da * da / (4.0 * ss) -
                        kappa * kappa * s1 * s1 * s2 * s2 / ss;
    out.phase = kappa * (p1.center * s2 * s2 + p2.center * s1 * s1) / ss;
    out.phase = std::remainder(out.phase, 2.0 * std::numbers::pi);
    return out;
}

Moments moments(const Wavefunction& psi) {
    const Grid& g = psi.grid;
    // Probability mass in the outermost cells; a second moment computed from a
    // state leaning on the boundary is unreliable.
    double edge = 0.0;
    for (int k : {0, 1, g.n_points - 2, g.n_points - 1})
        edge += std::norm(psi.amp[k]) * weight(g, k);
    if (edge > 1e-7) throw BoundaryMassError("state has non-negligible boundary mass");

    double mu = 0.0;
    for (int k = 0; k < g.n_points; ++k) mu += g.node(k) * std::norm(psi.amp[k]) * weight(g, k);
    double var = 0.0;
    for (int k = 0; k < g.n_points; ++k) {
        const double d = g.node(k) - mu;
        var += d * d * std::norm(psi.amp[k]) * weight(g, k);
    }
    return {mu, std::sqrt(std::max(0.0, var))};
}

Wavefunction squeeze_translate(const Wavefunction& phi, double tau, double lambda) {
    if (lambda <= 0.0) throw ConfigError("lambda must be positive");
    const Grid& g = phi.grid;
    const double mu = moments(phi).mu_z;

    // Support of the result, from the decayed extent of the input.
    double peak = 0.0;
    for (const auto& a : phi.amp) peak = std::max(peak, std::abs(a));
    int lo = 0, hi = g.n_points - 1;
    while (lo < hi && std::abs(phi.amp[lo]) < 1e-13 * peak) ++lo;
    while (hi > lo && std::abs(phi.amp[hi]) < 1e-13 * peak) --hi;
    const double out_lo = mu + tau + (g.node(lo) - mu) / lambda;
    const double out_hi = mu + tau + (g.node(hi) - mu) / lambda;
    if (out_lo < g.z_min || out_hi > g.z_max)
        throw SupportClippedError("scaled support leaves the grid domain");

    Wavefunction out(g);
    const double root = std::sqrt(lambda);
    const double dz = g.dz();
    const int n = g.n_points;
    for (int k = 0; k < n; ++k) {
        const double u = lambda * (g.node(k) - mu - tau) + mu;
        if (u < g.z_min || u > g.z_max) continue;
        const double x = (u - g.z_min) / dz;
        int j = static_cast<int>(std::floor(x));
        j = std::clamp(j, 1, n - 3);
        const double t = x - j;
        // 4-point Lagrange cubic through nodes j-1..j+2.
        const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
        out.amp[k] = root * (w0 * phi.amp[j - 1] + w1 * phi.amp[j] + w2 * phi.amp[j + 1] +
                             w3 * phi.amp[j + 2]);
    }
    const double n_out = norm(out);
    if (std::abs(n_out - 1.0) > 1e-2)
        throw ResolutionLossError("scaled state is not resolved on this grid");
    for (auto& a : out.amp) a /= n_out;
    return out;
}

Wavefunction derivative(const Wavefunction& phi) {
    if (spectral::is_power_of_two(phi.grid.n_points)) return spectral::derivative_fft(phi);
    return spectral::derivative_central(phi);
}

Wavefunction tangent_tau(const Wavefunction& phi) {
    Wavefunction d = derivative(phi);
    for (auto& a : d.amp) a = -a;
    return d;
}

Wavefunction tangent_s(const Wavefunction& phi) {
    const double mu = moments(phi).mu_z;
    Wavefunction d = derivative(phi);
    Wavefunction out(phi.grid);
    for (int k = 0; k < phi.grid.n_points; ++k)
        out.amp[k] = 0.5 * phi.amp[k] + (phi.grid.node(k) - mu) * d.amp[k];
    return out;
}

double step_orthogonality(const Wavefunction& phi) {
    const Wavefunction ts = tangent_s(phi);
    const Wavefunction tt = tangent_tau(phi);
    const double ns = norm(ts), nt = norm(tt);
    if (ns < 1e-12 || nt < 1e-12) throw FrameDegeneracyError("degenerate tangent vector");
    return inner_product(ts, tt).real() / (ns * nt);
}

Wavefunction ManifoldState::realize() const { return squeeze_translate(reference, tau, std::exp(s)); }

Moments ManifoldState::predicted_moments() const {
    const Moments m = moments(reference);
    return {m.mu_z + tau, m.delta_z * std::exp(-s)};
}

} // namespace clab::hilbert
