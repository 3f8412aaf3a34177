#include "clab/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "clab/errors.hpp"

namespace clab::diffusion {

namespace {

// Thomas algorithm for a constant tridiagonal system (d, u, u).
void solve_tridiag(double diag, double off, std::vector<double>& rhs,
                   std::vector<double>& scratch) {
    const std::size_t n = rhs.size();
    scratch.resize(n);
    double beta = diag;
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = off / beta;
        beta = diag - off * scratch[i];
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

struct Stepper {
    // Interior unknowns rho[1..m-2]; rho[0] = rho[m-1] = 0 (Dirichlet).
    std::vector<double> rho;
    double r;  // D dt / dx^2
    double dx;
    double absorbed_lo = 0.0;
    double absorbed_hi = 0.0;
    std::vector<double> rhs, scratch;

    void step() {
        const std::size_t m = rho.size();
        const double first = rho[1], last = rho[m - 2];
        rhs.assign(m - 2, 0.0);
        for (std::size_t i = 1; i + 1 < m; ++i)
            rhs[i - 1] = rho[i] + 0.5 * r * (rho[i + 1] - 2.0 * rho[i] + rho[i - 1]);
        solve_tridiag(1.0 + r, -0.5 * r, rhs, scratch);
        for (std::size_t i = 1; i + 1 < m; ++i) rho[i] = rhs[i - 1];
        // Scheme-exact boundary flux: interior mass + ledger stays constant.
        absorbed_lo += 0.5 * r * dx * (first + rho[1]);
        absorbed_hi += 0.5 * r * dx * (last + rho[m - 2]);
    }

    double interior_mass() const {
        double s = 0.0;
        for (double v : rho) s += v;
        return s * dx; // interior trapezoid; ends are zero
    }
};

Stepper make_stepper(const DiffusionProblem& p, double dt) {
    Stepper st;
    st.dx = p.dx();
    st.r = p.diffusion_coefficient * dt / (st.dx * st.dx);
    st.rho.assign(static_cast<std::size_t>(p.n_nodes), 0.0);
    for (const auto& [c, w] : p.sources) {
        // Linear split of the point mass over the two neighbouring nodes; the
        // first moment (and hence the splitting probability) is preserved.
        const double x = (c - p.lo) / st.dx;
        const int j = std::clamp(static_cast<int>(std::floor(x)), 0, p.n_nodes - 2);
        const double t = x - j;
        st.rho[static_cast<std::size_t>(j)] += w * (1.0 - t) / st.dx;
        st.rho[static_cast<std::size_t>(j) + 1] += w * t / st.dx;
    }
    st.rho.front() = 0.0;
    st.rho.back() = 0.0;
    return st;
}

} // namespace

void DiffusionProblem::validate() const {
    if (diffusion_coefficient <= 0.0) throw SchemeError("diffusion coefficient must be positive");
    if (!(lo < hi)) throw SchemeError("domain: lo must be < hi");
    if (n_nodes < 8) throw SchemeError("too few nodes");
    if (t_final <= 0.0) throw SchemeError("t_final must be positive");
    if (sources.empty()) throw SchemeError("no sources");
    double wsum = 0.0;
    for (const auto& [c, w] : sources) {
        if (c <= lo || c >= hi) throw SchemeError("source on or outside the boundary");
        if (w < 0.0) throw SchemeError("negative source weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) throw SchemeError("source weights must sum to 1");
}

DiffusionResult solve(const DiffusionProblem& problem) {
    problem.validate();
    double dt = problem.dt;
    if (dt <= 0.0) dt = problem.dx() * problem.dx() / problem.diffusion_coefficient;
    const auto n_steps = static_cast<std::uint64_t>(std::ceil(problem.t_final / dt - 1e-12));
    if (n_steps == 0) throw SchemeError("t_final shorter than one time step");
    dt = problem.t_final / static_cast<double>(n_steps);

    Stepper st = make_stepper(problem, dt);
    for (std::uint64_t k = 0; k < n_steps; ++k) st.step();

    DiffusionResult res;
    res.x.resize(static_cast<std::size_t>(problem.n_nodes));
    for (int i = 0; i < problem.n_nodes; ++i) res.x[static_cast<std::size_t>(i)] = problem.lo + i * problem.dx();
    res.density = st.rho;
    double peak = 0.0, min_v = 0.0;
    for (double v : res.density) {
        peak = std::max(peak, v);
        min_v = std::min(min_v, v);
    }
    if (min_v < -1e-9 * peak)
        throw SchemeError("negative density beyond roundoff; refine dt or the grid");
    for (double& v : res.density) v = std::max(v, 0.0);
    res.interior_mass = st.interior_mass();
    if (problem.domain == Domain::AbsorbingInterval) {
        res.absorbed_lo = st.absorbed_lo;
        res.absorbed_hi = st.absorbed_hi;
        res.converged = (res.absorbed_lo + res.absorbed_hi) >= 0.999;
    } else {
        // Whole line modelled on a wide box; boundary leakage must stay tiny.
        res.absorbed_lo = st.absorbed_lo;
        res.absorbed_hi = st.absorbed_hi;
        res.converged = true;
    }
    return res;
}

SplittingResult splitting_probabilities(double diffusion_coefficient, double a, double b,
                                        double c, int n_nodes) {
    DiffusionProblem p;
    p.diffusion_coefficient = diffusion_coefficient;
    p.domain = Domain::AbsorbingInterval;
    p.lo = a;
    p.hi = b;
    p.sources = {{c, 1.0}};
    p.n_nodes = n_nodes;
    const double span = b - a;
    // Slowest mode decays as exp(-D pi^2 t / span^2); run in chunks until the
    // interior is drained.
    const double t_chunk = span * span / (diffusion_coefficient * 9.8696);
    p.dt = std::min(t_chunk / 64.0, p.dx() * p.dx() / diffusion_coefficient);

    double dt = p.dt;
    Stepper st = make_stepper(p, dt);
    const auto steps_per_chunk = static_cast<std::uint64_t>(std::ceil(t_chunk / dt));
    SplittingResult out;
    for (int chunk = 0; chunk < 64; ++chunk) {
        for (std::uint64_t k = 0; k < steps_per_chunk; ++k) st.step();
        if (st.interior_mass() < 1e-3) break;
    }
    const double absorbed = st.absorbed_lo + st.absorbed_hi;
    out.converged = absorbed >= 0.999;
    out.p_lo = st.absorbed_lo;
    out.p_hi = st.absorbed_hi;
    return out;
}

hilbert::Wavefunction interval_state(double c, double sigma, double a, double b, int n_nodes,
                                     double diffusion_coefficient) {
    if (sigma <= 0.0) throw SchemeError("interval_state: sigma must be positive");
    if (!(a < c && c < b)) throw SchemeError("interval_state: c must lie inside (a, b)");
    DiffusionProblem p;
    p.diffusion_coefficient = diffusion_coefficient;
    p.domain = Domain::AbsorbingInterval;
    p.lo = a;
    p.hi = b;
    p.n_nodes = n_nodes;
    const double dx = p.dx();
    if (sigma < 4.0 * dx) throw SchemeError("interval_state: sigma unresolved on this grid");

    // Seed with a narrow Gaussian (a regularized point source) and diffuse
    // until the free-space variance reaches sigma^2.
    const double sigma0 = std::max(4.0 * dx, sigma / 16.0);
    p.dt = dx * dx / diffusion_coefficient;
    p.t_final = (sigma * sigma - sigma0 * sigma0) / (2.0 * diffusion_coefficient);
    p.sources = {{c, 1.0}};

    double dt = p.dt;
    const auto n_steps = static_cast<std::uint64_t>(std::ceil(p.t_final / dt - 1e-12));
    dt = p.t_final / static_cast<double>(n_steps);
    Stepper st = make_stepper(p, dt);
    // Replace the split delta by the regularized Gaussian source.
    const double norm0 = 1.0 / (sigma0 * std::sqrt(2.0 * 3.14159265358979323846));
    for (int i = 0; i < p.n_nodes; ++i) {
        const double z = p.lo + i * dx;
        const double u = (z - c) / sigma0;
        st.rho[static_cast<std::size_t>(i)] = norm0 * std::exp(-0.5 * u * u);
    }
    st.rho.front() = 0.0;
    st.rho.back() = 0.0;
    for (std::uint64_t k = 0; k < n_steps; ++k) st.step();

    hilbert::Wavefunction psi(hilbert::Grid(a, b, p.n_nodes));
    for (int i = 0; i < p.n_nodes; ++i)
        psi.amp[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, st.rho[static_cast<std::size_t>(i)]));
    hilbert::normalize(psi);
    return psi;
}

double compare_histogram(const stats::Histogram& hist, const std::vector<double>& x,
                         const std::vector<double>& density) {
    if (hist.n_bins() == 0 || hist.total == 0) throw BinningMismatchError("empty histogram");
    if (x.size() != density.size() || x.size() < 2)
        throw BinningMismatchError("bad density grid");
    if (hist.lo < x.front() || hist.bin_hi(hist.n_bins() - 1) > x.back())
        throw BinningMismatchError("histogram range extends beyond the density grid");

    // Piecewise-linear density integrated over [u0, u1].
    auto integrate = [&](double u0, double u1) {
        const double dx = x[1] - x[0];
        double total = 0.0;
        auto value = [&](double u) {
            const double t = (u - x.front()) / dx;
            const int j = std::clamp(static_cast<int>(std::floor(t)),
                                     0, static_cast<int>(x.size()) - 2);
            const double w = t - j;
            return density[static_cast<std::size_t>(j)] * (1.0 - w) +
                   density[static_cast<std::size_t>(j) + 1] * w;
        };
        // Simpson on a fine fixed partition of the bin.
        const int segs = 16;
        const double h = (u1 - u0) / segs;
        total = value(u0) + value(u1);
        for (int i = 1; i < segs; ++i) total += (i % 2 ? 4.0 : 2.0) * value(u0 + i * h);
        return total * h / 3.0;
    };

    double l1 = 0.0;
    double model_inside = 0.0;
    for (int i = 0; i < hist.n_bins(); ++i) {
        const double model = integrate(hist.bin_lo(i), hist.bin_hi(i));
        model_inside += model;
        l1 += std::abs(hist.mass(i) - model);
    }
    const double sample_outside =
        static_cast<double>(hist.overflow) / static_cast<double>(hist.total);
    l1 += sample_outside + std::max(0.0, 1.0 - model_inside);
    return l1;
}

} // namespace clab::diffusion
