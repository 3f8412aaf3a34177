#include <doctest.h>

#include <cmath>
#include <vector>

#include "clab/diffusion.hpp"
#include "clab/errors.hpp"
#include "clab/hilbert.hpp"
#include "clab/walk.hpp"
#include "oracles.hpp"

using namespace clab;
using diffusion::DiffusionProblem;
using diffusion::Domain;

TEST_SUITE("diffusion") {

TEST_CASE("whole line: heat kernel recovered") {
    DiffusionProblem p;
    p.diffusion_coefficient = 1.0;
    p.domain = Domain::WholeLine;
    p.lo = -40.0;
    p.hi = 40.0;
    p.n_nodes = 2001;
    p.sources = {{0.0, 1.0}};
    p.t_final = 2.0;
    const auto res = diffusion::solve(p);

    CHECK(std::abs(res.interior_mass - 1.0) < 1e-8);
    for (double v : res.density) CHECK(v >= 0.0);

    double mu = 0.0, var = 0.0;
    const double dx = res.x[1] - res.x[0];
    for (std::size_t i = 0; i < res.x.size(); ++i) mu += res.x[i] * res.density[i] * dx;
    for (std::size_t i = 0; i < res.x.size(); ++i)
        var += (res.x[i] - mu) * (res.x[i] - mu) * res.density[i] * dx;
    CHECK(std::abs(mu) < 1e-10);
    CHECK(std::abs(var / (2.0 * p.diffusion_coefficient * p.t_final) - 1.0) < 1e-3);

    // Pointwise agreement with the kernel away from the source transient.
    double max_dev = 0.0;
    for (std::size_t i = 0; i < res.x.size(); ++i)
        max_dev = std::max(max_dev,
                           std::abs(res.density[i] - oracle::heat_kernel(res.x[i], 0.0, 1.0, 2.0)));
    CHECK(max_dev < 2e-4);
}

TEST_CASE("linearity in the sources") {
    DiffusionProblem base;
    base.diffusion_coefficient = 0.5;
    base.domain = Domain::AbsorbingInterval;
    base.lo = -10.0;
    base.hi = 10.0;
    base.n_nodes = 401;
    base.t_final = 3.0;

    DiffusionProblem pa = base, pb = base, pw = base;
    pa.sources = {{-4.0, 1.0}};
    pb.sources = {{3.0, 1.0}};
    pw.sources = {{-4.0, 0.3}, {3.0, 0.7}};
    const auto ra = diffusion::solve(pa);
    const auto rb = diffusion::solve(pb);
    const auto rw = diffusion::solve(pw);
    for (std::size_t i = 0; i < rw.density.size(); ++i)
        CHECK(std::abs(rw.density[i] - (0.3 * ra.density[i] + 0.7 * rb.density[i])) < 1e-10);
}

TEST_CASE("absorbing interval: ledger closes and splits correctly") {
    DiffusionProblem p;
    p.diffusion_coefficient = 0.5;
    p.domain = Domain::AbsorbingInterval;
    p.lo = -10.0;
    p.hi = 10.0;
    p.n_nodes = 401;
    p.sources = {{0.0, 1.0}};
    p.t_final = 5.0;
    const auto res = diffusion::solve(p);
    CHECK(std::abs(res.mass_total() - 1.0) < 1e-8);
    CHECK(res.converged == false); // t = 5 leaves most mass in the interior

    // Midpoint source: symmetric split in the long-time limit.
    const auto sym = diffusion::splitting_probabilities(0.5, -10.0, 10.0, 0.0);
    CHECK(sym.converged);
    CHECK(std::abs(sym.p_lo - 0.5) < 1e-3);
    CHECK(std::abs(sym.p_hi - 0.5) < 1e-3);
}

TEST_CASE("splitting probabilities match the gambler's ruin") {
    const auto res = diffusion::splitting_probabilities(0.5, -10.0, 10.0, 5.0);
    CHECK(res.converged);
    CHECK(std::abs(res.p_lo - 0.25) < 1e-3);
    CHECK(std::abs(res.p_hi - 0.75) < 1e-3);

    const auto edge = diffusion::splitting_probabilities(0.5, -10.0, 10.0, -9.5);
    CHECK(edge.p_lo > 0.97);
    CHECK(edge.p_hi < 0.03);

    for (double c : {-6.0, -2.0, 1.0, 5.0, 8.0}) {
        const auto r = diffusion::splitting_probabilities(0.5, -10.0, 10.0, c);
        const double expect = walk::gambler_ruin_probability(c, -10.0, 10.0);
        CHECK(r.converged);
        CHECK(std::abs(r.p_hi - expect) < 1e-3);
        CHECK(std::abs(r.p_lo - (1.0 - expect)) < 1e-3);
    }
}

TEST_CASE("problem validation") {
    DiffusionProblem p;
    p.sources = {{-10.0, 1.0}};
    CHECK_THROWS_AS(diffusion::solve(p), SchemeError); // source on the boundary
    p.sources = {{0.0, 0.5}};
    CHECK_THROWS_AS(diffusion::solve(p), SchemeError); // weights do not sum to 1
    p.sources = {{0.0, 1.0}};
    p.diffusion_coefficient = -1.0;
    CHECK_THROWS_AS(diffusion::solve(p), SchemeError);
}

TEST_CASE("interval state: gaussian in the interior, squeezed at the wall") {
    const auto r_mid = diffusion::interval_state(0.0, 0.5, -10.0, 10.0);
    CHECK(std::abs(hilbert::norm(r_mid) - 1.0) < 1e-10);
    const auto g = hilbert::make_gaussian({0.0, 0.5, 0.0}, r_mid.grid);
    double dist2 = 0.0;
    for (int k = 0; k < r_mid.grid.n_points; ++k) {
        const double w = (k == 0 || k == r_mid.grid.n_points - 1) ? 0.5 : 1.0;
        dist2 += std::norm(r_mid.amp[k] - g.amp[k]) * w * r_mid.grid.dz();
    }
    CHECK(std::sqrt(dist2) < 1e-3);

    // Near the absorbing end the profile vanishes at the wall and its mean is
    // pushed inward.
    const auto r_wall = diffusion::interval_state(-9.2, 0.5, -10.0, 10.0);
    CHECK(std::abs(r_wall.amp.front()) == 0.0);
    const auto m = hilbert::moments(r_wall);
    CHECK(m.mu_z > -9.2);
    CHECK(m.delta_z < 0.5 * 1.05);

    // Interior points are translates of a common profile.
    const auto r1 = diffusion::interval_state(-2.0, 0.5, -10.0, 10.0);
    const auto r2 = diffusion::interval_state(1.0, 0.5, -10.0, 10.0);
    const auto shifted = hilbert::squeeze_translate(r1, 3.0, 1.0);
    double d2 = 0.0;
    for (int k = 0; k < r1.grid.n_points; ++k) {
        const double w = (k == 0 || k == r1.grid.n_points - 1) ? 0.5 : 1.0;
        d2 += std::norm(shifted.amp[k] - r2.amp[k]) * w * r1.grid.dz();
    }
    CHECK(std::sqrt(d2) < 1e-3);
}

TEST_CASE("histogram vs density comparisons") {
    // Piecewise-constant density with exactly matching counts: L1 vanishes.
    stats::Histogram flat(0.0, 0.25, 4);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 100; ++k) flat.add(0.125 + 0.25 * i);
    std::vector<double> x, rho;
    for (int i = 0; i <= 200; ++i) {
        x.push_back(-0.5 + i * 0.01);
        rho.push_back(x.back() >= 0.0 && x.back() <= 1.0 ? 1.0 : 0.0);
    }
    // Interior bins see an exactly constant unit density.
    CHECK(diffusion::compare_histogram(flat, x, rho) < 1e-9);

    stats::Histogram empty(0.0, 0.25, 4);
    CHECK_THROWS_AS(diffusion::compare_histogram(empty, x, rho), BinningMismatchError);
    stats::Histogram outside(-5.0, 10.0, 4);
    outside.add(0.5);
    CHECK_THROWS_AS(diffusion::compare_histogram(outside, x, rho), BinningMismatchError);
}

TEST_CASE("walk histogram against the solved diffusion density") {
    walk::WalkConfig cfg;
    cfg.a = -1.0;
    cfg.b = 1.0;
    cfg.alpha_sq = 0.5;
    cfg.beta_sq = 0.5;
    cfg.delta_detect = 0.5;
    cfg.seed = 14;
    const std::uint64_t n_steps = 100;
    const auto hist = walk::tau_marginal_histogram(cfg, 100000, n_steps, -41.0, 2.0, 41);

    DiffusionProblem p;
    p.domain = Domain::WholeLine;
    p.lo = -60.0;
    p.hi = 60.0;
    p.n_nodes = 2001;
    p.sources = {{0.0, 1.0}};
    p.t_final = static_cast<double>(n_steps);

    // Matched: D = var(xi) / 2 per unit step.
    p.diffusion_coefficient = 0.5;
    const auto matched = diffusion::solve(p);
    CHECK(diffusion::compare_histogram(hist, matched.x, matched.density) < 0.05);

    // Deliberate mismatch (x4) as the negative control.
    p.diffusion_coefficient = 2.0;
    const auto mismatched = diffusion::solve(p);
    CHECK(diffusion::compare_histogram(hist, mismatched.x, mismatched.density) > 0.2);
}

} // TEST_SUITE
