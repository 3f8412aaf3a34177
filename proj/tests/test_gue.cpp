#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "clab/gue.hpp"
#include "clab/hilbert.hpp"
#include "clab/stats.hpp"

using namespace clab;

TEST_SUITE("gue") {

TEST_CASE("dim=1 reduces to a real normal with variance 2 d^2") {
    gue::GueParams p{1, 0.7, 0};
    Rng rng(42);
    std::vector<double> draws;
    draws.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
        const auto h = gue::sample_gue(p, rng);
        CHECK(h(0, 0).imag() == 0.0);
        draws.push_back(h(0, 0).real());
    }
    const double v = stats::variance(draws);
    CHECK(std::abs(v / (2.0 * 0.7 * 0.7) - 1.0) < 0.05);
}

TEST_CASE("hermiticity is exact by construction") {
    gue::GueParams p{16, 1.0, 0};
    Rng rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        const auto h = gue::sample_gue(p, rng);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("entry variances: diagonal twice the off-diagonal parts") {
    gue::GueParams p{32, 1.0, 0};
    Rng rng(5);
    std::vector<double> diag, offr, offi;
    for (int d = 0; d < 2000; ++d) {
        const auto h = gue::sample_gue(p, rng);
        for (int i = 0; i < p.dim; ++i) {
            diag.push_back(h(i, i).real());
            for (int j = i + 1; j < p.dim; ++j) {
                offr.push_back(h(i, j).real());
                offi.push_back(h(i, j).imag());
            }
        }
    }
    CHECK(std::abs(stats::variance(diag) / stats::variance(offr) - 2.0) < 0.1);
    CHECK(std::abs(stats::variance(offr) / stats::variance(offi) - 1.0) < 0.05);
}

TEST_CASE("unfolded spacings follow the wigner surmise") {
    gue::GueParams p{64, 1.0, 0};
    Rng rng(9);
    const auto spacings = gue::bulk_unfolded_spacings(p, 1000, rng);
    REQUIRE(spacings.size() > 10000);
    const double ks = stats::ks_statistic(spacings, gue::wigner_surmise_cdf);
    CHECK(ks < 0.05);
    // Unfolding leaves a unit mean spacing.
    CHECK(std::abs(stats::mean(spacings) - 1.0) < 0.05);
}

TEST_CASE("evolution basics") {
    gue::StateVector v(3);
    v << std::complex<double>(0.6, 0.0), std::complex<double>(0.0, 0.8),
        std::complex<double>(0.0, 0.0);

    const gue::HermitianMatrix zero = gue::HermitianMatrix::Zero(3, 3);
    const auto same = gue::evolve_step(v, zero, 0.5);
    CHECK((same - v).norm() < 1e-14);

    gue::HermitianMatrix diag = gue::HermitianMatrix::Zero(3, 3);
    diag(0, 0) = 1.0;
    diag(1, 1) = -2.0;
    diag(2, 2) = 0.25;
    const auto rotated = gue::evolve_step(v, diag, 0.3);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(std::abs(rotated(k)) - std::abs(v(k))) < 1e-14);
    CHECK(std::abs(rotated(0) / v(0) - std::polar(1.0, -0.3)) < 1e-14);

    gue::GueParams p{3, 1.0, 0};
    Rng rng(17);
    const auto h = gue::sample_gue(p, rng);
    CHECK(std::abs(gue::evolve_step(v, h, 0.7).norm() - 1.0) < 1e-12);

    gue::StateVector wrong(4);
    wrong.setZero();
    wrong(0) = 1.0;
    CHECK_THROWS_AS(gue::evolve_step(wrong, h, 0.1), DimensionMismatchError);
}

TEST_CASE("norm drift stays below 1e-9 over 1000 steps") {
    gue::GueParams p{8, 1.0, 0};
    Rng rng(21);
    gue::StateVector v = gue::StateVector::Zero(8);
    v(0) = 1.0;
    const auto traj = gue::rm_walk(v, 1000, gue::dt_for_rms_step(p), p, rng);
    CHECK(std::abs(traj.back().norm() - 1.0) < 1e-9);
}

TEST_CASE("rm_walk basics and determinism") {
    gue::GueParams p{4, 1.0, 0};
    gue::StateVector v = gue::StateVector::Zero(4);
    v(0) = 1.0;

    Rng rng0(1);
    const auto none = gue::rm_walk(v, 0, 0.1, p, rng0);
    CHECK(none.size() == 1);
    CHECK((none[0] - v).norm() == 0.0);

    Rng ra(77), rb(77);
    const auto ta = gue::rm_walk(v, 50, 0.05, p, ra);
    const auto tb = gue::rm_walk(v, 50, 0.05, p, rb);
    REQUIRE(ta.size() == tb.size());
    for (std::size_t i = 0; i < ta.size(); ++i)
        for (int k = 0; k < 4; ++k) {
            CHECK(ta[i](k).real() == tb[i](k).real());
            CHECK(ta[i](k).imag() == tb[i](k).imag());
        }
}

TEST_CASE("step distribution is homogeneous across initial states") {
    gue::GueParams p{2, 1.0, 0};
    const double dt = gue::dt_for_rms_step(p);
    Rng seed_rng(31);
    std::vector<double> mean_sq;
    for (int s = 0; s < 10; ++s) {
        // Random initial state on the sphere.
        gue::StateVector v(2);
        v << std::complex<double>(seed_rng.gauss(), seed_rng.gauss()),
            std::complex<double>(seed_rng.gauss(), seed_rng.gauss());
        v.normalize();
        Rng rng(1000 + s);
        double acc = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            const auto h = gue::sample_gue(p, rng);
            const auto w = gue::evolve_step(v, h, dt);
            const double rho = std::acos(std::min(1.0, std::abs(w.dot(v))));
            acc += rho * rho;
        }
        mean_sq.push_back(acc / n);
    }
    const double grand = stats::mean(mean_sq);
    for (double m : mean_sq) CHECK(std::abs(m / grand - 1.0) < 0.05);
}

TEST_CASE("spectra are invariant under a fixed unitary conjugation") {
    const int dim = 16;
    gue::GueParams p{dim, 1.0, 0};

    // Fixed unitary from the QR of a complex Gaussian matrix.
    Rng urng(13);
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = std::complex<double>(urng.gauss(), urng.gauss());
    const Eigen::MatrixXcd u = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();

    const int draws = 1000;
    std::vector<std::vector<double>> conj_m(4), fresh_m(4);
    Rng r1(101), r2(202);
    for (int d = 0; d < draws; ++d) {
        const auto hc = u.adjoint() * gue::sample_gue(p, r1) * u;
        const auto hf = gue::sample_gue(p, r2);
        const auto ec = gue::eigenvalues(hc);
        const auto ef = gue::eigenvalues(hf);
        for (int k = 1; k <= 4; ++k) {
            double mc = 0.0, mf = 0.0;
            for (int i = 0; i < dim; ++i) {
                mc += std::pow(ec(i), k);
                mf += std::pow(ef(i), k);
            }
            conj_m[k - 1].push_back(mc / dim);
            fresh_m[k - 1].push_back(mf / dim);
        }
    }
    for (int k = 0; k < 4; ++k) {
        const double se = std::sqrt(stats::variance(conj_m[k]) / draws +
                                    stats::variance(fresh_m[k]) / draws);
        CHECK(std::abs(stats::mean(conj_m[k]) - stats::mean(fresh_m[k])) < 3.0 * se);
    }
}

TEST_CASE("manifold frame is orthonormal and projections match the grid") {
    const hilbert::Grid grid(-16.0, 16.0, 4096);
    const auto ga = hilbert::make_gaussian({-8.0, 0.5, 0.0}, grid);
    const auto gb = hilbert::make_gaussian({8.0, 0.5, 0.0}, grid);
    const auto phi = hilbert::superpose({0.5, 0.0}, ga, {std::sqrt(0.75), 0.0}, gb);

    Rng rng(55);
    const auto frame = gue::build_manifold_frame(phi, 12, rng);
    REQUIRE(static_cast<int>(frame.vectors.size()) == 12);
    for (std::size_t i = 0; i < frame.vectors.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const auto g = hilbert::inner_product(frame.vectors[i], frame.vectors[j]);
            CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-9);
        }

    // The coefficient-space shortcut equals the grid projection.
    gue::GueParams p{12, 1.0, 0};
    const double dt = 0.01;
    Rng krng(66);
    for (int rep = 0; rep < 3; ++rep) {
        const auto k = gue::sample_gue(p, krng);
        hilbert::Wavefunction dphi(grid);
        for (int j = 0; j < 12; ++j) {
            const auto coeff = std::complex<double>(0.0, -dt) * k(j, 0);
            for (int n = 0; n < grid.n_points; ++n)
                dphi.amp[n] += coeff * frame.vectors[j].amp[n];
        }
        const double dtau_grid =
            hilbert::inner_product(frame.vectors[frame.tau_index], dphi).real();
        const double ds_grid = hilbert::inner_product(frame.vectors[frame.s_index], dphi).real();
        CHECK(std::abs(dtau_grid - dt * std::imag(k(frame.tau_index, 0))) < 1e-10);
        CHECK(std::abs(ds_grid - dt * std::imag(k(frame.s_index, 0))) < 1e-10);
    }
}

TEST_CASE("induced (dtau, ds) components: independent, isotropic, normal") {
    const hilbert::Grid grid(-16.0, 16.0, 4096);
    const auto ga = hilbert::make_gaussian({-8.0, 0.5, 0.0}, grid);
    const auto gb = hilbert::make_gaussian({8.0, 0.5, 0.0}, grid);
    const auto phi = hilbert::superpose({0.5, 0.0}, ga, {std::sqrt(0.75), 0.0}, gb);

    Rng rng(77);
    const auto frame = gue::build_manifold_frame(phi, 32, rng);
    gue::GueParams p{32, 1.0, 0};
    const auto steps = gue::induced_manifold_steps(frame, p, gue::dt_for_rms_step(p), 10000, rng);
    std::vector<double> dtau, ds;
    for (const auto& s : steps) {
        dtau.push_back(s[0]);
        ds.push_back(s[1]);
    }
    CHECK(std::abs(stats::correlation(dtau, ds)) < 0.05);
    CHECK(std::abs(stats::variance(dtau) / stats::variance(ds) - 1.0) < 0.1);
    CHECK(stats::anderson_darling_normal(dtau) < stats::kAndersonDarling1pc);
    CHECK(stats::anderson_darling_normal(ds) < stats::kAndersonDarling1pc);
}

} // TEST_SUITE
