#pragma once

#include "clab/hilbert.hpp"

namespace clab::detector {

// A detecting segment D of the z-axis split into cells of size cell_size; a
// particle state is registered through the normalized cell indicators eta_k.
struct DetectorConfig {
    double center = 0.0;
    double length = 1.0;
    double cell_size = 0.1;
    double epsilon = 1e-4;

    int n_cells() const;
    double lo() const { return center - 0.5 * length; }
    double hi() const { return center + 0.5 * length; }
    void validate() const;
};

// Sum_k |<phi, eta_k>|^2 in [0, 1].
double detection_probability(const hilbert::Wavefunction& phi, const DetectorConfig& det);

// States detected like the reference Gaussian: detection probability within
// epsilon of the reference's.
struct PhysicalEigenstateClass {
    DetectorConfig det;
    hilbert::GaussianParams reference;
    double reference_probability = 1.0; // P_b of the reference state
    double r_sigma = 5.0;               // containment parameter for D_r
};

PhysicalEigenstateClass make_class(const DetectorConfig& det,
                                   const hilbert::GaussianParams& reference,
                                   const hilbert::Grid& grid, double r_sigma = 5.0);

bool is_physical_eigenstate(const hilbert::Wavefunction& phi,
                            const PhysicalEigenstateClass& cls);

// Fubini-Study distance from phi to the class, approximated by maximizing the
// overlap over translates/squeezes of the reference profile whose r-sigma
// interval stays inside D. Exact (arccos |beta|) for two-Gaussian
// superpositions with one component in the class.
double class_distance(const hilbert::Wavefunction& phi, const PhysicalEigenstateClass& cls);

} // namespace clab::detector
