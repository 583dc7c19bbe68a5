#pragma once

#include "qglab/discrete_operator.hpp"
#include "qglab/potentials.hpp"
#include "qglab/spectral.hpp"

#include <iosfwd>
#include <vector>

namespace qglab {

/// Uniform Dirichlet grid on [-R, R]^nu; unknowns sit at the interior points
/// -R + i h, i = 1 .. n - 1 with n = 2R/h.
struct ContinuumGrid {
    int nu = 1;
    double h = 0.0;
    double radius = 0.0;

    Eigen::Index points_per_axis() const;
    Eigen::Index point_count() const;
    std::vector<double> point(Eigen::Index index) const;
    ContinuumGrid halved() const { return {nu, 0.5 * h, radius}; }
};

/// Validates nu >= 1, h > 0 and that h divides 2R.
ContinuumGrid make_continuum_grid(int nu, double h, double radius);

/// Second-order central differences for -Delta + V.
SparseOperator assemble_continuum(const ContinuumGrid& grid, const Potential& v);

struct ReferenceEigenvalue {
    double value = 0.0;          ///< Richardson extrapolation (4 fine - coarse) / 3
    double coarse = 0.0;         ///< on h
    double fine = 0.0;           ///< on h/2
    double error_estimate = 0.0; ///< |fine - coarse| / 3
};

struct ContinuumOptions {
    double tolerance = 1e-3; ///< largest accepted error estimate
    EigenOptions eigen{};
};

/// Up to `count` reference eigenvalues (extrapolated value inside the
/// window). Throws InsufficientResolution when an error estimate exceeds
/// the tolerance.
std::vector<ReferenceEigenvalue> continuum_eigenvalues(const ContinuumGrid& grid, const Potential& v, Window window,
                                                       int count, const ContinuumOptions& opts = {});

/// "index,eigenvalue,error_estimate,coarse,fine,h" rows with header.
void write_reference_csv(std::ostream& os, const std::vector<ReferenceEigenvalue>& values, double h);

} // namespace qglab
