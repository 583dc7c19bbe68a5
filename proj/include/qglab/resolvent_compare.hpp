#pragma once

#include "qglab/norm_estimate.hpp"
#include "qglab/quantum_graph.hpp"

namespace qglab {

/// ||(H2 - z)^{-1} - K (nu H1 - z)^{-1} I|| on the vertex space.
NormEstimate k_form_difference(const GraphPtr& g, const Potential& v, cplx z, const PowerOptions& opts = {});

/// ||(H2 - z)^{-1} - I* (nu H1 - z)^{-1} I|| on the vertex space.
NormEstimate istar_form_difference(const GraphPtr& g, const Potential& v, cplx z, const PowerOptions& opts = {});

/// ||(nu H1 - z)^{-1} - I (H2 - z)^{-1} I*|| on graph functions, compressed
/// to the span of hat functions and the first `bubble_modes` sine bubbles on
/// every segment. A lower estimate of the full norm.
NormEstimate h1_form_difference(const GraphPtr& g, const Potential& v, cplx z, int bubble_modes = 1,
                                const PowerOptions& opts = {});

/// sup of mu / |mu - z| over the spectral interval [0, 4 nu / ell^2] of -Delta_d.
double free_laplacian_resolvent_bound(int nu, double ell, cplx z);

} // namespace qglab
