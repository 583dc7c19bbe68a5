#pragma once

#include "qglab/lattice.hpp"
#include "qglab/profiles.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

namespace qglab {

/// Element of the vertex space l^2(ell Z^nu) restricted to the box, with norm
/// ||u||^2 = ell^nu sum_j |u_j|^2.
class VertexFunction {
public:
    VertexFunction(GraphPtr graph, Eigen::VectorXcd values);
    static VertexFunction zeros(GraphPtr graph);

    const GraphPtr& graph() const noexcept { return graph_; }
    const Eigen::VectorXcd& values() const noexcept { return values_; }
    Eigen::VectorXcd& values() noexcept { return values_; }
    cplx operator[](std::size_t j) const { return values_[static_cast<Eigen::Index>(j)]; }

    double norm() const;

private:
    GraphPtr graph_;
    Eigen::VectorXcd values_;
};

cplx h2_inner(const VertexFunction& u, const VertexFunction& v);

/// Element of L^2 over all segments (box edges and stubs) of the truncated
/// graph, one profile per segment in LatticeGraph::segments() order.
class GraphFunction {
public:
    GraphFunction(GraphPtr graph, std::vector<EdgeProfile> profiles);
    static GraphFunction zeros(GraphPtr graph);

    const GraphPtr& graph() const noexcept { return graph_; }
    const std::vector<EdgeProfile>& profiles() const noexcept { return profiles_; }
    std::vector<EdgeProfile>& profiles() noexcept { return profiles_; }
    const EdgeProfile& operator[](std::size_t s) const { return profiles_[s]; }

    /// Value of the segment's profile at the given vertex end.
    cplx end_value(std::size_t segment, bool at_tail) const;
    /// Outward derivative at the given end (into the segment).
    cplx outward_derivative(std::size_t segment, bool at_tail) const;

private:
    GraphPtr graph_;
    std::vector<EdgeProfile> profiles_;
};

/// alpha f + beta g, profile by profile.
GraphFunction combine(cplx alpha, const GraphFunction& f, cplx beta, const GraphFunction& g);
GraphFunction operator-(const GraphFunction& f, const GraphFunction& g);
GraphFunction scale(cplx s, const GraphFunction& f);

cplx h1_inner(const GraphFunction& phi, const GraphFunction& psi);
double h1_norm(const GraphFunction& phi);
/// ||phi'|| with the same segment weight.
double derivative_norm(const GraphFunction& phi);
/// sqrt(||phi||^2 + ||phi'||^2).
double h1_sobolev_norm(const GraphFunction& phi);

struct ContinuityDefect {
    double discrepancy = 0.0;
    int vertex = kGhost; ///< worst box vertex, or the tail of the worst stub
    bool at_ghost = false;
};

/// Largest mismatch between incident values at a vertex, including the
/// requirement that stubs vanish at their ghost end.
ContinuityDefect continuity_defect(const GraphFunction& phi);

inline constexpr double kContinuityTolerance = 1e-9;

/// Linear interpolation of vertex data; stubs interpolate to 0.
GraphFunction embed_I(const VertexFunction& u);
/// Vertex trace; throws NotInH1 when continuity fails beyond tolerance.
VertexFunction trace_K(const GraphFunction& phi);
/// Adjoint of embed_I for the two weighted inner products.
VertexFunction adjoint_Istar(const GraphFunction& phi);

struct BoundCheck {
    double lhs = 0.0;
    double bound = 0.0;
    bool holds() const noexcept { return lhs <= bound; }
};

/// ||I K phi - phi|| / ||phi||_{H^1} against ell.
BoundCheck ik_defect_check(const GraphFunction& phi);
/// ||I* phi - K phi|| / ||phi||_{H^1} against ell / sqrt(5).
BoundCheck adjoint_gap_check(const GraphFunction& phi);
/// ||I I* phi - phi|| / ||phi||_{H^1}; the bound is left at ell (the ratio
/// divided by ell is the constant that is reported).
BoundCheck identification_defect(const GraphFunction& phi);

/// Text serialization for debugging and plotting.
void write_graph_function(std::ostream& os, const GraphFunction& phi);
GraphFunction read_graph_function(std::istream& is, GraphPtr graph);

} // namespace qglab
