#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace qglab {

/// Marker used as the head of a boundary stub (the removed exterior vertex).
inline constexpr int kGhost = -1;

/// One segment of the metric graph, parameterized by x in [0, ell] from
/// `tail` (x = 0) to `head` (x = ell).
///
/// Box edges run from the lexicographically smaller endpoint. Boundary stubs
/// run from the box vertex outward to a ghost vertex, where every function of
/// the truncated graph vanishes.
struct Segment {
    int tail = 0;
    int head = kGhost;
    int axis = 0;
    int direction = +1; ///< +1 if head = tail + ell e_axis, -1 otherwise

    bool is_stub() const noexcept { return head == kGhost; }
};

/// Which end of a segment a vertex sits on.
struct Incidence {
    int segment = 0;
    bool at_tail = true;
};

/// Truncated square lattice of spacing ell in the box [-R, R]^nu.
///
/// Vertices are the points j = ell * c with integer c and |c|_inf <= m,
/// listed in lexicographic order of c. Every vertex carries 2 nu incident
/// segments: box edges to its in-box neighbours and stubs towards the
/// removed exterior ones (Dirichlet truncation).
class LatticeGraph {
public:
    LatticeGraph(int nu, double ell, double radius);

    int nu() const noexcept { return nu_; }
    double ell() const noexcept { return ell_; }
    double radius() const noexcept { return radius_; }
    /// m: integer coordinates range over [-m, m].
    int half_width() const noexcept { return half_width_; }

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::size_t stub_count() const noexcept { return segments_.size() - edge_count_; }
    std::size_t segment_count() const noexcept { return segments_.size(); }

    std::span<const int> coords(std::size_t v) const;
    std::vector<double> point(std::size_t v) const;
    /// Vertex index for integer coordinates, or kGhost if outside the box.
    int index_of(std::span<const int> c) const;

    std::span<const Segment> segments() const noexcept { return segments_; }
    std::span<const Segment> edges() const noexcept { return {segments_.data(), edge_count_}; }
    std::span<const Segment> stubs() const noexcept {
        return {segments_.data() + edge_count_, segments_.size() - edge_count_};
    }

    std::span<const int> neighbors(std::size_t v) const;
    std::span<const Incidence> incident(std::size_t v) const;
    std::size_t degree(std::size_t v) const { return neighbors(v).size(); }

    /// Euclidean length of a segment, computed from the coordinates.
    double segment_length(std::size_t s) const;

    /// Same lattice parameters (nu, ell, m); functions on one are valid on the other.
    bool compatible(const LatticeGraph& other) const noexcept;

    /// ell^nu, the per-vertex weight of the vertex space norm.
    double vertex_weight() const noexcept;
    /// ell^(nu-1)/nu, the per-segment weight of the graph space norm.
    double segment_weight() const noexcept;

private:
    int nu_;
    double ell_;
    double radius_;
    int half_width_;
    std::size_t vertex_count_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<int> coords_;
    std::vector<Segment> segments_;
    std::vector<std::size_t> nbr_offset_;
    std::vector<int> nbr_;
    std::vector<std::size_t> inc_offset_;
    std::vector<Incidence> inc_;
};

using GraphPtr = std::shared_ptr<const LatticeGraph>;

GraphPtr build_lattice(int nu, double ell, double radius);

/// True exactly for vertices with the full 2 nu in-box neighbours.
std::vector<bool> interior_mask(const LatticeGraph& g);

} // namespace qglab
