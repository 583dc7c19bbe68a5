#include "qglab/lattice.hpp"

#include "qglab/errors.hpp"

#include <cmath>
#include <string>

namespace qglab {

namespace {

// Grid points are kept iff |j|_inf <= R + kSnap.
constexpr double kSnap = 1e-12;

} // namespace

LatticeGraph::LatticeGraph(int nu, double ell, double radius)
    : nu_(nu), ell_(ell), radius_(radius) {
    if (nu < 1)
        throw InvalidParameter("lattice dimension must be >= 1, got " + std::to_string(nu));
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw InvalidParameter("lattice spacing must be positive, got " + std::to_string(ell));
    if (!(radius >= ell - kSnap) || !std::isfinite(radius))
        throw InvalidParameter("truncation radius must be >= spacing, got R=" + std::to_string(radius) +
                               " ell=" + std::to_string(ell));

    half_width_ = static_cast<int>(std::floor((radius + kSnap) / ell));
    const int side = 2 * half_width_ + 1;
    vertex_count_ = 1;
    for (int d = 0; d < nu; ++d)
        vertex_count_ *= static_cast<std::size_t>(side);

    coords_.resize(vertex_count_ * static_cast<std::size_t>(nu));
    for (std::size_t v = 0; v < vertex_count_; ++v) {
        std::size_t rest = v;
        for (int d = nu - 1; d >= 0; --d) {
            coords_[v * nu + d] = static_cast<int>(rest % side) - half_width_;
            rest /= side;
        }
    }

    // Box edges first (vertex-major, then axis), then the stubs.
    std::vector<int> c(nu);
    for (std::size_t v = 0; v < vertex_count_; ++v) {
        for (int d = 0; d < nu; ++d) {
            if (coords_[v * nu + d] < half_width_) {
                std::copy_n(&coords_[v * nu], nu, c.begin());
                c[d] += 1;
                segments_.push_back({static_cast<int>(v), index_of(c), d, +1});
            }
        }
    }
    edge_count_ = segments_.size();
    for (std::size_t v = 0; v < vertex_count_; ++v) {
        for (int d = 0; d < nu; ++d) {
            const int cd = coords_[v * nu + d];
            if (cd == -half_width_)
                segments_.push_back({static_cast<int>(v), kGhost, d, -1});
            if (cd == half_width_)
                segments_.push_back({static_cast<int>(v), kGhost, d, +1});
        }
    }

    std::vector<std::size_t> nbr_count(vertex_count_, 0), inc_count(vertex_count_, 0);
    for (const auto& s : segments_) {
        ++inc_count[s.tail];
        if (!s.is_stub()) {
            ++inc_count[s.head];
            ++nbr_count[s.tail];
            ++nbr_count[s.head];
        }
    }
    nbr_offset_.assign(vertex_count_ + 1, 0);
    inc_offset_.assign(vertex_count_ + 1, 0);
    for (std::size_t v = 0; v < vertex_count_; ++v) {
        nbr_offset_[v + 1] = nbr_offset_[v] + nbr_count[v];
        inc_offset_[v + 1] = inc_offset_[v] + inc_count[v];
    }
    nbr_.resize(nbr_offset_.back());
    inc_.resize(inc_offset_.back());
    std::vector<std::size_t> nbr_fill(nbr_offset_.begin(), nbr_offset_.end() - 1);
    std::vector<std::size_t> inc_fill(inc_offset_.begin(), inc_offset_.end() - 1);
    for (std::size_t s = 0; s < segments_.size(); ++s) {
        const auto& seg = segments_[s];
        inc_[inc_fill[seg.tail]++] = {static_cast<int>(s), true};
        if (!seg.is_stub()) {
            inc_[inc_fill[seg.head]++] = {static_cast<int>(s), false};
            nbr_[nbr_fill[seg.tail]++] = seg.head;
            nbr_[nbr_fill[seg.head]++] = seg.tail;
        }
    }
}

std::span<const int> LatticeGraph::coords(std::size_t v) const {
    return {coords_.data() + v * nu_, static_cast<std::size_t>(nu_)};
}

std::vector<double> LatticeGraph::point(std::size_t v) const {
    std::vector<double> x(nu_);
    for (int d = 0; d < nu_; ++d)
        x[d] = ell_ * coords_[v * nu_ + d];
    return x;
}

int LatticeGraph::index_of(std::span<const int> c) const {
    const int side = 2 * half_width_ + 1;
    std::size_t idx = 0;
    for (int d = 0; d < nu_; ++d) {
        if (c[d] < -half_width_ || c[d] > half_width_)
            return kGhost;
        idx = idx * side + static_cast<std::size_t>(c[d] + half_width_);
    }
    return static_cast<int>(idx);
}

std::span<const int> LatticeGraph::neighbors(std::size_t v) const {
    return {nbr_.data() + nbr_offset_[v], nbr_offset_[v + 1] - nbr_offset_[v]};
}

std::span<const Incidence> LatticeGraph::incident(std::size_t v) const {
    return {inc_.data() + inc_offset_[v], inc_offset_[v + 1] - inc_offset_[v]};
}

double LatticeGraph::segment_length(std::size_t s) const {
    const auto& seg = segments_[s];
    const auto a = point(seg.tail);
    std::vector<double> b = a;
    if (seg.is_stub())
        b[seg.axis] += seg.direction * ell_;
    else
        b = point(seg.head);
    double sq = 0.0;
    for (int d = 0; d < nu_; ++d)
        sq += (b[d] - a[d]) * (b[d] - a[d]);
    return std::sqrt(sq);
}

bool LatticeGraph::compatible(const LatticeGraph& other) const noexcept {
    return nu_ == other.nu_ && ell_ == other.ell_ && half_width_ == other.half_width_;
}

double LatticeGraph::vertex_weight() const noexcept { return std::pow(ell_, nu_); }

double LatticeGraph::segment_weight() const noexcept { return std::pow(ell_, nu_ - 1) / nu_; }

GraphPtr build_lattice(int nu, double ell, double radius) {
    return std::make_shared<const LatticeGraph>(nu, ell, radius);
}

std::vector<bool> interior_mask(const LatticeGraph& g) {
    std::vector<bool> mask(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        mask[v] = g.degree(v) == static_cast<std::size_t>(2 * g.nu());
    return mask;
}

} // namespace qglab
