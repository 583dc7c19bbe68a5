#include "qglab/resolvent_compare.hpp"

#include "qglab/errors.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>

namespace qglab {
namespace {

void require_nonreal(cplx z) {
    if (z.imag() == 0.0)
        throw InvalidParameter("resolvent comparison needs a non-real z");
}

// Hat functions I e_j and sine bubbles on every segment.
class ProbeSpace {
public:
    ProbeSpace(GraphPtr g, int modes) : g_(std::move(g)), modes_(modes) {
        if (modes_ < 0)
            throw InvalidParameter("bubble mode count must be non-negative");
        const double ell = g_->ell();
        const double w = g_->segment_weight();
        const auto segs = g_->segments();
        std::vector<Eigen::Triplet<double>> trip;
        for (std::size_t s = 0; s < segs.size(); ++s) {
            std::vector<std::pair<Eigen::Index, EdgeProfile>> local;
            local.emplace_back(segs[s].tail, LinearProfile{1.0, 0.0});
            if (!segs[s].is_stub())
                local.emplace_back(segs[s].head, LinearProfile{0.0, 1.0});
            for (int m = 1; m <= modes_; ++m)
                local.emplace_back(bubble_index(s, m), SinusoidalProfile::bubble(1.0, m, ell));
            for (const auto& [i, pi] : local)
                for (const auto& [j, pj] : local)
                    trip.emplace_back(i, j, w * inner(pi, pj, ell).real());
        }
        gram_.resize(dim(), dim());
        gram_.setFromTriplets(trip.begin(), trip.end());
        ldlt_.compute(gram_);
        if (ldlt_.info() != Eigen::Success)
            throw Nonconvergence("probe-space Gram matrix is not positive definite", {});
    }

    Eigen::Index dim() const {
        return static_cast<Eigen::Index>(g_->vertex_count() + g_->segment_count() * static_cast<std::size_t>(modes_));
    }

    GraphFunction to_function(const Eigen::VectorXcd& c) const {
        const double ell = g_->ell();
        std::vector<EdgeProfile> out;
        const auto segs = g_->segments();
        out.reserve(segs.size());
        for (std::size_t s = 0; s < segs.size(); ++s) {
            const cplx a = c[segs[s].tail];
            const cplx b = segs[s].is_stub() ? cplx{} : c[segs[s].head];
            if (modes_ == 0) {
                out.emplace_back(LinearProfile{a, b});
                continue;
            }
            SinusoidalProfile p;
            p.c0 = a;
            p.c1 = b - a;
            for (int m = 1; m <= modes_; ++m)
                p.modes.push_back({std::numbers::pi * m / ell, c[bubble_index(s, m)], 0.0});
            out.emplace_back(std::move(p));
        }
        return {g_, std::move(out)};
    }

    /// Coefficients of the orthogonal projection of f onto the space.
    Eigen::VectorXcd project(const GraphFunction& f) const {
        const double ell = g_->ell();
        const double w = g_->segment_weight();
        Eigen::VectorXcd b(dim());
        b.head(static_cast<Eigen::Index>(g_->vertex_count())) = g_->vertex_weight() * adjoint_Istar(f).values();
        for (std::size_t s = 0; s < g_->segment_count(); ++s)
            for (int m = 1; m <= modes_; ++m)
                b[bubble_index(s, m)] = w * inner(SinusoidalProfile::bubble(1.0, m, ell), f[s], ell);
        Eigen::VectorXcd c(dim());
        c.real() = ldlt_.solve(Eigen::VectorXd(b.real()));
        c.imag() = ldlt_.solve(Eigen::VectorXd(b.imag()));
        return c;
    }

    double norm(const Eigen::VectorXcd& c) const {
        const Eigen::VectorXd re = c.real(), im = c.imag();
        return std::sqrt(std::max(0.0, re.dot(gram_ * re) + im.dot(gram_ * im)));
    }

private:
    Eigen::Index bubble_index(std::size_t s, int m) const {
        return static_cast<Eigen::Index>(g_->vertex_count() + s * static_cast<std::size_t>(modes_) +
                                         static_cast<std::size_t>(m - 1));
    }

    GraphPtr g_;
    int modes_;
    SparseMatrixR gram_;
    Eigen::SimplicialLDLT<SparseMatrixR> ldlt_;
};

} // namespace

NormEstimate k_form_difference(const GraphPtr& g, const Potential& v, cplx z, const PowerOptions& opts) {
    require_nonreal(z);
    const auto h2 = assemble_h2(g, v);
    const ResolventSolver r2(h2.matrix, z);
    const GraphResolvent r1(g, v, z);
    return estimate_operator_norm(
        h2.dim(), [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return r2.solve(x) - r1.sandwiched(x); },
        [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
            return r2.solve_conjugate(y) - r1.sandwiched_adjoint(y);
        },
        opts);
}

NormEstimate istar_form_difference(const GraphPtr& g, const Potential& v, cplx z, const PowerOptions& opts) {
    require_nonreal(z);
    const auto h2 = assemble_h2(g, v);
    const ResolventSolver r2(h2.matrix, z);
    const GraphResolvent r1(g, v, z);
    const GraphResolvent r1_conj(g, v, std::conj(z));
    auto sandwich = [&](const GraphResolvent& r, const Eigen::VectorXcd& x) {
        return adjoint_Istar(r.edge_profiles(r.sandwiched(x), x)).values();
    };
    return estimate_operator_norm(
        h2.dim(), [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return r2.solve(x) - sandwich(r1, x); },
        [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return r2.solve_conjugate(y) - sandwich(r1_conj, y); },
        opts);
}

NormEstimate h1_form_difference(const GraphPtr& g, const Potential& v, cplx z, int bubble_modes,
                                const PowerOptions& opts) {
    require_nonreal(z);
    const auto h2 = assemble_h2(g, v);
    const ResolventSolver r2(h2.matrix, z);
    const GraphResolvent r1(g, v, z);
    const GraphResolvent r1_conj(g, v, std::conj(z));
    const ProbeSpace space(g, bubble_modes);

    auto difference = [&](const GraphResolvent& r, const GraphFunction& f, bool conjugate) {
        const Eigen::VectorXcd istar = adjoint_Istar(f).values();
        const Eigen::VectorXcd u = conjugate ? r2.solve_conjugate(istar) : r2.solve(istar);
        return r.apply(f) - embed_I(VertexFunction(g, u));
    };
    auto step = [&](const Eigen::VectorXcd& c) {
        const GraphFunction y = difference(r1, space.to_function(c), false);
        const GraphFunction back = difference(r1_conj, y, true);
        return PowerStep{h1_norm(y), space.project(back)};
    };
    auto norm = [&](const Eigen::VectorXcd& c) { return space.norm(c); };
    return power_iteration(seeded_start(space.dim(), opts.seed), step, norm, opts);
}

double free_laplacian_resolvent_bound(int nu, double ell, cplx z) {
    if (nu < 1 || !(ell > 0.0))
        throw InvalidParameter("need nu >= 1 and ell > 0");
    const double top = 4.0 * nu / (ell * ell);
    auto f = [z](double mu) { return mu / std::abs(mu - z); };
    // mu/|mu - z| is unimodal in mu; scan then refine by golden section
    constexpr int kSamples = 4096;
    int best = kSamples;
    double best_val = f(top);
    for (int i = 0; i < kSamples; ++i) {
        const double val = f(top * i / kSamples);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    if (best == kSamples)
        return best_val;
    double lo = top * std::max(0, best - 1) / kSamples;
    double hi = top * std::min(kSamples, best + 1) / kSamples;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
        const double m1 = hi - phi * (hi - lo);
        const double m2 = lo + phi * (hi - lo);
        if (f(m1) < f(m2))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best_val, f(0.5 * (lo + hi)));
}

} // namespace qglab
