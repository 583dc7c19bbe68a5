#include "qglab/quantum_graph.hpp"

#include "qglab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qglab {
namespace {

cplx outward_from_profile(const EdgeProfile& p, double ell, bool at_tail) {
    return at_tail ? derivative(p, 0.0, ell) : -derivative(p, ell, ell);
}

void add_mode(SinusoidalProfile& p, const TrigMode& m) {
    for (auto& existing : p.modes)
        if (existing.wavenumber == m.wavenumber && existing.subtracted == m.subtracted) {
            existing.sin_coef += m.sin_coef;
            existing.cos_coef += m.cos_coef;
            return;
        }
    p.modes.push_back(m);
}

void normalize_sign(Eigen::VectorXd& x) {
    const double scale = x.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > 1e-12 * scale) {
            if (x[i] < 0.0)
                x = -x;
            return;
        }
}

} // namespace

ResolventParams make_resolvent_params(cplx z, double ell, int nu) {
    if (nu < 1 || !(ell > 0.0))
        throw InvalidParameter("resolvent parameters need nu >= 1 and ell > 0");
    ResolventParams p;
    p.z = z;
    p.k = std::sqrt(z);
    p.k_prime = p.k / std::sqrt(static_cast<double>(nu));
    p.ell = ell;
    p.nu = nu;
    const cplx w = p.w();
    if (std::abs(std::sin(w)) <= 1e-12 * std::max(1.0, std::abs(w)))
        throw EdgeSingular("sin(k' ell) vanishes at z = (" + std::to_string(z.real()) + ", " +
                           std::to_string(z.imag()) + "): Dirichlet edge resonance");
    return p;
}

SinusoidalProfile edge_resolvent_solution(cplx psi_j, cplx psi_n, cplx phi_j, cplx phi_n, const ResolventParams& p) {
    if (psi_j == 0.0 && psi_n == 0.0 && phi_j == 0.0 && phi_n == 0.0)
        return {};
    return SinusoidalProfile::from_resolvent(psi_j, psi_n, phi_j, phi_n, p.k_prime, p.ell, p.nu);
}

cplx edge_derivative_at_origin(cplx psi_j, cplx psi_n, cplx phi_j, cplx phi_n, const ResolventParams& p) {
    const cplx w = p.w();
    const cplx s = std::sin(w);
    if (std::abs(s) <= 1e-12 * std::max(1.0, std::abs(w)))
        throw EdgeSingular("sin(k' ell) vanishes: Dirichlet edge resonance");
    const double ell = p.ell;
    const double nu = p.nu;
    const cplx c = cosc(w);
    const cplx num = (psi_n - psi_j) / ell + 0.5 * p.k_prime * p.k_prime * ell * c * psi_j -
                     ell * sinm(w) * (phi_n - phi_j) / nu + 0.5 * ell * c * phi_j / nu;
    return num / sinc(w);
}

CorrectionOperators assemble_corrections(const GraphPtr& g, const Potential& v, const ResolventParams& p) {
    const cplx w = p.w();
    const cplx s1 = sinc_minus_one(w);
    const cplx c1 = cosc_minus_one(w);
    const cplx sm = sinm(w);
    const Eigen::VectorXd vj = sample_on_vertices(v, *g);
    const auto n = static_cast<Eigen::Index>(g->vertex_count());
    const double two_nu = 2.0 * g->nu();

    std::vector<Eigen::Triplet<cplx>> t1, t2;
    t1.reserve(static_cast<std::size_t>(n));
    t2.reserve(static_cast<std::size_t>(n) * (2 * g->nu() + 1));
    const cplx diff_coef = -sm / static_cast<double>(p.nu);
    for (Eigen::Index j = 0; j < n; ++j) {
        t1.emplace_back(j, j, s1 * vj[j] - p.z * c1);
        // ghost neighbours contribute phi_n = 0 but still count in -2 nu phi_j
        t2.emplace_back(j, j, -two_nu * diff_coef + c1);
        for (int nb : g->neighbors(static_cast<std::size_t>(j)))
            t2.emplace_back(j, nb, diff_coef);
    }
    SparseMatrixC m1(n, n), m2(n, n);
    m1.setFromTriplets(t1.begin(), t1.end());
    m2.setFromTriplets(t2.begin(), t2.end());
    return {{g, std::move(m1), "M1"}, {g, std::move(m2), "M2"}, p};
}

GraphResolvent::GraphResolvent(GraphPtr g, const Potential& v, cplx z)
    : graph_(std::move(g)), vj_(sample_on_vertices(v, *graph_)),
      corr_(assemble_corrections(graph_, v, make_resolvent_params(z, graph_->ell(), graph_->nu()))),
      lu_(std::make_shared<Eigen::SparseLU<SparseMatrixC>>()) {
    const auto h2 = assemble_h2(graph_, v);
    SparseMatrixC id(h2.dim(), h2.dim());
    id.setIdentity();
    system_ = h2.matrix - z * id + corr_.m1.matrix;
    system_.makeCompressed();
    lu_->compute(system_);
    if (lu_->info() != Eigen::Success)
        throw ResolventSingular("H2 - z + M1 is singular; try a smaller ell or a different z");
}

Eigen::VectorXcd GraphResolvent::solve(const Eigen::VectorXcd& rhs) const {
    Eigen::VectorXcd x = lu_->solve(rhs);
    const double rn = rhs.norm();
    if (rn == 0.0)
        return x;
    double res = (system_ * x - rhs).norm();
    if (res > kResidualTolerance * rn) {
        x += lu_->solve(rhs - system_ * x);
        res = (system_ * x - rhs).norm();
    }
    if (!(res <= kResidualTolerance * rn))
        throw ResolventSingular("H2 - z + M1 solve residual " + std::to_string(res / rn) +
                                " exceeds 1e-10; try a smaller ell or a different z");
    return x;
}

Eigen::VectorXcd GraphResolvent::sandwiched(const Eigen::VectorXcd& phi) const {
    return solve(phi + corr_.m2.matrix * phi);
}

Eigen::VectorXcd GraphResolvent::sandwiched_adjoint(const Eigen::VectorXcd& y) const {
    // the system matrix and M2 are complex symmetric
    const Eigen::VectorXcd u = solve(y.conjugate());
    return (u + corr_.m2.matrix * u).conjugate();
}

GraphFunction GraphResolvent::edge_profiles(const Eigen::VectorXcd& w, const Eigen::VectorXcd& phi) const {
    const auto& p = params();
    const auto segs = graph_->segments();
    std::vector<EdgeProfile> out;
    out.reserve(segs.size());
    for (const auto& s : segs) {
        const cplx wt = w[s.tail];
        const cplx wh = s.is_stub() ? cplx{} : w[s.head];
        const cplx ft = phi[s.tail];
        const cplx fh = s.is_stub() ? cplx{} : phi[s.head];
        out.emplace_back(edge_resolvent_solution(wt, wh, ft, fh, p));
    }
    return {graph_, std::move(out)};
}

GraphFunction GraphResolvent::apply(const GraphFunction& f) const {
    if (!graph_->compatible(*f.graph()))
        throw Incompatible("source lives on a different lattice");
    const auto& p = params();
    const double ell = graph_->ell();
    const double nu = graph_->nu();
    const cplx k2 = p.z;
    const cplx w = p.w();
    const cplx sw = std::sin(w);
    const cplx cw = std::cos(w);
    const auto segs = graph_->segments();

    // particular solutions vanishing at both ends
    std::vector<SinusoidalProfile> part(segs.size());
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (!is_analytic(f[s]))
            throw InvalidParameter("graph resolvent needs analytic edge data");
        const SinusoidalProfile src = plain_form(to_sinusoidal(f[s]), ell);
        SinusoidalProfile q;
        q.c0 = -src.c0 / k2;
        q.c1 = -src.c1 / k2;
        for (const auto& m : src.modes) {
            if (m.sin_coef == 0.0 && m.cos_coef == 0.0)
                continue;
            const cplx d = nu * m.wavenumber * m.wavenumber - k2;
            if (std::abs(d) <= 1e-12 * (std::abs(nu * m.wavenumber * m.wavenumber) + std::abs(k2)))
                throw EdgeSingular("edge source resonates with the edge resolvent");
            add_mode(q, {m.wavenumber, m.sin_coef / d, m.cos_coef / d});
        }
        const EdgeProfile qp = q;
        const cplx q0 = evaluate(qp, 0.0, ell);
        const cplx ql = evaluate(qp, ell, ell);
        // subtract q0 sin(k'(ell - x))/sin w + ql sin(k'x)/sin w
        add_mode(q, {p.k_prime, (q0 * cw - ql) / sw, -q0});
        part[s] = std::move(q);
    }

    const auto n = static_cast<Eigen::Index>(graph_->vertex_count());
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    for (std::size_t s = 0; s < segs.size(); ++s) {
        const EdgeProfile q = part[s];
        rhs[segs[s].tail] += outward_from_profile(q, ell, true);
        if (!segs[s].is_stub())
            rhs[segs[s].head] += outward_from_profile(q, ell, false);
    }
    rhs *= sinc(w) / ell;
    const Eigen::VectorXcd vals = solve(rhs);

    std::vector<EdgeProfile> out;
    out.reserve(segs.size());
    for (std::size_t s = 0; s < segs.size(); ++s) {
        const cplx wt = vals[segs[s].tail];
        const cplx wh = segs[s].is_stub() ? cplx{} : vals[segs[s].head];
        SinusoidalProfile prof = std::move(part[s]);
        add_mode(prof, {p.k_prime, (wh - wt * cw) / sw, wt});
        out.emplace_back(std::move(prof));
    }
    return {graph_, std::move(out)};
}

ResolventResiduals GraphResolvent::residuals(const GraphFunction& psi, const GraphFunction& f) const {
    const double ell = graph_->ell();
    const double nu = graph_->nu();
    const cplx z = params().z;
    ResolventResiduals r;

    double end_scale = 0.0;
    for (std::size_t s = 0; s < graph_->segment_count(); ++s)
        end_scale = std::max({end_scale, std::abs(psi.end_value(s, true)), std::abs(psi.end_value(s, false))});
    r.continuity = end_scale > 0.0 ? continuity_defect(psi).discrepancy / end_scale : 0.0;

    double ode_worst = 0.0;
    double ode_scale = 0.0;
    for (std::size_t s = 0; s < graph_->segment_count(); ++s)
        for (int i = 1; i <= 5; ++i) {
            const double x = ell * i / 6.0;
            const cplx d2 = nu * second_derivative(psi[s], x, ell);
            const cplx val = z * evaluate(psi[s], x, ell);
            const cplx src = evaluate(f[s], x, ell);
            ode_worst = std::max(ode_worst, std::abs(-d2 - val - src));
            ode_scale = std::max({ode_scale, std::abs(d2), std::abs(val), std::abs(src)});
        }
    r.ode = ode_scale > 0.0 ? ode_worst / ode_scale : 0.0;

    const std::size_t nv = graph_->vertex_count();
    std::vector<double> res(nv), scale(nv);
    double global = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
        cplx sum = 0.0;
        double mag = 0.0;
        cplx value = 0.0;
        for (const auto& inc : graph_->incident(j)) {
            const cplx d = psi.outward_derivative(static_cast<std::size_t>(inc.segment), inc.at_tail);
            sum += d;
            mag += std::abs(d);
            value = psi.end_value(static_cast<std::size_t>(inc.segment), inc.at_tail);
        }
        const cplx coupling = ell * vj_[static_cast<Eigen::Index>(j)] * value;
        res[j] = std::abs(sum - coupling);
        scale[j] = mag + std::abs(coupling);
        global = std::max(global, scale[j]);
    }
    r.per_vertex.resize(nv);
    for (std::size_t j = 0; j < nv; ++j) {
        const double denom = std::max(scale[j], 1e-12 * global);
        r.per_vertex[j] = denom > 0.0 ? res[j] / denom : 0.0;
        r.vertex_condition = std::max(r.vertex_condition, r.per_vertex[j]);
    }
    return r;
}

VertexFunction sandwiched_resolvent(const GraphPtr& g, const Potential& v, const ResolventParams& p,
                                    const VertexFunction& phi) {
    if (!g->compatible(*phi.graph()))
        throw Incompatible("right-hand side lives on a different lattice");
    if (phi.values().isZero(0.0))
        return VertexFunction::zeros(g);
    GraphResolvent r(g, v, p.z);
    return {g, r.sandwiched(phi.values())};
}

GraphFunction reconstruct_graph_resolvent(const GraphPtr& g, const Potential& v, const ResolventParams& p,
                                          const VertexFunction& phi) {
    if (!g->compatible(*phi.graph()))
        throw Incompatible("right-hand side lives on a different lattice");
    if (phi.values().isZero(0.0))
        return GraphFunction::zeros(g);
    GraphResolvent r(g, v, p.z);
    const Eigen::VectorXcd w = r.sandwiched(phi.values());
    GraphFunction psi = r.edge_profiles(w, phi.values());
    const auto res = r.residuals(psi, embed_I(phi));
    if (res.continuity > kConsistencyTolerance || res.ode > kConsistencyTolerance ||
        res.vertex_condition > kConsistencyTolerance)
        throw ConsistencyFailure("reconstructed resolvent violates its defining conditions (continuity " +
                                 std::to_string(res.continuity) + ", ode " + std::to_string(res.ode) + ", vertex " +
                                 std::to_string(res.vertex_condition) + ")");
    return psi;
}

double secular_rhs(double lambda, double ell, int nu) {
    const cplx w = std::sqrt(cplx(lambda * ell * ell / nu));
    return lambda * cosc(w).real();
}

SparseMatrixR secular_matrix(const LatticeGraph& g, const Eigen::VectorXd& vj, double lambda) {
    const double inv = 1.0 / (g.ell() * g.ell());
    const double s = sinc(std::sqrt(cplx(lambda * g.ell() * g.ell() / g.nu()))).real();
    const auto n = static_cast<Eigen::Index>(g.vertex_count());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * (2 * g.nu() + 1));
    for (Eigen::Index j = 0; j < n; ++j) {
        trip.emplace_back(j, j, 2.0 * g.nu() * inv + s * vj[j]);
        for (int nb : g.neighbors(static_cast<std::size_t>(j)))
            trip.emplace_back(j, nb, -inv);
    }
    SparseMatrixR m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

namespace {

struct TrackedEigen {
    double value = 0.0;
    Eigen::VectorXd vector;
    int index = 0;
};

// Eigenpair of T(lambda) continuing the branch of `previous` near `index`.
TrackedEigen tracked_eigen(const LatticeGraph& g, const Eigen::VectorXd& vj, double lambda, int index,
                           const Eigen::VectorXd& previous, const EigenOptions& eopts) {
    const auto n = static_cast<int>(g.vertex_count());
    const int count = std::min(n, index + 3);
    EigenOptions o = eopts;
    o.boundary_separation = 0.0;
    const auto slice = eigenpairs(secular_matrix(g, vj, lambda), Window{}, count, o);
    int pick = index;
    if (previous.size() > 0) {
        auto overlap = [&](int i) { return std::abs(slice.eigenvectors.col(i).real().dot(previous)); };
        if (overlap(index) < 0.5) {
            double best = -1.0;
            for (int i = 0; i < static_cast<int>(slice.size()); ++i)
                if (overlap(i) > best) {
                    best = overlap(i);
                    pick = i;
                }
        }
    }
    return {slice.eigenvalues[static_cast<std::size_t>(pick)], slice.eigenvectors.col(pick).real(), pick};
}

} // namespace

std::vector<SecularEigenpair> secular_eigenvalues(const GraphPtr& g, const Potential& v, Window interval,
                                                  const SecularOptions& opts) {
    if (!(opts.tol > 0.0))
        throw InvalidParameter("secular tolerance must be positive");
    if (interval.empty())
        return {};
    const double ell = g->ell();
    const int nu = g->nu();
    const double cap = 0.9 * nu * std::pow(std::numbers::pi / ell, 2);
    if (!(interval.upper <= cap))
        throw InvalidInterval("search interval reaches past 0.9 nu (pi/ell)^2 = " + std::to_string(cap));
    if (!std::isfinite(interval.lower))
        throw InvalidInterval("search interval needs a finite lower end");

    const double a = interval.lower;
    const double b = interval.upper;
    const Eigen::VectorXd vj = sample_on_vertices(v, *g);
    const int n = static_cast<int>(g->vertex_count());
    EigenOptions quiet = opts.eigen;
    quiet.boundary_separation = 0.0;

    // f_i(lambda) = mu_i(T(lambda)) - g(lambda) decreases through zero once per root
    const auto at_b = eigenpairs(secular_matrix(*g, vj, b), Window{-INFINITY, secular_rhs(b, ell, nu)}, n,
                                 EigenOptions{quiet.dense_limit, false, 0.0, quiet.seed, quiet.block_size});
    const int nb = static_cast<int>(at_b.size());
    if (nb == 0)
        return {};
    const auto at_a = eigenpairs(secular_matrix(*g, vj, a), Window{}, nb,
                                 EigenOptions{quiet.dense_limit, false, 0.0, quiet.seed, quiet.block_size});
    const double ga = secular_rhs(a, ell, nu);

    const auto h2 = eigenpairs(assemble_h2(g, v), Window{}, nb, quiet);
    const double ceiling = 0.99 * nu * std::pow(std::numbers::pi / ell, 2);

    std::vector<SecularEigenpair> out;
    for (int i = 0; i < nb; ++i) {
        if (!(at_a.eigenvalues[static_cast<std::size_t>(i)] > ga))
            continue;
        double x = std::clamp(h2.eigenvalues[static_cast<std::size_t>(i)], a, b);
        int index = i;
        Eigen::VectorXd prev = h2.eigenvectors.col(i).real();
        std::vector<double> history{x};
        int evals = 0;

        auto F = [&](double lam) {
            const auto t = tracked_eigen(*g, vj, lam, index, prev, quiet);
            index = t.index;
            prev = t.vector;
            ++evals;
            const double c = cosc(std::sqrt(cplx(lam * ell * ell / nu))).real();
            return t.value / c;
        };

        bool done = false;
        double lambda = x;
        while (!done) {
            if (evals >= opts.max_iterations)
                throw Nonconvergence("secular fixed point for index " + std::to_string(i) + " did not converge",
                                     history);
            const double x1 = F(x);
            history.push_back(x1);
            if (std::abs(x1 - x) < opts.tol) {
                lambda = x1;
                break;
            }
            const double x2 = F(x1);
            history.push_back(x2);
            if (std::abs(x2 - x1) < opts.tol) {
                lambda = x2;
                break;
            }
            const double denom = x2 - 2.0 * x1 + x;
            double next = x2;
            if (std::abs(denom) > 1e-300) {
                const double acc = x - (x1 - x) * (x1 - x) / denom;
                if (std::isfinite(acc))
                    next = acc;
            }
            x = std::min(next, ceiling);
        }

        if (!interval.contains(lambda))
            continue;
        Eigen::VectorXd vec = prev / (std::sqrt(g->vertex_weight()) * prev.norm());
        normalize_sign(vec);
        out.push_back({lambda, VertexFunction(g, vec.cast<cplx>()), evals});
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.lambda < r.lambda; });
    return out;
}

GraphFunction secular_eigenfunction(const SecularEigenpair& pair) {
    const auto& g = pair.vertex_vector.graph();
    const auto p = make_resolvent_params(pair.lambda, g->ell(), g->nu());
    const auto& u = pair.vertex_vector.values();
    std::vector<EdgeProfile> out;
    out.reserve(g->segment_count());
    for (const auto& s : g->segments())
        out.emplace_back(edge_resolvent_solution(u[s.tail], s.is_stub() ? cplx{} : u[s.head], 0.0, 0.0, p));
    return {g, std::move(out)};
}

} // namespace qglab
