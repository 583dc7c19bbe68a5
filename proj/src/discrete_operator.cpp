#include "qglab/discrete_operator.hpp"

#include "qglab/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace qglab {

bool SparseOperator::is_real() const {
    for (int k = 0; k < matrix.outerSize(); ++k)
        for (SparseMatrixC::InnerIterator it(matrix, k); it; ++it)
            if (it.value().imag() != 0.0)
                return false;
    return true;
}

SparseMatrixR SparseOperator::real_matrix() const {
    if (!is_real())
        throw InvalidParameter("operator '" + label + "' has complex entries");
    return matrix.real();
}

VertexFunction SparseOperator::apply(const VertexFunction& u) const {
    if (!graph || !graph->compatible(*u.graph()))
        throw Incompatible("operator and vector live on different lattices");
    return {u.graph(), matrix * u.values()};
}

Eigen::VectorXcd apply_discrete_laplacian(const LatticeGraph& g, const Eigen::VectorXcd& u) {
    const double inv = 1.0 / (g.ell() * g.ell());
    const double diag = 2.0 * g.nu();
    Eigen::VectorXcd out(u.size());
    for (std::size_t j = 0; j < g.vertex_count(); ++j) {
        cplx sum = -diag * u[static_cast<Eigen::Index>(j)];
        for (int n : g.neighbors(j))
            sum += u[n];
        out[static_cast<Eigen::Index>(j)] = inv * sum;
    }
    return out;
}

VertexFunction apply_discrete_laplacian(const LatticeGraph& g, const VertexFunction& u) {
    return {u.graph(), apply_discrete_laplacian(g, u.values())};
}

namespace {

SparseOperator assemble_stencil(const GraphPtr& g, const Eigen::VectorXd& diag_extra, double sign, std::string label) {
    const double inv = 1.0 / (g->ell() * g->ell());
    const auto n = static_cast<Eigen::Index>(g->vertex_count());
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(n) * (2 * g->nu() + 1));
    for (std::size_t j = 0; j < g->vertex_count(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        trip.emplace_back(jj, jj, sign * (-2.0 * g->nu() * inv) + diag_extra[jj]);
        for (int nb : g->neighbors(j))
            trip.emplace_back(jj, nb, sign * inv);
    }
    SparseMatrixC m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return {g, std::move(m), std::move(label)};
}

} // namespace

SparseOperator assemble_laplacian(const GraphPtr& g) {
    return assemble_stencil(g, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g->vertex_count())), 1.0, "laplacian");
}

SparseOperator assemble_h2(const GraphPtr& g, const Potential& v) {
    return assemble_stencil(g, sample_on_vertices(v, *g), -1.0, "H2[" + v.label() + "]");
}

ResolventSolver::ResolventSolver(const SparseMatrixC& a, cplx z)
    : z_(z), lu_(std::make_shared<Eigen::SparseLU<SparseMatrixC>>()) {
    if (a.rows() != a.cols())
        throw InvalidParameter("resolvent needs a square operator");
    SparseMatrixC id(a.rows(), a.cols());
    id.setIdentity();
    shifted_ = a - z * id;
    shifted_.makeCompressed();
    lu_->compute(shifted_);
    if (lu_->info() != Eigen::Success)
        throw ResolventSingular("factorization of (A - z) failed; z is (numerically) an eigenvalue");

    // With Im z >= 1e-8 the distance to the real spectrum of a symmetric
    // operator is at least 1e-8; otherwise estimate ||(A - z)^{-1}||.
    if (std::abs(z.imag()) < 1e-8) {
        Eigen::VectorXcd x = seeded_start(a.rows(), 0x11);
        x.normalize();
        double inv_norm = 0.0;
        for (int it = 0; it < 40; ++it) {
            Eigen::VectorXcd y = lu_->solve(x);
            const double ny = y.norm();
            if (!std::isfinite(ny) || ny > 1e8)
                throw ResolventSingular("z lies within 1e-8 of an eigenvalue");
            if (std::abs(ny - inv_norm) <= 1e-8 * ny)
                break;
            inv_norm = ny;
            x = y / ny;
        }
    }
}

Eigen::VectorXcd ResolventSolver::solve(const Eigen::VectorXcd& f) const {
    Eigen::VectorXcd u = lu_->solve(f);
    const double fn = f.norm();
    if (fn > 0.0) {
        double res = (shifted_ * u - f).norm();
        if (res > kResidualTolerance * fn) {
            // one step of iterative refinement before giving up
            u += lu_->solve(f - shifted_ * u);
            res = (shifted_ * u - f).norm();
            if (!(res <= kResidualTolerance * fn))
                throw ResolventSingular("resolvent solve residual " + std::to_string(res / fn) + " exceeds 1e-10");
        }
    }
    return u;
}

Eigen::VectorXcd ResolventSolver::solve_conjugate(const Eigen::VectorXcd& f) const {
    return solve(f.conjugate()).conjugate();
}

VertexFunction solve_h2_resolvent(const SparseOperator& h2, cplx z, const VertexFunction& f) {
    if (!h2.graph || !h2.graph->compatible(*f.graph()))
        throw Incompatible("operator and right-hand side live on different lattices");
    ResolventSolver solver(h2.matrix, z);
    return {f.graph(), solver.solve(f.values())};
}

ResolventFactorNorms resolvent_factor_norms(const GraphPtr& g, const Potential& v, cplx z, const PowerOptions& opts) {
    const auto h2 = assemble_h2(g, v);
    const Eigen::VectorXd vj = sample_on_vertices(v, *g);
    ResolventSolver solver(h2.matrix, z);
    const auto n = h2.dim();
    const auto& graph = *g;

    ResolventFactorNorms out;
    out.norm_dl = estimate_operator_norm(
                      n, [&](const Eigen::VectorXcd& x) { return apply_discrete_laplacian(graph, solver.solve(x)); },
                      [&](const Eigen::VectorXcd& y) { return solver.solve_conjugate(apply_discrete_laplacian(graph, y)); },
                      opts)
                      .value;
    out.norm_v = estimate_operator_norm(
                     n, [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd { return vj.cwiseProduct(solver.solve(x)); },
                     [&](const Eigen::VectorXcd& y) { return solver.solve_conjugate(vj.cwiseProduct(y)); }, opts)
                     .value;
    out.bound = 1.0 / g->ell();
    return out;
}

double estimate_laplacian_norm(const GraphPtr& g, const PowerOptions& opts) {
    const auto& graph = *g;
    auto apply = [&](const Eigen::VectorXcd& x) { return apply_discrete_laplacian(graph, x); };
    return estimate_operator_norm(static_cast<Eigen::Index>(g->vertex_count()), apply, apply, opts).value;
}

void write_triplets(std::ostream& os, const SparseOperator& op) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    for (int k = 0; k < op.matrix.outerSize(); ++k)
        for (SparseMatrixC::InnerIterator it(op.matrix, k); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    os.precision(old);
}

} // namespace qglab
