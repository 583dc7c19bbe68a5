#pragma once

#include "qglab/discrete_operator.hpp"
#include "qglab/hilbert.hpp"
#include "qglab/potentials.hpp"
#include "qglab/spectral.hpp"

#include <memory>
#include <vector>

namespace qglab {

/// z = k^2 with k on the principal branch and k' = k / sqrt(nu).
struct ResolventParams {
    cplx z;
    cplx k;
    cplx k_prime;
    double ell = 0.0;
    int nu = 1;

    cplx w() const noexcept { return k_prime * ell; }
};

/// Throws EdgeSingular when |sin(k' ell)| <= 1e-12 max(1, |k' ell|).
ResolventParams make_resolvent_params(cplx z, double ell, int nu);

/// Solution of -nu psi'' - k^2 psi = phi_j (1 - x/ell) + phi_n x/ell on one
/// edge with psi(0) = psi_j, psi(ell) = psi_n.
SinusoidalProfile edge_resolvent_solution(cplx psi_j, cplx psi_n, cplx phi_j, cplx phi_n, const ResolventParams& p);
/// psi'(0) of the same solution, in a form that stays accurate as k' ell -> 0.
cplx edge_derivative_at_origin(cplx psi_j, cplx psi_n, cplx phi_j, cplx phi_n, const ResolventParams& p);

struct CorrectionOperators {
    SparseOperator m1; ///< diagonal
    SparseOperator m2; ///< 2 nu + 1 point stencil
    ResolventParams params;
};

CorrectionOperators assemble_corrections(const GraphPtr& g, const Potential& v, const ResolventParams& p);

/// Residuals of a candidate (nu H1 - z)^{-1} I phi.
struct ResolventResiduals {
    double continuity = 0.0;       ///< relative mismatch of incident end values
    double ode = 0.0;              ///< relative ODE residual at interior sample points
    double vertex_condition = 0.0; ///< worst relative delta-coupling residual over vertices
    std::vector<double> per_vertex;
};

/// Factorization of H2 - z + M1 for one (lattice, potential, z), shared by
/// the sandwiched resolvent, the edge reconstruction and the graph resolvent
/// of general analytic data.
class GraphResolvent {
public:
    GraphResolvent(GraphPtr g, const Potential& v, cplx z);

    const GraphPtr& graph() const noexcept { return graph_; }
    const ResolventParams& params() const noexcept { return corr_.params; }
    const CorrectionOperators& corrections() const noexcept { return corr_; }
    const Eigen::VectorXd& potential_values() const noexcept { return vj_; }

    /// K (nu H1 - z)^{-1} I on coefficient vectors, and its H2 adjoint.
    Eigen::VectorXcd sandwiched(const Eigen::VectorXcd& phi) const;
    Eigen::VectorXcd sandwiched_adjoint(const Eigen::VectorXcd& y) const;

    /// Edge profiles of (nu H1 - z)^{-1} I phi from vertex values w.
    GraphFunction edge_profiles(const Eigen::VectorXcd& w, const Eigen::VectorXcd& phi) const;

    /// (nu H1 - z)^{-1} f for analytic f (Linear or Sinusoidal profiles).
    GraphFunction apply(const GraphFunction& f) const;

    /// Continuity, ODE and vertex-condition residuals of psi as a candidate
    /// for (nu H1 - z)^{-1} f.
    ResolventResiduals residuals(const GraphFunction& psi, const GraphFunction& f) const;

private:
    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

    GraphPtr graph_;
    Eigen::VectorXd vj_;
    CorrectionOperators corr_;
    SparseMatrixC system_;
    std::shared_ptr<Eigen::SparseLU<SparseMatrixC>> lu_;
};

VertexFunction sandwiched_resolvent(const GraphPtr& g, const Potential& v, const ResolventParams& p,
                                    const VertexFunction& phi);

inline constexpr double kConsistencyTolerance = 1e-8;

/// (nu H1 - z)^{-1} I phi; throws ConsistencyFailure when any residual
/// exceeds 1e-8.
GraphFunction reconstruct_graph_resolvent(const GraphPtr& g, const Potential& v, const ResolventParams& p,
                                          const VertexFunction& phi);

struct SecularOptions {
    double tol = 1e-10;
    int max_iterations = 200;
    EigenOptions eigen{};
};

struct SecularEigenpair {
    double lambda = 0.0;
    VertexFunction vertex_vector;
    int iterations = 0;
};

/// g(lambda) = lambda (1 - cos w) / (w^2/2) with w^2 = lambda ell^2 / nu.
double secular_rhs(double lambda, double ell, int nu);
/// T(lambda) = -Delta_d + s(w) diag(V).
SparseMatrixR secular_matrix(const LatticeGraph& g, const Eigen::VectorXd& vj, double lambda);

/// Eigenvalues of nu H1 in the open interval, by the vertex reduction.
/// The interval must lie below 0.9 nu (pi/ell)^2 (InvalidInterval).
std::vector<SecularEigenpair> secular_eigenvalues(const GraphPtr& g, const Potential& v, Window interval,
                                                  const SecularOptions& opts = {});

/// Edge profiles of the eigenfunction with the given vertex values.
GraphFunction secular_eigenfunction(const SecularEigenpair& pair);

} // namespace qglab
