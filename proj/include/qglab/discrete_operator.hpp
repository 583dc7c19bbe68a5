#pragma once

#include "qglab/hilbert.hpp"
#include "qglab/norm_estimate.hpp"
#include "qglab/potentials.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <iosfwd>
#include <memory>
#include <string>

namespace qglab {

using SparseMatrixC = Eigen::SparseMatrix<cplx>;
using SparseMatrixR = Eigen::SparseMatrix<double>;

/// Sparse operator on the vertex space (or on a continuum grid when `graph`
/// is null), stored column-major.
struct SparseOperator {
    GraphPtr graph;
    SparseMatrixC matrix;
    std::string label;

    Eigen::Index dim() const { return matrix.rows(); }
    bool is_real() const;
    /// Real part; throws InvalidParameter if any entry has an imaginary part.
    SparseMatrixR real_matrix() const;
    VertexFunction apply(const VertexFunction& u) const;
};

/// Matrix-free Dirichlet-truncated discrete Laplacian.
VertexFunction apply_discrete_laplacian(const LatticeGraph& g, const VertexFunction& u);
Eigen::VectorXcd apply_discrete_laplacian(const LatticeGraph& g, const Eigen::VectorXcd& u);

SparseOperator assemble_laplacian(const GraphPtr& g);
/// -Delta_d + diag(V_j).
SparseOperator assemble_h2(const GraphPtr& g, const Potential& v);

/// Factorized (A - z) for repeated solves. Real z is accepted only when it
/// is at least 1e-8 away from the spectrum.
class ResolventSolver {
public:
    ResolventSolver(const SparseMatrixC& a, cplx z);

    cplx z() const noexcept { return z_; }
    /// (A - z)^{-1} f, with relative residual <= 1e-10 checked.
    Eigen::VectorXcd solve(const Eigen::VectorXcd& f) const;
    /// (A - conj z)^{-1} f for real-symmetric A, reusing the factorization.
    Eigen::VectorXcd solve_conjugate(const Eigen::VectorXcd& f) const;

private:
    SparseMatrixC shifted_;
    cplx z_;
    std::shared_ptr<Eigen::SparseLU<SparseMatrixC>> lu_;
};

inline constexpr double kResidualTolerance = 1e-10;

VertexFunction solve_h2_resolvent(const SparseOperator& h2, cplx z, const VertexFunction& f);

struct ResolventFactorNorms {
    double norm_dl = 0.0; ///< ||Delta_d (H2 - z)^{-1}||
    double norm_v = 0.0;  ///< ||V (H2 - z)^{-1}||
    double bound = 0.0;   ///< reference scale 1/ell
};

ResolventFactorNorms resolvent_factor_norms(const GraphPtr& g, const Potential& v, cplx z, const PowerOptions& opts = {});

/// ||Delta_d|| by power iteration.
double estimate_laplacian_norm(const GraphPtr& g, const PowerOptions& opts = {});

/// One "row col re im" line per stored entry (0-based indices).
void write_triplets(std::ostream& os, const SparseOperator& op);

} // namespace qglab
