#pragma once

#include "qglab/discrete_operator.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace qglab {

struct Window {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    bool contains(double x) const noexcept { return x > lower && x < upper; }
    bool empty() const noexcept { return !(lower < upper); }
    bool operator==(const Window&) const = default;
};

/// Eigenpairs of a symmetric operator inside an open window, ascending.
struct SpectrumSlice {
    std::vector<double> eigenvalues;
    Eigen::MatrixXcd eigenvectors; ///< unit Euclidean columns
    std::vector<double> residuals;  ///< ||A x - lambda x|| per pair
    Window window;
    std::string operator_label;

    std::size_t size() const noexcept { return eigenvalues.size(); }
};

struct EigenOptions {
    Eigen::Index dense_limit = 2000; ///< dense solve up to this dimension
    bool vectors = true;
    double boundary_separation = 1e-8;
    std::uint64_t seed = 0xe16e;
    int block_size = 4;
};

/// All eigenvalues in the window, at most max_count of them (lowest first).
/// Throws BoundaryCollision if an eigenvalue sits within the separation of a
/// finite window boundary.
SpectrumSlice eigenpairs(const SparseMatrixR& a, Window window, int max_count, const EigenOptions& opts = {},
                         std::string label = {});
SpectrumSlice eigenpairs(const SparseOperator& op, Window window, int max_count, const EigenOptions& opts = {});

/// Maps eigenvector columns of one slice into the space of another.
using SubspaceMap = std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>;

/// Operator-norm distance between the spectral projections of two slices:
/// the sine of the largest principal angle (1 when the ranks differ).
double spectral_projection_distance(const SpectrumSlice& a, const SpectrumSlice& b, const SubspaceMap& mapping = {});

/// Same, for two explicit bases with Euclidean inner product.
double subspace_distance(const Eigen::MatrixXcd& basis_a, const Eigen::MatrixXcd& basis_b);

double hausdorff_distance(const std::vector<double>& x, const std::vector<double>& y);

/// Hausdorff distance between {(lambda + M)^{-1}} of both spectra.
double inverse_shift_spectra_compare(const std::vector<double>& spec_a, const std::vector<double>& spec_b, double m_shift);

/// Groups eigenvalues closer than `gap` into multiplets (index ranges).
std::vector<std::pair<std::size_t, std::size_t>> cluster_multiplets(const std::vector<double>& eigenvalues, double gap);

/// "operator_label,index,eigenvalue" rows with header.
void write_spectrum_csv(std::ostream& os, const SpectrumSlice& slice);

} // namespace qglab
