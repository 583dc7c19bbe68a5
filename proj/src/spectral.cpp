#include "qglab/spectral.hpp"

#include "qglab/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace qglab {
namespace {

bool is_tridiagonal(const SparseMatrixR& a) {
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrixR::InnerIterator it(a, k); it; ++it)
            if (std::abs(it.row() - it.col()) > 1)
                return false;
    return true;
}

double gershgorin_lower(const SparseMatrixR& a) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(a.rows());
    Eigen::VectorXd off = Eigen::VectorXd::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k)
        for (SparseMatrixR::InnerIterator it(a, k); it; ++it) {
            if (it.row() == it.col())
                diag[it.row()] += it.value();
            else
                off[it.row()] += std::abs(it.value());
        }
    return (diag - off).minCoeff();
}

struct RawPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // empty when not requested
};

RawPairs dense_pairs(const SparseMatrixR& a, bool vectors) {
    const auto opt = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (is_tridiagonal(a)) {
        const auto n = a.rows();
        Eigen::VectorXd d(n), e(std::max<Eigen::Index>(n - 1, 0));
        for (Eigen::Index i = 0; i < n; ++i)
            d[i] = a.coeff(i, i);
        for (Eigen::Index i = 0; i + 1 < n; ++i)
            e[i] = a.coeff(i + 1, i);
        es.computeFromTridiagonal(d, e, opt);
    } else {
        es.compute(Eigen::MatrixXd(a), opt);
    }
    if (es.info() != Eigen::Success)
        throw Nonconvergence("dense symmetric eigensolver failed", {});
    RawPairs out{es.eigenvalues(), {}};
    if (vectors)
        out.vectors = es.eigenvectors();
    return out;
}

// Block Krylov on (A - sigma)^{-1} with full reorthogonalisation and a
// Rayleigh-Ritz extraction. Grows the subspace until the nearest eigenvalues
// to sigma cover [sigma, upper] or max_count pairs in the window converged.
RawPairs shift_invert_pairs(const SparseMatrixR& a, Window w, int max_count, const EigenOptions& opts) {
    const auto n = a.rows();
    double sigma = std::isfinite(w.lower) ? w.lower : gershgorin_lower(a) - 1.0;
    // keep the shift off an exact eigenvalue; the boundary test below uses w.lower itself
    sigma -= 1e-6 * std::max(1.0, std::abs(sigma));

    SparseMatrixR shifted = a;
    for (Eigen::Index i = 0; i < n; ++i)
        shifted.coeffRef(i, i) -= sigma;
    shifted.makeCompressed();
    Eigen::SparseLU<SparseMatrixR> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success)
        throw Nonconvergence("shift-invert factorization failed", {});

    const Eigen::Index bs = std::min<Eigen::Index>(std::max(1, opts.block_size), n);
    Eigen::Index nev = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(max_count) + 4);
    Eigen::Index m = std::min<Eigen::Index>(n, std::max<Eigen::Index>(2 * nev + 20, 40));
    std::vector<double> history;

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;

    for (int round = 0; round < 60; ++round) {
        Eigen::MatrixXd q(n, m), op(n, m);
        Eigen::Index cols = 0;
        Eigen::MatrixXd block(n, bs);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < bs; ++j)
                block(i, j) = gauss(rng);

        auto append = [&](Eigen::MatrixXd cand) {
            Eigen::Index added = 0;
            for (Eigen::Index j = 0; j < cand.cols() && cols < m; ++j) {
                Eigen::VectorXd v = cand.col(j);
                const double before = v.norm();
                if (before == 0.0)
                    continue;
                for (int pass = 0; pass < 2; ++pass)
                    if (cols > 0)
                        v -= q.leftCols(cols) * (q.leftCols(cols).transpose() * v);
                const double after = v.norm();
                if (after <= 1e-10 * before)
                    continue;
                q.col(cols++) = v / after;
                ++added;
            }
            return added;
        };

        append(block);
        Eigen::Index done = 0; // columns with op already applied
        while (done < cols) {
            const Eigen::Index begin = done;
            const Eigen::Index end = cols;
            for (Eigen::Index j = begin; j < end; ++j)
                op.col(j) = lu.solve(Eigen::VectorXd(q.col(j)));
            done = end;
            if (cols >= m || append(op.middleCols(begin, end - begin)) == 0)
                break;
        }
        for (Eigen::Index j = done; j < cols; ++j)
            op.col(j) = lu.solve(Eigen::VectorXd(q.col(j)));

        const Eigen::MatrixXd qk = q.leftCols(cols);
        Eigen::MatrixXd h = qk.transpose() * op.leftCols(cols);
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);

        // Ritz values of OP, largest magnitude = nearest to sigma
        std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto i, auto j) {
            return std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[j]);
        });

        const Eigen::Index take = std::min(nev, cols);
        Eigen::VectorXd vals(take);
        Eigen::MatrixXd vecs(n, take);
        bool converged = true;
        double max_res = 0.0;
        for (Eigen::Index k = 0; k < take; ++k) {
            Eigen::VectorXd x = qk * es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
            x.normalize();
            const Eigen::VectorXd ax = a * x;
            const double lam = x.dot(ax);
            const double res = (ax - lam * x).norm();
            max_res = std::max(max_res, res);
            if (res > 1e-9 * std::max(1.0, std::abs(lam)))
                converged = false;
            vals[k] = lam;
            vecs.col(k) = x;
        }
        history.push_back(max_res);

        if (converged) {
            const double reach = take > 0 ? (vals.array() - sigma).abs().maxCoeff() : 0.0;
            int in_window = 0;
            for (Eigen::Index k = 0; k < take; ++k)
                in_window += w.contains(vals[k]) ? 1 : 0;
            const bool covered = std::isfinite(w.upper) && reach > (w.upper - sigma) * (1.0 + 1e-9) + 1e-8;
            if (covered || in_window >= max_count || take == n) {
                std::vector<Eigen::Index> idx(static_cast<std::size_t>(take));
                std::iota(idx.begin(), idx.end(), 0);
                std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return vals[i] < vals[j]; });
                RawPairs out{Eigen::VectorXd(take), Eigen::MatrixXd(n, take)};
                for (Eigen::Index k = 0; k < take; ++k) {
                    out.values[k] = vals[idx[static_cast<std::size_t>(k)]];
                    out.vectors.col(k) = vecs.col(idx[static_cast<std::size_t>(k)]);
                }
                return out;
            }
            nev = std::min<Eigen::Index>(n, 2 * nev);
            m = std::min<Eigen::Index>(n, std::max<Eigen::Index>(m, 2 * nev + 20));
        } else {
            m = std::min<Eigen::Index>(n, m + m / 2 + bs);
        }
    }
    throw Nonconvergence("shift-invert eigensolver did not converge", history);
}

} // namespace

SpectrumSlice eigenpairs(const SparseMatrixR& a, Window window, int max_count, const EigenOptions& opts, std::string label) {
    if (a.rows() != a.cols())
        throw InvalidParameter("eigenpairs needs a square matrix");
    SpectrumSlice slice;
    slice.window = window;
    slice.operator_label = std::move(label);
    const auto n = a.rows();
    if (window.empty() || max_count <= 0 || n == 0) {
        slice.eigenvectors.resize(n, 0);
        return slice;
    }

    // tridiagonal eigenvalues alone cost O(n^2), so they never need the iterative path
    const bool dense = n <= opts.dense_limit || (!opts.vectors && is_tridiagonal(a));
    RawPairs raw = dense ? dense_pairs(a, opts.vectors) : shift_invert_pairs(a, window, max_count, opts);

    const double sep = opts.boundary_separation;
    for (Eigen::Index k = 0; k < raw.values.size(); ++k) {
        const double lam = raw.values[k];
        for (double edge : {window.lower, window.upper})
            if (std::isfinite(edge) && std::abs(lam - edge) <= sep * std::max(1.0, std::abs(edge)))
                throw BoundaryCollision("eigenvalue " + std::to_string(lam) + " lies on the window boundary " +
                                        std::to_string(edge));
    }

    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < raw.values.size() && static_cast<int>(keep.size()) < max_count; ++k)
        if (window.contains(raw.values[k]))
            keep.push_back(k);

    const bool with_vectors = raw.vectors.size() > 0 && opts.vectors;
    slice.eigenvectors.resize(n, with_vectors ? static_cast<Eigen::Index>(keep.size()) : 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const double lam = raw.values[keep[i]];
        slice.eigenvalues.push_back(lam);
        if (with_vectors) {
            const Eigen::VectorXd x = raw.vectors.col(keep[i]);
            slice.eigenvectors.col(static_cast<Eigen::Index>(i)) = x.cast<cplx>();
            slice.residuals.push_back((a * x - lam * x).norm());
        }
    }
    return slice;
}

SpectrumSlice eigenpairs(const SparseOperator& op, Window window, int max_count, const EigenOptions& opts) {
    return eigenpairs(op.real_matrix(), window, max_count, opts, op.label);
}

double subspace_distance(const Eigen::MatrixXcd& basis_a, const Eigen::MatrixXcd& basis_b) {
    if (basis_a.rows() != basis_b.rows())
        throw Incompatible("subspaces live in spaces of different dimension");
    if (basis_a.cols() != basis_b.cols())
        return 1.0;
    if (basis_a.cols() == 0)
        return 0.0;
    auto orth = [](const Eigen::MatrixXcd& b) -> Eigen::MatrixXcd {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(b);
        return qr.householderQ() * Eigen::MatrixXcd::Identity(b.rows(), b.cols());
    };
    const Eigen::MatrixXcd qa = orth(basis_a);
    const Eigen::MatrixXcd qb = orth(basis_b);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(qa.adjoint() * qb);
    const double smin = std::min(1.0, svd.singularValues().minCoeff());
    return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

double spectral_projection_distance(const SpectrumSlice& a, const SpectrumSlice& b, const SubspaceMap& mapping) {
    if (!(a.window == b.window))
        throw Incompatible("spectral projections over different windows");
    if (a.size() != b.size())
        return 1.0;
    if (a.size() == 0)
        return 0.0;
    const Eigen::MatrixXcd mapped = mapping ? mapping(a.eigenvectors) : a.eigenvectors;
    return subspace_distance(mapped, b.eigenvectors);
}

double hausdorff_distance(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty() || y.empty())
        throw EmptySet("Hausdorff distance of an empty set");
    std::vector<double> xs = x, ys = y;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
        double worst = 0.0;
        for (double p : from) {
            auto it = std::lower_bound(to.begin(), to.end(), p);
            double d = std::numeric_limits<double>::infinity();
            if (it != to.end())
                d = *it - p;
            if (it != to.begin())
                d = std::min(d, p - *std::prev(it));
            worst = std::max(worst, d);
        }
        return worst;
    };
    return std::max(directed(xs, ys), directed(ys, xs));
}

double inverse_shift_spectra_compare(const std::vector<double>& spec_a, const std::vector<double>& spec_b, double m_shift) {
    auto map = [m_shift](const std::vector<double>& s) {
        std::vector<double> out;
        out.reserve(s.size());
        for (double l : s) {
            if (l <= -m_shift)
                throw ShiftViolation("eigenvalue " + std::to_string(l) + " <= -M = " + std::to_string(-m_shift));
            out.push_back(1.0 / (l + m_shift));
        }
        return out;
    };
    return hausdorff_distance(map(spec_a), map(spec_b));
}

std::vector<std::pair<std::size_t, std::size_t>> cluster_multiplets(const std::vector<double>& eigenvalues, double gap) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= eigenvalues.size(); ++i)
        if (i == eigenvalues.size() || eigenvalues[i] - eigenvalues[i - 1] > gap) {
            if (i > begin)
                out.emplace_back(begin, i);
            begin = i;
        }
    return out;
}

void write_spectrum_csv(std::ostream& os, const SpectrumSlice& slice) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "operator_label,index,eigenvalue\n";
    for (std::size_t i = 0; i < slice.eigenvalues.size(); ++i)
        os << slice.operator_label << ',' << i << ',' << slice.eigenvalues[i] << '\n';
    os.precision(old);
}

} // namespace qglab
