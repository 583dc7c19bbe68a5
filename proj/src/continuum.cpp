#include "qglab/continuum.hpp"

#include "qglab/errors.hpp"

#include <cmath>
#include <ostream>

namespace qglab {

Eigen::Index ContinuumGrid::points_per_axis() const {
    return static_cast<Eigen::Index>(std::llround(2.0 * radius / h)) - 1;
}

Eigen::Index ContinuumGrid::point_count() const {
    Eigen::Index n = 1;
    for (int d = 0; d < nu; ++d)
        n *= points_per_axis();
    return n;
}

std::vector<double> ContinuumGrid::point(Eigen::Index index) const {
    const Eigen::Index n = points_per_axis();
    std::vector<double> x(static_cast<std::size_t>(nu));
    for (int d = nu - 1; d >= 0; --d) {
        x[static_cast<std::size_t>(d)] = -radius + static_cast<double>(index % n + 1) * h;
        index /= n;
    }
    return x;
}

ContinuumGrid make_continuum_grid(int nu, double h, double radius) {
    if (nu < 1 || !(h > 0.0) || !(radius > 0.0))
        throw InvalidParameter("continuum grid needs nu >= 1, h > 0 and R > 0");
    const double cells = 2.0 * radius / h;
    if (std::abs(cells - std::round(cells)) > 1e-9 * cells || std::round(cells) < 2.0)
        throw InvalidParameter("mesh width h = " + std::to_string(h) + " does not divide 2R = " +
                               std::to_string(2.0 * radius));
    return {nu, h, radius};
}

SparseOperator assemble_continuum(const ContinuumGrid& grid, const Potential& v) {
    const Eigen::Index n = grid.points_per_axis();
    const Eigen::Index total = grid.point_count();
    const double inv = 1.0 / (grid.h * grid.h);
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(total) * (2 * grid.nu + 1));
    std::vector<Eigen::Index> stride(static_cast<std::size_t>(grid.nu));
    Eigen::Index s = 1;
    for (int d = grid.nu - 1; d >= 0; --d) {
        stride[static_cast<std::size_t>(d)] = s;
        s *= n;
    }
    for (Eigen::Index i = 0; i < total; ++i) {
        const auto x = grid.point(i);
        trip.emplace_back(i, i, 2.0 * grid.nu * inv + v(x));
        for (int d = 0; d < grid.nu; ++d) {
            const Eigen::Index c = (i / stride[static_cast<std::size_t>(d)]) % n;
            if (c > 0)
                trip.emplace_back(i, i - stride[static_cast<std::size_t>(d)], -inv);
            if (c + 1 < n)
                trip.emplace_back(i, i + stride[static_cast<std::size_t>(d)], -inv);
        }
    }
    SparseMatrixC m(total, total);
    m.setFromTriplets(trip.begin(), trip.end());
    return {nullptr, std::move(m), "H[" + v.label() + "]"};
}

std::vector<ReferenceEigenvalue> continuum_eigenvalues(const ContinuumGrid& grid, const Potential& v, Window window,
                                                       int count, const ContinuumOptions& opts) {
    if (window.empty() || count <= 0)
        return {};
    EigenOptions eo = opts.eigen;
    eo.vectors = false;
    eo.boundary_separation = 0.0;
    const ContinuumGrid fine_grid = grid.halved();
    const auto fine_op = assemble_continuum(fine_grid, v).real_matrix();
    const auto coarse_op = assemble_continuum(grid, v).real_matrix();

    // index-matched lowest eigenvalues on both grids, enough to cover the window
    const int limit = static_cast<int>(std::min<Eigen::Index>(grid.point_count(), 4 * count + 64));
    const auto fine = eigenpairs(fine_op, Window{-INFINITY, window.upper}, limit, eo);
    const int want = static_cast<int>(fine.size());
    if (want == 0)
        return {};
    const auto coarse = eigenpairs(coarse_op, Window{}, want, eo);

    std::vector<ReferenceEigenvalue> out;
    for (int i = 0; i < want && i < static_cast<int>(coarse.size()); ++i) {
        ReferenceEigenvalue r;
        r.fine = fine.eigenvalues[static_cast<std::size_t>(i)];
        r.coarse = coarse.eigenvalues[static_cast<std::size_t>(i)];
        r.value = (4.0 * r.fine - r.coarse) / 3.0;
        r.error_estimate = std::abs(r.fine - r.coarse) / 3.0;
        if (!window.contains(r.value))
            continue;
        if (r.error_estimate > opts.tolerance)
            throw InsufficientResolution("Richardson error estimate " + std::to_string(r.error_estimate) +
                                         " for eigenvalue " + std::to_string(r.value) + " exceeds " +
                                         std::to_string(opts.tolerance) + "; refine h");
        out.push_back(r);
        if (static_cast<int>(out.size()) == count)
            break;
    }
    return out;
}

void write_reference_csv(std::ostream& os, const std::vector<ReferenceEigenvalue>& values, double h) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "index,eigenvalue,error_estimate,coarse,fine,h\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        os << i << ',' << values[i].value << ',' << values[i].error_estimate << ',' << values[i].coarse << ','
           << values[i].fine << ',' << h << '\n';
    os.precision(old);
}

} // namespace qglab
