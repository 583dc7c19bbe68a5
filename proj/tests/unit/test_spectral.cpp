#include <catch_amalgamated.hpp>

#include "qglab/errors.hpp"
#include "qglab/lattice.hpp"
#include "qglab/potentials.hpp"
#include "qglab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace qglab;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

SparseMatrixR tridiagonal(int n, double ell) {
    std::vector<Eigen::Triplet<double>> t;
    const double s = 1.0 / (ell * ell);
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 2.0 * s);
        if (i + 1 < n) {
            t.emplace_back(i, i + 1, -s);
            t.emplace_back(i + 1, i, -s);
        }
    }
    SparseMatrixR a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

SparseMatrixR diagonal(std::initializer_list<double> d) {
    SparseMatrixR a(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) {
        a.insert(i, i) = x;
        ++i;
    }
    return a;
}

// every pair, no sorting or bisection
double brute_hausdorff(const std::vector<double>& x, const std::vector<double>& y) {
    auto directed = [](const std::vector<double>& a, const std::vector<double>& b) {
        double worst = 0.0;
        for (double p : a) {
            double best = INFINITY;
            for (double q : b)
                best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(x, y), directed(y, x));
}

} // namespace

TEST_CASE("eigenpairs on a Dirichlet path match the Toeplitz closed form") {
    for (int n : {5, 40, 300}) {
        const double ell = 0.1;
        const auto s = eigenpairs(tridiagonal(n, ell), {}, n);
        REQUIRE(s.size() == static_cast<std::size_t>(n));
        for (int m = 1; m <= n; ++m) {
            const double exact = 2.0 / (ell * ell) * (1.0 - std::cos(m * pi / (n + 1)));
            CHECK(std::abs(s.eigenvalues[m - 1] - exact) < 1e-10 * (1.0 + exact));
        }
        for (std::size_t k = 0; k < s.size(); ++k)
            CHECK(s.residuals[k] <= 1e-8);
    }
    SECTION("free H2 on the nu=1 box") {
        // vertices at -R .. R with spacing ell, wall one step further out
        const auto g = build_lattice(1, 0.125, 0.375);
        const auto s = eigenpairs(assemble_h2(g, zero_potential()), {}, 100);
        const int n = static_cast<int>(g->vertex_count());
        REQUIRE(s.size() == static_cast<std::size_t>(n));
        for (int m = 1; m <= n; ++m)
            CHECK(s.eigenvalues[m - 1] == Approx(2.0 / (0.125 * 0.125) * (1.0 - std::cos(m * pi / (n + 1)))).epsilon(1e-12));
    }
}

TEST_CASE("window selection") {
    const auto a = diagonal({1.0, 2.0, 3.0});
    const auto s = eigenpairs(a, {1.5, 3.5}, 10);
    REQUIRE(s.eigenvalues == std::vector<double>{2.0, 3.0});
    CHECK(s.eigenvectors.cols() == 2);
    CHECK(std::abs(s.eigenvectors(1, 0)) == Approx(1.0));
    CHECK(std::abs(s.eigenvectors(2, 1)) == Approx(1.0));

    CHECK(eigenpairs(a, {1.5, 3.5}, 1).eigenvalues == std::vector<double>{2.0});
    CHECK(eigenpairs(a, {3.5, 9.0}, 10).size() == 0);
    CHECK(eigenpairs(a, {2.5, 2.5}, 10).size() == 0);
    CHECK(eigenpairs(a, {2.5, 1.0}, 10).size() == 0);
    CHECK_THROWS_AS(eigenpairs(a, {2.0, 3.5}, 10), BoundaryCollision);
    CHECK_THROWS_AS(eigenpairs(a, {1.5, 3.0 + 1e-10}, 10), BoundaryCollision);
    CHECK_NOTHROW(eigenpairs(a, {1.5, 3.0 + 1e-6}, 10));
}

TEST_CASE("dense and shift-invert backends agree") {
    const auto g = build_lattice(1, 0.01, 4.0);
    const auto h2 = assemble_h2(g, harmonic_potential());
    EigenOptions iter;
    iter.dense_limit = 0;
    const Window w{0.0, 8.0};
    const auto d = eigenpairs(h2, w, 10);
    const auto i = eigenpairs(h2, w, 10, iter);
    REQUIRE(d.size() == 4);
    REQUIRE(i.size() == d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
        CHECK(std::abs(d.eigenvalues[k] - i.eigenvalues[k]) < 1e-8);
        CHECK(i.residuals[k] <= 1e-8);
    }
    CHECK(subspace_distance(d.eigenvectors, i.eigenvectors) < 1e-6);

    SECTION("seeded iteration is reproducible") {
        const auto again = eigenpairs(h2, w, 10, iter);
        CHECK(again.eigenvalues == i.eigenvalues);
        CHECK(again.eigenvectors == i.eigenvectors);
    }
    SECTION("two dimensions") {
        const auto g2 = build_lattice(2, 0.1, 2.0);
        const auto op = assemble_h2(g2, harmonic_potential());
        const auto a = eigenpairs(op, {0.0, 4.5}, 10);
        const auto b = eigenpairs(op, {0.0, 4.5}, 10, iter);
        REQUIRE(a.size() == 3); // 2, 4, 4 up to lattice error
        REQUIRE(b.size() == a.size());
        for (std::size_t k = 0; k < a.size(); ++k)
            CHECK(std::abs(a.eigenvalues[k] - b.eigenvalues[k]) < 1e-8);
        CHECK(subspace_distance(a.eigenvectors, b.eigenvectors) < 1e-6);
    }
}

TEST_CASE("projections from eigenvectors are idempotent and symmetric") {
    const auto g = build_lattice(1, 0.05, 3.0);
    const auto s = eigenpairs(assemble_h2(g, harmonic_potential()), {0.0, 6.0}, 10);
    REQUIRE(s.size() == 3);
    const Eigen::MatrixXcd p = s.eigenvectors * s.eigenvectors.adjoint();
    CHECK((p * p - p).norm() < 1e-10);
    CHECK((p - p.adjoint()).norm() < 1e-10);
}

TEST_CASE("subspace and projection distances") {
    Eigen::MatrixXcd e1 = Eigen::MatrixXcd::Zero(3, 1), e2 = e1;
    e1(0, 0) = 1.0;
    e2(1, 0) = 1.0;
    CHECK(subspace_distance(e1, e1) == 0.0);
    CHECK(subspace_distance(e1, e2) == Approx(1.0));
    CHECK(subspace_distance(e1, 3.0 * e1) < 1e-15);

    Eigen::MatrixXcd tilted = e1;
    tilted(1, 0) = std::tan(0.3);
    CHECK(subspace_distance(e1, tilted) == Approx(std::sin(0.3)).epsilon(1e-12));

    Eigen::MatrixXcd two = Eigen::MatrixXcd::Zero(3, 2);
    two(0, 0) = two(1, 1) = 1.0;
    CHECK(subspace_distance(e1, two) == 1.0);
    CHECK_THROWS_AS(subspace_distance(e1, Eigen::MatrixXcd::Zero(4, 1)), Incompatible);

    const auto a = diagonal({1.0, 2.0, 3.0});
    const auto s = eigenpairs(a, {1.5, 3.5}, 10);
    CHECK(spectral_projection_distance(s, s) == 0.0);
    CHECK_THROWS_AS(spectral_projection_distance(s, eigenpairs(a, {1.5, 4.0}, 10)), Incompatible);
    const auto mapped = spectral_projection_distance(s, s, [](const Eigen::MatrixXcd& x) {
        Eigen::MatrixXcd y = x;
        y.row(0).swap(y.row(1));
        return y;
    });
    CHECK(mapped == Approx(1.0));
}

TEST_CASE("Hausdorff distance") {
    CHECK(hausdorff_distance({0.0, 1.0}, {0.0, 1.0}) == 0.0);
    CHECK(hausdorff_distance({0.0}, {0.0, 2.0}) == 2.0);
    CHECK(hausdorff_distance({1.0, 5.0}, {2.0, 3.0}) == brute_hausdorff({1.0, 5.0}, {2.0, 3.0}));
    CHECK(hausdorff_distance({1.0, 5.0}, {2.0, 3.0}) == 2.0);
    CHECK_THROWS_AS(hausdorff_distance({}, {1.0}), EmptySet);
    CHECK_THROWS_AS(hausdorff_distance({1.0}, {}), EmptySet);

    SECTION("metric properties on random sets") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        std::uniform_int_distribution<int> size(1, 7);
        auto draw = [&] {
            std::vector<double> s(static_cast<std::size_t>(size(rng)));
            for (auto& x : s)
                x = u(rng);
            return s;
        };
        for (int t = 0; t < 200; ++t) {
            const auto x = draw(), y = draw(), z = draw();
            const double xy = hausdorff_distance(x, y);
            CHECK(xy == Approx(brute_hausdorff(x, y)).margin(1e-15));
            CHECK(xy == hausdorff_distance(y, x));
            CHECK(hausdorff_distance(x, x) == 0.0);
            CHECK(xy <= hausdorff_distance(x, z) + hausdorff_distance(z, y) + 1e-14);
        }
    }
}

TEST_CASE("inverse-shifted spectra") {
    CHECK(inverse_shift_spectra_compare({0.0, 1.0}, {0.0, 1.0}, 1.0) == 0.0);
    // the 1e6 level maps next to 0 and must still be matched to 1/2
    const double d = inverse_shift_spectra_compare({0.0, 1.0}, {0.0, 1.0, 1e6}, 1.0);
    CHECK(d == Approx(brute_hausdorff({1.0, 0.5}, {1.0, 0.5, 1.0 / (1e6 + 1.0)})).epsilon(1e-14));
    // high levels are compressed: far apart in energy, close after the map
    CHECK(inverse_shift_spectra_compare({1e5}, {1e6}, 1.0) < 1e-5);
    CHECK_THROWS_AS(inverse_shift_spectra_compare({-1.0, 2.0}, {2.0}, 1.0), ShiftViolation);
    CHECK_THROWS_AS(inverse_shift_spectra_compare({2.0}, {-3.0}, 1.0), ShiftViolation);
    CHECK_THROWS_AS(inverse_shift_spectra_compare({}, {2.0}, 1.0), EmptySet);
}

TEST_CASE("multiplet clustering") {
    using Range = std::pair<std::size_t, std::size_t>;
    const auto c = cluster_multiplets({1.0, 2.0, 2.0 + 1e-9, 2.0 + 2e-9, 5.0}, 1e-8);
    CHECK(c == std::vector<Range>{{0, 1}, {1, 4}, {4, 5}});
    CHECK(cluster_multiplets({}, 1.0).empty());
}

TEST_CASE("spectrum CSV") {
    const auto s = eigenpairs(diagonal({1.0, 2.5}), {}, 10, {}, "diag");
    std::ostringstream os;
    write_spectrum_csv(os, s);
    CHECK(os.str() == "operator_label,index,eigenvalue\ndiag,0,1\ndiag,1,2.5\n");
}
