#include <catch_amalgamated.hpp>

#include "qglab/continuum.hpp"
#include "qglab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace qglab;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

double discrete_dirichlet(int m, double h) { return 2.0 / (h * h) * (1.0 - std::cos(m * pi * h)); }

} // namespace

TEST_CASE("continuum grid") {
    const auto g = make_continuum_grid(2, 0.25, 1.0);
    CHECK(g.points_per_axis() == 7);
    CHECK(g.point_count() == 49);
    CHECK(g.point(0) == std::vector<double>{-0.75, -0.75});
    CHECK(g.point(8) == std::vector<double>{-0.5, -0.5});
    CHECK(g.point(48) == std::vector<double>{0.75, 0.75});
    CHECK(g.halved().h == 0.125);
    CHECK_THROWS_AS(make_continuum_grid(1, 0.3, 1.0), InvalidParameter);
    CHECK_THROWS_AS(make_continuum_grid(0, 0.25, 1.0), InvalidParameter);
    CHECK_THROWS_AS(make_continuum_grid(1, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(make_continuum_grid(1, 2.0, 1.0), InvalidParameter);
}

TEST_CASE("free unit interval: discrete Dirichlet formula") {
    for (double h : {1.0 / 16, 1.0 / 64}) {
        const auto grid = make_continuum_grid(1, h, 0.5);
        const auto s = eigenpairs(assemble_continuum(grid, zero_potential()), {}, 1000);
        REQUIRE(s.size() == static_cast<std::size_t>(grid.points_per_axis()));
        for (std::size_t m = 1; m <= s.size(); ++m)
            CHECK(s.eigenvalues[m - 1] == Approx(discrete_dirichlet(static_cast<int>(m), h)).epsilon(1e-11));
    }
}

TEST_CASE("free unit interval: convergence in h") {
    // at fixed mode the discrete value rises toward (m pi)^2 as h halves
    std::vector<std::vector<double>> errors(5);
    std::vector<std::vector<double>> estimates(5);
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}) {
        const auto ref = continuum_eigenvalues(make_continuum_grid(1, h, 0.5), zero_potential(), {0.0, 260.0}, 5,
                                               {10.0, {}});
        REQUIRE(ref.size() == 5);
        for (int m = 1; m <= 5; ++m) {
            const auto& r = ref[static_cast<std::size_t>(m - 1)];
            const double exact = std::pow(m * pi, 2);
            CHECK(r.coarse == Approx(discrete_dirichlet(m, h)).epsilon(1e-11));
            CHECK(r.fine == Approx(discrete_dirichlet(m, h / 2)).epsilon(1e-11));
            CHECK(r.coarse < r.fine);
            CHECK(r.fine < exact);
            errors[static_cast<std::size_t>(m - 1)].push_back(std::abs(r.value - exact));
            estimates[static_cast<std::size_t>(m - 1)].push_back(r.error_estimate);
        }
    }
    for (int m = 0; m < 5; ++m) {
        const auto& e = estimates[static_cast<std::size_t>(m)];
        for (std::size_t i = 1; i < e.size(); ++i) {
            CHECK(e[i - 1] / e[i] == Approx(4.0).margin(0.25));
            CHECK(errors[static_cast<std::size_t>(m)][i] < errors[static_cast<std::size_t>(m)][i - 1]);
        }
    }
}

TEST_CASE("harmonic oscillator ground state") {
    // box of half-width 8: Dirichlet effects are far below the mesh error
    const auto ref = continuum_eigenvalues(make_continuum_grid(1, 1.0 / 32, 8.0), harmonic_potential(), {0.0, 6.0}, 3);
    REQUIRE(ref.size() == 3);
    CHECK(ref[0].value == Approx(1.0).margin(1e-5));
    CHECK(ref[1].value == Approx(3.0).margin(1e-5));
    CHECK(ref[2].value == Approx(5.0).margin(1e-5));
    for (const auto& r : ref)
        CHECK(r.error_estimate < 1e-3);
    // frozen output of this run
    CHECK(std::abs(ref[0].value - 1.0000000009312) < 1e-12);
}

TEST_CASE("free unit square") {
    const double h = 1.0 / 32;
    const auto ref = continuum_eigenvalues(make_continuum_grid(2, h, 0.5), zero_potential(), {0.0, 110.0}, 10,
                                           {1.0, {}});
    // pi^2 (m^2 + n^2) below 110: (1,1), (1,2) x2, (2,2), (1,3) x2, (2,3) x2
    std::vector<std::pair<int, int>> modes;
    for (int m = 1; m < 5; ++m)
        for (int n = 1; n < 5; ++n)
            if (pi * pi * (m * m + n * n) < 110.0)
                modes.emplace_back(m, n);
    std::sort(modes.begin(), modes.end(), [](auto a, auto b) {
        return a.first * a.first + a.second * a.second < b.first * b.first + b.second * b.second;
    });
    REQUIRE(ref.size() == modes.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const auto [m, n] = modes[i];
        // tensor product of the one-dimensional discrete spectra
        CHECK(ref[i].coarse == Approx(discrete_dirichlet(m, h) + discrete_dirichlet(n, h)).epsilon(1e-10));
        CHECK(ref[i].value == Approx(pi * pi * (m * m + n * n)).epsilon(1e-4));
    }
}

TEST_CASE("Richardson tolerance") {
    const auto grid = make_continuum_grid(1, 0.125, 0.5);
    CHECK_THROWS_AS(continuum_eigenvalues(grid, zero_potential(), {0.0, 50.0}, 3), InsufficientResolution);
    CHECK(continuum_eigenvalues(grid, zero_potential(), {0.0, 50.0}, 3, {1.0, {}}).size() == 2);
    CHECK(continuum_eigenvalues(grid, zero_potential(), {0.0, 5.0}, 3).empty());
    CHECK(continuum_eigenvalues(grid, zero_potential(), {0.0, 50.0}, 0).empty());
}

TEST_CASE("reference CSV") {
    std::ostringstream os;
    write_reference_csv(os, {{1.5, 1.0, 1.375, 0.125}}, 0.25);
    CHECK(os.str() == "index,eigenvalue,error_estimate,coarse,fine,h\n0,1.5,0.125,1,1.375,0.25\n");
}
