#include "qglab/errors.hpp"
#include "qglab/potentials.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace qglab;
using Catch::Approx;

TEST_CASE("harmonic potential is bounded below on a box") {
    const auto r = assumption_report(harmonic_potential(), 1.0, Box::cube(1, -3.0, 3.0), 20);
    CHECK(r.bounded_below_ok);
    CHECK(r.sampled_minimum == Approx(0.0).margin(1e-12));
}

TEST_CASE("constant potential has comparability constant 1") {
    for (double m : {0.5, 1.0, 7.0}) {
        const auto r = assumption_report(zero_potential(), m, Box::cube(2, -1.0, 1.0), 8);
        CHECK(r.c1_estimate == Approx(1.0).epsilon(1e-15));
        for (const auto& s : r.modulus_samples)
            CHECK(s.sup_difference == Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("comparability constant of x^2 matches an exhaustive pair scan") {
    // independent scan: max (V(x)+M)/(V(y)+M) over grid pairs with |x-y| <= 1
    const int density = 100;
    const int n = 6 * density + 1;
    double oracle = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - density); j <= std::min(n - 1, i + density); ++j) {
            const double x = -3.0 + static_cast<double>(i) / density;
            const double y = -3.0 + static_cast<double>(j) / density;
            oracle = std::max(oracle, (x * x + 1.0) / (y * y + 1.0));
        }
    constexpr double frozen = 2.618029471251084;
    CHECK(oracle == Approx(frozen).epsilon(1e-12));
    const auto r = assumption_report(harmonic_potential(), 1.0, Box::cube(1, -3.0, 3.0), density);
    CHECK(r.c1_estimate == Approx(frozen).epsilon(1e-12));
}

TEST_CASE("modulus samples are ordered and nonincreasing") {
    const auto r = assumption_report(harmonic_potential(), 1.0, Box::cube(1, -2.0, 2.0), 16);
    REQUIRE(r.modulus_samples.size() >= 2);
    for (std::size_t i = 1; i < r.modulus_samples.size(); ++i) {
        CHECK(r.modulus_samples[i].delta < r.modulus_samples[i - 1].delta);
        CHECK(r.modulus_samples[i].sup_difference <= r.modulus_samples[i - 1].sup_difference + 1e-15);
    }
}

TEST_CASE("insufficient shift is reported") {
    CHECK_THROWS_AS(assumption_report(gaussian_well(2.0, 1.0), 1.0, Box::cube(1, -1.0, 1.0), 4), ShiftTooSmall);
    CHECK_NOTHROW(assumption_report(gaussian_well(2.0, 1.0), 2.5, Box::cube(1, -1.0, 1.0), 4));
}

TEST_CASE("sampling on vertices") {
    SECTION("zero") {
        const auto g = build_lattice(2, 0.5, 1.0);
        CHECK(sample_on_vertices(zero_potential(), *g).isZero(0.0));
    }
    SECTION("x^2 on the R=1 path") {
        const auto vals = sample_on_vertices(harmonic_potential(), *build_lattice(1, 0.5, 1.0));
        const double expected[] = {1.0, 0.25, 0.0, 0.25, 1.0};
        for (int i = 0; i < 5; ++i)
            CHECK(vals[i] == Approx(expected[i]).margin(1e-15));
    }
    SECTION("x1 + x2 vanishes at (1, -1)") {
        const Potential v{"sum", [](std::span<const double> x) { return x[0] + x[1]; }, std::nullopt};
        const auto g = build_lattice(2, 0.5, 1.0);
        const int c[] = {2, -2};
        CHECK(sample_on_vertices(v, *g)[g->index_of(c)] == Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("symmetric potentials sample symmetrically") {
    for (int nu = 1; nu <= 2; ++nu) {
        const auto g = build_lattice(nu, 0.25, 1.0);
        const auto vals = sample_on_vertices(smooth_bump(2.0, 0.7), *g);
        for (std::size_t v = 0; v < g->vertex_count(); ++v) {
            std::vector<int> mirror(g->coords(v).begin(), g->coords(v).end());
            for (auto& c : mirror)
                c = -c;
            CHECK(vals[static_cast<Eigen::Index>(v)] == Approx(vals[g->index_of(mirror)]).epsilon(1e-15));
        }
    }
}

TEST_CASE("coupling ell V_j vanishes pointwise as ell shrinks") {
    double previous = INFINITY;
    for (double ell : {0.5, 0.25, 0.125, 0.0625}) {
        const auto g = build_lattice(1, ell, 1.0);
        const int c[] = {static_cast<int>(std::lround(1.0 / ell))};
        const double alpha = ell * sample_on_vertices(harmonic_potential(), *g)[g->index_of(c)];
        CHECK(alpha < previous);
        previous = alpha;
    }
    CHECK(previous == Approx(0.0625));
}

TEST_CASE("labels and parameters") {
    CHECK(make_potential("harmonic", {{"omega", 2.0}})(std::vector<double>{1.0}) == Approx(4.0));
    CHECK(make_potential("well").lower_bound() == Approx(-1.0));
    CHECK_THROWS_AS(make_potential("coulomb"), InvalidParameter);
    CHECK_THROWS_AS(gaussian_well(1.0, 0.0), InvalidParameter);
}
