#include "qglab/errors.hpp"
#include "qglab/hilbert.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace qglab;
using Catch::Approx;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::VectorXcd random_values(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Eigen::VectorXcd v(n);
    for (auto& x : v)
        x = {d(rng), d(rng)};
    return v;
}

// Piecewise-linear data plus random bubbles of modes 1..3 on every segment.
GraphFunction random_h1(const GraphPtr& g, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    auto f = embed_I({g, random_values(static_cast<Eigen::Index>(g->vertex_count()), rng)});
    for (std::size_t s = 0; s < g->segment_count(); ++s) {
        auto sin = to_sinusoidal(f[s]);
        for (int m = 1; m <= 3; ++m) {
            const auto b = SinusoidalProfile::bubble({d(rng) / m, d(rng) / m}, m, g->ell());
            sin.modes.insert(sin.modes.end(), b.modes.begin(), b.modes.end());
        }
        f.profiles()[s] = sin;
    }
    return f;
}

GraphFunction bubbles(const GraphPtr& g, int m) {
    std::vector<EdgeProfile> p(g->segment_count(), SinusoidalProfile::bubble(1.0, m, g->ell()));
    return {g, p};
}

} // namespace

TEST_CASE("inner product of constants on the box edges") {
    const auto g = build_lattice(1, 0.5, 1.0);
    std::vector<EdgeProfile> one(g->segment_count(), LinearProfile{0.0, 0.0});
    std::vector<EdgeProfile> imag = one;
    for (std::size_t s = 0; s < g->edge_count(); ++s) {
        one[s] = LinearProfile{1.0, 1.0};
        imag[s] = LinearProfile{{0.0, 1.0}, {0.0, 1.0}};
    }
    const GraphFunction phi{g, one}, psi{g, imag};
    CHECK(std::abs(h1_inner(phi, phi) - cplx{2.0, 0.0}) < 1e-14);
    CHECK(std::abs(h1_inner(phi, psi) - cplx{0.0, 2.0}) < 1e-14);
}

TEST_CASE("sampled sine profile norm uses quadrature") {
    const auto g = build_lattice(1, 1.0, 1.0);
    const int m = 64;
    SampledProfile sp;
    for (int i = 0; i <= m; ++i) {
        const double t = static_cast<double>(i) / m;
        sp.values.push_back(std::sin(pi * t));
        sp.derivatives.push_back(pi * std::cos(pi * t));
    }
    std::vector<EdgeProfile> p(g->segment_count(), LinearProfile{0.0, 0.0});
    p[0] = sp;
    const GraphFunction phi{g, p};
    CHECK(h1_norm(phi) * h1_norm(phi) == Approx(0.5).epsilon(1e-7));
    CHECK(derivative_norm(phi) * derivative_norm(phi) == Approx(pi * pi / 2).epsilon(1e-7));
}

TEST_CASE("interpolation of vertex data") {
    const auto g = build_lattice(1, 1.0, 2.0);
    SECTION("constants interpolate to constants on box edges") {
        const auto f = embed_I({g, Eigen::VectorXcd::Ones(5)});
        for (std::size_t s = 0; s < g->edge_count(); ++s) {
            const auto& lp = std::get<LinearProfile>(f[s]);
            CHECK(lp.a == cplx{1.0});
            CHECK(lp.b == cplx{1.0});
        }
    }
    SECTION("hat function norm") {
        Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(5);
        delta[2] = 1.0;
        const auto f = embed_I({g, delta});
        CHECK(h1_norm(f) * h1_norm(f) == Approx(2.0 / 3.0).epsilon(1e-14));
        const auto back = adjoint_Istar(f);
        CHECK(back[2].real() == Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(back[1].real() == Approx(1.0 / 6.0).epsilon(1e-14));
        CHECK(back[3].real() == Approx(1.0 / 6.0).epsilon(1e-14));
        CHECK(std::abs(back[0]) < 1e-15);
    }
}

TEST_CASE("interpolation is a contraction") {
    std::mt19937_64 rng(11);
    for (int nu = 1; nu <= 2; ++nu) {
        const auto g = build_lattice(nu, 0.25, 1.0);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const VertexFunction u{g, random_values(static_cast<Eigen::Index>(g->vertex_count()), rng)};
            worst = std::max(worst, h1_norm(embed_I(u)) / u.norm());
        }
        CHECK(worst <= 1.0);
    }
}

TEST_CASE("trace undoes interpolation exactly") {
    std::mt19937_64 rng(3);
    const auto g = build_lattice(2, 0.25, 0.75);
    const VertexFunction u{g, random_values(static_cast<Eigen::Index>(g->vertex_count()), rng)};
    CHECK((trace_K(embed_I(u)).values() - u.values()).cwiseAbs().maxCoeff() <= 1e-15 * u.values().cwiseAbs().maxCoeff());
}

TEST_CASE("trace of bubbles vanishes") {
    const auto g = build_lattice(2, 0.5, 1.0);
    CHECK(trace_K(bubbles(g, 1)).values().isZero(1e-15));
}

TEST_CASE("discontinuous data has no trace") {
    const auto g = build_lattice(1, 0.5, 1.0);
    std::vector<EdgeProfile> p(g->segment_count(), LinearProfile{0.0, 0.0});
    p[0] = LinearProfile{0.0, 1.0};
    p[1] = LinearProfile{0.5, 0.0};
    CHECK_THROWS_AS(trace_K(GraphFunction{g, p}), NotInH1);
}

TEST_CASE("adjoint of interpolation on constants") {
    const auto g = build_lattice(2, 0.25, 1.0);
    const cplx c{0.3, -1.2};
    std::vector<EdgeProfile> p(g->segment_count(), LinearProfile{c, c});
    const auto back = adjoint_Istar(GraphFunction{g, p});
    for (std::size_t v = 0; v < g->vertex_count(); ++v)
        CHECK(std::abs(back[v] - c) < 1e-14);
}

TEST_CASE("adjointness of I and I*") {
    std::mt19937_64 rng(5);
    for (int nu = 1; nu <= 3; ++nu) {
        const auto g = build_lattice(nu, nu == 3 ? 0.5 : 0.25, 1.0);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const VertexFunction u{g, random_values(static_cast<Eigen::Index>(g->vertex_count()), rng)};
            const auto phi = random_h1(g, rng);
            const auto iu = embed_I(u);
            worst = std::max(worst, std::abs(h1_inner(iu, phi) - h2_inner(u, adjoint_Istar(phi))) /
                                        (h1_norm(iu) * h1_norm(phi)));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("Sobolev norm elementary cases") {
    const auto g = build_lattice(1, 1.0, 1.0);
    SECTION("constant") {
        std::vector<EdgeProfile> p(g->segment_count(), LinearProfile{2.0, 2.0});
        const GraphFunction f{g, p};
        CHECK(h1_sobolev_norm(f) == Approx(h1_norm(f)).epsilon(1e-15));
    }
    SECTION("ramp") {
        std::vector<EdgeProfile> p(g->segment_count(), LinearProfile{0.0, 0.0});
        p[0] = LinearProfile{0.0, 1.0};
        const GraphFunction f{g, p};
        CHECK(derivative_norm(f) * derivative_norm(f) == Approx(1.0).epsilon(1e-14));
        CHECK(h1_norm(f) * h1_norm(f) == Approx(1.0 / 3.0).epsilon(1e-14));
    }
    SECTION("sine") {
        std::vector<EdgeProfile> p(g->segment_count(), LinearProfile{0.0, 0.0});
        p[0] = SinusoidalProfile::bubble(1.0, 1, 1.0);
        const GraphFunction f{g, p};
        CHECK(derivative_norm(f) * derivative_norm(f) == Approx(pi * pi / 2).epsilon(1e-13));
    }
}

TEST_CASE("interpolated data has zero interpolation defect") {
    std::mt19937_64 rng(9);
    const auto g = build_lattice(2, 0.25, 1.0);
    const auto r = ik_defect_check(embed_I({g, random_values(static_cast<Eigen::Index>(g->vertex_count()), rng)}));
    CHECK(r.lhs < 1e-14);
    CHECK(r.bound == 0.25);
}

TEST_CASE("bubble defect stays below ell") {
    const auto r = ik_defect_check(bubbles(build_lattice(1, 0.1, 1.0), 1));
    CHECK(r.lhs <= 0.1);
    CHECK(r.lhs > 0.0);
}

TEST_CASE("bubble defect is linear in ell") {
    std::vector<double> ls{0.2, 0.1, 0.05}, vals;
    for (double ell : ls)
        vals.push_back(ik_defect_check(bubbles(build_lattice(1, ell, 1.0), 1)).lhs);
    const double s1 = std::log(vals[0] / vals[1]) / std::log(2.0);
    const double s2 = std::log(vals[1] / vals[2]) / std::log(2.0);
    CHECK(s1 == Approx(1.0).margin(0.02));
    CHECK(s2 == Approx(1.0).margin(0.02));
}

TEST_CASE("I* minus K") {
    SECTION("constants") {
        const auto g = build_lattice(2, 0.25, 1.0);
        const auto phi = embed_I({g, Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(g->vertex_count()), 1.5)});
        const auto diff = adjoint_Istar(phi).values() - trace_K(phi).values();
        const auto mask = interior_mask(*g);
        for (std::size_t v = 0; v < g->vertex_count(); ++v)
            if (mask[v])
                CHECK(std::abs(diff[static_cast<Eigen::Index>(v)]) < 1e-14);
    }
    SECTION("bound arithmetic") {
        const auto r = adjoint_gap_check(bubbles(build_lattice(1, 0.1, 1.0), 1));
        CHECK(r.bound == Approx(0.04472135955).epsilon(1e-10));
        CHECK(r.lhs <= r.bound);
    }
    SECTION("fourth moment of the hat weight") {
        // int_0^ell (1 - t/ell)^4 dt = ell/5 via the exact moment routine
        const double ell = 0.37;
        const cplx m = exp_moment(4, 0.0);
        CHECK(std::abs(ell * m - ell / 5.0) < 1e-15);
    }
}

TEST_CASE("inequalities hold on random probes") {
    std::mt19937_64 rng(21);
    for (int nu = 1; nu <= 2; ++nu)
        for (double ell : {0.2, 0.1}) {
            const auto g = build_lattice(nu, ell, 0.6);
            for (int t = 0; t < 30; ++t) {
                const auto phi = random_h1(g, rng);
                CHECK(ik_defect_check(phi).holds());
                CHECK(adjoint_gap_check(phi).holds());
            }
        }
}

TEST_CASE("identification defect constant is stable") {
    std::vector<double> c;
    for (double ell : {0.2, 0.1, 0.05})
        c.push_back(identification_defect(bubbles(build_lattice(1, ell, 1.0), 1)).lhs / ell);
    CHECK(c[0] / c[2] == Approx(1.0).margin(0.1));
    CHECK(c[1] / c[2] == Approx(1.0).margin(0.1));
}

TEST_CASE("norms are absolutely homogeneous") {
    std::mt19937_64 rng(2);
    const auto g = build_lattice(1, 0.25, 1.0);
    const auto f = random_h1(g, rng);
    const cplx s{-1.5, 2.0};
    const auto sf = scale(s, f);
    CHECK(h1_norm(sf) == Approx(std::abs(s) * h1_norm(f)).epsilon(1e-13));
    CHECK(h1_sobolev_norm(sf) == Approx(std::abs(s) * h1_sobolev_norm(f)).epsilon(1e-13));
    const VertexFunction u{g, random_values(static_cast<Eigen::Index>(g->vertex_count()), rng)};
    CHECK(VertexFunction(g, s * u.values()).norm() == Approx(std::abs(s) * u.norm()).epsilon(1e-13));
}

TEST_CASE("text serialization round trip") {
    std::mt19937_64 rng(4);
    const auto g = build_lattice(1, 0.25, 0.5);
    const auto f = random_h1(g, rng);
    std::stringstream ss;
    write_graph_function(ss, f);
    const auto back = read_graph_function(ss, g);
    CHECK(h1_norm(back - f) < 1e-14 * h1_norm(f));
}

TEST_CASE("incompatible graphs are rejected") {
    const auto a = build_lattice(1, 0.25, 1.0);
    const auto b = build_lattice(1, 0.5, 1.0);
    CHECK_THROWS_AS(h1_inner(GraphFunction::zeros(a), GraphFunction::zeros(b)), Incompatible);
}
