#include "qglab/discrete_operator.hpp"
#include "qglab/errors.hpp"
#include "qglab/resolvent_compare.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>
#include <thread>

using namespace qglab;
using Catch::Approx;

namespace {

Eigen::VectorXcd random_values(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Eigen::VectorXcd v(n);
    for (auto& x : v)
        x = {d(rng), d(rng)};
    return v;
}

Eigen::Index at(const LatticeGraph& g, std::initializer_list<int> c) {
    std::vector<int> v(c);
    return g.index_of(v);
}

} // namespace

TEST_CASE("Laplacian of constants and quadratics") {
    const auto g = build_lattice(1, 1.0, 4.0);
    const auto mask = interior_mask(*g);
    const auto n = static_cast<Eigen::Index>(g->vertex_count());
    const auto c = apply_discrete_laplacian(*g, Eigen::VectorXcd::Constant(n, 3.0));
    Eigen::VectorXcd q(n);
    for (Eigen::Index j = 0; j < n; ++j)
        q[j] = std::pow(g->point(static_cast<std::size_t>(j))[0], 2);
    const auto d = apply_discrete_laplacian(*g, q);
    for (Eigen::Index j = 0; j < n; ++j)
        if (mask[static_cast<std::size_t>(j)]) {
            CHECK(std::abs(c[j]) < 1e-14);
            CHECK(std::abs(d[j] - 2.0) < 1e-13);
        }
}

TEST_CASE("Laplacian of a point mass in two dimensions") {
    const auto g = build_lattice(2, 0.5, 1.0);
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(g->vertex_count()));
    u[at(*g, {0, 0})] = 1.0;
    const auto d = apply_discrete_laplacian(*g, u);
    // four neighbours, each contributing (0 - 1) / ell^2
    CHECK(d[at(*g, {0, 0})].real() == Approx(-16.0));
    for (auto c : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
        CHECK(d[at(*g, {c.first, c.second})].real() == Approx(4.0));
    CHECK(std::abs(d[at(*g, {1, 1})]) == 0.0);
}

TEST_CASE("H2 assembly") {
    const auto g = build_lattice(2, 0.25, 1.0);
    SECTION("zero potential gives minus the Laplacian") {
        const auto h2 = assemble_h2(g, zero_potential());
        const auto lap = assemble_laplacian(g);
        CHECK((SparseMatrixC(h2.matrix + lap.matrix)).norm() == 0.0);
    }
    SECTION("diagonal is 2 nu / ell^2 + V_j, boundary rows included") {
        const auto h2 = assemble_h2(g, harmonic_potential());
        const auto vj = sample_on_vertices(harmonic_potential(), *g);
        for (Eigen::Index j = 0; j < h2.dim(); ++j)
            CHECK(h2.matrix.coeff(j, j).real() == Approx(4.0 / 0.0625 + vj[j]).epsilon(1e-15));
    }
    SECTION("constant potential acts as a multiple on interior constants") {
        const Potential v{"const", [](std::span<const double>) { return 2.5; }, 2.5};
        const auto h2 = assemble_h2(g, v);
        const auto mask = interior_mask(*g);
        const Eigen::VectorXcd out = h2.matrix * Eigen::VectorXcd::Ones(h2.dim());
        for (Eigen::Index j = 0; j < h2.dim(); ++j)
            if (mask[static_cast<std::size_t>(j)])
                CHECK(std::abs(out[j] - 2.5) < 1e-12);
    }
    SECTION("exactly symmetric with real spectrum") {
        const auto h2 = assemble_h2(g, harmonic_potential());
        const SparseMatrixR a = h2.real_matrix();
        CHECK(SparseMatrixR(a - SparseMatrixR(a.transpose())).norm() == 0.0);
        CHECK(h2.is_real());
    }
}

TEST_CASE("matrix-free and assembled Laplacian agree") {
    std::mt19937_64 rng(1);
    for (int nu = 1; nu <= 3; ++nu) {
        const auto g = build_lattice(nu, 0.25, 0.75);
        const auto lap = assemble_laplacian(g);
        const auto u = random_values(lap.dim(), rng);
        const Eigen::VectorXcd a = lap.matrix * u;
        const auto b = apply_discrete_laplacian(*g, u);
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14 * a.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("nonnegative potential gives nonnegative spectrum") {
    const auto g = build_lattice(2, 0.25, 1.0);
    const Eigen::MatrixXd dense = Eigen::MatrixXd(assemble_h2(g, smooth_bump(1.0, 0.5)).real_matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= 0.0);
}

TEST_CASE("resolvent solves") {
    const auto g = build_lattice(1, 0.1, 1.0);
    SECTION("eigenvector right-hand side") {
        const auto h2 = assemble_h2(g, harmonic_potential());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h2.real_matrix()));
        const Eigen::VectorXcd f = es.eigenvectors().col(3).cast<cplx>();
        const cplx z{0.5, 1.0};
        const auto u = solve_h2_resolvent(h2, z, {g, f});
        const Eigen::VectorXcd expected = f / (es.eigenvalues()[3] - z);
        CHECK((u.values() - expected).norm() < 1e-12 * expected.norm());
    }
    SECTION("random data at z = i") {
        std::mt19937_64 rng(2);
        const auto h2 = assemble_h2(g, zero_potential());
        const auto f = random_values(h2.dim(), rng);
        const auto u = solve_h2_resolvent(h2, {0.0, 1.0}, {g, f});
        const Eigen::VectorXcd r = h2.matrix * u.values() - cplx{0.0, 1.0} * u.values() - f;
        CHECK(r.norm() < 1e-10 * f.norm());
    }
    SECTION("real shift below the spectrum") {
        std::mt19937_64 rng(3);
        const auto h2 = assemble_h2(g, harmonic_potential());
        const auto f = random_values(h2.dim(), rng);
        const auto u = solve_h2_resolvent(h2, -50.0, {g, f});
        CHECK((h2.matrix * u.values() + 50.0 * u.values() - f).norm() < 1e-10 * f.norm());
    }
    SECTION("conjugate symmetry") {
        std::mt19937_64 rng(4);
        const auto h2 = assemble_h2(g, harmonic_potential());
        const ResolventSolver s(h2.matrix, {0.3, 0.7});
        const auto f = random_values(h2.dim(), rng);
        const Eigen::VectorXcd a = s.solve_conjugate(f.conjugate()).conjugate();
        const Eigen::VectorXcd b = s.solve(f);
        CHECK((a - b).norm() < 1e-10 * b.norm());
        const ResolventSolver t(h2.matrix, {0.3, -0.7});
        CHECK((t.solve(f.conjugate()).conjugate() - b).norm() < 1e-10 * b.norm());
    }
    SECTION("real z on an eigenvalue is rejected") {
        const auto h2 = assemble_h2(g, zero_potential());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h2.real_matrix()), Eigen::EigenvaluesOnly);
        CHECK_THROWS_AS(ResolventSolver(h2.matrix, es.eigenvalues()[0]), ResolventSingular);
    }
}

TEST_CASE("concurrent solves equal sequential ones") {
    std::mt19937_64 rng(5);
    const auto g = build_lattice(2, 0.1, 1.0);
    const auto h2 = assemble_h2(g, harmonic_potential());
    const ResolventSolver s(h2.matrix, {0.0, 1.0});
    std::vector<Eigen::VectorXcd> rhs;
    for (int i = 0; i < 4; ++i)
        rhs.push_back(random_values(h2.dim(), rng));
    std::vector<Eigen::VectorXcd> seq, par(4);
    for (const auto& f : rhs)
        seq.push_back(s.solve(f));
    std::vector<std::thread> workers;
    for (int i = 0; i < 4; ++i)
        workers.emplace_back([&, i] { par[i] = s.solve(rhs[i]); });
    for (auto& w : workers)
        w.join();
    for (int i = 0; i < 4; ++i)
        CHECK(par[i] == seq[i]);
}

TEST_CASE("free-case Laplacian-resolvent norm matches the scalar bound") {
    for (double ell : {0.2, 0.1}) {
        const auto g = build_lattice(1, ell, 3.0);
        const auto r = resolvent_factor_norms(g, zero_potential(), {0.0, 1.0});
        const double bound = free_laplacian_resolvent_bound(1, ell, {0.0, 1.0});
        CHECK(r.norm_dl <= bound * (1.0 + 1e-6));
        CHECK(r.norm_dl == Approx(bound).epsilon(0.05));
        CHECK(r.bound == Approx(1.0 / ell));
    }
}

TEST_CASE("Laplacian norm approaches 4 nu / ell^2") {
    double previous = 0.0;
    for (double radius : {1.0, 2.0, 4.0}) {
        const double est = estimate_laplacian_norm(build_lattice(1, 0.5, radius), {2000, 1e-10, 7});
        CHECK(est > previous);
        CHECK(est <= 16.0);
        previous = est;
    }
    CHECK(previous == Approx(16.0).epsilon(0.01));
}

TEST_CASE("triplet export") {
    const auto g = build_lattice(1, 0.5, 0.5);
    std::ostringstream os;
    write_triplets(os, assemble_h2(g, zero_potential()));
    std::istringstream is(os.str());
    int rows = 0, r, c;
    double re, im;
    while (is >> r >> c >> re >> im) {
        ++rows;
        CHECK(re == (r == c ? 8.0 : -4.0));
    }
    CHECK(rows == 7);
}
