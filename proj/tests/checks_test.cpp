#include <doctest.h>

#include "nlrobin/checks.hpp"
#include "oracles.hpp"

using namespace nlrobin;

namespace {

struct Setup {
    Mesh mesh;
    BoundaryMeasure kappa;
    JumpMeasure theta;
    FormMatrices forms;
    SpectralDecomposition decomp;
};

Setup robin_setup(int n, double beta, double w0) {
    Setup s{build_interval_mesh(n, 1.0), {}, {}, {}, {}};
    s.kappa = beta > 0.0
                  ? BoundaryMeasure::from_atoms(s.mesh, {{0, beta}, {n, beta}})
                  : BoundaryMeasure::zero(s.mesh);
    if (w0 > 0.0) s.theta.add_pair(0, n, w0);
    s.forms = assemble_operator(s.kappa, s.theta, s.mesh);
    s.decomp = decompose(s.forms.A, s.forms.M);
    return s;
}

double brute_min_entry(const Matrix& P) {
    double m = P(0, 0);
    for (int i = 0; i < P.rows(); ++i)
        for (int j = 0; j < P.cols(); ++j) m = std::min(m, P(i, j));
    return m;
}

} // namespace

TEST_CASE("positivity check") {
    SUBCASE("Neumann at t = 0.1") {
        const Setup s = robin_setup(64, 0.0, 0.0);
        const SpectralDecomposition dn = decompose(s.forms.K, s.forms.M);
        const Propagator p = propagator(dn, s.forms.M, 0.1);
        const CheckReport r = positivity_check(p, 1e-12);
        CHECK(r.passed);
        CHECK(-r.worst_violation == brute_min_entry(p.P));
        REQUIRE(r.witness.has_value());
        CHECK(p.P(r.witness->i, r.witness->j) == brute_min_entry(p.P));
    }
    SUBCASE("identity at t = 0") {
        const Setup s = robin_setup(16, 1.0, 1.0);
        const CheckReport r =
            positivity_check(propagator(s.decomp, s.forms.M, 0.0), 1e-12);
        CHECK(r.passed);
    }
    SUBCASE("nonlocal configuration over a small grid") {
        const Setup s = robin_setup(64, 1.0, 1.0);
        for (double t : {0.01, 0.1, 1.0}) {
            const CheckReport r =
                positivity_check(propagator(s.decomp, s.forms.M, t), 1e-12);
            CHECK(r.passed);
        }
    }
}

TEST_CASE("submarkov check") {
    SUBCASE("Neumann rows sum to one") {
        const Setup s = robin_setup(32, 0.0, 0.0);
        const SpectralDecomposition dn = decompose(s.forms.K, s.forms.M);
        const CheckReport r =
            submarkov_check(propagator(dn, s.forms.M, 0.5), 1e-12);
        CHECK(r.passed);
        CHECK(r.worst_violation <= 1e-12);
    }
    SUBCASE("Dirichlet loses mass at every interior node") {
        const Mesh mesh = build_interval_mesh(32, 1.0);
        const DirichletOperator dir = dirichlet_operator(mesh);
        const SpectralDecomposition dd = decompose(dir.A, dir.M);
        const Propagator p = zero_extend(propagator(dd, dir.M, 0.2),
                                         dir.interior, mesh.node_count());
        const CheckReport r = submarkov_check(p, 1e-12);
        CHECK(r.passed);
        for (int node : dir.interior) {
            double row = 0.0;
            for (int j = 0; j < p.P.cols(); ++j) row += p.P(node, j);
            CHECK(row < 1.0);
        }
    }
    SUBCASE("nonlocal configuration") {
        const Setup s = robin_setup(64, 1.0, 1.0);
        const CheckReport r =
            submarkov_check(propagator(s.decomp, s.forms.M, 0.5), 1e-12);
        CHECK(r.passed);
    }
}

TEST_CASE("domination check") {
    const Setup s = robin_setup(64, 1.0, 1.0);
    const double t = 0.2;
    const Propagator p_robin = propagator(s.decomp, s.forms.M, t);

    SUBCASE("Dirichlet below nonlocal Robin") {
        const DirichletOperator dir = dirichlet_operator(s.mesh);
        const SpectralDecomposition dd = decompose(dir.A, dir.M);
        const Propagator p_dir = zero_extend(propagator(dd, dir.M, t),
                                             dir.interior, s.mesh.node_count());
        const CheckReport r = domination_check(p_dir, p_robin, 1e-10);
        CHECK(r.passed);
    }
    SUBCASE("self domination has zero violation") {
        const CheckReport r = domination_check(p_robin, p_robin, 0.0);
        CHECK(r.passed);
        CHECK(r.worst_violation == 0.0);
    }
    SUBCASE("effective local below nonlocal") {
        const BoundaryMeasure eff = effective_local_measure(
            s.kappa, marginal_measure(s.theta, s.mesh));
        const FormMatrices local = assemble_operator(eff, JumpMeasure::zero(), s.mesh);
        const SpectralDecomposition dl = decompose(local.A, local.M);
        const CheckReport r =
            domination_check(propagator(dl, local.M, t), p_robin, 1e-10);
        CHECK(r.passed);
    }
    SUBCASE("extra admissible mass stays below as well") {
        // nu = kappa + 2 theta_hat + extra atoms
        BoundaryMeasure nu = effective_local_measure(
            s.kappa, marginal_measure(s.theta, s.mesh));
        nu.add_atom(0, 0.5);
        const FormMatrices heavier = assemble_operator(nu, JumpMeasure::zero(), s.mesh);
        const SpectralDecomposition dh = decompose(heavier.A, heavier.M);
        const CheckReport r =
            domination_check(propagator(dh, heavier.M, t), p_robin, 1e-10);
        CHECK(r.passed);
    }
    SUBCASE("shape mismatch is rejected") {
        const Setup other = robin_setup(16, 1.0, 1.0);
        const Propagator small = propagator(other.decomp, other.forms.M, t);
        CHECK_THROWS_AS(domination_check(small, p_robin, 1e-10),
                        std::invalid_argument);
    }
    SUBCASE("violated ordering is reported with a witness") {
        const Propagator identity = propagator(s.decomp, s.forms.M, 0.0);
        Propagator above = identity;
        above.P.array() += 1e-3;
        const CheckReport r = domination_check(above, identity, 1e-10);
        CHECK(!r.passed);
        CHECK(r.worst_violation == doctest::Approx(1e-3));
        CHECK(r.witness.has_value());
    }
}

TEST_CASE("neumann violation probe") {
    const std::vector<double> grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0};

    SUBCASE("a jump pair breaks the Neumann ordering") {
        const Setup s = robin_setup(64, 0.0, 1.0);
        const CheckReport r =
            neumann_violation_probe(s.kappa, s.theta, s.mesh, grid, 1e-8);
        CHECK(!r.passed); // violation found
        REQUIRE(r.witness.has_value());
        CHECK(r.witness->t == 1e-3); // already violated at the smallest time
        CHECK(r.worst_violation >= 1e-8);

        // the pair entry (p, q) itself is a violating entry at t = 1e-3
        const SpectralDecomposition dn = decompose(s.forms.K, s.forms.M);
        const Matrix p_robin = propagator(s.decomp, s.forms.M, 1e-3).P;
        const Matrix p_neumann = propagator(dn, s.forms.M, 1e-3).P;
        CHECK(p_robin(0, 64) - p_neumann(0, 64) >= 1e-8);

        // frozen references from an independent dense-exponential
        // computation of exp(-t M^{-1}(K+J)) - exp(-t M^{-1}K) at (0, n)
        CHECK(p_robin(0, 64) - p_neumann(0, 64) ==
              doctest::Approx(7.307895245236e-03).epsilon(1e-9));
        const Matrix p_robin_2 = propagator(s.decomp, s.forms.M, 1e-2).P;
        const Matrix p_neumann_2 = propagator(dn, s.forms.M, 1e-2).P;
        CHECK(p_robin_2(0, 64) - p_neumann_2(0, 64) ==
              doctest::Approx(6.325630603643e-03).epsilon(1e-9));
    }
    SUBCASE("the gap matches the first-order rate inside its regime") {
        // t * ||M^{-1} A|| must stay small for the expansion to apply
        const int n = 8;
        const double t = 1e-3, w0 = 1.0;
        const Setup s = robin_setup(n, 0.0, w0);
        const SpectralDecomposition dn = decompose(s.forms.K, s.forms.M);
        const Matrix p_robin = propagator(s.decomp, s.forms.M, t).P;
        const Matrix p_neumann = propagator(dn, s.forms.M, t).P;
        const double gap = p_robin(0, n) - p_neumann(0, n);
        const double predicted = t * w0 / s.forms.M(0);
        CHECK(std::abs(gap - predicted) <= 0.2 * predicted);

        // the full first-order matrix agrees entrywise at this scale
        const Matrix fo = oracles::first_order_propagator(s.forms.A, s.forms.M, t);
        CHECK(std::abs(fo(0, n) - predicted) <= 1e-15);
    }
    SUBCASE("no violation without a jump measure") {
        const Setup s = robin_setup(64, 1.0, 0.0);
        const CheckReport r =
            neumann_violation_probe(s.kappa, s.theta, s.mesh, grid, 1e-8);
        CHECK(r.passed);
    }
    SUBCASE("kappa = theta = 0 gives a zero gap") {
        const Setup s = robin_setup(32, 0.0, 0.0);
        const CheckReport r =
            neumann_violation_probe(s.kappa, s.theta, s.mesh, grid, 1e-12);
        CHECK(r.passed);
        CHECK(r.worst_violation == 0.0);
    }
    SUBCASE("grid validation") {
        const Setup s = robin_setup(16, 1.0, 1.0);
        CHECK_THROWS_AS(
            neumann_violation_probe(s.kappa, s.theta, s.mesh, {}, 1e-8),
            std::invalid_argument);
        CHECK_THROWS_AS(
            neumann_violation_probe(s.kappa, s.theta, s.mesh, {0.0}, 1e-8),
            std::invalid_argument);
    }
}

TEST_CASE("sandwich report bundles") {
    const std::vector<double> grid = {1e-2, 1e-1, 1.0};

    SUBCASE("local configuration: everything passes, Neumann holds") {
        const Setup s = robin_setup(32, 1.0, 0.0);
        const std::vector<CheckReport> reports =
            sandwich_report(s.kappa, s.theta, s.mesh, grid, 1e-10);
        REQUIRE(reports.size() == 4 * grid.size() + 1);
        for (const CheckReport& r : reports) CHECK(r.passed);
    }
    SUBCASE("nonlocal configuration: all pass except Neumann domination") {
        const Setup s = robin_setup(32, 1.0, 1.0);
        const std::vector<CheckReport> reports =
            sandwich_report(s.kappa, s.theta, s.mesh, grid, 1e-10);
        for (std::size_t k = 0; k + 1 < reports.size(); ++k)
            CHECK(reports[k].passed);
        const CheckReport& probe = reports.back();
        CHECK(!probe.passed);
        CHECK(probe.witness.has_value());
    }
    SUBCASE("kappa = theta = 0 degenerates to Dirichlet below Neumann") {
        const Setup s = robin_setup(32, 0.0, 0.0);
        const std::vector<CheckReport> reports =
            sandwich_report(s.kappa, s.theta, s.mesh, grid, 1e-10);
        for (const CheckReport& r : reports) CHECK(r.passed);
    }
}

TEST_CASE("positivity and submarkov hold over the admissible matrix at 1e-12") {
    const std::vector<double> grid = {1e-3, 1e-2, 1e-1, 1.0, 10.0};
    std::vector<Setup> setups;
    setups.push_back(robin_setup(64, 1.0, 0.0));
    setups.push_back(robin_setup(64, 1.0, 1.0));
    {
        Setup s{build_rectangle_mesh(8, 8, 1.0, 1.0), {}, {}, {}, {}};
        s.kappa = BoundaryMeasure::uniform_density(s.mesh, 1.0);
        s.theta.kernel = JumpKernel::constant(1.0);
        s.forms = assemble_operator(s.kappa, s.theta, s.mesh);
        s.decomp = decompose(s.forms.A, s.forms.M);
        setups.push_back(std::move(s));
    }
    for (const Setup& s : setups) {
        for (double t : grid) {
            const Propagator p = propagator(s.decomp, s.forms.M, t);
            CHECK(positivity_check(p, 1e-12).passed);
            CHECK(submarkov_check(p, 1e-12).passed);
        }
    }
}
