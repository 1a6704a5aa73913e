#include <doctest.h>

#include <random>

#include "nlrobin/convergence.hpp"
#include "nlrobin/forms.hpp"

using namespace nlrobin;

namespace {

struct Setup {
    Mesh mesh;
    BoundaryMeasure kappa;
    JumpMeasure theta;
};

Setup full_boundary_1d(int n) {
    Setup s{build_interval_mesh(n, 1.0), {}, {}};
    s.kappa = BoundaryMeasure::from_atoms(s.mesh, {{0, 1.0}, {n, 1.0}});
    s.theta.add_pair(0, n, 1.0);
    return s;
}

} // namespace

TEST_CASE("scaling study converges to the Dirichlet resolvent") {
    const Setup s = full_boundary_1d(64);
    const Vector f = Vector::Ones(65);
    const ConvergenceTable table = resolvent_convergence_study(
        s.kappa, s.theta, {1.0, 10.0, 100.0, 1000.0}, 1.0, f, s.mesh);

    REQUIRE(table.distances.size() == 4);
    for (std::size_t k = 1; k < table.distances.size(); ++k)
        CHECK(table.distances[k] < table.distances[k - 1]);
    CHECK(table.distances.back() <= 0.02 * table.distances.front());

    // quadratic diagnostic squeezed between Dirichlet and Neumann values
    const FormMatrices base = assemble_operator(s.kappa, s.theta, s.mesh);
    const Vector u_neumann = resolvent_apply(base.K, base.M, 1.0, f);
    const double neumann_value = f.dot(base.M.cwiseProduct(u_neumann));
    for (double q : table.quadratic_values) {
        CHECK(q >= table.limit_quadratic_value);
        CHECK(q <= neumann_value + 1e-12);
    }
    CHECK(monotone_form_diagnostic(table).passed);
}

TEST_CASE("scaling zero anchors at the Neumann resolvent") {
    const Setup s = full_boundary_1d(32);
    const Vector f = Vector::Ones(33);
    const ConvergenceTable table = resolvent_convergence_study(
        s.kappa, s.theta, {0.0, 1.0, 10.0}, 1.0, f, s.mesh);

    const FormMatrices base = assemble_operator(s.kappa, s.theta, s.mesh);
    const Vector u_neumann = resolvent_apply(base.K, base.M, 1.0, f);
    const Vector u_dirichlet = [&] {
        const DirichletOperator dir = dirichlet_operator(s.mesh);
        Vector fd(static_cast<int>(dir.interior.size()));
        for (std::size_t k = 0; k < dir.interior.size(); ++k)
            fd(static_cast<int>(k)) = f(dir.interior[k]);
        return dir.zero_extend(resolvent_apply(dir.A, dir.M, 1.0, fd),
                               s.mesh.node_count());
    }();
    CHECK(table.distances.front() ==
          doctest::Approx(m_norm(u_neumann - u_dirichlet, base.M)).epsilon(1e-12));
}

TEST_CASE("zero data gives zero distances") {
    const Setup s = full_boundary_1d(16);
    const ConvergenceTable table = resolvent_convergence_study(
        s.kappa, s.theta, {1.0, 10.0}, 1.0, Vector::Zero(17), s.mesh);
    for (double d : table.distances) CHECK(d == 0.0);
}

TEST_CASE("scaling validation") {
    const Setup s = full_boundary_1d(16);
    const Vector f = Vector::Ones(17);
    CHECK_THROWS_AS(
        resolvent_convergence_study(s.kappa, s.theta, {}, 1.0, f, s.mesh),
        std::invalid_argument);
    CHECK_THROWS_AS(resolvent_convergence_study(s.kappa, s.theta, {1.0, 1.0},
                                                1.0, f, s.mesh),
                    std::invalid_argument);
    CHECK_THROWS_AS(resolvent_convergence_study(s.kappa, s.theta, {-1.0, 1.0},
                                                1.0, f, s.mesh),
                    std::invalid_argument);
}

TEST_CASE("unreachable limits require an explicit node set") {
    const Mesh mesh = build_interval_mesh(16, 1.0);
    const Vector f = Vector::Ones(17);

    SUBCASE("kappa missing one endpoint") {
        const BoundaryMeasure kappa = BoundaryMeasure::from_atoms(mesh, {{0, 1.0}});
        CHECK_THROWS_WITH_AS(
            resolvent_convergence_study(kappa, JumpMeasure::zero(),
                                        {1.0, 10.0}, 1.0, f, mesh),
            doctest::Contains("limit"), std::invalid_argument);

        // explicit mixed limit: Dirichlet at the charged endpoint only
        const ConvergenceTable table = resolvent_convergence_study(
            kappa, JumpMeasure::zero(), {1.0, 10.0, 100.0, 1000.0}, 1.0, f,
            mesh, std::vector<int>{0});
        for (std::size_t k = 1; k < table.distances.size(); ++k)
            CHECK(table.distances[k] < table.distances[k - 1]);
        CHECK(table.distances.back() <= 0.05 * table.distances.front());
    }
    SUBCASE("a bare pair only ties the endpoints together") {
        JumpMeasure pair_only;
        pair_only.add_pair(0, 16, 1.0);
        CHECK_THROWS_AS(
            resolvent_convergence_study(BoundaryMeasure::zero(mesh), pair_only,
                                        {1.0, 10.0}, 1.0, f, mesh),
            std::invalid_argument);
    }
}

TEST_CASE("monotone diagnostic on synthetic tables") {
    ConvergenceTable table;
    table.scalings = {1.0, 1.0, 1.0};
    table.quadratic_values = {0.4, 0.4, 0.4};
    table.limit_quadratic_value = 0.1;
    table.distances = {1.0, 1.0, 1.0};
    table.monotone = {true, true, true};
    CHECK(monotone_form_diagnostic(table).passed);

    ConvergenceTable reversed = table;
    reversed.quadratic_values = {0.2, 0.3, 0.4}; // increasing, as from
                                                 // reversed scalings
    const CheckReport r = monotone_form_diagnostic(reversed);
    CHECK(!r.passed);
    CHECK(r.worst_violation == doctest::Approx(0.1));
}

TEST_CASE("gamma consistency over the configuration matrix") {
    std::mt19937 rng(23u);
    std::normal_distribution<double> gauss;

    std::vector<std::pair<std::string, Setup>> setups;
    {
        Setup s = full_boundary_1d(128);
        setups.emplace_back("1d pair", std::move(s));
        Setup zero{build_interval_mesh(128, 1.0), {}, {}};
        zero.kappa = BoundaryMeasure::from_atoms(zero.mesh, {{0, 1.0}, {128, 1.0}});
        setups.emplace_back("1d zero", std::move(zero));
        Setup kern{build_interval_mesh(128, 1.0), {}, {}};
        kern.kappa = BoundaryMeasure::from_atoms(kern.mesh, {{0, 1.0}, {128, 1.0}});
        kern.theta.kernel = JumpKernel::constant(1.0);
        setups.emplace_back("1d kernel", std::move(kern));
    }
    {
        Setup s{build_rectangle_mesh(8, 8, 1.0, 1.0), {}, {}};
        s.kappa = BoundaryMeasure::uniform_density(s.mesh, 1.0);
        s.theta.add_pair(s.mesh.nearest_boundary_node(0.0),
                         s.mesh.nearest_boundary_node(2.0), 1.0);
        setups.emplace_back("2d pair", std::move(s));
    }

    for (auto& [label, s] : setups) {
        CAPTURE(label);
        Vector f(s.mesh.node_count());
        for (int i = 0; i < f.size(); ++i) f(i) = gauss(rng);
        SUBCASE("random data") {
            const CheckReport r =
                gamma_consistency_check(s.kappa, s.theta, 1.0, f, s.mesh, 1e-8);
            CHECK(r.passed);
        }
    }

    // zero data and a stiff lambda on the first configuration
    const Setup s = full_boundary_1d(128);
    CHECK(gamma_consistency_check(s.kappa, s.theta, 1.0, Vector::Zero(129),
                                  s.mesh, 1e-8)
              .passed);
    Vector f(129);
    for (int i = 0; i < 129; ++i) f(i) = gauss(rng);
    CHECK(gamma_consistency_check(s.kappa, s.theta, 1e3, f, s.mesh, 1e-8).passed);
}
