#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "pmtherm/measurement.hpp"
#include "pmtherm/random.hpp"
#include "support.hpp"

using namespace pmtherm;
using namespace testing_support;

TEST_CASE("pointer momentum generates exact grid translations") {
  for (Index n : {3, 4, 5, 8}) {
    const pointer_model m(n, 1.0, 1.0, 0.5);
    CHECK(m.momentum().is_hermitian());
    for (int s = -3; s <= 3; ++s) {
      const Matrix u = propagator(m.momentum(), s * m.step()).matrix();
      for (Index k = 0; k < n; ++k) {
        const Index to = ((k + s) % n + n) % n;
        CHECK(std::abs(std::abs(u(to, k)) - 1.0) <= 1e-12);
      }
    }
  }
  CHECK(pointer_model(4, 1.0, 1.0).positions() == std::vector<double>{-2.0, -1.0, 0.0, 1.0});
  CHECK_THROWS_AS(pointer_model(0, 1.0, 1.0), argument_error);
  CHECK_THROWS_AS(pointer_model(4, 0.0, 1.0), argument_error);
}

TEST_CASE("von Neumann hamiltonian") {
  const pointer_model m(8, 1.0, 1.0);
  CHECK(max_abs(von_neumann_hamiltonian(Operator::zero(2), m).matrix()) == 0.0);
  CHECK(max_abs(von_neumann_hamiltonian(Operator::identity(2), m).matrix() +
                kron_loops(Matrix::Identity(2, 2), m.momentum().matrix())) == 0.0);
  const Operator z = Operator::diagonal({1.0, -1.0});
  const pointer_model m2(8, 0.75, 1.0);
  CHECK(max_abs(von_neumann_hamiltonian(z, m2).matrix() +
                0.75 * kron_loops(z.matrix(), m2.momentum().matrix())) <= 1e-15);
  CHECK_THROWS_AS(von_neumann_hamiltonian(Operator(Matrix(Matrix::Ones(2, 2) * cd(0, 1))), m),
                  argument_error);
}

TEST_CASE("entangle_pointer") {
  const Operator z = Operator::diagonal({1.0, -1.0});
  const pointer_model m(6, 1.0, 1.0);
  const Ket ready = m.ready_state();

  SUBCASE("single branch") {
    const Ket out = entangle_pointer(Ket::basis(2, 0), ready, z, m);
    // Eigenvalue +1 moves the pointer to -1 (one grid point below the origin).
    const Index k = m.origin_index() - 1;
    CHECK(std::abs(std::abs(out[0 * 6 + k]) - 1.0) <= 1e-12);
  }
  SUBCASE("equal superposition against a composite exponential") {
    Vector c(2);
    c << 1.0, 1.0;
    const Ket sys = Ket::normalized(c);
    const Ket out = entangle_pointer(sys, ready, z, m);
    const Matrix u = series_propagator(von_neumann_hamiltonian(z, m).matrix(), m.duration());
    const Vector oracle = u * tensor(sys, ready).amplitudes();
    CHECK(max_abs(Matrix(out.amplitudes() - oracle)) <= 1e-10);
    CHECK(std::abs(std::abs(out[0 * 6 + 2]) - 1.0 / std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(std::abs(out[1 * 6 + 4]) - 1.0 / std::sqrt(2.0)) <= 1e-12);
    const composite_space space{{"s", 2}, {"p", 6}};
    const auto red = partial_trace(DensityMatrix::pure(out), space, {"s"});
    CHECK(max_deviation(red.matrix(), Matrix(0.5 * Matrix::Identity(2, 2))) <= 1e-12);
  }
  SUBCASE("degenerate observable shifts globally") {
    const Operator two = Operator::diagonal({2.0, 2.0});
    Vector c(2);
    c << 0.6, 0.8;
    const Ket out = entangle_pointer(Ket(c), ready, two, m);
    const composite_space space{{"s", 2}, {"p", 6}};
    const auto red = partial_trace(DensityMatrix::pure(out), space, {"s"});
    CHECK(std::abs(red.purity() - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(out[0 * 6 + 1]) - 0.6) <= 1e-12);
  }
  SUBCASE("incommensurate shift") {
    const pointer_model odd(6, 0.3, 1.0);
    CHECK_THROWS_AS(entangle_pointer(Ket::basis(2, 0), odd.ready_state(), z, odd),
                    commensurability_error);
  }
  SUBCASE("pointer not at the origin") {
    CHECK_THROWS_AS(entangle_pointer(Ket::basis(2, 0), Ket::basis(6, 0), z, m), precondition_error);
  }
}

TEST_CASE("nonselective measurement") {
  std::mt19937_64 g(21);
  SUBCASE("fixed point and symmetry") {
    const auto z = projector_set::computational(2);
    CHECK(max_deviation(nonselective_measure(DensityMatrix::pure(Ket::basis(2, 1)), z).matrix(),
                        DensityMatrix::pure(Ket::basis(2, 1)).matrix()) == 0.0);
    Vector v(2);
    v << 1.0, 1.0;
    CHECK(max_deviation(nonselective_measure(DensityMatrix::pure(Ket::normalized(v)), z).matrix(),
                        Matrix(0.5 * Matrix::Identity(2, 2))) <= 1e-15);
  }
  SUBCASE("qutrit in a rotated basis") {
    const Matrix u = random_unitary(g, 3);
    std::vector<Operator> ps;
    for (Index k = 0; k < 3; ++k) ps.push_back(Operator::projector(Matrix(u.col(k) * u.col(k).adjoint())));
    const projector_set set(ps, {"a", "b", "c"});
    const DensityMatrix rho(random_density(g, 3));
    const Matrix out = u.adjoint() * nonselective_measure(rho, set).matrix() * u;
    const Matrix in = u.adjoint() * rho.matrix() * u;
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j)
        CHECK(std::abs(out(i, j) - (i == j ? in(i, i) : cd(0.0))) <= 1e-14);
  }
}

TEST_CASE("event_read") {
  SUBCASE("Born frequencies") {
    const DensityMatrix rho(Matrix(Operator::diagonal({0.3, 0.7}).matrix()));
    const auto z = projector_set::computational(2);
    const int n = 1000000;
    int ones = 0;
    for (int k = 0; k < n; ++k) ones += event_read(rho, z, rng::derive(5, 0, k), {}, "S", "M").outcome == 1;
    const double f = double(ones) / n;
    CHECK(std::abs(f - 0.7) <= 4.0 * std::sqrt(0.21 / n));
  }
  SUBCASE("eigenstate input") {
    const auto r = event_read(DensityMatrix::pure(Ket::basis(3, 2)), projector_set::computational(3), 9, {},
                              "S", "M");
    CHECK(r.outcome == 2);
    CHECK(r.probability == 1.0);
    CHECK(r.sigma == 0.0);
    CHECK(r.ledger.all_zero());
    CHECK(r.ledger.entries()[0].cause == entropy_cause::none);
  }
  SUBCASE("generic two-outcome read") {
    const auto r = event_read(DensityMatrix::maximally_mixed(2), projector_set::computational(2), 4, {},
                              "S", "M");
    CHECK(r.ledger.total("M") == 1.0);
    CHECK(r.ledger.total("S") == -1.0);
    CHECK(r.ledger.grand_total() == 0.0);
    CHECK(r.collapsed.purity() == doctest::Approx(1.0));
  }
  SUBCASE("coherent input is refused") {
    Vector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(event_read(DensityMatrix::pure(Ket::normalized(v)), projector_set::computational(2), 1, {},
                               "S", "M"),
                    precondition_error);
  }
  SUBCASE("negligible outcomes") {
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1.0;
    Matrix q = Matrix::Zero(2, 2);
    q(1, 1) = 1.0;
    const projector_set set({Operator::projector(p), Operator::projector(q)}, {"0", "1"});
    Matrix tiny = Matrix::Zero(2, 2);
    tiny(0, 0) = 1e-20;
    tiny(1, 1) = 1e-20;
    CHECK_THROWS_AS(event_read(DensityMatrix(tiny, 2e-20), set, 1, {}, "S", "M"),
                    degenerate_distribution_error);
  }
  SUBCASE("ledger conservation over a sequence") {
    entropy_ledger l;
    for (int k = 0; k < 10; ++k)
      l = event_read(DensityMatrix::maximally_mixed(4), projector_set::computational(4), k, l, "S",
                     k % 2 ? "M" : "experimenter")
              .ledger;
    CHECK(l.grand_total() == 0.0);
    CHECK(l.total("S") == -10.0);
  }
}

TEST_CASE("inverse-CDF ties resolve to the lower index") {
  const std::vector<double> p{0.25, 0.25, 0.5};
  CHECK(rng::pick(p, 0.25) == 0);
  CHECK(rng::pick(p, 0.5) == 1);
  CHECK(rng::pick(p, 0.0) == 0);
  const std::vector<double> gap{0.5, 0.0, 0.5};
  CHECK(rng::pick(gap, 0.5) == 0);
  CHECK(rng::pick(gap, 0.75) == 2);
}

TEST_CASE("truncated relaxation channels lose trace") {
  std::mt19937_64 g(22);
  const DensityMatrix rho(random_density(g, 5));
  const auto d = truncate_direct(rho);
  CHECK(d.trace_deficit == 1.0);
  CHECK(max_abs(d.output) == 0.0);
  const auto s = truncate_statistical(rho);
  CHECK(s.trace_deficit == 1.0 - std::exp(-1.0));
  CHECK(std::abs(s.output.trace().real() - std::exp(-1.0)) <= 1e-15);
  const auto ch = statistical_channel(rho, projector_set::computational(5), 1.0);
  CHECK(std::abs(ch.matrix().trace().real() - 1.0) <= 1e-14);
}

TEST_CASE("system redefinition and relative entropy") {
  std::mt19937_64 g(23);
  const DensityMatrix rho(random_density(g, 4));
  const Operator obs = Operator::hermitian(random_hermitian(g, 4));

  const auto same = redefine_system(rho, {obs}, 0.0);
  CHECK(max_deviation(same.rho_star.matrix(), rho.matrix()) == 0.0);
  const auto red = redefine_system(rho, {obs}, 1.0);
  CHECK(red.rho_star.trace_weight() == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(std::abs(expectation(red.observables_star[0], red.rho_star) - expectation(obs, rho)) <= 1e-12);

  CHECK(std::abs(generalized_relative_entropy(rho, rho)) <= 1e-12);
  CHECK(std::abs(generalized_relative_entropy(rho, rho.scaled(std::exp(-1.0))) - 1.0) <= 1e-10);
  CHECK(std::abs(generalized_relative_entropy(rho, rho.scaled(std::exp(1.0))) + 1.0) <= 1e-10);
  CHECK_THROWS_AS(generalized_relative_entropy(DensityMatrix::maximally_mixed(2),
                                               DensityMatrix::pure(Ket::basis(2, 0))),
                  domain_error);
}

TEST_CASE("work of an event reading") {
  CHECK(work_event_reading(1.0, 1.0) == 1.0);
  CHECK(work_event_reading(1.0, 0.0) == 0.0);
  CHECK(work_event_reading(2.0, 1.0) == 2.0);
  CHECK_THROWS_AS(work_event_reading(0.0, 1.0), argument_error);
}

TEST_CASE("phase equivalence trigger") {
  std::mt19937_64 g(24);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const std::vector<double> meter{2.0, 1.0, 0.0, -1.0, -2.0};
  for (int trial = 0; trial < 100; ++trial) {
    const Ket c(random_vector(g, 5));
    const std::vector<phase_displacement> br{{u(g), "a"}, {u(g), "b"}};
    CHECK(phase_equivalence_trigger(br, meter, c));
    const Ket t0 = trigger_state(c, meter, br[0].displacement);
    const Ket t1 = trigger_state(c, meter, br[1].displacement);
    for (Index n = 0; n < 5; ++n) CHECK(std::abs(std::norm(t0[n]) - std::norm(t1[n])) <= 1e-14);
  }
  CHECK(phase_equivalence_trigger({{0.3, "only"}}, meter, Ket(random_vector(g, 5))));
}
