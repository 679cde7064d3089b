#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "pmtherm/linalg.hpp"
#include "support.hpp"

using namespace pmtherm;
using namespace testing_support;

TEST_CASE("ket rejects non-normalized amplitudes") {
  Vector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(Ket{v}, argument_error);
  CHECK(Ket::normalized(v)[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(Ket::basis(2, 2), argument_error);
}

TEST_CASE("operator flags are validated") {
  Matrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(Operator::hermitian(m), argument_error);
  CHECK_THROWS_AS(Operator::unitary(m), argument_error);
  CHECK_THROWS_AS(Operator::projector(Matrix(2.0 * Matrix::Identity(2, 2))), argument_error);
  CHECK(Operator::projector(Matrix::Identity(2, 2)).asserted_hermitian());
  CHECK(Operator(m).is_hermitian() == false);
}

TEST_CASE("tensor of identities and diagonals") {
  const auto i4 = tensor(Operator::identity(2), Operator::identity(2));
  CHECK(max_abs(i4.matrix() - Matrix::Identity(4, 4)) == 0.0);
  CHECK(i4.asserted_unitary());
  CHECK(i4.asserted_hermitian());

  const auto z = Operator::diagonal({1.0, -1.0});
  const auto zz = tensor(z, z);
  const Matrix expected = Operator::diagonal({1.0, -1.0, -1.0, 1.0}).matrix();
  CHECK(max_abs(zz.matrix() - expected) == 0.0);
}

TEST_CASE("tensor matches the index-loop Kronecker product") {
  std::mt19937_64 g(1);
  const Matrix a = random_matrix(g, 2);
  const Matrix b = random_matrix(g, 3);
  const Matrix k = tensor(Operator(a), Operator(b)).matrix();
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index p = 0; p < 3; ++p)
        for (Index q = 0; q < 3; ++q) CHECK(k(i * 3 + p, j * 3 + q) == a(i, j) * b(p, q));
}

TEST_CASE("tensor beyond max_dim is a capacity error") {
  auto saved = policy();
  auto p = saved;
  p.max_dim = 8;
  set_policy(p);
  CHECK_THROWS_AS(tensor(Operator::identity(4), Operator::identity(4)), capacity_error);
  set_policy(saved);
}

TEST_CASE("partial trace") {
  std::mt19937_64 g(2);
  const composite_space space{{"a", 2}, {"b", 3}};

  SUBCASE("product state") {
    const DensityMatrix ra(random_density(g, 2));
    const DensityMatrix rb(random_density(g, 3));
    const auto red = partial_trace(tensor(ra, rb), space, {"a"});
    CHECK(max_deviation(red.matrix(), ra.matrix()) <= 1e-12);
  }
  SUBCASE("Bell state") {
    const composite_space qq{{"x", 2}, {"y", 2}};
    Vector v = Vector::Zero(4);
    v(0) = v(3) = 1.0;
    const auto rho = DensityMatrix::pure(Ket::normalized(v));
    const auto red = partial_trace(rho, qq, {"x"});
    CHECK(max_deviation(red.matrix(), Matrix(0.5 * Matrix::Identity(2, 2))) <= 1e-15);
  }
  SUBCASE("random pure state against index sums") {
    const auto rho = DensityMatrix::pure(Ket(random_vector(g, 6)));
    CHECK(max_deviation(partial_trace(rho, space, {"b"}).matrix(), trace_first(rho.matrix(), 2, 3)) <= 1e-14);
    CHECK(max_deviation(partial_trace(rho, space, {"a"}).matrix(), trace_second(rho.matrix(), 2, 3)) <= 1e-14);
  }
  SUBCASE("trace weight is preserved") {
    const DensityMatrix rho(Matrix(0.25 * random_density(g, 6)), 0.25);
    CHECK(partial_trace(rho, space, {"a"}).trace_weight() == 0.25);
  }
  SUBCASE("unknown label") {
    const DensityMatrix rho(random_density(g, 6));
    CHECK_THROWS_AS(partial_trace(rho, space, {"zz"}), argument_error);
  }
}

TEST_CASE("partial trace on a three-part space keeps caller-independent order") {
  std::mt19937_64 g(3);
  const composite_space space{{"a", 2}, {"b", 2}, {"c", 3}};
  const DensityMatrix ra(random_density(g, 2)), rb(random_density(g, 2)), rc(random_density(g, 3));
  const auto rho = tensor(tensor(ra, rb), rc);
  const auto ac = partial_trace(rho, space, {"c", "a"});
  CHECK(max_deviation(ac.matrix(), tensor(ra, rc).matrix()) <= 1e-14);
}

TEST_CASE("composite space checks") {
  CHECK_THROWS_AS((composite_space{{"a", 2}, {"a", 3}}), argument_error);
  const composite_space s{{"a", 2}, {"b", 3}, {"c", 4}};
  CHECK(s.total_dim() == 24);
  for (Index f = 0; f < 24; ++f) CHECK(s.flat(s.digits(f)) == f);
}

TEST_CASE("embed places an operator on its targets") {
  std::mt19937_64 g(4);
  const composite_space space{{"a", 2}, {"b", 3}};
  const Matrix m = random_matrix(g, 3);
  CHECK(max_deviation(embed(Operator(m), space, {"b"}).matrix(),
                      kron_loops(Matrix::Identity(2, 2), m)) == 0.0);
  const Matrix m6 = random_matrix(g, 6);
  // Reversed target order swaps the tensor factors.
  const Matrix swapped = embed(Operator(m6), space, {"b", "a"}).matrix();
  for (Index a1 = 0; a1 < 2; ++a1)
    for (Index b1 = 0; b1 < 3; ++b1)
      for (Index a2 = 0; a2 < 2; ++a2)
        for (Index b2 = 0; b2 < 3; ++b2)
          CHECK(swapped(a1 * 3 + b1, a2 * 3 + b2) == m6(b1 * 2 + a1, b2 * 2 + a2));
}

TEST_CASE("evolve") {
  Matrix sx(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  const Operator hx = Operator::hermitian(sx);

  SUBCASE("zero duration is the identity") {
    const Ket k = Ket::basis(2, 0);
    CHECK(max_abs(evolve(k, hx, 0.0).amplitudes() - k.amplitudes()) == 0.0);
  }
  SUBCASE("sigma_x for pi/2 flips the qubit") {
    const Ket out = evolve(Ket::basis(2, 0), hx, std::numbers::pi / 2);
    CHECK(std::abs(out[0]) <= 1e-15);
    CHECK(std::abs(std::abs(out[1]) - 1.0) <= 1e-15);
  }
  SUBCASE("trace and composition") {
    std::mt19937_64 g(5);
    const Operator h = Operator::hermitian(random_hermitian(g, 5));
    const DensityMatrix rho(random_density(g, 5));
    const auto a = evolve(evolve(rho, h, 0.3), h, 0.4);
    const auto b = evolve(rho, h, 0.7);
    CHECK(max_deviation(a.matrix(), b.matrix()) <= 1e-10);
    CHECK(std::abs(a.matrix().trace().real() - 1.0) <= 1e-12);
  }
  SUBCASE("non-hermitian generator") {
    Matrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(evolve(Ket::basis(2, 0), Operator(m), 1.0), argument_error);
  }
}

TEST_CASE("propagator matches the Taylor series oracle") {
  std::mt19937_64 g(6);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 1 + trial % 8;
    const Matrix h = random_hermitian(g, n);
    const double t = std::uniform_real_distribution<double>(0.0, 1.0)(g);
    const Operator u = propagator(Operator::hermitian(h), t);
    CHECK(max_deviation(u.matrix(), series_propagator(h, t)) <= 1e-10);
    CHECK(u.asserted_unitary());
  }
}

TEST_CASE("expectation") {
  std::mt19937_64 g(7);
  const DensityMatrix rho(random_density(g, 4));
  CHECK(expectation(Operator::identity(4), rho) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expectation(Operator::diagonal({1.0, -1.0}), DensityMatrix::maximally_mixed(2)) == 0.0);

  const Operator obs = Operator::hermitian(random_hermitian(g, 4));
  const double sigma = 1.0;
  const double lhs = expectation(obs.scaled(std::exp(sigma)), rho.scaled(std::exp(-sigma)));
  CHECK(std::abs(lhs - expectation(obs, rho)) <= 1e-12);

  CHECK_THROWS_AS(expectation(Operator(random_matrix(g, 4)), rho), argument_error);
}

TEST_CASE("density matrix validation") {
  Matrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, argument_error);
  Matrix half(2, 2);
  half << 0.25, 0.0, 0.0, 0.25;
  CHECK_THROWS_AS(DensityMatrix(half, 1.0), argument_error);
  CHECK(DensityMatrix(half, 0.5).trace_weight() == 0.5);
  // Weights above one belong to ensembles redefined by negative sigma.
  CHECK(DensityMatrix::maximally_mixed(2).scaled(std::exp(1.0)).trace_weight() ==
        doctest::Approx(std::exp(1.0)));
}
