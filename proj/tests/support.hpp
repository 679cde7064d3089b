#pragma once

// Random inputs and independent reference computations for the tests.

#include <cmath>
#include <complex>
#include <random>

#include "pmtherm/linalg.hpp"

namespace testing_support {

using pmtherm::Index;
using pmtherm::Matrix;
using pmtherm::Vector;
using cd = std::complex<double>;

inline Matrix random_matrix(std::mt19937_64& g, Index n) {
  std::normal_distribution<double> d;
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = cd(d(g), d(g));
  return m;
}

inline Matrix random_hermitian(std::mt19937_64& g, Index n) {
  const Matrix a = random_matrix(g, n);
  return (a + a.adjoint()) * 0.5;
}

inline Vector random_vector(std::mt19937_64& g, Index n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = cd(d(g), d(g));
  return v / v.norm();
}

/// Full-rank mixed state with unit trace.
inline Matrix random_density(std::mt19937_64& g, Index n) {
  const Matrix a = random_matrix(g, n);
  Matrix r = a * a.adjoint();
  return r / r.trace().real();
}

/// Unitary from QR of a Gaussian matrix.
inline Matrix random_unitary(std::mt19937_64& g, Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(g, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// exp(-i h t) from the Taylor series, summed with repeated squaring.
inline Matrix series_propagator(const Matrix& h, double t, int terms = 50) {
  const int squarings = 6;
  const Matrix a = h * cd(0.0, -t / std::pow(2.0, squarings));
  Matrix sum = Matrix::Identity(h.rows(), h.cols());
  Matrix term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Kronecker product by explicit index loops.
inline Matrix kron_loops(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Trace over the first factor of a (da x db) bipartite matrix.
inline Matrix trace_first(const Matrix& rho, Index da, Index db) {
  Matrix out = Matrix::Zero(db, db);
  for (Index i = 0; i < da; ++i)
    for (Index k = 0; k < db; ++k)
      for (Index l = 0; l < db; ++l) out(k, l) += rho(i * db + k, i * db + l);
  return out;
}

/// Trace over the second factor.
inline Matrix trace_second(const Matrix& rho, Index da, Index db) {
  Matrix out = Matrix::Zero(da, da);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      for (Index k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
  return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
