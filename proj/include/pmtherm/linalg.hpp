#pragma once

// Dense complex linear algebra over small Hilbert spaces.
//
// All value types are immutable after construction and templated on the real
// scalar type. The double-precision aliases at the bottom are what the rest of
// the library uses.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "pmtherm/errors.hpp"
#include "pmtherm/numeric_policy.hpp"

namespace pmtherm {

using Index = Eigen::Index;

template <typename Real>
using cmatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using cvector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using rvector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Tri-state property flag on an operator.
enum class flag : std::uint8_t { unchecked, yes, no };

struct operator_flags {
  flag hermitian = flag::unchecked;
  flag unitary = flag::unchecked;
  flag projector = flag::unchecked;
};

namespace detail {

struct trusted_tag {};

inline void check_dim(Index dim, const char* what) {
  if (dim <= 0) throw argument_error(fmt::format("{}: dimension must be positive", what));
  if (static_cast<std::size_t>(dim) > policy().max_dim)
    throw capacity_error(
        fmt::format("{}: dimension {} exceeds max_dim {}", what, dim, policy().max_dim));
}

template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Real>
Real hermitian_defect(const cmatrix<Real>& m) {
  return max_abs(cmatrix<Real>(m - m.adjoint()));
}

template <typename Real>
Real unitary_defect(const cmatrix<Real>& m) {
  return max_abs(cmatrix<Real>(m.adjoint() * m - cmatrix<Real>::Identity(m.rows(), m.cols())));
}

template <typename Real>
Real idempotence_defect(const cmatrix<Real>& m) {
  return max_abs(cmatrix<Real>(m * m - m));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ket

/// Normalized state vector. Subnormalized states live in basic_density_matrix.
template <typename Real>
class basic_ket {
 public:
  explicit basic_ket(cvector<Real> amplitudes) : amps_(std::move(amplitudes)) {
    detail::check_dim(amps_.size(), "ket");
    const Real n2 = amps_.squaredNorm();
    if (std::abs(n2 - Real(1)) > Real(policy().norm_tol))
      throw argument_error(fmt::format("ket: squared norm {} is not 1", static_cast<double>(n2)));
  }

  static basic_ket basis(Index dim, Index k) {
    if (k < 0 || k >= dim) throw argument_error("ket: basis index out of range");
    cvector<Real> v = cvector<Real>::Zero(dim);
    v(k) = Real(1);
    return basic_ket(std::move(v));
  }

  /// Normalizes `v` before construction; zero vectors are rejected.
  static basic_ket normalized(cvector<Real> v) {
    const Real n = v.norm();
    if (!(n > Real(0))) throw argument_error("ket: cannot normalize a zero vector");
    v /= n;
    return basic_ket(std::move(v));
  }

  Index dim() const noexcept { return amps_.size(); }
  const cvector<Real>& amplitudes() const noexcept { return amps_; }
  std::complex<Real> operator[](Index k) const { return amps_(k); }

 private:
  cvector<Real> amps_;
};

// ---------------------------------------------------------------------------
// Operator

template <typename Real>
class basic_operator {
 public:
  /// Validates every flag asserted as `yes`. Flags set to `no` are recorded
  /// without a check.
  explicit basic_operator(cmatrix<Real> m, operator_flags f = {})
      : m_(std::move(m)), flags_(f) {
    if (m_.rows() != m_.cols()) throw argument_error("operator: matrix must be square");
    detail::check_dim(m_.rows(), "operator");
    const auto& pol = policy();
    if (flags_.projector == flag::yes && flags_.hermitian == flag::unchecked)
      flags_.hermitian = flag::yes;
    if (flags_.hermitian == flag::yes &&
        detail::hermitian_defect<Real>(m_) > Real(pol.hermitian_tol))
      throw argument_error("operator: asserted hermitian but is not");
    if (flags_.unitary == flag::yes && detail::unitary_defect<Real>(m_) > Real(pol.unitary_tol))
      throw argument_error("operator: asserted unitary but is not");
    if (flags_.projector == flag::yes &&
        detail::idempotence_defect<Real>(m_) > Real(pol.projector_tol))
      throw argument_error("operator: asserted projector but M^2 != M");
  }

  basic_operator(detail::trusted_tag, cmatrix<Real> m, operator_flags f)
      : m_(std::move(m)), flags_(f) {}

  static basic_operator identity(Index dim) {
    detail::check_dim(dim, "operator");
    return {detail::trusted_tag{}, cmatrix<Real>::Identity(dim, dim),
            {flag::yes, flag::yes, flag::yes}};
  }
  static basic_operator zero(Index dim) {
    detail::check_dim(dim, "operator");
    return {detail::trusted_tag{}, cmatrix<Real>::Zero(dim, dim),
            {flag::yes, flag::unchecked, flag::yes}};
  }
  static basic_operator hermitian(cmatrix<Real> m) {
    return basic_operator(std::move(m), {flag::yes, flag::unchecked, flag::unchecked});
  }
  static basic_operator unitary(cmatrix<Real> m) {
    return basic_operator(std::move(m), {flag::unchecked, flag::yes, flag::unchecked});
  }
  static basic_operator projector(cmatrix<Real> m) {
    return basic_operator(std::move(m), {flag::yes, flag::unchecked, flag::yes});
  }
  /// Real diagonal matrix, asserted hermitian.
  static basic_operator diagonal(const std::vector<Real>& d) {
    cvector<Real> v(static_cast<Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Index>(i)) = d[i];
    return hermitian(v.asDiagonal());
  }

  Index dim() const noexcept { return m_.rows(); }
  const cmatrix<Real>& matrix() const noexcept { return m_; }
  const operator_flags& flags() const noexcept { return flags_; }

  bool asserted_hermitian() const noexcept { return flags_.hermitian == flag::yes; }
  bool asserted_unitary() const noexcept { return flags_.unitary == flag::yes; }
  bool asserted_projector() const noexcept { return flags_.projector == flag::yes; }

  /// Numerical hermiticity test, independent of the stored flag.
  bool is_hermitian() const {
    return asserted_hermitian() ||
           detail::hermitian_defect<Real>(m_) <= Real(policy().hermitian_tol);
  }

  basic_operator adjoint() const {
    operator_flags f = flags_;
    return {detail::trusted_tag{}, m_.adjoint(), f};
  }

  /// Real multiple; hermiticity survives, unitarity/projector do not in general.
  basic_operator scaled(Real s) const {
    return {detail::trusted_tag{}, cmatrix<Real>(s * m_),
            {flags_.hermitian, flag::unchecked, flag::unchecked}};
  }

 private:
  cmatrix<Real> m_;
  operator_flags flags_;
};

template <typename Real>
basic_operator<Real> operator*(const basic_operator<Real>& a, const basic_operator<Real>& b) {
  if (a.dim() != b.dim()) throw argument_error("operator product: dimension mismatch");
  const flag u = (a.asserted_unitary() && b.asserted_unitary()) ? flag::yes : flag::unchecked;
  return {detail::trusted_tag{}, cmatrix<Real>(a.matrix() * b.matrix()),
          {flag::unchecked, u, flag::unchecked}};
}

// ---------------------------------------------------------------------------
// Density matrix

/// Hermitian, positive semidefinite matrix with a declared trace weight.
///
/// trace_weight is 1 for ordinary ensembles and e^{-sigma} for ensembles
/// redefined by an entropy production sigma. Negative sigma (the measured
/// side of an event reading) yields weights above 1, so any positive finite
/// weight is accepted.
template <typename Real>
class basic_density_matrix {
 public:
  explicit basic_density_matrix(cmatrix<Real> m) : m_(std::move(m)) {
    weight_ = m_.trace().real();
    validate();
  }

  basic_density_matrix(cmatrix<Real> m, Real trace_weight)
      : m_(std::move(m)), weight_(trace_weight) {
    validate();
  }

  /// Skips the eigenvalue check. For results of maps that preserve positivity
  /// by construction (unitary conjugation, projector sums, partial traces).
  basic_density_matrix(detail::trusted_tag, cmatrix<Real> m, Real trace_weight)
      : m_(std::move(m)), weight_(trace_weight) {
    m_ = (m_ + m_.adjoint()).eval() * Real(0.5);
  }

  static basic_density_matrix pure(const basic_ket<Real>& psi) {
    const auto& a = psi.amplitudes();
    return {detail::trusted_tag{}, cmatrix<Real>(a * a.adjoint()), Real(1)};
  }

  static basic_density_matrix maximally_mixed(Index dim) {
    detail::check_dim(dim, "density matrix");
    return {detail::trusted_tag{}, cmatrix<Real>(cmatrix<Real>::Identity(dim, dim) / Real(dim)),
            Real(1)};
  }

  Index dim() const noexcept { return m_.rows(); }
  const cmatrix<Real>& matrix() const noexcept { return m_; }
  Real trace_weight() const noexcept { return weight_; }

  /// tr(rho^2) / trace_weight^2.
  Real purity() const {
    return (m_ * m_).trace().real() / (weight_ * weight_);
  }

  /// Same ensemble rescaled to unit weight.
  basic_density_matrix normalized() const {
    return {detail::trusted_tag{}, cmatrix<Real>(m_ / weight_), Real(1)};
  }

  /// Multiply by a positive constant; the declared weight scales with it.
  basic_density_matrix scaled(Real factor) const {
    if (!(factor > Real(0)) || !std::isfinite(static_cast<double>(factor)))
      throw argument_error("density matrix: scale factor must be positive and finite");
    return {detail::trusted_tag{}, cmatrix<Real>(factor * m_), factor * weight_};
  }

 private:
  void validate() {
    if (m_.rows() != m_.cols()) throw argument_error("density matrix: must be square");
    detail::check_dim(m_.rows(), "density matrix");
    const auto& pol = policy();
    if (!(weight_ > Real(0)) || !std::isfinite(static_cast<double>(weight_)))
      throw argument_error("density matrix: trace weight must be positive and finite");
    if (detail::hermitian_defect<Real>(m_) > Real(pol.hermitian_tol))
      throw argument_error("density matrix: not hermitian");
    if (std::abs(m_.trace().real() - weight_) > Real(pol.trace_tol))
      throw argument_error("density matrix: trace does not match trace weight");
    const cmatrix<Real> h = (m_ + m_.adjoint()) * Real(0.5);
    Eigen::SelfAdjointEigenSolver<cmatrix<Real>> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < Real(pol.eigenvalue_floor))
      throw argument_error("density matrix: negative eigenvalue");
    m_ = h;
  }

  cmatrix<Real> m_;
  Real weight_{1};
};

// ---------------------------------------------------------------------------
// Composite space

struct subsystem {
  std::string label;
  Index dim;
};

/// Ordered tensor-product layout. Subsystem order is fixed at construction
/// and index 0 is the most significant factor.
class composite_space {
 public:
  composite_space(std::initializer_list<subsystem> parts)
      : composite_space(std::vector<subsystem>(parts)) {}

  explicit composite_space(std::vector<subsystem> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw argument_error("composite space: no subsystems");
    std::set<std::string> seen;
    std::size_t total = 1;
    for (const auto& p : parts_) {
      if (p.dim <= 0) throw argument_error("composite space: subsystem dims must be positive");
      if (!seen.insert(p.label).second)
        throw argument_error(fmt::format("composite space: duplicate label '{}'", p.label));
      total *= static_cast<std::size_t>(p.dim);
      if (total > policy().max_dim)
        throw capacity_error(fmt::format("composite space: total dimension exceeds {}",
                                         policy().max_dim));
    }
    total_ = static_cast<Index>(total);
  }

  const std::vector<subsystem>& subsystems() const noexcept { return parts_; }
  Index total_dim() const noexcept { return total_; }
  std::size_t size() const noexcept { return parts_.size(); }

  std::size_t position(const std::string& label) const {
    for (std::size_t i = 0; i < parts_.size(); ++i)
      if (parts_[i].label == label) return i;
    throw argument_error(fmt::format("composite space: unknown label '{}'", label));
  }

  Index dim_of(const std::string& label) const { return parts_[position(label)].dim; }

  /// Row-major digits of a flat index, one per subsystem.
  std::vector<Index> digits(Index flat) const {
    std::vector<Index> d(parts_.size());
    for (std::size_t i = parts_.size(); i-- > 0;) {
      d[i] = flat % parts_[i].dim;
      flat /= parts_[i].dim;
    }
    return d;
  }

  Index flat(const std::vector<Index>& digits) const {
    Index f = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) f = f * parts_[i].dim + digits[i];
    return f;
  }

 private:
  std::vector<subsystem> parts_;
  Index total_ = 1;
};

// ---------------------------------------------------------------------------
// Operations

namespace detail {

inline void check_product_dim(Index a, Index b) {
  const auto total = static_cast<std::size_t>(a) * static_cast<std::size_t>(b);
  if (total > policy().max_dim)
    throw capacity_error(
        fmt::format("tensor: dimension {} exceeds max_dim {}", total, policy().max_dim));
}

template <typename Real>
cmatrix<Real> kron(const cmatrix<Real>& a, const cmatrix<Real>& b) {
  cmatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// For each flat index of `space`: (index within kept factors, index within
/// the rest), with both sub-indices in subsystem order.
struct split_map {
  Index kept_dim = 1;
  Index rest_dim = 1;
  std::vector<Index> kept;
  std::vector<Index> rest;
};

inline split_map split(const composite_space& space, const std::vector<bool>& is_kept) {
  split_map s;
  for (std::size_t i = 0; i < space.size(); ++i)
    (is_kept[i] ? s.kept_dim : s.rest_dim) *= space.subsystems()[i].dim;
  const Index n = space.total_dim();
  s.kept.resize(static_cast<std::size_t>(n));
  s.rest.resize(static_cast<std::size_t>(n));
  for (Index f = 0; f < n; ++f) {
    const auto d = space.digits(f);
    Index k = 0, r = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Index dim = space.subsystems()[i].dim;
      if (is_kept[i])
        k = k * dim + d[i];
      else
        r = r * dim + d[i];
    }
    s.kept[static_cast<std::size_t>(f)] = k;
    s.rest[static_cast<std::size_t>(f)] = r;
  }
  return s;
}

template <typename Labels>
std::vector<bool> mask_of(const composite_space& space, const Labels& labels) {
  std::vector<bool> m(space.size(), false);
  for (const auto& l : labels) m[space.position(l)] = true;
  return m;
}

}  // namespace detail

/// Kronecker product a (x) b, most significant factor first.
template <typename Real>
basic_operator<Real> tensor(const basic_operator<Real>& a, const basic_operator<Real>& b) {
  detail::check_product_dim(a.dim(), b.dim());
  operator_flags f;
  if (a.asserted_hermitian() && b.asserted_hermitian()) f.hermitian = flag::yes;
  if (a.asserted_unitary() && b.asserted_unitary()) f.unitary = flag::yes;
  if (a.asserted_projector() && b.asserted_projector()) f.projector = flag::yes;
  return {detail::trusted_tag{}, detail::kron<Real>(a.matrix(), b.matrix()), f};
}

template <typename Real>
basic_density_matrix<Real> tensor(const basic_density_matrix<Real>& a,
                                  const basic_density_matrix<Real>& b) {
  detail::check_product_dim(a.dim(), b.dim());
  return {detail::trusted_tag{}, detail::kron<Real>(a.matrix(), b.matrix()),
          a.trace_weight() * b.trace_weight()};
}

template <typename Real>
basic_ket<Real> tensor(const basic_ket<Real>& a, const basic_ket<Real>& b) {
  detail::check_product_dim(a.dim(), b.dim());
  cvector<Real> out(a.dim() * b.dim());
  for (Index i = 0; i < a.dim(); ++i) out.segment(i * b.dim(), b.dim()) = a[i] * b.amplitudes();
  return basic_ket<Real>(std::move(out));
}

/// Tensor product of a list, left to right.
template <typename T>
T tensor_all(const std::vector<T>& factors) {
  if (factors.empty()) throw argument_error("tensor_all: empty list");
  T acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor(acc, factors[i]);
  return acc;
}

/// Reduced state on the subsystems named in `keep`, ordered as in `space`.
template <typename Real, typename Labels = std::set<std::string>>
basic_density_matrix<Real> partial_trace(const basic_density_matrix<Real>& rho,
                                         const composite_space& space, const Labels& keep) {
  if (rho.dim() != space.total_dim())
    throw argument_error("partial_trace: state dimension does not match space");
  if (std::empty(keep)) throw argument_error("partial_trace: keep set is empty");
  const auto s = detail::split(space, detail::mask_of(space, keep));
  // index[k][r] = flat index
  std::vector<Index> index(static_cast<std::size_t>(s.kept_dim * s.rest_dim));
  for (Index f = 0; f < space.total_dim(); ++f)
    index[static_cast<std::size_t>(s.kept[f] * s.rest_dim + s.rest[f])] = f;
  const auto& m = rho.matrix();
  cmatrix<Real> out = cmatrix<Real>::Zero(s.kept_dim, s.kept_dim);
  for (Index i = 0; i < s.kept_dim; ++i)
    for (Index j = 0; j < s.kept_dim; ++j) {
      std::complex<Real> acc{};
      for (Index r = 0; r < s.rest_dim; ++r)
        acc += m(index[static_cast<std::size_t>(i * s.rest_dim + r)],
                 index[static_cast<std::size_t>(j * s.rest_dim + r)]);
      out(i, j) = acc;
    }
  return {detail::trusted_tag{}, std::move(out), rho.trace_weight()};
}

template <typename Real>
basic_density_matrix<Real> partial_trace(const basic_density_matrix<Real>& rho,
                                         const composite_space& space,
                                         std::initializer_list<std::string> keep) {
  return partial_trace(rho, space, std::vector<std::string>(keep));
}

/// Lift `op`, acting on `targets` (in the given order), to the full space.
template <typename Real>
basic_operator<Real> embed(const basic_operator<Real>& op, const composite_space& space,
                           const std::vector<std::string>& targets) {
  std::vector<std::size_t> pos;
  Index tdim = 1;
  std::vector<bool> mask(space.size(), false);
  for (const auto& t : targets) {
    const auto p = space.position(t);
    if (mask[p]) throw argument_error("embed: repeated target label");
    mask[p] = true;
    pos.push_back(p);
    tdim *= space.subsystems()[p].dim;
  }
  if (tdim != op.dim()) throw argument_error("embed: operator dimension does not match targets");
  const Index n = space.total_dim();
  // Target sub-index in the caller's order, and the rest in space order.
  std::vector<Index> tgt(static_cast<std::size_t>(n)), rest(static_cast<std::size_t>(n));
  for (Index f = 0; f < n; ++f) {
    const auto d = space.digits(f);
    Index t = 0, r = 0;
    for (auto p : pos) t = t * space.subsystems()[p].dim + d[p];
    for (std::size_t i = 0; i < d.size(); ++i)
      if (!mask[i]) r = r * space.subsystems()[i].dim + d[i];
    tgt[static_cast<std::size_t>(f)] = t;
    rest[static_cast<std::size_t>(f)] = r;
  }
  cmatrix<Real> out = cmatrix<Real>::Zero(n, n);
  const auto& m = op.matrix();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (rest[static_cast<std::size_t>(i)] == rest[static_cast<std::size_t>(j)])
        out(i, j) = m(tgt[static_cast<std::size_t>(i)], tgt[static_cast<std::size_t>(j)]);
  return {detail::trusted_tag{}, std::move(out), op.flags()};
}

/// exp(-i h t) for hermitian h, by eigendecomposition.
template <typename Real>
basic_operator<Real> propagator(const basic_operator<Real>& h, Real duration) {
  if (!h.is_hermitian()) throw argument_error("propagator: generator is not hermitian");
  if (!std::isfinite(static_cast<double>(duration)))
    throw argument_error("propagator: duration must be finite");
  const Index n = h.dim();
  if (duration == Real(0)) return basic_operator<Real>::identity(n);
  const cmatrix<Real> hh = (h.matrix() + h.matrix().adjoint()) * Real(0.5);
  Eigen::SelfAdjointEigenSolver<cmatrix<Real>> es(hh);
  cvector<Real> phases(n);
  for (Index k = 0; k < n; ++k)
    phases(k) = std::polar(Real(1), -es.eigenvalues()(k) * duration);
  const auto& v = es.eigenvectors();
  return {detail::trusted_tag{}, cmatrix<Real>(v * phases.asDiagonal() * v.adjoint()),
          {flag::unchecked, flag::yes, flag::unchecked}};
}

/// exp(-beta h) for hermitian h (real spectrum; result is hermitian).
template <typename Real>
cmatrix<Real> exp_hermitian(const cmatrix<Real>& h, Real scale) {
  const cmatrix<Real> hh = (h + h.adjoint()) * Real(0.5);
  Eigen::SelfAdjointEigenSolver<cmatrix<Real>> es(hh);
  rvector<Real> w = (es.eigenvalues() * scale).array().exp();
  const auto& v = es.eigenvectors();
  return v * w.template cast<std::complex<Real>>().asDiagonal() * v.adjoint();
}

/// U psi.
template <typename Real>
basic_ket<Real> apply(const basic_operator<Real>& u, const basic_ket<Real>& psi) {
  if (u.dim() != psi.dim()) throw argument_error("apply: dimension mismatch");
  return basic_ket<Real>::normalized(u.matrix() * psi.amplitudes());
}

/// U rho U^dagger, for asserted-unitary U.
template <typename Real>
basic_density_matrix<Real> apply(const basic_operator<Real>& u,
                                 const basic_density_matrix<Real>& rho) {
  if (u.dim() != rho.dim()) throw argument_error("apply: dimension mismatch");
  if (!u.asserted_unitary()) throw argument_error("apply: operator is not asserted unitary");
  return {detail::trusted_tag{}, cmatrix<Real>(u.matrix() * rho.matrix() * u.matrix().adjoint()),
          rho.trace_weight()};
}

/// Schrödinger evolution under time-independent h, hbar = 1.
template <typename Real>
basic_ket<Real> evolve(const basic_ket<Real>& psi, const basic_operator<Real>& h, Real duration) {
  if (h.dim() != psi.dim()) throw argument_error("evolve: dimension mismatch");
  if (!h.is_hermitian()) throw argument_error("evolve: hamiltonian is not hermitian");
  if (duration == Real(0)) return psi;
  return apply(propagator(h, duration), psi);
}

template <typename Real>
basic_density_matrix<Real> evolve(const basic_density_matrix<Real>& rho,
                                  const basic_operator<Real>& h, Real duration) {
  if (h.dim() != rho.dim()) throw argument_error("evolve: dimension mismatch");
  if (!h.is_hermitian()) throw argument_error("evolve: hamiltonian is not hermitian");
  if (duration == Real(0)) return rho;
  return apply(propagator(h, duration), rho);
}

/// tr[obs rho]. Throws numerical_error if the imaginary part exceeds tolerance.
template <typename Real>
Real expectation(const basic_operator<Real>& obs, const basic_density_matrix<Real>& rho) {
  if (obs.dim() != rho.dim()) throw argument_error("expectation: dimension mismatch");
  if (!obs.is_hermitian()) throw argument_error("expectation: observable is not hermitian");
  const std::complex<Real> v = (obs.matrix() * rho.matrix()).trace();
  if (std::abs(v.imag()) > Real(policy().imaginary_tol))
    throw numerical_error(
        fmt::format("expectation: imaginary residue {}", static_cast<double>(v.imag())));
  return v.real();
}

/// Largest entry-wise deviation between two matrices.
template <typename Real>
Real max_deviation(const cmatrix<Real>& a, const cmatrix<Real>& b) {
  return detail::max_abs(cmatrix<Real>(a - b));
}

// ---------------------------------------------------------------------------

using Ket = basic_ket<double>;
using Operator = basic_operator<double>;
using DensityMatrix = basic_density_matrix<double>;
using Matrix = cmatrix<double>;
using Vector = cvector<double>;
using complex = std::complex<double>;

}  // namespace pmtherm
