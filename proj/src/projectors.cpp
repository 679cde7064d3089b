#include "pmtherm/projectors.hpp"

namespace pmtherm {

namespace {

/// 0/1 diagonal pattern of a projector, if it has one.
std::optional<std::vector<bool>> diagonal_pattern(const Matrix& m, double tol) {
  const Index n = m.rows();
  std::vector<bool> on(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double a = std::abs(m(i, j));
      if (i != j) {
        if (a > tol) return std::nullopt;
      } else if (std::abs(m(i, i) - 1.0) <= tol) {
        on[static_cast<std::size_t>(i)] = true;
      } else if (a > tol) {
        return std::nullopt;
      }
    }
  return on;
}

}  // namespace

projector_set::projector_set(std::vector<Operator> projectors, std::vector<std::string> labels)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
  if (projectors_.empty()) throw argument_error("projector set: empty");
  if (labels_.size() != projectors_.size())
    throw argument_error("projector set: label count does not match projector count");
  const Index n = projectors_.front().dim();
  const double tol = policy().projector_tol;
  for (const auto& p : projectors_) {
    if (p.dim() != n) throw argument_error("projector set: dimension mismatch");
    if (!p.asserted_projector()) throw argument_error("projector set: member is not a projector");
  }

  std::vector<int> sector(static_cast<std::size_t>(n), -1);
  bool diagonal = true;
  for (std::size_t y = 0; y < projectors_.size() && diagonal; ++y) {
    const auto pat = diagonal_pattern(projectors_[y].matrix(), tol);
    if (!pat) {
      diagonal = false;
      break;
    }
    for (Index i = 0; i < n; ++i) {
      if (!(*pat)[static_cast<std::size_t>(i)]) continue;
      if (sector[static_cast<std::size_t>(i)] >= 0)
        throw argument_error("projector set: projectors are not mutually orthogonal");
      sector[static_cast<std::size_t>(i)] = static_cast<int>(y);
    }
  }
  if (diagonal) {
    diag_ = std::move(sector);
    return;
  }
  for (std::size_t a = 0; a < projectors_.size(); ++a)
    for (std::size_t b = a + 1; b < projectors_.size(); ++b)
      if (detail::max_abs(Matrix(projectors_[a].matrix() * projectors_[b].matrix())) > tol)
        throw argument_error("projector set: projectors are not mutually orthogonal");
}

projector_set projector_set::computational(Index dim) {
  std::vector<Operator> ps;
  std::vector<std::string> labels;
  for (Index k = 0; k < dim; ++k) {
    Matrix m = Matrix::Zero(dim, dim);
    m(k, k) = 1.0;
    ps.emplace_back(detail::trusted_tag{}, std::move(m),
                    operator_flags{flag::yes, flag::unchecked, flag::yes});
    labels.push_back(std::to_string(k));
  }
  return {std::move(ps), std::move(labels)};
}

projector_set projector_set::embedded(const projector_set& local, const composite_space& space,
                                      const std::vector<std::string>& targets) {
  std::vector<Operator> ps;
  ps.reserve(local.size());
  for (const auto& p : local.projectors()) ps.push_back(embed(p, space, targets));
  return {std::move(ps), local.labels()};
}

projector_set projector_set::product(const projector_set& a, const projector_set& b) {
  std::vector<Operator> ps;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      ps.push_back(tensor(a[i], b[j]));
      labels.push_back(a.labels()[i] + "," + b.labels()[j]);
    }
  return {std::move(ps), std::move(labels)};
}

double projector_set::completeness_defect() const {
  const Index n = dim();
  if (diag_) {
    for (int s : *diag_)
      if (s < 0) return 1.0;
    return 0.0;
  }
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& p : projectors_) sum += p.matrix();
  return detail::max_abs(Matrix(sum - Matrix::Identity(n, n)));
}

std::vector<double> projector_set::populations(const DensityMatrix& rho) const {
  if (rho.dim() != dim()) throw argument_error("populations: dimension mismatch");
  std::vector<double> out(size(), 0.0);
  if (diag_) {
    for (Index i = 0; i < rho.dim(); ++i) {
      const int s = (*diag_)[static_cast<std::size_t>(i)];
      if (s >= 0) out[static_cast<std::size_t>(s)] += rho.matrix()(i, i).real();
    }
    return out;
  }
  for (std::size_t y = 0; y < size(); ++y)
    out[y] = (projectors_[y].matrix().cwiseProduct(rho.matrix().transpose())).sum().real();
  return out;
}

Matrix projector_set::pinch(const Matrix& rho) const {
  const Index n = dim();
  if (diag_) {
    Matrix out = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      const int si = (*diag_)[static_cast<std::size_t>(i)];
      if (si < 0) continue;
      for (Index j = 0; j < n; ++j)
        if ((*diag_)[static_cast<std::size_t>(j)] == si) out(i, j) = rho(i, j);
    }
    return out;
  }
  Matrix out = Matrix::Zero(n, n);
  for (const auto& p : projectors_) out.noalias() += p.matrix() * rho * p.matrix();
  return out;
}

Matrix projector_set::project(const Matrix& rho, std::size_t y) const {
  const Index n = dim();
  if (diag_) {
    Matrix out = Matrix::Zero(n, n);
    const int s = static_cast<int>(y);
    for (Index i = 0; i < n; ++i) {
      if ((*diag_)[static_cast<std::size_t>(i)] != s) continue;
      for (Index j = 0; j < n; ++j)
        if ((*diag_)[static_cast<std::size_t>(j)] == s) out(i, j) = rho(i, j);
    }
    return out;
  }
  const auto& p = projectors_[y].matrix();
  return p * rho * p;
}

}  // namespace pmtherm
