#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmtherm/linalg.hpp"

namespace pmtherm {

/// Family of mutually orthogonal projectors with outcome labels.
///
/// Orthogonality is checked at construction. Completeness is not: channels
/// that need it (dephase, nonselective_measure) check it themselves, so an
/// incomplete family can still be used for populations.
class projector_set {
 public:
  projector_set(std::vector<Operator> projectors, std::vector<std::string> labels);

  /// Rank-1 projectors onto the computational basis, labelled "0", "1", ...
  static projector_set computational(Index dim);

  /// Each projector lifted to `space` as P (x) I on the other factors.
  static projector_set embedded(const projector_set& local, const composite_space& space,
                                const std::vector<std::string>& targets);

  /// Products P_a (x) Q_b over all pairs, labels joined with ','.
  static projector_set product(const projector_set& a, const projector_set& b);

  std::size_t size() const noexcept { return projectors_.size(); }
  Index dim() const noexcept { return projectors_.front().dim(); }
  const Operator& operator[](std::size_t i) const { return projectors_[i]; }
  const std::vector<Operator>& projectors() const noexcept { return projectors_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// max |sum_y P(y) - I|.
  double completeness_defect() const;
  bool is_complete() const { return completeness_defect() <= policy().completeness_tol; }

  /// When every projector is diagonal with 0/1 entries: sector id per basis
  /// index (-1 where no projector covers it).
  const std::optional<std::vector<int>>& diagonal_sectors() const noexcept { return diag_; }

  /// tr[P(y) rho] for every y.
  std::vector<double> populations(const DensityMatrix& rho) const;

  /// sum_y P(y) rho P(y), without the completeness check.
  Matrix pinch(const Matrix& rho) const;

  /// P(y) rho P(y).
  Matrix project(const Matrix& rho, std::size_t y) const;

 private:
  std::vector<Operator> projectors_;
  std::vector<std::string> labels_;
  std::optional<std::vector<int>> diag_;
};

}  // namespace pmtherm
