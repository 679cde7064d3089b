#include "pmtherm/superselection.hpp"

#include <string>

namespace pmtherm {

planck_cell_basis::planck_cell_basis(std::vector<planck_cell> cells, double dq, double dp)
    : cells_(std::move(cells)), dq_(dq), dp_(dp) {
  if (!(dq_ > 0.0) || !(dp_ > 0.0))
    throw argument_error("planck basis: cell widths must be positive");
  if (cells_.empty()) throw argument_error("planck basis: no cells");
}

Operator planck_cell_basis::position() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (const auto& c : cells_) m += (c.q_index * dq_) * c.projector.matrix();
  return Operator::hermitian(std::move(m));
}

Operator planck_cell_basis::momentum() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (const auto& c : cells_) m += (c.p_index * dp_) * c.projector.matrix();
  return Operator::hermitian(std::move(m));
}

projector_set planck_cell_basis::sectors() const {
  std::vector<Operator> ps;
  std::vector<std::string> labels;
  for (const auto& c : cells_) {
    ps.push_back(c.projector);
    labels.push_back(std::to_string(c.q_index) + ":" + std::to_string(c.p_index));
  }
  return {std::move(ps), std::move(labels)};
}

planck_cell_basis build_planck_basis(int q_levels, int p_levels, double dq, double dp) {
  if (!(dq > 0.0) || !(dp > 0.0))
    throw argument_error("build_planck_basis: cell widths must be positive");
  if (q_levels <= 0 || p_levels <= 0)
    throw argument_error("build_planck_basis: level counts must be positive");
  const auto n = static_cast<std::size_t>(q_levels) * static_cast<std::size_t>(p_levels);
  if (n > policy().max_dim) throw capacity_error("build_planck_basis: too many cells");
  const auto dim = static_cast<Index>(n);
  std::vector<planck_cell> cells;
  cells.reserve(n);
  for (Index k = 0; k < dim; ++k) {
    Matrix m = Matrix::Zero(dim, dim);
    m(k, k) = 1.0;
    cells.push_back({static_cast<int>(k / p_levels), static_cast<int>(k % p_levels),
                     Operator(detail::trusted_tag{}, std::move(m),
                              {flag::yes, flag::unchecked, flag::yes})});
  }
  return {std::move(cells), dq, dp};
}

DensityMatrix dephase(const DensityMatrix& rho, const projector_set& sectors) {
  if (sectors.dim() != rho.dim()) throw argument_error("dephase: dimension mismatch");
  if (!sectors.is_complete())
    throw argument_error("dephase: projectors do not sum to the identity");
  return {detail::trusted_tag{}, sectors.pinch(rho.matrix()), rho.trace_weight()};
}

std::vector<energy_sector> energy_sectors(const Operator& h, double grouping_tol) {
  if (!h.is_hermitian()) throw argument_error("energy_sectors: hamiltonian is not hermitian");
  const Matrix hh = (h.matrix() + h.matrix().adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hh);
  const auto& ev = es.eigenvalues();
  const Index n = ev.size();
  const double range = ev(n - 1) - ev(0);
  const double gap = grouping_tol * std::max(range, 1.0);

  std::vector<energy_sector> out;
  Index start = 0;
  for (Index k = 1; k <= n; ++k) {
    if (k < n && ev(k) - ev(k - 1) <= gap) continue;
    const Index deg = k - start;
    Matrix basis = es.eigenvectors().middleCols(start, deg);
    Matrix p = basis * basis.adjoint();
    out.push_back({ev.segment(start, deg).mean(),
                   Operator(detail::trusted_tag{}, std::move(p),
                            {flag::yes, flag::unchecked, flag::yes}),
                   static_cast<int>(deg), std::move(basis)});
    start = k;
  }
  return out;
}

std::vector<energy_sector> energy_sectors(const Operator& h) {
  return energy_sectors(h, policy().grouping_tol);
}

projector_set to_projector_set(const std::vector<energy_sector>& sectors) {
  std::vector<Operator> ps;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < sectors.size(); ++i) {
    ps.push_back(sectors[i].projector);
    labels.push_back(std::to_string(i));
  }
  return {std::move(ps), std::move(labels)};
}

}  // namespace pmtherm
