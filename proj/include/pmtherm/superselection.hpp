#pragma once

#include <vector>

#include "pmtherm/linalg.hpp"
#include "pmtherm/projectors.hpp"

namespace pmtherm {

/// One Planck cell: a discretized simultaneous eigenvalue (q, p) of the
/// redefined canonical pair, labelling a superselection sector.
struct planck_cell {
  int q_index;
  int p_index;
  Operator projector;
};

/// Labelled orthonormal basis of an apparatus space, one vector per cell.
///
/// Cell widths are carried for reporting only; nothing here depends on
/// dq * dp.
class planck_cell_basis {
 public:
  planck_cell_basis(std::vector<planck_cell> cells, double dq, double dp);

  const std::vector<planck_cell>& cells() const noexcept { return cells_; }
  double dq() const noexcept { return dq_; }
  double dp() const noexcept { return dp_; }
  Index dim() const noexcept { return cells_.front().projector.dim(); }

  /// Redefined position: sum over cells of q_index * dq * P(cell).
  Operator position() const;
  /// Redefined momentum: sum over cells of p_index * dp * P(cell).
  Operator momentum() const;

  /// Cell projectors labelled "q:p".
  projector_set sectors() const;

 private:
  std::vector<planck_cell> cells_;
  double dq_;
  double dp_;
};

/// Cells enumerated q-major: cell k has q = k / p_levels, p = k % p_levels.
planck_cell_basis build_planck_basis(int q_levels, int p_levels, double dq, double dp);

/// sum_y P(y) rho P(y). Requires a complete family.
DensityMatrix dephase(const DensityMatrix& rho, const projector_set& sectors);

struct energy_sector {
  double energy;
  Operator projector;
  int degeneracy;
  Matrix basis;  // dim x degeneracy, orthonormal columns
};

/// Eigenvalues of h clustered into degenerate sectors, in ascending energy.
///
/// Consecutive sorted eigenvalues closer than grouping_tol * max(range, 1)
/// share a sector; the sector energy is the mean of its members.
std::vector<energy_sector> energy_sectors(const Operator& h, double grouping_tol);
std::vector<energy_sector> energy_sectors(const Operator& h);

/// The sectors as a projector_set labelled by sector index.
projector_set to_projector_set(const std::vector<energy_sector>& sectors);

}  // namespace pmtherm
