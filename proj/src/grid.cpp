#include "mdlab/grid.hpp"

#include "mdlab/errors.hpp"

namespace mdlab::field {

std::array<int, 3> Grid::ijk(std::size_t idx) const {
  const int i = int(idx % nx);
  const int j = int((idx / nx) % ny);
  const int k = int(idx / (std::size_t(nx) * ny));
  return {i, j, k};
}

std::array<double, 3> Grid::point(std::size_t idx) const {
  const auto [i, j, k] = ijk(idx);
  return point(i, j, k);
}

Grid Grid::cube(int n, double h, const std::array<double, 3>& c) {
  if (n < 5) throw UsageError("Grid::cube: need at least 5 points per side");
  if (!(h > 0.0)) throw UsageError("Grid::cube: spacing must be positive");
  Grid g;
  g.nx = g.ny = g.nz = n;
  g.h = h;
  const double half = 0.5 * h * (n - 1);
  for (int d = 0; d < 3; ++d) g.origin[d] = c[d] - half;
  return g;
}

}  // namespace mdlab::field
