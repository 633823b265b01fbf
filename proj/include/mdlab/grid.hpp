#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace mdlab::field {

// Uniform Cartesian grid, equal spacing in all three directions.
// Point (i,j,k) sits at origin + h*(i,j,k); storage is x-fastest.
struct Grid {
  int nx = 0, ny = 0, nz = 0;
  double h = 1.0;
  std::array<double, 3> origin{};

  std::size_t size() const { return std::size_t(nx) * ny * nz; }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * ny + j) * nx + i;
  }
  std::array<double, 3> point(int i, int j, int k) const {
    return {origin[0] + h * i, origin[1] + h * j, origin[2] + h * k};
  }
  std::array<double, 3> point(std::size_t idx) const;
  std::array<int, 3> ijk(std::size_t idx) const;

  // True when the point is at least `shell` nodes away from every face.
  bool interior(int i, int j, int k, int shell = 2) const {
    return i >= shell && j >= shell && k >= shell && i < nx - shell && j < ny - shell &&
           k < nz - shell;
  }

  bool operator==(const Grid& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz && h == o.h && origin == o.origin;
  }

  // Cube of n^3 points with spacing h centered on c.
  static Grid cube(int n, double h, const std::array<double, 3>& c);
};

// First derivatives along x, y, z and the pure second derivatives d_xx,
// d_yy, d_zz from 4th-order centered stencils.  Valid for interior(.., 2).
template <class T>
struct Jet {
  T f{};
  std::array<T, 3> d1{};
  std::array<T, 3> d2{};

  T laplacian() const { return d2[0] + d2[1] + d2[2]; }
};

template <class T>
Jet<T> jet(const Grid& g, const std::vector<T>& f, int i, int j, int k) {
  Jet<T> out;
  const std::size_t c = g.index(i, j, k);
  out.f = f[c];
  const std::size_t stride[3] = {1, std::size_t(g.nx), std::size_t(g.nx) * g.ny};
  const double inv12h = 1.0 / (12.0 * g.h);
  const double inv12h2 = 1.0 / (12.0 * g.h * g.h);
  for (int d = 0; d < 3; ++d) {
    const std::size_t s = stride[d];
    const T fm2 = f[c - 2 * s], fm1 = f[c - s], fp1 = f[c + s], fp2 = f[c + 2 * s];
    out.d1[d] = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) * inv12h;
    out.d2[d] = (-fm2 + 16.0 * fm1 - 30.0 * out.f + 16.0 * fp1 - fp2) * inv12h2;
  }
  return out;
}

}  // namespace mdlab::field
