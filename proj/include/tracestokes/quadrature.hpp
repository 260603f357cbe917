#pragma once

#include "tracestokes/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace tracestokes {

/// Quadrature node on a reference simplex: coordinates and weight.
struct RefQuadPoint2 {
  double x, y, w;
};

struct RefQuadPoint3 {
  double x, y, z, w;
};

/// Physical quadrature node.
struct QuadPoint {
  Point3 x;
  double w;
};

/// Symmetric Gauss rule on the reference triangle {(0,0),(1,0),(0,1)}, exact
/// for polynomials of total degree `degree` (2..6). Weights sum to 1/2.
[[nodiscard]] std::span<const RefQuadPoint2> triangle_rule(int degree);

/// Gauss-Legendre nodes and weights on [0,1].
[[nodiscard]] std::vector<std::pair<double, double>> gauss_legendre(int npoints);

/// Collapsed (Duffy) Gauss product rule on the reference tet, exact for total
/// degree `degree`. Weights sum to 1/6.
[[nodiscard]] const std::vector<RefQuadPoint3>& tet_rule(int degree);

/// Maps the degree-`degree` triangle rule onto a physical triangle.
void map_triangle_rule(const std::array<Point3, 3>& triangle, int degree, std::vector<QuadPoint>& out);

/// Maps the degree-`degree` tet rule onto a physical tet.
void map_tet_rule(const std::array<Point3, 4>& tet, int degree, std::vector<QuadPoint>& out);

}  // namespace tracestokes
