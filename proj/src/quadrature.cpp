#include "tracestokes/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace tracestokes {

namespace {

// Dunavant rules. Weights are given relative to the triangle area and are
// halved when the tables are built.
struct Orbit {
  int kind;  // 1: centroid, 3: (a, a, 1-2a), 6: (a, b, 1-a-b)
  double a, b, w;
};

std::vector<RefQuadPoint2> expand(std::initializer_list<Orbit> orbits) {
  std::vector<RefQuadPoint2> pts;
  for (const auto& o : orbits) {
    const double w = 0.5 * o.w;
    if (o.kind == 1) {
      pts.push_back({1.0 / 3.0, 1.0 / 3.0, w});
    } else if (o.kind == 3) {
      const double c = 1.0 - 2.0 * o.a;
      pts.push_back({o.a, o.a, w});
      pts.push_back({o.a, c, w});
      pts.push_back({c, o.a, w});
    } else {
      const double c = 1.0 - o.a - o.b;
      pts.push_back({o.a, o.b, w});
      pts.push_back({o.b, o.a, w});
      pts.push_back({o.a, c, w});
      pts.push_back({c, o.a, w});
      pts.push_back({o.b, c, w});
      pts.push_back({c, o.b, w});
    }
  }
  return pts;
}

const std::vector<RefQuadPoint2>& rule_deg2() {
  static const auto r = expand({{3, 1.0 / 6.0, 0.0, 1.0 / 3.0}});
  return r;
}

const std::vector<RefQuadPoint2>& rule_deg4() {
  static const auto r = expand({
      {3, 0.445948490915965, 0.0, 0.223381589678011},
      {3, 0.091576213509771, 0.0, 0.109951743655322},
  });
  return r;
}

const std::vector<RefQuadPoint2>& rule_deg5() {
  // Radon's 7-point rule, closed form.
  static const auto r = [] {
    const double s = std::sqrt(15.0);
    return expand({
        {1, 0.0, 0.0, 9.0 / 40.0},
        {3, (6.0 - s) / 21.0, 0.0, (155.0 - s) / 1200.0},
        {3, (6.0 + s) / 21.0, 0.0, (155.0 + s) / 1200.0},
    });
  }();
  return r;
}

const std::vector<RefQuadPoint2>& rule_deg6() {
  static const auto r = expand({
      {3, 0.249286745170910, 0.0, 0.116786275726379},
      {3, 0.063089014491502, 0.0, 0.050844906370207},
      {6, 0.053145049844817, 0.310352451033784, 0.082851075618374},
  });
  return r;
}

}  // namespace

std::span<const RefQuadPoint2> triangle_rule(int degree) {
  switch (degree) {
    case 2:
      return rule_deg2();
    case 3:
    case 4:
      // The 4-point degree-3 rule has a negative weight; use the degree-4 one.
      return rule_deg4();
    case 5:
      return rule_deg5();
    case 6:
      return rule_deg6();
    default:
      throw InputError("unsupported triangle quadrature degree " + std::to_string(degree));
  }
}

std::vector<std::pair<double, double>> gauss_legendre(int npoints) {
  if (npoints < 1) {
    throw InputError("Gauss-Legendre rule needs at least one point");
  }
  std::vector<std::pair<double, double>> rule(static_cast<std::size_t>(npoints));
  const int n = npoints;
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[static_cast<std::size_t>(n - 1 - i)] = {0.5 * (x + 1.0), 0.5 * w};
  }
  return rule;
}

const std::vector<RefQuadPoint3>& tet_rule(int degree) {
  if (degree < 0 || degree > 12) {
    throw InputError("unsupported tet quadrature degree " + std::to_string(degree));
  }
  static std::mutex mutex;
  static std::map<int, std::vector<RefQuadPoint3>> cache;
  const std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it != cache.end()) {
    return it->second;
  }
  // x = u, y = v (1 - u), z = w (1 - u)(1 - v); Jacobian (1-u)^2 (1-v).
  // The pulled-back integrand has degree d+2 in u, d+1 in v, d in w.
  const auto npts = [](int d) { return d / 2 + 1; };
  const auto gu = gauss_legendre(npts(degree + 2));
  const auto gv = gauss_legendre(npts(degree + 1));
  const auto gw = gauss_legendre(npts(degree));
  std::vector<RefQuadPoint3> pts;
  pts.reserve(gu.size() * gv.size() * gw.size());
  for (const auto& [u, wu] : gu) {
    for (const auto& [v, wv] : gv) {
      for (const auto& [w, ww] : gw) {
        const double jac = (1.0 - u) * (1.0 - u) * (1.0 - v);
        pts.push_back({u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v), wu * wv * ww * jac});
      }
    }
  }
  return cache.emplace(degree, std::move(pts)).first->second;
}

void map_triangle_rule(const std::array<Point3, 3>& triangle, int degree, std::vector<QuadPoint>& out) {
  const Vec3 e1 = triangle[1] - triangle[0];
  const Vec3 e2 = triangle[2] - triangle[0];
  const double jac = e1.cross(e2).norm();  // twice the area
  for (const auto& q : triangle_rule(degree)) {
    out.push_back({triangle[0] + q.x * e1 + q.y * e2, q.w * jac});
  }
}

void map_tet_rule(const std::array<Point3, 4>& tet, int degree, std::vector<QuadPoint>& out) {
  const Vec3 e1 = tet[1] - tet[0];
  const Vec3 e2 = tet[2] - tet[0];
  const Vec3 e3 = tet[3] - tet[0];
  const double jac = std::abs(e1.dot(e2.cross(e3)));
  for (const auto& q : tet_rule(degree)) {
    out.push_back({tet[0] + q.x * e1 + q.y * e2 + q.z * e3, q.w * jac});
  }
}

}  // namespace tracestokes
