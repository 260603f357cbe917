#include "tracestokes/background_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

namespace tracestokes {

namespace {

// Cube corner offsets indexed by bit pattern (bit 0 = x, bit 1 = y, bit 2 = z).
constexpr std::array<std::array<int, 3>, 8> kCorner{{
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
}};

// Freudenthal/Kuhn split: one tet per axis permutation, all sharing the 0-7 diagonal.
constexpr std::array<std::array<int, 4>, 6> kKuhnTets{{
    {0, 1, 3, 7},  // x, y, z
    {0, 1, 5, 7},  // x, z, y
    {0, 2, 3, 7},  // y, x, z
    {0, 2, 6, 7},  // y, z, x
    {0, 4, 5, 7},  // z, x, y
    {0, 4, 6, 7},  // z, y, x
}};

double orient(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

}  // namespace

std::array<Point3, 4> BackgroundMesh::tet_vertices(Index tet) const {
  const auto& ids = tets[static_cast<std::size_t>(tet)].vertex_ids;
  return {vertices[ids[0]], vertices[ids[1]], vertices[ids[2]], vertices[ids[3]]};
}

double BackgroundMesh::signed_volume(Index tet) const {
  const auto v = tet_vertices(tet);
  return orient(v[0], v[1], v[2], v[3]);
}

BackgroundMesh build_lattice(const LevelSet& levelset, double h, const Box& box, const MeshLimits& limits) {
  if (!(h > 0.0)) {
    throw InputError("mesh size must be positive");
  }
  const Vec3 extent = box.hi - box.lo;
  if ((extent.array() <= 0.0).any()) {
    throw InputError("bounding box is empty");
  }

  std::array<int, 3> n{};
  for (int d = 0; d < 3; ++d) {
    n[d] = std::max(1, static_cast<int>(std::ceil(extent[d] / h - 1e-12)));
  }
  const std::array<Index, 3> np{n[0] + 1, n[1] + 1, n[2] + 1};
  auto lattice_id = [&](int i, int j, int k) -> Index { return i + np[0] * (j + np[1] * static_cast<Index>(k)); };
  auto lattice_point = [&](int i, int j, int k) -> Point3 {
    return box.lo + h * Point3(static_cast<double>(i), static_cast<double>(j), static_cast<double>(k));
  };

  std::vector<double> phi(static_cast<std::size_t>(np[0] * np[1] * np[2]));
  for (int k = 0; k <= n[2]; ++k) {
    for (int j = 0; j <= n[1]; ++j) {
      for (int i = 0; i <= n[0]; ++i) {
        phi[static_cast<std::size_t>(lattice_id(i, j, k))] = levelset.value(lattice_point(i, j, k));
      }
    }
  }

  const double band = std::sqrt(3.0) * h;
  std::vector<std::array<int, 3>> cubes;
  std::size_t sign_change_cubes = 0;
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        bool has_neg = false;
        bool has_pos = false;
        double min_abs = std::numeric_limits<double>::infinity();
        for (const auto& c : kCorner) {
          const double v = phi[static_cast<std::size_t>(lattice_id(i + c[0], j + c[1], k + c[2]))];
          has_neg = has_neg || v < 0.0;
          has_pos = has_pos || v >= 0.0;
          min_abs = std::min(min_abs, std::abs(v));
        }
        const bool sign_change = has_neg && has_pos;
        if (sign_change) {
          ++sign_change_cubes;
        }
        if (sign_change || min_abs <= band) {
          cubes.push_back({i, j, k});
        }
      }
    }
  }
  if (cubes.empty()) {
    throw InputError("no lattice cube is near the zero level set; check the bounding box");
  }
  if (6 * sign_change_cubes > limits.max_active_tets) {
    throw ResourceError("estimated active tet count " + std::to_string(6 * sign_change_cubes) +
                        " exceeds the configured cap " + std::to_string(limits.max_active_tets));
  }

  BackgroundMesh mesh;
  mesh.h = h;
  mesh.box = box;
  mesh.tets.reserve(6 * cubes.size());

  std::unordered_map<Index, Index> vertex_of_lattice;
  vertex_of_lattice.reserve(2 * cubes.size());
  for (const auto& cube : cubes) {
    std::array<Index, 8> corner_ids{};
    for (int c = 0; c < 8; ++c) {
      const int i = cube[0] + kCorner[c][0];
      const int j = cube[1] + kCorner[c][1];
      const int k = cube[2] + kCorner[c][2];
      const auto [it, inserted] =
          vertex_of_lattice.try_emplace(lattice_id(i, j, k), static_cast<Index>(mesh.vertices.size()));
      if (inserted) {
        mesh.vertices.push_back(lattice_point(i, j, k));
      }
      corner_ids[c] = it->second;
    }
    for (const auto& local : kKuhnTets) {
      Tet tet;
      tet.parent_cube = cube;
      for (int a = 0; a < 4; ++a) {
        tet.vertex_ids[a] = corner_ids[local[a]];
      }
      const auto& v = mesh.vertices;
      if (orient(v[tet.vertex_ids[0]], v[tet.vertex_ids[1]], v[tet.vertex_ids[2]], v[tet.vertex_ids[3]]) < 0.0) {
        std::swap(tet.vertex_ids[2], tet.vertex_ids[3]);
      }
      mesh.tets.push_back(tet);
    }
  }

  const auto nv = static_cast<Index>(mesh.vertices.size());
  std::unordered_map<Index, Index> edge_of_pair;
  edge_of_pair.reserve(8 * cubes.size());
  mesh.tet_edges.resize(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& ids = mesh.tets[t].vertex_ids;
    for (int e = 0; e < 6; ++e) {
      Index a = ids[kTetEdges[e][0]];
      Index b = ids[kTetEdges[e][1]];
      if (a > b) {
        std::swap(a, b);
      }
      const auto [it, inserted] = edge_of_pair.try_emplace(a * nv + b, static_cast<Index>(mesh.edges.size()));
      if (inserted) {
        mesh.edges.push_back({a, b});
      }
      mesh.tet_edges[t][e] = it->second;
    }
  }
  return mesh;
}

double level_mesh_size(int level) {
  if (level < 0) {
    throw InputError("refinement level must be nonnegative");
  }
  return std::ldexp(kCoarsestMeshSize, -level);
}

BackgroundMesh refine(const LevelSet& levelset, const Box& box, int level, const MeshLimits& limits) {
  return build_lattice(levelset, level_mesh_size(level), box, limits);
}

std::vector<double> interpolate_levelset(const BackgroundMesh& mesh, const LevelSet& levelset) {
  std::vector<double> values(mesh.vertices.size());
  for (std::size_t v = 0; v < values.size(); ++v) {
    const double value = levelset.value(mesh.vertices[v]);
    values[v] = value == 0.0 ? kZeroValueShift * mesh.h : value;
  }
  return values;
}

bool is_cut(std::span<const double, 4> values) {
  const bool has_neg = std::any_of(values.begin(), values.end(), [](double v) { return v < 0.0; });
  const bool has_pos = std::any_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
  return has_neg && has_pos;
}

std::vector<Index> active_mesh(const BackgroundMesh& mesh, std::span<const double> nodal_values) {
  if (nodal_values.size() != mesh.vertices.size()) {
    throw InputError("nodal value count does not match the mesh");
  }
  std::vector<Index> active;
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    std::array<double, 4> local{};
    for (int a = 0; a < 4; ++a) {
      local[a] = nodal_values[static_cast<std::size_t>(mesh.tets[t].vertex_ids[a])];
    }
    if (is_cut(local)) {
      active.push_back(static_cast<Index>(t));
    }
  }
  return active;
}

void write_off(std::ostream& out, const BackgroundMesh& mesh, std::span<const Index> tets) {
  out << "OFF\n" << 4 * tets.size() << ' ' << 4 * tets.size() << " 0\n";
  out.precision(17);
  for (const Index t : tets) {
    for (const Point3& p : mesh.tet_vertices(t)) {
      out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    }
  }
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const std::size_t b = 4 * t;
    out << "3 " << b << ' ' << b + 2 << ' ' << b + 1 << '\n';
    out << "3 " << b << ' ' << b + 1 << ' ' << b + 3 << '\n';
    out << "3 " << b << ' ' << b + 3 << ' ' << b + 2 << '\n';
    out << "3 " << b + 1 << ' ' << b + 2 << ' ' << b + 3 << '\n';
  }
}

}  // namespace tracestokes
