// SPDX-License-Identifier: Apache-2.0

#include "feec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "feec/error.hpp"

namespace feec
{

namespace
{

Point sub(const Point &a, const Point &b)
{
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Point cross(const Point &a, const Point &b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Point &a, const Point &b)
{
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm(const Point &a)
{
  return std::sqrt(dot(a, a));
}

double det3(const Point &a, const Point &b, const Point &c)
{
  return dot(a, cross(b, c));
}

// Parity (+1/-1) of the permutation sorting three distinct values.
int sort_parity(std::array<int, 3> v)
{
  int parity = 1;
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j + 1 < 3 - i; j++)
    {
      if (v[j] > v[j + 1])
      {
        std::swap(v[j], v[j + 1]);
        parity = -parity;
      }
    }
  }
  return parity;
}

}  // namespace

std::string_view to_string(DomainTag tag)
{
  switch (tag)
  {
    case DomainTag::unit_cube:
      return "unit_cube";
    case DomainTag::cube_with_void:
      return "cube_with_void";
  }
  return "unknown";
}

Mesh Mesh::from_cells(std::vector<Point> vertices, std::vector<std::array<int, 4>> tets,
                      DomainTag tag)
{
  Mesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.tets_ = std::move(tets);
  mesh.domain_ = tag;

  const auto nv = static_cast<int>(mesh.vertices_.size());
  for (auto &tet : mesh.tets_)
  {
    for (int v : tet)
    {
      if (v < 0 || v >= nv)
      {
        throw GeometryError("tet references vertex id " + std::to_string(v) +
                            " outside [0, " + std::to_string(nv) + ")");
      }
    }
    const auto &p = mesh.vertices_;
    double vol = det3(sub(p[tet[1]], p[tet[0]]), sub(p[tet[2]], p[tet[0]]),
                      sub(p[tet[3]], p[tet[0]]));
    double scale = norm(sub(p[tet[1]], p[tet[0]]));
    if (!(std::abs(vol) > 1e-14 * scale * scale * scale))
    {
      throw GeometryError("degenerate tetrahedron");
    }
    if (vol < 0.0)
    {
      std::swap(tet[2], tet[3]);
    }
  }

  const std::size_t nt = mesh.tets_.size();

  // Edges: unique ascending vertex pairs, numbered lexicographically.
  {
    std::vector<std::array<int, 2>> keys;
    keys.reserve(6 * nt);
    for (const auto &tet : mesh.tets_)
    {
      for (const auto &le : kTetEdges)
      {
        int a = tet[le[0]], b = tet[le[1]];
        keys.push_back({std::min(a, b), std::max(a, b)});
      }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    mesh.edges_ = std::move(keys);
  }
  // Faces: unique ascending vertex triples.
  {
    std::vector<std::array<int, 3>> keys;
    keys.reserve(4 * nt);
    for (const auto &tet : mesh.tets_)
    {
      for (const auto &lf : kTetFaces)
      {
        std::array<int, 3> f = {tet[lf[0]], tet[lf[1]], tet[lf[2]]};
        std::sort(f.begin(), f.end());
        keys.push_back(f);
      }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    mesh.faces_ = std::move(keys);
  }

  mesh.tet_edges_.resize(nt);
  mesh.tet_edge_signs_.resize(nt);
  mesh.tet_faces_.resize(nt);
  mesh.tet_face_signs_.resize(nt);
  mesh.face_tets_.assign(mesh.faces_.size(), {-1, -1});
  for (std::size_t t = 0; t < nt; t++)
  {
    const auto &tet = mesh.tets_[t];
    for (int i = 0; i < 6; i++)
    {
      int a = tet[kTetEdges[i][0]], b = tet[kTetEdges[i][1]];
      std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
      auto it = std::lower_bound(mesh.edges_.begin(), mesh.edges_.end(), key);
      mesh.tet_edges_[t][i] = static_cast<int>(it - mesh.edges_.begin());
      mesh.tet_edge_signs_[t][i] = (a < b) ? 1 : -1;
    }
    for (int i = 0; i < 4; i++)
    {
      std::array<int, 3> f = {tet[kTetFaces[i][0]], tet[kTetFaces[i][1]], tet[kTetFaces[i][2]]};
      int parity = sort_parity(f);
      std::sort(f.begin(), f.end());
      auto it = std::lower_bound(mesh.faces_.begin(), mesh.faces_.end(), f);
      const int fid = static_cast<int>(it - mesh.faces_.begin());
      mesh.tet_faces_[t][i] = fid;
      // Induced boundary orientation of the face opposite local vertex i is (-1)^i.
      mesh.tet_face_signs_[t][i] = static_cast<std::int8_t>(((i % 2 == 0) ? 1 : -1) * parity);
      auto &adj = mesh.face_tets_[fid];
      if (adj[0] < 0)
      {
        adj[0] = static_cast<int>(t);
      }
      else if (adj[1] < 0)
      {
        adj[1] = static_cast<int>(t);
      }
      else
      {
        throw GeometryError("face shared by more than two tetrahedra");
      }
    }
  }

  mesh.boundary_face_.assign(mesh.faces_.size(), 0);
  mesh.boundary_edge_.assign(mesh.edges_.size(), 0);
  mesh.boundary_vertex_.assign(mesh.vertices_.size(), 0);
  for (std::size_t f = 0; f < mesh.faces_.size(); f++)
  {
    if (mesh.face_tets_[f][1] >= 0)
    {
      continue;
    }
    mesh.boundary_face_[f] = 1;
    const auto &fv = mesh.faces_[f];
    for (int v : fv)
    {
      mesh.boundary_vertex_[v] = 1;
    }
    const int t = mesh.face_tets_[f][0];
    for (int i = 0; i < 3; i++)
    {
      for (int j = i + 1; j < 3; j++)
      {
        mesh.boundary_edge_[mesh.edge_of(t, fv[i], fv[j])] = 1;
      }
    }
  }

  double h = 0.0;
  for (const auto &e : mesh.edges_)
  {
    h = std::max(h, norm(sub(mesh.vertices_[e[1]], mesh.vertices_[e[0]])));
  }
  mesh.h_max_ = h;
  return mesh;
}

std::size_t Mesh::num_boundary_faces() const
{
  return static_cast<std::size_t>(
      std::count(boundary_face_.begin(), boundary_face_.end(), std::uint8_t{1}));
}

std::array<int, 4> Mesh::sorted_tet(int t) const
{
  auto v = tets_[t];
  std::sort(v.begin(), v.end());
  return v;
}

int Mesh::edge_of(int t, int a, int b) const
{
  if (a > b)
  {
    std::swap(a, b);
  }
  for (int e : tet_edges_[t])
  {
    if (edges_[e][0] == a && edges_[e][1] == b)
    {
      return e;
    }
  }
  throw UsageError("vertex pair is not an edge of the given tet");
}

int Mesh::face_of(int t, int a, int b, int c) const
{
  std::array<int, 3> key = {a, b, c};
  std::sort(key.begin(), key.end());
  for (int f : tet_faces_[t])
  {
    if (faces_[f] == key)
    {
      return f;
    }
  }
  throw UsageError("vertex triple is not a face of the given tet");
}

double Mesh::signed_volume(int t) const
{
  const auto &tet = tets_[t];
  const auto &p = vertices_;
  return det3(sub(p[tet[1]], p[tet[0]]), sub(p[tet[2]], p[tet[0]]),
              sub(p[tet[3]], p[tet[0]])) /
         6.0;
}

double Mesh::total_volume() const
{
  double vol = 0.0;
  for (std::size_t t = 0; t < tets_.size(); t++)
  {
    vol += signed_volume(static_cast<int>(t));
  }
  return vol;
}

long Mesh::euler_characteristic() const
{
  return static_cast<long>(vertices_.size()) - static_cast<long>(edges_.size()) +
         static_cast<long>(faces_.size()) - static_cast<long>(tets_.size());
}

Mesh build_structured_cube(int n)
{
  if (n < 1)
  {
    throw DomainError("build_structured_cube: n must be >= 1, got " + std::to_string(n));
  }
  const int m = n + 1;
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k < m; k++)
  {
    for (int j = 0; j < m; j++)
    {
      for (int i = 0; i < m; i++)
      {
        vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n,
                            static_cast<double>(k) / n});
      }
    }
  }
  auto id = [m](int i, int j, int k) { return i + m * (j + m * k); };

  // Every subcube is cut into the 6 simplices x_{p0} <= x_{p1} <= x_{p2} around its main
  // diagonal; the rule is translation invariant, so neighbouring cubes match.
  static constexpr std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::array<int, 4>> tets;
  tets.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; k++)
  {
    for (int j = 0; j < n; j++)
    {
      for (int i = 0; i < n; i++)
      {
        for (const auto &p : perms)
        {
          std::array<int, 3> c = {i, j, k};
          std::array<int, 4> tet;
          tet[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; s++)
          {
            c[p[s]] += 1;
            tet[s + 1] = id(c[0], c[1], c[2]);
          }
          tets.push_back(tet);
        }
      }
    }
  }
  return Mesh::from_cells(std::move(vertices), std::move(tets), DomainTag::unit_cube);
}

Mesh build_cube_with_void(int n)
{
  if (n < 3 || n % 3 != 0)
  {
    throw DomainError("build_cube_with_void: n must be a positive multiple of 3, got " +
                      std::to_string(n));
  }
  const Mesh cube = build_structured_cube(n);
  const auto verts = cube.vertices();
  std::vector<std::array<int, 4>> kept;
  kept.reserve(cube.num_tets());
  for (const auto &tet : cube.tets())
  {
    Point c = {0.0, 0.0, 0.0};
    for (int v : tet)
    {
      for (int d = 0; d < 3; d++)
      {
        c[d] += 0.25 * verts[v][d];
      }
    }
    bool inside = true;
    for (int d = 0; d < 3; d++)
    {
      inside = inside && c[d] > 1.0 / 3.0 && c[d] < 2.0 / 3.0;
    }
    if (!inside)
    {
      kept.push_back(tet);
    }
  }
  std::vector<int> remap(verts.size(), -1);
  for (const auto &tet : kept)
  {
    for (int v : tet)
    {
      remap[v] = 0;
    }
  }
  std::vector<Point> vertices;
  for (std::size_t v = 0; v < verts.size(); v++)
  {
    if (remap[v] == 0)
    {
      remap[v] = static_cast<int>(vertices.size());
      vertices.push_back(verts[v]);
    }
  }
  for (auto &tet : kept)
  {
    for (int &v : tet)
    {
      v = remap[v];
    }
  }
  return Mesh::from_cells(std::move(vertices), std::move(kept), DomainTag::cube_with_void);
}

Mesh refine_uniform(const Mesh &mesh)
{
  const auto nv = static_cast<int>(mesh.num_vertices());
  std::vector<Point> vertices(mesh.vertices().begin(), mesh.vertices().end());
  vertices.reserve(mesh.num_vertices() + mesh.num_edges());
  for (const auto &e : mesh.edges())
  {
    const auto &a = mesh.vertices()[e[0]];
    const auto &b = mesh.vertices()[e[1]];
    vertices.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])});
  }

  std::vector<std::array<int, 4>> tets;
  tets.reserve(8 * mesh.num_tets());
  for (std::size_t t = 0; t < mesh.num_tets(); t++)
  {
    const auto &tet = mesh.tets()[t];
    // Midpoint vertex id of the edge joining local vertices a and b.
    std::array<std::array<int, 4>, 4> mid{};
    for (int i = 0; i < 6; i++)
    {
      const int a = kTetEdges[i][0], b = kTetEdges[i][1];
      mid[a][b] = mid[b][a] = nv + mesh.tet_edges()[t][i];
    }
    const int v0 = tet[0], v1 = tet[1], v2 = tet[2], v3 = tet[3];
    tets.push_back({v0, mid[0][1], mid[0][2], mid[0][3]});
    tets.push_back({mid[0][1], v1, mid[1][2], mid[1][3]});
    tets.push_back({mid[0][2], mid[1][2], v2, mid[2][3]});
    tets.push_back({mid[0][3], mid[1][3], mid[2][3], v3});

    // The octahedron diagonals join midpoints of opposite edges.
    static constexpr std::array<std::array<int, 4>, 3> diagonals = {
        {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    std::array<double, 3> len{};
    for (int d = 0; d < 3; d++)
    {
      const auto &g = diagonals[d];
      len[d] = norm(sub(vertices[mid[g[0]][g[1]]], vertices[mid[g[2]][g[3]]]));
    }
    const double shortest = *std::min_element(len.begin(), len.end());
    int best = -1;
    std::array<int, 2> best_key{};
    for (int d = 0; d < 3; d++)
    {
      if (len[d] > shortest * (1.0 + 1e-12))
      {
        continue;
      }
      const auto &g = diagonals[d];
      const int p = mid[g[0]][g[1]], q = mid[g[2]][g[3]];
      const std::array<int, 2> key = {std::min(p, q), std::max(p, q)};
      if (best < 0 || key < best_key)
      {
        best = d;
        best_key = key;
      }
    }
    const auto &g = diagonals[best];
    const int p = mid[g[0]][g[1]], q = mid[g[2]][g[3]];
    // The remaining midpoints form a 4-cycle; consecutive ones share an original vertex.
    // Edges (g0,g2),(g2,g1),(g1,g3),(g3,g0) give the cycle order.
    const std::array<int, 4> ring = {mid[g[0]][g[2]], mid[g[2]][g[1]], mid[g[1]][g[3]],
                                     mid[g[3]][g[0]]};
    for (int r = 0; r < 4; r++)
    {
      tets.push_back({p, q, ring[r], ring[(r + 1) % 4]});
    }
  }
  return Mesh::from_cells(std::move(vertices), std::move(tets), mesh.domain());
}

double radius_ratio(const Mesh &mesh, int t)
{
  const auto &tet = mesh.tets()[t];
  const auto &p = mesh.vertices();
  const Point a = sub(p[tet[1]], p[tet[0]]);
  const Point b = sub(p[tet[2]], p[tet[0]]);
  const Point c = sub(p[tet[3]], p[tet[0]]);
  const double six_vol = det3(a, b, c);
  double area = 0.0;
  for (const auto &lf : kTetFaces)
  {
    area += 0.5 * norm(cross(sub(p[tet[lf[1]]], p[tet[lf[0]]]), sub(p[tet[lf[2]]], p[tet[lf[0]]])));
  }
  const double inradius = 0.5 * six_vol / area;  // 3V / A
  // Circumcenter offset x solves 2 [a;b;c] x = (|a|^2, |b|^2, |c|^2).
  const Point bc = cross(b, c), ca = cross(c, a), ab = cross(a, b);
  const double aa = dot(a, a), bb = dot(b, b), cc = dot(c, c);
  Point x;
  for (int d = 0; d < 3; d++)
  {
    x[d] = (aa * bc[d] + bb * ca[d] + cc * ab[d]) / (2.0 * six_vol);
  }
  return inradius / norm(x);
}

QualityReport quality_report(const Mesh &mesh)
{
  QualityReport r;
  r.min_radius_ratio = std::numeric_limits<double>::infinity();
  r.max_radius_ratio = 0.0;
  for (std::size_t t = 0; t < mesh.num_tets(); t++)
  {
    const double q = radius_ratio(mesh, static_cast<int>(t));
    r.min_radius_ratio = std::min(r.min_radius_ratio, q);
    r.max_radius_ratio = std::max(r.max_radius_ratio, q);
  }
  r.h_min = std::numeric_limits<double>::infinity();
  r.h_max = 0.0;
  for (const auto &e : mesh.edges())
  {
    const double len = norm(sub(mesh.vertices()[e[1]], mesh.vertices()[e[0]]));
    r.h_min = std::min(r.h_min, len);
    r.h_max = std::max(r.h_max, len);
  }
  r.h_ratio = r.h_max / r.h_min;
  return r;
}

void validate(const Mesh &mesh)
{
  for (std::size_t t = 0; t < mesh.num_tets(); t++)
  {
    if (!(mesh.signed_volume(static_cast<int>(t)) > 0.0))
    {
      throw GeometryError("tet " + std::to_string(t) + " has non-positive volume");
    }
  }
  for (const auto &e : mesh.edges())
  {
    if (!(e[0] < e[1]))
    {
      throw GeometryError("edge not ascending");
    }
  }
  for (const auto &f : mesh.faces())
  {
    if (!(f[0] < f[1] && f[1] < f[2]))
    {
      throw GeometryError("face not ascending");
    }
  }
  std::vector<int> count(mesh.num_faces(), 0);
  for (const auto &tf : mesh.tet_faces())
  {
    for (int f : tf)
    {
      count[f]++;
    }
  }
  for (std::size_t f = 0; f < mesh.num_faces(); f++)
  {
    const int expected = mesh.is_boundary_face(static_cast<int>(f)) ? 1 : 2;
    if (count[f] != expected)
    {
      throw GeometryError("face " + std::to_string(f) + " has wrong tet multiplicity");
    }
  }

  // Boundary of boundary: sum over faces of sign * (boundary of the ascending face) vanishes.
  for (std::size_t t = 0; t < mesh.num_tets(); t++)
  {
    const auto ti = static_cast<int>(t);
    std::array<int, 6> acc{};
    for (int i = 0; i < 4; i++)
    {
      const auto &fv = mesh.faces()[mesh.tet_faces()[t][i]];
      const int s = mesh.tet_face_signs()[t][i];
      // boundary of [a,b,c] = [b,c] - [a,c] + [a,b]
      const std::array<std::array<int, 2>, 3> pairs = {{{fv[1], fv[2]}, {fv[0], fv[2]}, {fv[0], fv[1]}}};
      const std::array<int, 3> inc = {1, -1, 1};
      for (int j = 0; j < 3; j++)
      {
        const int e = mesh.edge_of(ti, pairs[j][0], pairs[j][1]);
        for (int le = 0; le < 6; le++)
        {
          if (mesh.tet_edges()[t][le] == e)
          {
            acc[le] += s * inc[j];
          }
        }
      }
    }
    for (int le = 0; le < 6; le++)
    {
      if (acc[le] != 0)
      {
        throw GeometryError("incidence signs violate the boundary-of-boundary identity");
      }
      const auto &tet = mesh.tets()[t];
      const int expected = tet[kTetEdges[le][0]] < tet[kTetEdges[le][1]] ? 1 : -1;
      if (mesh.tet_edge_signs()[t][le] != expected)
      {
        throw GeometryError("edge sign inconsistent with global orientation");
      }
    }
  }

  const long chi = mesh.euler_characteristic();
  const long expected = mesh.domain() == DomainTag::unit_cube ? 1 : 2;
  if (chi != expected)
  {
    throw GeometryError("Euler characteristic " + std::to_string(chi) + " != " +
                        std::to_string(expected));
  }
}

void write_mesh_text(const Mesh &mesh, std::ostream &os)
{
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "domain " << to_string(mesh.domain()) << "\n";
  os << "vertices " << mesh.num_vertices() << "\n";
  for (const auto &p : mesh.vertices())
  {
    os << p[0] << " " << p[1] << " " << p[2] << "\n";
  }
  os << "tets " << mesh.num_tets() << "\n";
  for (const auto &t : mesh.tets())
  {
    os << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  }
  os << "edges " << mesh.num_edges() << "\n";
  for (const auto &e : mesh.edges())
  {
    os << e[0] << " " << e[1] << "\n";
  }
  os << "faces " << mesh.num_faces() << "\n";
  for (const auto &f : mesh.faces())
  {
    os << f[0] << " " << f[1] << " " << f[2] << "\n";
  }
  os << "boundary_faces " << mesh.num_boundary_faces() << "\n";
  for (std::size_t f = 0; f < mesh.num_faces(); f++)
  {
    if (mesh.is_boundary_face(static_cast<int>(f)))
    {
      os << f << "\n";
    }
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace feec
