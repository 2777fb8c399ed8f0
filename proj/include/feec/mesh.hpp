// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_MESH_HPP
#define FEEC_MESH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace feec
{

using Point = std::array<double, 3>;

enum class DomainTag
{
  unit_cube,
  cube_with_void
};

std::string_view to_string(DomainTag tag);

// Local entity numbering of a tetrahedron with local vertices 0..3. Edge i joins
// kTetEdges[i]; face i is opposite to local vertex i and lists the remaining vertices in
// ascending local order.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

//
// Conforming tetrahedral mesh with globally oriented edges and faces.
//
// Global orientation is induced by vertex ids: an edge points from its lower to its higher
// vertex and a face is identified by (and oriented as) its ascending vertex triple. The
// per-tet incidence tables refer to the positively oriented local vertex order stored in
// tets(); the signs record whether the local entity orientation (edge: first->second local
// vertex, face: induced boundary orientation of the tet) agrees with the global one.
//
// A Mesh is immutable after construction.
//
class Mesh
{
public:
  // Derives all topology from vertex coordinates and cells. Cells with negative signed
  // volume are reoriented; degenerate cells raise GeometryError.
  static Mesh from_cells(std::vector<Point> vertices, std::vector<std::array<int, 4>> tets,
                         DomainTag tag);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_faces() const { return faces_.size(); }
  std::size_t num_tets() const { return tets_.size(); }

  std::span<const Point> vertices() const { return vertices_; }
  std::span<const std::array<int, 4>> tets() const { return tets_; }
  std::span<const std::array<int, 2>> edges() const { return edges_; }
  std::span<const std::array<int, 3>> faces() const { return faces_; }

  std::span<const std::array<int, 6>> tet_edges() const { return tet_edges_; }
  std::span<const std::array<std::int8_t, 6>> tet_edge_signs() const { return tet_edge_signs_; }
  std::span<const std::array<int, 4>> tet_faces() const { return tet_faces_; }
  std::span<const std::array<std::int8_t, 4>> tet_face_signs() const { return tet_face_signs_; }

  // Adjacent tets of each face; the second entry is -1 on the boundary.
  std::span<const std::array<int, 2>> face_tets() const { return face_tets_; }

  bool is_boundary_face(int f) const { return boundary_face_[f] != 0; }
  bool is_boundary_edge(int e) const { return boundary_edge_[e] != 0; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  std::size_t num_boundary_faces() const;

  // Vertex ids of tet t sorted ascending. This order defines the reference map used by all
  // finite element spaces, so entity orientations of the reference cell coincide with the
  // global ones.
  std::array<int, 4> sorted_tet(int t) const;

  // Global edge/face id for an (unordered) vertex pair/triple of tet t.
  int edge_of(int t, int a, int b) const;
  int face_of(int t, int a, int b, int c) const;

  double signed_volume(int t) const;
  double total_volume() const;
  double h_max() const { return h_max_; }
  DomainTag domain() const { return domain_; }

  // Euler characteristic V - E + F - T.
  long euler_characteristic() const;

private:
  Mesh() = default;

  std::vector<Point> vertices_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<std::array<int, 6>> tet_edges_;
  std::vector<std::array<std::int8_t, 6>> tet_edge_signs_;
  std::vector<std::array<int, 4>> tet_faces_;
  std::vector<std::array<std::int8_t, 4>> tet_face_signs_;
  std::vector<std::array<int, 2>> face_tets_;
  std::vector<std::uint8_t> boundary_face_, boundary_edge_, boundary_vertex_;
  double h_max_ = 0.0;
  DomainTag domain_ = DomainTag::unit_cube;
};

// Kuhn (Freudenthal) triangulation of (0,1)^3 with n subdivisions per axis: (n+1)^3
// vertices and 6 n^3 tets.
Mesh build_structured_cube(int n);

// (0,1)^3 minus [1/3,2/3]^3, obtained from the structured cube by removing the cells of the
// inner block. Requires n to be a positive multiple of 3.
Mesh build_cube_with_void(int n);

// Regular (red) refinement: each tet is split into 4 corner tets and 4 tets of the inner
// octahedron, cut along its shortest diagonal (ties broken by ascending vertex ids).
Mesh refine_uniform(const Mesh &mesh);

struct QualityReport
{
  // Inradius-to-circumradius ratio (1/3 for the regular tetrahedron).
  double min_radius_ratio = 0.0;
  double max_radius_ratio = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double h_ratio = 0.0;
};

double radius_ratio(const Mesh &mesh, int t);
QualityReport quality_report(const Mesh &mesh);

// Checks every structural invariant (positive volumes, face multiplicities, orientation
// conventions, incidence signs, Euler-Poincare). Throws GeometryError on the first
// violation.
void validate(const Mesh &mesh);

// Plain-text dump: one section per entity list, zero-based ids, 17 significant digits.
void write_mesh_text(const Mesh &mesh, std::ostream &os);

}  // namespace feec

#endif  // FEEC_MESH_HPP
