// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "feec/error.hpp"
#include "feec/mesh.hpp"

namespace feec
{
namespace
{

std::set<std::pair<int, int>> brute_force_edges(const Mesh &mesh)
{
  std::set<std::pair<int, int>> edges;
  for (const auto &tet : mesh.tets())
  {
    for (int a = 0; a < 4; a++)
    {
      for (int b = a + 1; b < 4; b++)
      {
        edges.insert(std::minmax(tet[a], tet[b]));
      }
    }
  }
  return edges;
}

int find_root(std::vector<int> &parent, int i)
{
  while (parent[i] != i)
  {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

// Components of the boundary surface, faces joined through shared boundary edges.
int boundary_components(const Mesh &mesh)
{
  std::vector<int> parent(mesh.num_faces());
  std::iota(parent.begin(), parent.end(), 0);
  std::map<std::pair<int, int>, int> first_face;
  int count = 0;
  for (int f = 0; f < static_cast<int>(mesh.num_faces()); f++)
  {
    if (!mesh.is_boundary_face(f))
    {
      continue;
    }
    count++;
    const auto &v = mesh.faces()[f];
    for (auto [a, b] : {std::pair{v[0], v[1]}, std::pair{v[0], v[2]}, std::pair{v[1], v[2]}})
    {
      auto [it, inserted] = first_face.emplace(std::pair{a, b}, f);
      if (!inserted)
      {
        const int ra = find_root(parent, f), rb = find_root(parent, it->second);
        if (ra != rb)
        {
          parent[ra] = rb;
          count--;
        }
      }
    }
  }
  return count;
}

TEST(StructuredCube, VertexAndCellCounts)
{
  const Mesh m1 = build_structured_cube(1);
  EXPECT_EQ(m1.num_vertices(), 8u);
  EXPECT_EQ(m1.num_tets(), 6u);
  const Mesh m2 = build_structured_cube(2);
  EXPECT_EQ(m2.num_vertices(), 27u);
  EXPECT_EQ(m2.num_tets(), 48u);
}

TEST(StructuredCube, EdgesMatchBruteForceAndEulerCharacteristic)
{
  for (int n : {1, 2, 3})
  {
    const Mesh m = build_structured_cube(n);
    EXPECT_EQ(m.num_edges(), brute_force_edges(m).size()) << "n=" << n;
    EXPECT_EQ(m.euler_characteristic(), 1) << "n=" << n;
    EXPECT_NO_THROW(validate(m));
  }
}

TEST(StructuredCube, RejectsZeroSubdivisions)
{
  EXPECT_THROW(build_structured_cube(0), DomainError);
}

TEST(StructuredCube, VolumeAndOrientation)
{
  const Mesh m = build_structured_cube(3);
  EXPECT_NEAR(m.total_volume(), 1.0, 1e-13);
  for (int t = 0; t < static_cast<int>(m.num_tets()); t++)
  {
    EXPECT_GT(m.signed_volume(t), 0.0);
  }
}

TEST(StructuredCube, EdgesAscendAndFacesSorted)
{
  const Mesh m = build_structured_cube(2);
  for (const auto &e : m.edges())
  {
    EXPECT_LT(e[0], e[1]);
  }
  for (const auto &f : m.faces())
  {
    EXPECT_LT(f[0], f[1]);
    EXPECT_LT(f[1], f[2]);
  }
}

TEST(StructuredCube, FaceMultiplicity)
{
  const Mesh m = build_structured_cube(2);
  std::map<std::array<int, 3>, int> count;
  for (int t = 0; t < static_cast<int>(m.num_tets()); t++)
  {
    for (int f : m.tet_faces()[t])
    {
      count[m.faces()[f]]++;
    }
  }
  for (int f = 0; f < static_cast<int>(m.num_faces()); f++)
  {
    EXPECT_EQ(count[m.faces()[f]], m.is_boundary_face(f) ? 1 : 2);
  }
  // 6 sides, n^2 squares per side, 2 triangles per square.
  EXPECT_EQ(m.num_boundary_faces(), 48u);
}

TEST(StructuredCube, BoundaryOfBoundaryVanishes)
{
  const Mesh m = build_structured_cube(2);
  for (int t = 0; t < static_cast<int>(m.num_tets()); t++)
  {
    std::map<int, int> chain;
    for (int i = 0; i < 4; i++)
    {
      const int f = m.tet_faces()[t][i];
      const int s = m.tet_face_signs()[t][i];
      const auto &v = m.faces()[f];
      // d[a,b,c] = [b,c] - [a,c] + [a,b] with globally oriented edges.
      chain[m.edge_of(t, v[1], v[2])] += s;
      chain[m.edge_of(t, v[0], v[2])] -= s;
      chain[m.edge_of(t, v[0], v[1])] += s;
    }
    for (auto [edge, c] : chain)
    {
      EXPECT_EQ(c, 0) << "tet " << t << " edge " << edge;
    }
  }
}

TEST(StructuredCube, QualityBounds)
{
  const QualityReport q = quality_report(build_structured_cube(2));
  EXPECT_LE(q.h_ratio, std::sqrt(3.0) + 1e-12);
  EXPECT_NEAR(q.h_max, std::sqrt(3.0) / 2.0, 1e-14);
  // Kuhn tets are congruent, so the shape measure is the same for all of them.
  EXPECT_NEAR(q.min_radius_ratio, q.max_radius_ratio, 1e-12);
}

TEST(CubeWithVoid, CountsAndTopology)
{
  const Mesh m = build_cube_with_void(3);
  EXPECT_EQ(m.num_tets(), 156u);
  EXPECT_EQ(m.euler_characteristic(), 2);
  EXPECT_NEAR(m.total_volume(), 26.0 / 27.0, 1e-13);
  EXPECT_EQ(m.domain(), DomainTag::cube_with_void);
  EXPECT_NO_THROW(validate(m));
}

TEST(CubeWithVoid, TwoBoundaryComponents)
{
  EXPECT_EQ(boundary_components(build_cube_with_void(6)), 2);
  EXPECT_EQ(boundary_components(build_structured_cube(3)), 1);
}

TEST(CubeWithVoid, RejectsNonMultiplesOfThree)
{
  EXPECT_THROW(build_cube_with_void(4), DomainError);
  EXPECT_THROW(build_cube_with_void(0), DomainError);
}

TEST(RefineUniform, ChildCountVolumeAndMeshSize)
{
  const Mesh coarse = build_structured_cube(1);
  const Mesh fine = refine_uniform(coarse);
  EXPECT_EQ(fine.num_tets(), 48u);
  EXPECT_NEAR(fine.h_max() / coarse.h_max(), 0.5, 1e-12);
  EXPECT_NEAR(fine.total_volume(), coarse.total_volume(), 1e-13);
  EXPECT_EQ(fine.euler_characteristic(), 1);
  EXPECT_NO_THROW(validate(fine));
}

TEST(RefineUniform, PreservesDomainTagAndTopology)
{
  const Mesh fine = refine_uniform(build_cube_with_void(3));
  EXPECT_EQ(fine.domain(), DomainTag::cube_with_void);
  EXPECT_EQ(fine.euler_characteristic(), 2);
  EXPECT_NEAR(fine.total_volume(), 26.0 / 27.0, 1e-13);
}

TEST(RefineUniform, QualityStaysBoundedOverLevels)
{
  Mesh m = build_structured_cube(1);
  const double q0 = quality_report(m).min_radius_ratio;
  for (int level = 1; level <= 3; level++)
  {
    m = refine_uniform(m);
    EXPECT_GE(quality_report(m).min_radius_ratio, 0.5 * q0) << "level " << level;
  }
}

TEST(MeshText, SectionsAndPrecision)
{
  std::ostringstream os;
  write_mesh_text(build_structured_cube(1), os);
  const std::string text = os.str();
  for (const char *section : {"vertices 8", "tets 6", "edges 19", "faces 18"})
  {
    EXPECT_NE(text.find(section), std::string::npos) << section;
  }
}

}  // namespace
}  // namespace feec
