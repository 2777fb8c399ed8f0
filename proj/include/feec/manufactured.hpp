// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_MANUFACTURED_HPP
#define FEEC_MANUFACTURED_HPP

#include <string>
#include <string_view>

#include "feec/mesh.hpp"
#include "feec/space.hpp"

namespace feec
{

enum class CaseId
{
  I,
  II,
  III
};

std::string_view to_string(CaseId id);
// Accepts "I", "II", "III" (also "1", "2", "3"); anything else raises ConfigError.
CaseId parse_case_id(std::string_view text);

// Exact solution with analytically derived data. All fields are closed-form.
struct ManufacturedCase
{
  CaseId id = CaseId::II;
  DomainTag domain = DomainTag::unit_cube;
  bool convex = true;
  bool has_pressure = false;

  VectorField u;
  VectorField mu;       // curl u
  VectorField curl_mu;  // curl curl u
  ScalarField div_u;
  VectorField f;        // -lap u (+ grad p)
  ScalarField p;        // null unless has_pressure
  ScalarField g;        // div u (stokes data); null unless has_pressure
  std::string notes;
};

ManufacturedCase make_case(CaseId id);

}  // namespace feec

#endif  // FEEC_MANUFACTURED_HPP
