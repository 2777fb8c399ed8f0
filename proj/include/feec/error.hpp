// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_ERROR_HPP
#define FEEC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace feec
{

// Exception hierarchy. Each kind maps to one failure class of the library so the CLI can
// translate it into a stable exit code.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation (e.g. n = 0 for a mesh builder).
class DomainError : public Error
{
public:
  using Error::Error;
};

// Unsupported element family/degree, quadrature order or configuration key.
class ConfigError : public Error
{
public:
  using Error::Error;
};

// Degenerate or inverted cell geometry.
class GeometryError : public Error
{
public:
  using Error::Error;
};

// Operands that do not fit together (mismatched meshes, wrong space pairing, ...).
class UsageError : public Error
{
public:
  using Error::Error;
};

// Linear solver failure (singular factorization, residual above tolerance).
class SolverError : public Error
{
public:
  using Error::Error;
};

// Problem too large for a dense code path.
class CapabilityError : public Error
{
public:
  using Error::Error;
};

}  // namespace feec

#endif  // FEEC_ERROR_HPP
