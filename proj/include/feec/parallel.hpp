// SPDX-License-Identifier: Apache-2.0

#ifndef FEEC_PARALLEL_HPP
#define FEEC_PARALLEL_HPP

namespace feec
{

// Selects the cell-loop implementation. The serial path is the reference the OpenMP path
// is tested and benchmarked against; both produce bitwise identical results because
// per-cell work is buffered and reduced in cell order.
enum class Execution
{
  serial,
  parallel
};

// Thread budget: FEEC_THREADS if set to a positive integer, else the OpenMP default.
int thread_count();

}  // namespace feec

#endif  // FEEC_PARALLEL_HPP
