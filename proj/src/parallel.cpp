// SPDX-License-Identifier: Apache-2.0

#include "feec/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace feec
{

int thread_count()
{
  static const int count = [] {
    int n = omp_get_max_threads();
    if (const char *env = std::getenv("FEEC_THREADS"))
    {
      try
      {
        const int requested = std::stoi(env);
        if (requested > 0)
        {
          n = requested;
        }
      }
      catch (const std::exception &)
      {
        // Ignore malformed values and keep the default.
      }
    }
    return n;
  }();
  return count;
}

}  // namespace feec
