// base/parallel.h

// Copyright 2026  UVC Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef UVC_BASE_PARALLEL_H_
#define UVC_BASE_PARALLEL_H_

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace uvc {

// Process-wide switch for the OpenMP kernel variants. Every parallel loop
// in this codebase writes each output element from exactly one iteration,
// so results are bit-identical for any thread count; the switch exists for
// the serial-vs-parallel comparison tests and the benchmark tool.
void SetParallelEnabled(bool enabled);
bool ParallelEnabled();

int NumThreads();

// Static-schedule parallel for over [0, n). Body must not touch state shared
// across iterations.
template <typename Body>
void ParallelFor(int64_t n, const Body &body) {
#ifdef _OPENMP
  if (ParallelEnabled() && n > 1) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace uvc

#endif  // UVC_BASE_PARALLEL_H_
