// base/parallel.cc

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

#include "base/parallel.h"

namespace uvc {

namespace {
bool g_parallel_enabled = true;
}  // namespace

void SetParallelEnabled(bool enabled) { g_parallel_enabled = enabled; }

bool ParallelEnabled() { return g_parallel_enabled; }

int NumThreads() {
#ifdef _OPENMP
  return g_parallel_enabled ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

}  // namespace uvc
