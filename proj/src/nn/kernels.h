// nn/kernels.h

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

#ifndef UVC_NN_KERNELS_H_
#define UVC_NN_KERNELS_H_

#include "base/parallel.h"

// Row-major GEMM kernels backing every dense op in the toolkit. The main
// variants parallelize over output rows with OpenMP; each output element is
// produced by exactly one iteration with a fixed inner summation order, so
// results do not depend on the thread count. kernels::ref holds naive
// triple-loop implementations kept as the correctness reference for tests
// and the benchmark baseline (their summation order differs, so comparisons
// are made with a tolerance).
namespace uvc::kernels {

// C[m x n] = A[m x k] * B[k x n]  (+= if accumulate)
template <typename T>
void Gemm(const T *a, const T *b, T *c, int m, int k, int n,
          bool accumulate = false) {
  ParallelFor(m, [&](int64_t i) {
    T *ci = c + i * n;
    if (!accumulate) {
      for (int j = 0; j < n; ++j) ci[j] = T(0);
    }
    const T *ai = a + i * k;
    for (int l = 0; l < k; ++l) {
      T av = ai[l];
      const T *bl = b + static_cast<int64_t>(l) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bl[j];
    }
  });
}

// C[m x n] = A[m x k] * B[n x k]^T
template <typename T>
void GemmNT(const T *a, const T *b, T *c, int m, int k, int n,
            bool accumulate = false) {
  ParallelFor(m, [&](int64_t i) {
    const T *ai = a + i * k;
    T *ci = c + i * n;
    for (int j = 0; j < n; ++j) {
      const T *bj = b + static_cast<int64_t>(j) * k;
      T sum = T(0);
      for (int l = 0; l < k; ++l) sum += ai[l] * bj[l];
      ci[j] = accumulate ? ci[j] + sum : sum;
    }
  });
}

// C[m x n] = A[k x m]^T * B[k x n]
template <typename T>
void GemmTN(const T *a, const T *b, T *c, int m, int k, int n,
            bool accumulate = false) {
  ParallelFor(m, [&](int64_t i) {
    T *ci = c + i * n;
    if (!accumulate) {
      for (int j = 0; j < n; ++j) ci[j] = T(0);
    }
    for (int l = 0; l < k; ++l) {
      T av = a[static_cast<int64_t>(l) * m + i];
      const T *bl = b + static_cast<int64_t>(l) * n;
      for (int j = 0; j < n; ++j) ci[j] += av * bl[j];
    }
  });
}

namespace ref {

template <typename T>
void Gemm(const T *a, const T *b, T *c, int m, int k, int n,
          bool accumulate = false) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      T sum = T(0);
      for (int l = 0; l < k; ++l) sum += a[i * k + l] * b[l * n + j];
      c[i * n + j] = accumulate ? c[i * n + j] + sum : sum;
    }
  }
}

template <typename T>
void GemmNT(const T *a, const T *b, T *c, int m, int k, int n,
            bool accumulate = false) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      T sum = T(0);
      for (int l = 0; l < k; ++l) sum += a[i * k + l] * b[j * k + l];
      c[i * n + j] = accumulate ? c[i * n + j] + sum : sum;
    }
  }
}

template <typename T>
void GemmTN(const T *a, const T *b, T *c, int m, int k, int n,
            bool accumulate = false) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      T sum = T(0);
      for (int l = 0; l < k; ++l) sum += a[l * m + i] * b[l * n + j];
      c[i * n + j] = accumulate ? c[i * n + j] + sum : sum;
    }
  }
}

}  // namespace ref

}  // namespace uvc::kernels

#endif  // UVC_NN_KERNELS_H_
