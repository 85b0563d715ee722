// tests/kernels_test.cc

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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "base/parallel.h"
#include "base/rng.h"
#include "nn/kernels.h"

using namespace uvc;

namespace {

std::vector<double> RandomVec(size_t n, Rng *rng) {
  std::vector<double> v(n);
  for (auto &x : v) x = rng->Uniform(-1.0, 1.0);
  return v;
}

void CheckClose(const std::vector<double> &a, const std::vector<double> &b,
                double tol) {
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < tol);
}

}  // namespace

TEST_CASE("gemm variants match the serial reference") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    int m = 1 + static_cast<int>(rng.UniformInt(0, 17));
    int k = 1 + static_cast<int>(rng.UniformInt(0, 17));
    int n = 1 + static_cast<int>(rng.UniformInt(0, 17));
    auto a = RandomVec(static_cast<size_t>(m * k), &rng);
    auto at = RandomVec(static_cast<size_t>(k * m), &rng);
    auto b = RandomVec(static_cast<size_t>(k * n), &rng);
    auto bt = RandomVec(static_cast<size_t>(n * k), &rng);

    std::vector<double> c1(static_cast<size_t>(m * n)), c2 = c1;
    kernels::Gemm(a.data(), b.data(), c1.data(), m, k, n);
    kernels::ref::Gemm(a.data(), b.data(), c2.data(), m, k, n);
    CheckClose(c1, c2, 1e-12);

    kernels::GemmNT(a.data(), bt.data(), c1.data(), m, k, n);
    kernels::ref::GemmNT(a.data(), bt.data(), c2.data(), m, k, n);
    CheckClose(c1, c2, 1e-12);

    kernels::GemmTN(at.data(), b.data(), c1.data(), m, k, n);
    kernels::ref::GemmTN(at.data(), b.data(), c2.data(), m, k, n);
    CheckClose(c1, c2, 1e-12);
  }
}

TEST_CASE("accumulate adds onto existing output") {
  Rng rng(9);
  int m = 5, k = 7, n = 3;
  auto a = RandomVec(static_cast<size_t>(m * k), &rng);
  auto b = RandomVec(static_cast<size_t>(k * n), &rng);
  std::vector<double> base = RandomVec(static_cast<size_t>(m * n), &rng);
  std::vector<double> c = base, once(static_cast<size_t>(m * n));
  kernels::Gemm(a.data(), b.data(), once.data(), m, k, n);
  kernels::Gemm(a.data(), b.data(), c.data(), m, k, n, /*accumulate=*/true);
  for (size_t i = 0; i < c.size(); ++i)
    CHECK(std::abs(c[i] - (base[i] + once[i])) < 1e-12);
}

TEST_CASE("parallel toggle is bit-exact") {
  // Each output element is produced by one iteration with a fixed inner
  // order, so enabling OpenMP must not change a single bit.
  Rng rng(11);
  int m = 33, k = 29, n = 31;
  auto a = RandomVec(static_cast<size_t>(m * k), &rng);
  auto b = RandomVec(static_cast<size_t>(k * n), &rng);
  std::vector<double> c_par(static_cast<size_t>(m * n)), c_ser = c_par;
  SetParallelEnabled(true);
  kernels::Gemm(a.data(), b.data(), c_par.data(), m, k, n);
  SetParallelEnabled(false);
  kernels::Gemm(a.data(), b.data(), c_ser.data(), m, k, n);
  SetParallelEnabled(true);
  CHECK(c_par == c_ser);
}

TEST_CASE("float instantiation works") {
  std::vector<float> a = {1, 2, 3, 4};   // 2x2
  std::vector<float> b = {5, 6, 7, 8};   // 2x2
  std::vector<float> c(4);
  kernels::Gemm(a.data(), b.data(), c.data(), 2, 2, 2);
  CHECK(c == std::vector<float>{19, 22, 43, 50});
}
