// nn/tensor.h

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

#ifndef UVC_NN_TENSOR_H_
#define UVC_NN_TENSOR_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "base/common.h"
#include "base/rng.h"

namespace uvc::nn {

// Dense row-major tensor. The training path instantiates T = float; the
// gradient-verification path instantiates T = double.
template <typename T>
struct TensorT {
  std::vector<int> shape;
  std::vector<T> data;

  TensorT() = default;
  explicit TensorT(std::vector<int> s) : shape(std::move(s)) {
    data.assign(static_cast<size_t>(Numel(shape)), T(0));
  }
  TensorT(std::vector<int> s, std::vector<T> d)
      : shape(std::move(s)), data(std::move(d)) {
    UVC_CHECK(static_cast<int64_t>(data.size()) == Numel(shape));
  }

  static int64_t Numel(const std::vector<int> &s) {
    int64_t n = 1;
    for (int d : s) {
      UVC_CHECK(d >= 0);
      n *= d;
    }
    return n;
  }

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  int rows() const { return shape.size() == 2 ? shape[0] : 1; }
  int cols() const { return shape.empty() ? 0 : shape.back(); }
  bool is_scalar() const { return numel() == 1; }
  T scalar() const {
    UVC_CHECK(is_scalar());
    return data[0];
  }

  T &at(int i, int j) { return data[static_cast<size_t>(i) * cols() + j]; }
  T at(int i, int j) const {
    return data[static_cast<size_t>(i) * cols() + j];
  }

  static TensorT Zeros(std::vector<int> s) { return TensorT(std::move(s)); }

  static TensorT Full(std::vector<int> s, T v) {
    TensorT t(std::move(s));
    for (auto &x : t.data) x = v;
    return t;
  }

  static TensorT Scalar(T v) { return TensorT({1}, {v}); }

  // Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)).
  static TensorT FanInUniform(std::vector<int> s, int fan_in, Rng *rng) {
    TensorT t(std::move(s));
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto &x : t.data)
      x = static_cast<T>(rng->Uniform(-bound, bound));
    return t;
  }

  bool SameShape(const TensorT &o) const { return shape == o.shape; }

  void CheckFinite(const char *what) const {
    for (const T &v : data) {
      if (!std::isfinite(static_cast<double>(v)))
        UVC_ERR << "non-finite value in " << what;
    }
  }

  std::string ShapeStr() const {
    std::string s = "[";
    for (size_t i = 0; i < shape.size(); ++i) {
      if (i) s += "x";
      s += std::to_string(shape[i]);
    }
    return s + "]";
  }
};

using Tensor = TensorT<float>;

// Named trainable tensor plus its gradient accumulator.
template <typename T>
struct ParamT {
  std::string name;
  TensorT<T> value;
  TensorT<T> grad;

  void Init(std::string n, TensorT<T> v) {
    name = std::move(n);
    grad = TensorT<T>(v.shape);
    value = std::move(v);
  }
  void ZeroGrad() {
    for (auto &g : grad.data) g = T(0);
  }
};

}  // namespace uvc::nn

#endif  // UVC_NN_TENSOR_H_
