// nn/gradcheck.h

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

#ifndef UVC_NN_GRADCHECK_H_
#define UVC_NN_GRADCHECK_H_

#include <functional>
#include <vector>

#include "nn/layers.h"
#include "nn/tape.h"

namespace uvc::nn {

// Central-finite-difference verification of reverse-mode gradients.
// build_loss must rebuild the loss deterministically (no dropout), and the
// whole check is meant to run with T = double.
//
// Returns max over parameter elements of
//   |analytic - fd| / max(|analytic|, |fd|, 1e-8).
template <typename T>
double GradCheck(const std::function<NodeId(TapeT<T> &)> &build_loss,
                 const ParamList<T> &params, double eps = 1e-4) {
  static_assert(sizeof(T) == 8,
                "gradient verification requires the 64-bit mode");
  for (auto *p : params) p->ZeroGrad();
  {
    TapeT<T> tape;
    NodeId loss = build_loss(tape);
    tape.Backward(loss);
  }
  std::vector<TensorT<T>> analytic;
  analytic.reserve(params.size());
  for (auto *p : params) analytic.push_back(p->grad);

  auto eval = [&]() -> double {
    TapeT<T> tape;
    return static_cast<double>(tape.value(build_loss(tape)).scalar());
  };

  double max_rel = 0.0;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    ParamT<T> *p = params[pi];
    for (int64_t i = 0; i < p->value.numel(); ++i) {
      T saved = p->value.data[i];
      p->value.data[i] = saved + static_cast<T>(eps);
      double up = eval();
      p->value.data[i] = saved - static_cast<T>(eps);
      double down = eval();
      p->value.data[i] = saved;
      double fd = (up - down) / (2.0 * eps);
      double an = static_cast<double>(analytic[pi].data[i]);
      double denom = std::max({std::abs(an), std::abs(fd), 1e-8});
      max_rel = std::max(max_rel, std::abs(an - fd) / denom);
    }
    p->ZeroGrad();
  }
  return max_rel;
}

}  // namespace uvc::nn

#endif  // UVC_NN_GRADCHECK_H_
