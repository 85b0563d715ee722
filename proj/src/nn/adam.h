// nn/adam.h

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

#ifndef UVC_NN_ADAM_H_
#define UVC_NN_ADAM_H_

#include <cmath>
#include <vector>

#include "nn/layers.h"
#include "nn/tensor.h"

namespace uvc::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
};

// Bias-corrected Adam over a fixed parameter list. Moments are keyed by
// list position, so the list must not change between steps.
template <typename T>
class AdamT {
 public:
  AdamT(ParamList<T> params, const AdamConfig &cfg)
      : params_(std::move(params)), cfg_(cfg) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (auto *p : params_) {
      m_.emplace_back(p->value.shape);
      v_.emplace_back(p->value.shape);
    }
  }

  int64_t step_count() const { return step_; }

  // Applies one update from the gradients accumulated in each param, then
  // clears them.
  void Step() {
    ++step_;
    double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (size_t pi = 0; pi < params_.size(); ++pi) {
      ParamT<T> *p = params_[pi];
      UVC_CHECK(p->grad.SameShape(p->value));
      TensorT<T> &m = m_[pi];
      TensorT<T> &v = v_[pi];
      for (int64_t i = 0; i < p->value.numel(); ++i) {
        double g = static_cast<double>(p->grad.data[i]);
        if (!std::isfinite(g))
          UVC_ERR << "non-finite gradient in parameter " << p->name;
        double mi = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * g;
        double vi = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * g * g;
        m.data[i] = static_cast<T>(mi);
        v.data[i] = static_cast<T>(vi);
        double mhat = mi / bc1;
        double vhat = vi / bc2;
        p->value.data[i] -=
            static_cast<T>(cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps));
      }
      p->ZeroGrad();
    }
  }

 private:
  ParamList<T> params_;
  AdamConfig cfg_;
  std::vector<TensorT<T>> m_, v_;
  int64_t step_ = 0;
};

using Adam = AdamT<float>;

}  // namespace uvc::nn

#endif  // UVC_NN_ADAM_H_
