// dsp/ganloss.cc

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

#include "dsp/ganloss.h"

#include <cmath>

#include "base/common.h"

namespace uvc {

LossBundle GanLosses(const std::vector<DiscOutput> &real,
                     const std::vector<DiscOutput> &fake,
                     const std::vector<std::vector<double>> &mel_real,
                     const std::vector<std::vector<double>> &mel_fake) {
  UVC_CHECK_INPUT(real.size() == fake.size());
  UVC_CHECK_INPUT(mel_real.size() == mel_fake.size());

  LossBundle bundle;
  for (size_t i = 0; i < real.size(); ++i) {
    const DiscOutput &r = real[i];
    const DiscOutput &f = fake[i];
    UVC_CHECK_INPUT(r.scores.size() == f.scores.size());
    UVC_CHECK_INPUT(r.features.size() == f.features.size());

    double adv = 0.0, d_real = 0.0, d_fake = 0.0;
    for (size_t j = 0; j < f.scores.size(); ++j) {
      adv += (1.0 - f.scores[j]) * (1.0 - f.scores[j]);
      d_real += (1.0 - r.scores[j]) * (1.0 - r.scores[j]);
      d_fake += f.scores[j] * f.scores[j];
    }

    double fm = 0.0;
    for (size_t j = 0; j < r.features.size(); ++j) {
      UVC_CHECK_INPUT(r.features[j].size() == f.features[j].size());
      for (size_t k = 0; k < r.features[j].size(); ++k)
        fm += std::abs(r.features[j][k] - f.features[j][k]);
    }

    bundle.l_adv.push_back(adv);
    bundle.l_d.push_back(d_real + d_fake);
    bundle.l_fm.push_back(fm);
  }

  double abs_sum = 0.0;
  size_t count = 0;
  for (size_t t = 0; t < mel_real.size(); ++t) {
    UVC_CHECK_INPUT(mel_real[t].size() == mel_fake[t].size());
    for (size_t b = 0; b < mel_real[t].size(); ++b) {
      abs_sum += std::abs(mel_real[t][b] - mel_fake[t][b]);
      ++count;
    }
  }
  bundle.l_recon = count > 0 ? abs_sum / static_cast<double>(count) : 0.0;

  for (size_t i = 0; i < bundle.l_adv.size(); ++i) {
    bundle.l_g_total += bundle.l_adv[i] + kLambdaFeatureMatch * bundle.l_fm[i];
    bundle.l_d_total += bundle.l_d[i];
  }
  bundle.l_g_total += kLambdaReconstruction * bundle.l_recon;
  return bundle;
}

}  // namespace uvc
