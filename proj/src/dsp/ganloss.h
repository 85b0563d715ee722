// dsp/ganloss.h

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

#ifndef UVC_DSP_GANLOSS_H_
#define UVC_DSP_GANLOSS_H_

#include <array>
#include <vector>

namespace uvc {

// The full vocoder adversary normally pairs multi-scale discriminators over
// sliding windows with multi-period discriminators that subsample the
// signal; those rates are recorded here for reference. This toolkit keeps
// the generator deterministic, so the loss formulas below are pure
// functions of externally supplied discriminator outputs.
inline constexpr std::array<int, 2> kMsdWindowSizes = {2, 4};
inline constexpr std::array<int, 5> kMpdPeriods = {2, 3, 5, 7, 11};

inline constexpr double kLambdaFeatureMatch = 2.0;
inline constexpr double kLambdaReconstruction = 45.0;

// Outputs of one discriminator: its final score vector and the per-layer
// intermediate feature maps (flattened).
struct DiscOutput {
  std::vector<double> scores;
  std::vector<std::vector<double>> features;
};

struct LossBundle {
  std::vector<double> l_adv;  // per discriminator: ||1 - D(x_hat)||^2
  std::vector<double> l_d;    // per discriminator: ||1-D(x)||^2 + ||D(x_hat)||^2
  std::vector<double> l_fm;   // per discriminator: sum_j ||xi_j(x)-xi_j(x_hat)||_1
  double l_recon = 0.0;       // mean-abs log-mel difference
  double l_g_total = 0.0;     // sum_i (l_adv_i + lambda_fm l_fm_i) + lambda_r l_recon
  double l_d_total = 0.0;     // sum_i l_d_i
};

// real[i] and fake[i] must be congruent (same score lengths, same feature
// layer shapes); mel matrices must be congruent as well.
LossBundle GanLosses(const std::vector<DiscOutput> &real,
                     const std::vector<DiscOutput> &fake,
                     const std::vector<std::vector<double>> &mel_real,
                     const std::vector<std::vector<double>> &mel_fake);

}  // namespace uvc

#endif  // UVC_DSP_GANLOSS_H_
