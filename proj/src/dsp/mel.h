// dsp/mel.h

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

#ifndef UVC_DSP_MEL_H_
#define UVC_DSP_MEL_H_

#include <vector>

#include "dsp/wav.h"

namespace uvc {

struct MelConfig {
  int n_fft = 1024;
  int hop = kSamplesPerFrame;  // one mel frame per 20 ms unit frame
  int mel_bins = 80;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;
  double log_floor = 1e-5;
};

// Log power-mel spectrogram: centered Hann STFT with reflection padding,
// HTK-style triangular filterbank over |X|^2, then log(max(x, floor)).
// Frame count is ceil(len / hop); one row per frame.
std::vector<std::vector<double>> MelSpectrogram(const Waveform &wav,
                                                const MelConfig &cfg = {});

// Mel points (bins+2 of them, in Hz) defining the triangular filters; the
// b-th filter rises over [pt[b], pt[b+1]] and falls over [pt[b+1], pt[b+2]].
std::vector<double> MelFilterPointsHz(const MelConfig &cfg);

double HzToMel(double hz);
double MelToHz(double mel);

}  // namespace uvc

#endif  // UVC_DSP_MEL_H_
