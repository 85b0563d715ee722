// dsp/pitch.h

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

#ifndef UVC_DSP_PITCH_H_
#define UVC_DSP_PITCH_H_

#include <string>

#include "corpus/corpus.h"
#include "dsp/wav.h"

namespace uvc {

struct PitchConfig {
  double fmin_hz = 60.0;
  double fmax_hz = 400.0;
  double voicing_threshold = 0.55;
  int window = 1024;  // analysis window in samples, centered on the frame
};

// Normalized-autocorrelation pitch tracker with parabolic peak refinement.
// One value per 20 ms frame, 0 for unvoiced. Candidate lags are scanned
// smallest first and the first strong local peak wins, which keeps a
// harmonic-rich source (e.g. a 100 Hz sawtooth) from resolving an octave
// high or low.
ProsodyTrack ExtractF0(const Waveform &wav, const PitchConfig &cfg = {});

// F0 track file: one decimal Hz value per 20 ms frame, 0 = unvoiced.
ProsodyTrack ReadF0File(const std::string &path);
void WriteF0File(const std::string &path, const ProsodyTrack &track);

}  // namespace uvc

#endif  // UVC_DSP_PITCH_H_
