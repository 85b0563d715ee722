// dsp/vocoder.h

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

#ifndef UVC_DSP_VOCODER_H_
#define UVC_DSP_VOCODER_H_

#include <cstdint>
#include <vector>

#include "corpus/corpus.h"
#include "dsp/wav.h"

namespace uvc {

// Spectral envelope of one (speaker, emotion, unit) cell: harmonic
// amplitude rolloff and how much noise rides on top of the harmonics.
struct TimbreEntry {
  double rolloff = 0.75;    // harmonic h gets rolloff^(h-1)
  double noise_mix = 0.05;  // in [0, 0.3]
};

class TimbreTable {
 public:
  TimbreTable(int n_speakers, int n_units);

  // Deterministic table covering every (speaker, emotion, unit) cell.
  static TimbreTable MakeDefault(int n_speakers, int n_units, uint64_t seed);

  const TimbreEntry &Lookup(SpeakerId speaker, Emotion emotion,
                            UnitId unit) const;
  TimbreEntry &Cell(SpeakerId speaker, Emotion emotion, UnitId unit);

  int n_speakers() const { return n_speakers_; }
  int n_units() const { return n_units_; }

 private:
  int n_speakers_, n_units_;
  std::vector<TimbreEntry> entries_;
};

struct VocoderConfig {
  int max_harmonics = 10;
  double voiced_gain = 0.35;
  double unvoiced_gain = 0.08;
  int crossfade_samples = 80;  // 5 ms
  // Unvoiced gaps shorter than this inside a voiced region keep the last
  // voiced F0 so the excitation stays click-free.
  int bridge_gap_frames = 3;
};

// Deterministic harmonic source-filter synthesis. Exactly 320 output
// samples per input frame; voiced frames sum phase-continuous harmonics of
// the linearly interpolated F0 under the unit's timbre envelope, unvoiced
// frames carry filtered noise.
Waveform Synthesize(const UnitSequence &units, const ProsodyTrack &f0,
                    SpeakerId speaker, Emotion emotion,
                    const TimbreTable &timbre, const VocoderConfig &cfg = {});

}  // namespace uvc

#endif  // UVC_DSP_VOCODER_H_
