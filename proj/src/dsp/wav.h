// dsp/wav.h

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

#ifndef UVC_DSP_WAV_H_
#define UVC_DSP_WAV_H_

#include <string>
#include <vector>

#include "units/units.h"

namespace uvc {

struct Waveform {
  std::vector<float> samples;  // in [-1, 1]
  int sample_rate = kSampleRate;
};

// 16-bit PCM mono little-endian WAV at 16 kHz.
Waveform ReadWav(const std::string &path);
void WriteWav(const std::string &path, const Waveform &wav);

}  // namespace uvc

#endif  // UVC_DSP_WAV_H_
