// dsp/pitch.cc

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

#include "dsp/pitch.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "base/parallel.h"
#include "base/textio.h"

namespace uvc {

namespace {

// Fraction of the global NACF maximum a smaller-lag peak must reach to be
// preferred over it.
constexpr double kPeakTolerance = 0.9;

double FrameF0(const std::vector<float> &samples, int center,
               const PitchConfig &cfg) {
  int w = cfg.window;
  int n = static_cast<int>(samples.size());
  std::vector<double> x(static_cast<size_t>(w), 0.0);
  double mean = 0.0;
  int have = 0;
  for (int i = 0; i < w; ++i) {
    int t = center - w / 2 + i;
    if (t >= 0 && t < n) {
      x[static_cast<size_t>(i)] = samples[static_cast<size_t>(t)];
      mean += x[static_cast<size_t>(i)];
      ++have;
    }
  }
  if (have == 0) return 0.0;
  mean /= have;
  for (double &v : x) v -= mean;

  // Cumulative energy so both normalization terms are O(1) per lag.
  std::vector<double> cum(static_cast<size_t>(w) + 1, 0.0);
  for (int i = 0; i < w; ++i)
    cum[static_cast<size_t>(i) + 1] =
        cum[static_cast<size_t>(i)] +
        x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
  double energy = cum[static_cast<size_t>(w)];
  if (energy < 1e-8) return 0.0;

  int lag_min = std::max(2, static_cast<int>(kSampleRate / cfg.fmax_hz));
  int lag_max = std::min(w - 2, static_cast<int>(kSampleRate / cfg.fmin_hz) + 1);
  if (lag_max <= lag_min) return 0.0;

  std::vector<double> nacf(static_cast<size_t>(lag_max) + 1, 0.0);
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    double num = 0.0;
    for (int t = 0; t + lag < w; ++t)
      num += x[static_cast<size_t>(t)] * x[static_cast<size_t>(t + lag)];
    double e1 = cum[static_cast<size_t>(w - lag)];
    double e2 = energy - cum[static_cast<size_t>(lag)];
    double denom = std::sqrt(e1 * e2);
    nacf[static_cast<size_t>(lag)] = denom > 1e-12 ? num / denom : 0.0;
  }

  double best = 0.0;
  for (int lag = lag_min; lag <= lag_max; ++lag)
    best = std::max(best, nacf[static_cast<size_t>(lag)]);
  if (best < cfg.voicing_threshold) return 0.0;

  // Smallest-lag strong local peak.
  double accept = std::max(cfg.voicing_threshold, kPeakTolerance * best);
  int chosen = -1;
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    double v = nacf[static_cast<size_t>(lag)];
    if (v < accept) continue;
    double left = lag > lag_min ? nacf[static_cast<size_t>(lag) - 1] : -1.0;
    double right = lag < lag_max ? nacf[static_cast<size_t>(lag) + 1] : -1.0;
    if (v >= left && v >= right) {
      chosen = lag;
      break;
    }
  }
  if (chosen < 0) return 0.0;

  // Parabolic refinement around the chosen lag.
  double delta = 0.0;
  if (chosen > lag_min && chosen < lag_max) {
    double a = nacf[static_cast<size_t>(chosen) - 1];
    double bpk = nacf[static_cast<size_t>(chosen)];
    double c = nacf[static_cast<size_t>(chosen) + 1];
    double denom = a - 2.0 * bpk + c;
    if (std::abs(denom) > 1e-12) {
      delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    }
  }
  double f0 = kSampleRate / (chosen + delta);
  return std::clamp(f0, cfg.fmin_hz, cfg.fmax_hz);
}

}  // namespace

ProsodyTrack ExtractF0(const Waveform &wav, const PitchConfig &cfg) {
  UVC_CHECK_INPUT(wav.sample_rate == kSampleRate);
  UVC_CHECK_INPUT(wav.samples.size() >= kSamplesPerFrame);
  int n_frames = static_cast<int>(
      (wav.samples.size() + kSamplesPerFrame - 1) / kSamplesPerFrame);
  ProsodyTrack track(static_cast<size_t>(n_frames), 0.0);
  ParallelFor(n_frames, [&](int64_t t) {
    int center = static_cast<int>(t) * kSamplesPerFrame + kSamplesPerFrame / 2;
    track[static_cast<size_t>(t)] = FrameF0(wav.samples, center, cfg);
  });
  return track;
}

ProsodyTrack ReadF0File(const std::string &path) {
  ProsodyTrack track;
  for (const std::string &line : SplitLines(ReadTextFile(path))) {
    std::string t = Trim(line);
    if (t.empty()) continue;
    double v = ParseDouble(t);
    if (!(v >= 0.0) || !std::isfinite(v))
      UVC_INVALID << path << ": F0 values must be finite and >= 0, got '" << t
                  << "'";
    track.push_back(v);
  }
  return track;
}

void WriteF0File(const std::string &path, const ProsodyTrack &track) {
  std::string out;
  for (double v : track) {
    out += FormatDouble(v);
    out += '\n';
  }
  WriteTextFile(path, out);
}

}  // namespace uvc
