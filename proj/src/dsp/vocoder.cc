// dsp/vocoder.cc

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

#include "dsp/vocoder.h"

#include <algorithm>
#include <cmath>

#include "base/parallel.h"
#include "base/rng.h"

namespace uvc {

namespace {
constexpr double kHarmonicCeilingHz = 7600.0;
}  // namespace

TimbreTable::TimbreTable(int n_speakers, int n_units)
    : n_speakers_(n_speakers), n_units_(n_units) {
  UVC_CHECK_INPUT(n_speakers > 0 && n_units > 0);
  entries_.resize(static_cast<size_t>(n_speakers) * kNumEmotions *
                  static_cast<size_t>(n_units));
}

TimbreTable TimbreTable::MakeDefault(int n_speakers, int n_units,
                                     uint64_t seed) {
  TimbreTable table(n_speakers, n_units);
  Rng rng(DeriveSeed(seed, 0x7e4b));
  for (TimbreEntry &e : table.entries_) {
    e.rolloff = rng.Uniform(0.60, 0.88);
    e.noise_mix = rng.Uniform(0.02, 0.22);
  }
  return table;
}

const TimbreEntry &TimbreTable::Lookup(SpeakerId speaker, Emotion emotion,
                                       UnitId unit) const {
  UVC_CHECK_INPUT(speaker >= 0 && speaker < n_speakers_);
  UVC_CHECK_INPUT(unit >= 0 && unit < n_units_);
  size_t idx = (static_cast<size_t>(speaker) * kNumEmotions +
                static_cast<size_t>(emotion)) *
                   static_cast<size_t>(n_units_) +
               static_cast<size_t>(unit);
  return entries_[idx];
}

TimbreEntry &TimbreTable::Cell(SpeakerId speaker, Emotion emotion,
                               UnitId unit) {
  return const_cast<TimbreEntry &>(Lookup(speaker, emotion, unit));
}

Waveform Synthesize(const UnitSequence &units, const ProsodyTrack &f0,
                    SpeakerId speaker, Emotion emotion,
                    const TimbreTable &timbre, const VocoderConfig &cfg) {
  if (units.size() != f0.size())
    UVC_INVALID << "synthesize: " << units.size() << " units vs " << f0.size()
                << " F0 frames";
  int n_frames = static_cast<int>(units.size());
  int64_t n_samples = static_cast<int64_t>(n_frames) * kSamplesPerFrame;
  Waveform wav;
  wav.samples.assign(static_cast<size_t>(n_samples), 0.0f);
  if (n_frames == 0) return wav;

  // Effective per-frame F0: short unvoiced gaps inside a voiced region hold
  // the last voiced value so the excitation never restarts mid-word.
  std::vector<double> eff(f0.begin(), f0.end());
  std::vector<char> voiced(static_cast<size_t>(n_frames));
  for (int t = 0; t < n_frames; ++t)
    voiced[static_cast<size_t>(t)] = f0[static_cast<size_t>(t)] > 0.0;
  for (int t = 0; t < n_frames; ++t) {
    if (voiced[static_cast<size_t>(t)]) continue;
    int gap_end = t;
    while (gap_end < n_frames && !voiced[static_cast<size_t>(gap_end)])
      ++gap_end;
    int gap = gap_end - t;
    bool inside = t > 0 && gap_end < n_frames;
    if (inside && gap < cfg.bridge_gap_frames) {
      for (int i = t; i < gap_end; ++i) {
        eff[static_cast<size_t>(i)] = eff[static_cast<size_t>(t) - 1];
        voiced[static_cast<size_t>(i)] = true;
      }
    }
    t = gap_end - 1;
  }

  // Per-frame envelope parameters.
  std::vector<double> frame_amp(static_cast<size_t>(n_frames));
  std::vector<double> frame_noise(static_cast<size_t>(n_frames));
  std::vector<double> frame_rolloff(static_cast<size_t>(n_frames));
  for (int t = 0; t < n_frames; ++t) {
    const TimbreEntry &e =
        timbre.Lookup(speaker, emotion, units[static_cast<size_t>(t)]);
    bool v = voiced[static_cast<size_t>(t)];
    frame_amp[static_cast<size_t>(t)] = v ? cfg.voiced_gain : 0.0;
    frame_noise[static_cast<size_t>(t)] =
        v ? cfg.voiced_gain * e.noise_mix * 0.3
          : cfg.unvoiced_gain * (0.5 + e.noise_mix);
    frame_rolloff[static_cast<size_t>(t)] = e.rolloff;
  }

  // Per-sample instantaneous F0 from frame centers.
  std::vector<double> inst(static_cast<size_t>(n_samples), 0.0);
  for (int64_t s = 0; s < n_samples; ++s) {
    double ft = (static_cast<double>(s) - kSamplesPerFrame / 2.0) /
                kSamplesPerFrame;
    int t0 = static_cast<int>(std::floor(ft));
    int t1 = t0 + 1;
    double frac = ft - t0;
    t0 = std::clamp(t0, 0, n_frames - 1);
    t1 = std::clamp(t1, 0, n_frames - 1);
    bool v0 = voiced[static_cast<size_t>(t0)],
         v1 = voiced[static_cast<size_t>(t1)];
    if (v0 && v1) {
      inst[static_cast<size_t>(s)] = (1.0 - frac) * eff[static_cast<size_t>(t0)] +
                                     frac * eff[static_cast<size_t>(t1)];
    } else if (v0 || v1) {
      int nearest = frac < 0.5 ? t0 : t1;
      if (!voiced[static_cast<size_t>(nearest)]) nearest = v0 ? t0 : t1;
      inst[static_cast<size_t>(s)] = eff[static_cast<size_t>(nearest)];
    }
  }

  // Serial phase accumulation, then the harmonic stack in parallel.
  std::vector<double> phase(static_cast<size_t>(n_samples), 0.0);
  double phi = 0.0;
  for (int64_t s = 0; s < n_samples; ++s) {
    phase[static_cast<size_t>(s)] = phi;
    if (inst[static_cast<size_t>(s)] > 0.0)
      phi += 2.0 * M_PI * inst[static_cast<size_t>(s)] / kSampleRate;
    if (phi > 2.0 * M_PI) phi -= 2.0 * M_PI * std::floor(phi / (2.0 * M_PI));
  }

  // Noise bed: one-pole lowpassed white noise, generated serially so the
  // output is identical no matter how the render loop is scheduled.
  std::vector<double> noise(static_cast<size_t>(n_samples));
  Rng rng(DeriveSeed(0x5e45u, (static_cast<uint64_t>(speaker) << 8) ^
                                  static_cast<uint64_t>(emotion)));
  double state = 0.0;
  for (int64_t s = 0; s < n_samples; ++s) {
    state = 0.85 * state + 0.15 * rng.Uniform(-1.0, 1.0);
    noise[static_cast<size_t>(s)] = state;
  }

  auto lerp_param = [&](const std::vector<double> &param, int t, int64_t s) {
    // 5 ms linear crossfade after each frame boundary.
    int64_t into = s - static_cast<int64_t>(t) * kSamplesPerFrame;
    if (t > 0 && into < cfg.crossfade_samples) {
      double a = static_cast<double>(into) / cfg.crossfade_samples;
      return (1.0 - a) * param[static_cast<size_t>(t) - 1] +
             a * param[static_cast<size_t>(t)];
    }
    return param[static_cast<size_t>(t)];
  };

  ParallelFor(n_samples, [&](int64_t s) {
    int t = static_cast<int>(s / kSamplesPerFrame);
    double amp = lerp_param(frame_amp, t, s);
    double namp = lerp_param(frame_noise, t, s);
    double rolloff = lerp_param(frame_rolloff, t, s);
    double out = namp * noise[static_cast<size_t>(s)];
    double freq = inst[static_cast<size_t>(s)];
    if (freq > 0.0 && amp > 0.0) {
      double h_amp = 1.0, norm = 0.0, acc = 0.0;
      for (int h = 1; h <= cfg.max_harmonics; ++h) {
        if (h * freq > kHarmonicCeilingHz) break;
        acc += h_amp * std::sin(h * phase[static_cast<size_t>(s)]);
        norm += h_amp;
        h_amp *= rolloff;
      }
      if (norm > 0.0) out += amp * acc / norm;
    }
    wav.samples[static_cast<size_t>(s)] =
        static_cast<float>(std::clamp(out, -1.0, 1.0));
  });
  return wav;
}

}  // namespace uvc
