// dsp/mel.cc

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

#include "dsp/mel.h"

#include <cmath>

#include "base/common.h"
#include "base/parallel.h"

namespace uvc {

namespace {

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT.
void Fft(std::vector<double> *re, std::vector<double> *im) {
  size_t n = re->size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap((*re)[i], (*re)[j]);
      std::swap((*im)[i], (*im)[j]);
    }
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * M_PI / static_cast<double>(len);
    double wr = std::cos(ang), wi = std::sin(ang);
    for (size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (size_t k = 0; k < len / 2; ++k) {
        size_t a = i + k, b = i + k + len / 2;
        double tr = (*re)[b] * cr - (*im)[b] * ci;
        double ti = (*re)[b] * ci + (*im)[b] * cr;
        (*re)[b] = (*re)[a] - tr;
        (*im)[b] = (*im)[a] - ti;
        (*re)[a] += tr;
        (*im)[a] += ti;
        double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }
}

// Reflection indexing that never repeats the edge sample.
float SampleReflect(const std::vector<float> &x, int64_t idx) {
  int64_t n = static_cast<int64_t>(x.size());
  if (n == 1) return x[0];
  while (idx < 0 || idx >= n) {
    if (idx < 0) idx = -idx;
    if (idx >= n) idx = 2 * n - 2 - idx;
  }
  return x[static_cast<size_t>(idx)];
}

}  // namespace

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> MelFilterPointsHz(const MelConfig &cfg) {
  double mel_lo = HzToMel(cfg.fmin_hz);
  double mel_hi = HzToMel(cfg.fmax_hz);
  std::vector<double> points(static_cast<size_t>(cfg.mel_bins) + 2);
  for (int i = 0; i < cfg.mel_bins + 2; ++i) {
    double mel = mel_lo + (mel_hi - mel_lo) * i / (cfg.mel_bins + 1);
    points[static_cast<size_t>(i)] = MelToHz(mel);
  }
  return points;
}

std::vector<std::vector<double>> MelSpectrogram(const Waveform &wav,
                                                const MelConfig &cfg) {
  UVC_CHECK_INPUT(wav.sample_rate == kSampleRate);
  UVC_CHECK_INPUT(IsPowerOfTwo(cfg.n_fft));
  UVC_CHECK_INPUT(cfg.hop > 0 && cfg.mel_bins > 0);
  UVC_CHECK_INPUT(!wav.samples.empty());

  int n_fft = cfg.n_fft;
  int n_bins = n_fft / 2 + 1;
  int n_frames = static_cast<int>(
      (wav.samples.size() + static_cast<size_t>(cfg.hop) - 1) / cfg.hop);

  // Periodic Hann.
  std::vector<double> window(static_cast<size_t>(n_fft));
  for (int i = 0; i < n_fft; ++i)
    window[static_cast<size_t>(i)] =
        0.5 - 0.5 * std::cos(2.0 * M_PI * i / n_fft);

  // Precompute triangular filter weights over FFT bins.
  std::vector<double> points = MelFilterPointsHz(cfg);
  double hz_per_bin = static_cast<double>(kSampleRate) / n_fft;
  std::vector<std::vector<std::pair<int, double>>> filters(
      static_cast<size_t>(cfg.mel_bins));
  for (int b = 0; b < cfg.mel_bins; ++b) {
    double lo = points[static_cast<size_t>(b)];
    double mid = points[static_cast<size_t>(b) + 1];
    double hi = points[static_cast<size_t>(b) + 2];
    for (int k = 0; k < n_bins; ++k) {
      double f = k * hz_per_bin;
      double w = 0.0;
      if (f > lo && f < mid) {
        w = (f - lo) / (mid - lo);
      } else if (f == mid) {
        w = 1.0;
      } else if (f > mid && f < hi) {
        w = (hi - f) / (hi - mid);
      }
      if (w > 0.0) filters[static_cast<size_t>(b)].push_back({k, w});
    }
  }

  std::vector<std::vector<double>> out(
      static_cast<size_t>(n_frames),
      std::vector<double>(static_cast<size_t>(cfg.mel_bins)));
  ParallelFor(n_frames, [&](int64_t t) {
    std::vector<double> re(static_cast<size_t>(n_fft)),
        im(static_cast<size_t>(n_fft), 0.0);
    int64_t center = t * cfg.hop;
    for (int i = 0; i < n_fft; ++i)
      re[static_cast<size_t>(i)] =
          window[static_cast<size_t>(i)] *
          SampleReflect(wav.samples, center - n_fft / 2 + i);
    Fft(&re, &im);
    std::vector<double> power(static_cast<size_t>(n_bins));
    for (int k = 0; k < n_bins; ++k)
      power[static_cast<size_t>(k)] =
          re[static_cast<size_t>(k)] * re[static_cast<size_t>(k)] +
          im[static_cast<size_t>(k)] * im[static_cast<size_t>(k)];
    for (int b = 0; b < cfg.mel_bins; ++b) {
      double acc = 0.0;
      for (const auto &[k, w] : filters[static_cast<size_t>(b)])
        acc += w * power[static_cast<size_t>(k)];
      out[static_cast<size_t>(t)][static_cast<size_t>(b)] =
          std::log(std::max(acc, cfg.log_floor));
    }
  });
  return out;
}

}  // namespace uvc
