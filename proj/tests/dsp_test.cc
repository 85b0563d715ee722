// tests/dsp_test.cc

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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <doctest.h>

#include "base/rng.h"
#include "base/textio.h"
#include "dsp/ganloss.h"
#include "dsp/mel.h"
#include "dsp/pitch.h"
#include "dsp/vocoder.h"
#include "dsp/wav.h"

using namespace uvc;

namespace {

Waveform Sine(double freq, double seconds, double amp = 0.5) {
  Waveform wav;
  size_t n = static_cast<size_t>(seconds * kSampleRate);
  wav.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    wav.samples[i] = static_cast<float>(
        amp * std::sin(2.0 * M_PI * freq * static_cast<double>(i) / kSampleRate));
  return wav;
}

Waveform Sawtooth(double freq, double seconds, double amp = 0.5) {
  Waveform wav;
  size_t n = static_cast<size_t>(seconds * kSampleRate);
  wav.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double phase = std::fmod(freq * static_cast<double>(i) / kSampleRate, 1.0);
    wav.samples[i] = static_cast<float>(amp * (2.0 * phase - 1.0));
  }
  return wav;
}

}  // namespace

TEST_CASE("pitch: 200 Hz sine within 2 percent on interior frames") {
  ProsodyTrack track = ExtractF0(Sine(200.0, 1.0));
  REQUIRE(track.size() == 50);
  for (size_t t = 3; t + 3 < track.size(); ++t) {
    CHECK(track[t] > 196.0);
    CHECK(track[t] < 204.0);
  }
}

TEST_CASE("pitch: silence is unvoiced everywhere") {
  Waveform silence;
  silence.samples.assign(16000, 0.0f);
  for (double v : ExtractF0(silence)) CHECK(v == 0.0);
}

TEST_CASE("pitch: 100 Hz sawtooth resolves to 100, not 200") {
  ProsodyTrack track = ExtractF0(Sawtooth(100.0, 1.0));
  for (size_t t = 3; t + 3 < track.size(); ++t) {
    CHECK(track[t] > 97.0);
    CHECK(track[t] < 103.0);
  }
}

TEST_CASE("pitch: 200 Hz does not resolve an octave low") {
  // Both lag 80 and lag 160 are perfect autocorrelation peaks for a 200 Hz
  // sine; the smallest-lag rule must pick 200, not 100.
  ProsodyTrack track = ExtractF0(Sine(200.0, 0.5));
  for (size_t t = 5; t + 5 < track.size(); ++t) CHECK(track[t] > 150.0);
}

TEST_CASE("f0 file round trip") {
  std::string path = "dsp_test_tmp.f0";
  ProsodyTrack track = {0.0, 120.5, 119.25, 0.0, 200.0};
  WriteF0File(path, track);
  CHECK(ReadF0File(path) == track);
  WriteTextFile(path, "100\n-4\n");
  CHECK_THROWS_AS(ReadF0File(path), ValidationError);
  std::remove(path.c_str());
}

TEST_CASE("wav round trip is sample-exact at 16-bit resolution") {
  Waveform wav = Sine(300.0, 0.1);
  std::string path = "dsp_test_tmp.wav";
  WriteWav(path, wav);
  Waveform back = ReadWav(path);
  REQUIRE(back.samples.size() == wav.samples.size());
  for (size_t i = 0; i < wav.samples.size(); ++i)
    CHECK(std::abs(back.samples[i] - wav.samples[i]) < 1.0 / 32000.0);
  std::remove(path.c_str());
}

TEST_CASE("mel: silence hits the log floor everywhere") {
  Waveform silence;
  silence.samples.assign(4 * kSamplesPerFrame, 0.0f);
  auto mel = MelSpectrogram(silence);
  REQUIRE(mel.size() == 4);
  for (const auto &frame : mel)
    for (double v : frame) CHECK(v == doctest::Approx(std::log(1e-5)));
}

TEST_CASE("mel: 440 Hz sine peaks in the filter containing 440 Hz") {
  MelConfig cfg;
  auto mel = MelSpectrogram(Sine(440.0, 0.5), cfg);

  // Mel-scale bin-edge arithmetic: the filter whose peak interval
  // [pt[b+1], pt[b+2]) brackets 440 from below on the rising side wins.
  std::vector<double> pts = MelFilterPointsHz(cfg);
  double target_mel = HzToMel(440.0);
  int expected = -1;
  for (int b = 0; b < cfg.mel_bins; ++b) {
    double lo = HzToMel(pts[static_cast<size_t>(b)]);
    double mid = HzToMel(pts[static_cast<size_t>(b) + 1]);
    double hi = HzToMel(pts[static_cast<size_t>(b) + 2]);
    double w = 0.0;
    if (target_mel > lo && target_mel <= mid) w = (target_mel - lo) / (mid - lo);
    if (target_mel > mid && target_mel < hi) w = (hi - target_mel) / (hi - mid);
    if (expected < 0 || w > 0.5) {
      if (w > 0.5) expected = b;
    }
  }
  REQUIRE(expected >= 0);
  for (size_t t = 2; t + 2 < mel.size(); ++t) {
    int argmax = 0;
    for (int b = 1; b < cfg.mel_bins; ++b)
      if (mel[t][static_cast<size_t>(b)] > mel[t][static_cast<size_t>(argmax)])
        argmax = b;
    CHECK(argmax == expected);
  }
}

TEST_CASE("mel: doubling amplitude raises the peak bin by log 4") {
  auto mel1 = MelSpectrogram(Sine(440.0, 0.5, 0.25));
  auto mel2 = MelSpectrogram(Sine(440.0, 0.5, 0.5));
  size_t t = mel1.size() / 2;
  int argmax = 0;
  for (int b = 1; b < 80; ++b)
    if (mel1[t][static_cast<size_t>(b)] > mel1[t][static_cast<size_t>(argmax)])
      argmax = b;
  double delta = mel2[t][static_cast<size_t>(argmax)] -
                 mel1[t][static_cast<size_t>(argmax)];
  CHECK(delta == doctest::Approx(std::log(4.0)).epsilon(0.01));
}

TEST_CASE("mel is deterministic") {
  Waveform wav = Sawtooth(150.0, 0.3);
  CHECK(MelSpectrogram(wav) == MelSpectrogram(wav));
}

TEST_CASE("synthesize: exact length contract") {
  TimbreTable timbre = TimbreTable::MakeDefault(1, 8, 5);
  UnitSequence units(50, 3);
  ProsodyTrack f0(50, 200.0);
  Waveform wav = Synthesize(units, f0, 0, Emotion::kNeutral, timbre);
  CHECK(wav.samples.size() == 16000);

  f0.pop_back();
  CHECK_THROWS_AS(Synthesize(units, f0, 0, Emotion::kNeutral, timbre),
                  ValidationError);
}

TEST_CASE("synthesize: constant 200 Hz round-trips through the tracker") {
  TimbreTable timbre = TimbreTable::MakeDefault(1, 8, 5);
  UnitSequence units(50, 3);
  ProsodyTrack f0(50, 200.0);
  Waveform wav = Synthesize(units, f0, 0, Emotion::kNeutral, timbre);
  ProsodyTrack back = ExtractF0(wav);
  REQUIRE(back.size() == 50);
  for (size_t t = 3; t + 3 < back.size(); ++t) {
    CHECK(back[t] > 190.0);
    CHECK(back[t] < 210.0);
  }
}

TEST_CASE("synthesize: all-unvoiced input re-extracts as unvoiced") {
  TimbreTable timbre = TimbreTable::MakeDefault(1, 8, 5);
  UnitSequence units(50, 2);
  ProsodyTrack f0(50, 0.0);
  Waveform wav = Synthesize(units, f0, 0, Emotion::kNeutral, timbre);
  ProsodyTrack back = ExtractF0(wav);
  for (double v : back) CHECK(v == 0.0);
}

TEST_CASE("synthesize: moving contours round-trip within 5 percent") {
  TimbreTable timbre = TimbreTable::MakeDefault(1, 8, 99);
  for (double base : {80.0, 140.0, 240.0, 330.0}) {
    int frames = 60;
    UnitSequence units(static_cast<size_t>(frames), 4);
    ProsodyTrack f0(static_cast<size_t>(frames));
    for (int t = 0; t < frames; ++t)
      f0[static_cast<size_t>(t)] =
          base * (1.0 + 0.05 * std::sin(2.0 * M_PI * t / frames));
    Waveform wav = Synthesize(units, f0, 0, Emotion::kAmused, timbre);
    ProsodyTrack back = ExtractF0(wav);
    std::vector<double> rel;
    for (int t = 4; t + 4 < frames; ++t) {
      REQUIRE(back[static_cast<size_t>(t)] > 0.0);
      rel.push_back(std::abs(back[static_cast<size_t>(t)] -
                             f0[static_cast<size_t>(t)]) /
                    f0[static_cast<size_t>(t)]);
    }
    std::sort(rel.begin(), rel.end());
    CHECK(rel[rel.size() / 2] < 0.05);
  }
}

TEST_CASE("synthesize bridges short unvoiced gaps") {
  TimbreTable timbre = TimbreTable::MakeDefault(1, 8, 5);
  UnitSequence units(30, 3);
  ProsodyTrack f0(30, 180.0);
  f0[14] = 0.0;
  f0[15] = 0.0;  // 2-frame gap inside a voiced region
  Waveform wav = Synthesize(units, f0, 0, Emotion::kNeutral, timbre);
  ProsodyTrack back = ExtractF0(wav);
  // The gap is excited at the held F0, so re-extraction stays voiced.
  CHECK(back[14] > 170.0);
  CHECK(back[15] > 170.0);
}

// ---- adversarial loss formulas ----------------------------------------------

TEST_CASE("gan losses: perfect generator zeroes the adversarial term") {
  DiscOutput real{{1.0, 1.0}, {}};
  DiscOutput fake{{1.0, 1.0}, {}};
  auto bundle = GanLosses({real}, {fake}, {}, {});
  CHECK(bundle.l_adv[0] == 0.0);
}

TEST_CASE("gan losses: perfect discriminator zeroes its own loss") {
  DiscOutput real{{1.0, 1.0, 1.0}, {}};
  DiscOutput fake{{0.0, 0.0, 0.0}, {}};
  auto bundle = GanLosses({real}, {fake}, {}, {});
  CHECK(bundle.l_d[0] == 0.0);
}

TEST_CASE("gan losses: weighted combination hand case totals 140") {
  // One discriminator with l_adv = 1, l_fm = 2, l_recon = 3:
  // total = 1 + 2*2 + 45*3 = 140.
  DiscOutput real;
  real.scores = {1.0};          // l_d real part 0
  real.features = {{2.0}};      // |2 - 0| = 2 -> l_fm = 2
  DiscOutput fake;
  fake.scores = {0.0};          // l_adv = (1-0)^2 = 1
  fake.features = {{0.0}};
  std::vector<std::vector<double>> mel_real = {{3.0}};
  std::vector<std::vector<double>> mel_fake = {{0.0}};  // l_recon = 3
  auto bundle = GanLosses({real}, {fake}, mel_real, mel_fake);
  CHECK(bundle.l_adv[0] == 1.0);
  CHECK(bundle.l_fm[0] == 2.0);
  CHECK(bundle.l_recon == 3.0);
  CHECK(bundle.l_g_total == 140.0);
  CHECK(bundle.l_d_total == bundle.l_d[0]);
}

TEST_CASE("gan losses: every field is non-negative across random inputs") {
  Rng rng(123);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<DiscOutput> real(2), fake(2);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 3; ++j) {
        real[static_cast<size_t>(i)].scores.push_back(rng.Uniform(-1, 2));
        fake[static_cast<size_t>(i)].scores.push_back(rng.Uniform(-1, 2));
      }
      real[static_cast<size_t>(i)].features = {{rng.Uniform(), rng.Uniform()}};
      fake[static_cast<size_t>(i)].features = {{rng.Uniform(), rng.Uniform()}};
    }
    std::vector<std::vector<double>> mr = {{rng.Uniform(), rng.Uniform()}};
    std::vector<std::vector<double>> mf = {{rng.Uniform(), rng.Uniform()}};
    auto bundle = GanLosses(real, fake, mr, mf);
    for (double v : bundle.l_adv) CHECK(v >= 0.0);
    for (double v : bundle.l_d) CHECK(v >= 0.0);
    for (double v : bundle.l_fm) CHECK(v >= 0.0);
    CHECK(bundle.l_recon >= 0.0);
    CHECK(bundle.l_d_total >= 0.0);
    // Totals are the documented combination of the parts.
    double g = kLambdaReconstruction * bundle.l_recon;
    for (size_t i = 0; i < bundle.l_adv.size(); ++i)
      g += bundle.l_adv[i] + kLambdaFeatureMatch * bundle.l_fm[i];
    CHECK(bundle.l_g_total == doctest::Approx(g).epsilon(1e-12));
  }
}

TEST_CASE("gan losses reject incongruent shapes") {
  DiscOutput real{{1.0, 1.0}, {}};
  DiscOutput fake{{1.0}, {}};
  CHECK_THROWS_AS(GanLosses({real}, {fake}, {}, {}), ValidationError);
}
