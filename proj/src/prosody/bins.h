// prosody/bins.h

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

#ifndef UVC_PROSODY_BINS_H_
#define UVC_PROSODY_BINS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus/corpus.h"
#include "nn/tensor.h"

namespace uvc {

// Voiced-frame statistics per speaker; sample std (N-1), sigma floored at
// 1e-3 Hz, single-frame speakers land on the floor.
struct SpeakerStats {
  double mu_hz = 0.0;
  double sigma_hz = 1e-3;
};

// Errors if any speaker present in the corpus has no voiced frame.
std::map<SpeakerId, SpeakerStats> FitSpeakerStats(
    const std::vector<Utterance> &corpus);

enum class NormMode { kNone, kMean, kMeanStd };
enum class BinStrategy { kUniform, kAdaptive };
enum class DecodeRule { kArgmax, kWeightedAverage };

NormMode ParseNormMode(const std::string &name);
BinStrategy ParseBinStrategy(const std::string &name);
DecodeRule ParseDecodeRule(const std::string &name);
const std::string &NormModeName(NormMode m);
const std::string &BinStrategyName(BinStrategy s);
const std::string &DecodeRuleName(DecodeRule r);

// Normalized F0 with explicit voicing flags; the Hz-domain sentinel 0 is
// not usable once mean normalization can produce legitimate zeros.
struct NormalizedTrack {
  std::vector<double> value;
  std::vector<uint8_t> voiced;
};

NormalizedTrack NormalizeF0(const ProsodyTrack &track,
                            const SpeakerStats &stats, NormMode mode);
ProsodyTrack DenormalizeF0(const NormalizedTrack &track,
                           const SpeakerStats &stats, NormMode mode);
double DenormalizeValue(double v, const SpeakerStats &stats, NormMode mode);

// F0 quantization grid in normalized space plus everything needed to map
// activations back to Hz.
struct BinSpec {
  BinStrategy strategy = BinStrategy::kAdaptive;
  NormMode normalization = NormMode::kMeanStd;
  int d = 50;
  std::vector<double> edges;            // d+1, strictly ascending
  std::vector<double> representatives;  // d, one per bin
  std::map<SpeakerId, SpeakerStats> speaker_stats;

  // Largest bin whose left edge is strictly below v (ties go to the lower
  // bin, the maximum lands in the top bin); out-of-range values clamp.
  int BinIndex(double v) const;

  void Validate() const;
  nlohmann::json ToJson() const;
  static BinSpec FromJson(const nlohmann::json &j);

  // Human-readable standalone export.
  std::string ToText() const;
};

// Uniform: equal-width edges over [min, max]. Adaptive: empirical-quantile
// edges with equal per-bin mass. Representatives are per-bin means of the
// training values (bin midpoint for an empty uniform bin).
BinSpec MakeBins(const std::vector<double> &voiced_normalized,
                 BinStrategy strategy, int d, NormMode normalization,
                 std::map<SpeakerId, SpeakerStats> speaker_stats);

struct EncodedF0 {
  nn::Tensor targets;           // [T x d], peak-1 blurred one-hots
  std::vector<float> voicing;   // [T], 1 voiced / 0 unvoiced
  int clamped = 0;              // values outside the bin range
};

// Gaussian-blurred one-hot targets (truncated at 3 sigma, peak normalized
// to 1); unvoiced frames get the zero vector and voicing target 0.
EncodedF0 EncodeF0Targets(const NormalizedTrack &track, const BinSpec &bins,
                          double blur_sigma_bins = 1.0);

// activations [T x d] in [0,1], voicing [T]; frames below voicing 0.5
// output 0 Hz. Weighted average ignores activations under 1e-4 and falls
// back to argmax when nothing clears the floor.
ProsodyTrack DecodeF0(const nn::Tensor &activations,
                      const std::vector<float> &voicing, const BinSpec &bins,
                      DecodeRule rule, const SpeakerStats &stats);

// Mean absolute error in Hz over frames where the target is voiced.
double F0MaeVoicedHz(const ProsodyTrack &pred, const ProsodyTrack &target);

}  // namespace uvc

#endif  // UVC_PROSODY_BINS_H_
