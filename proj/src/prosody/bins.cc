// prosody/bins.cc

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

#include "prosody/bins.h"

#include <algorithm>
#include <cmath>

#include "base/textio.h"

namespace uvc {

namespace {
constexpr double kSigmaFloorHz = 1e-3;
constexpr double kActivationFloor = 1e-4;
constexpr double kBlurTruncationSigmas = 3.0;
}  // namespace

std::map<SpeakerId, SpeakerStats> FitSpeakerStats(
    const std::vector<Utterance> &corpus) {
  std::map<SpeakerId, std::vector<double>> voiced;
  for (const Utterance &u : corpus) {
    auto &bucket = voiced[u.speaker];
    for (double v : u.f0_hz)
      if (v > 0.0) bucket.push_back(v);
  }
  std::map<SpeakerId, SpeakerStats> out;
  for (const auto &[speaker, values] : voiced) {
    if (values.empty())
      UVC_INVALID << "speaker " << speaker << " has no voiced frames";
    double mu = 0.0;
    for (double v : values) mu += v;
    mu /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mu) * (v - mu);
    double sigma = values.size() > 1
                       ? std::sqrt(var / static_cast<double>(values.size() - 1))
                       : 0.0;
    out[speaker] = {mu, std::max(sigma, kSigmaFloorHz)};
  }
  return out;
}

NormMode ParseNormMode(const std::string &name) {
  if (name == "none") return NormMode::kNone;
  if (name == "mean") return NormMode::kMean;
  if (name == "mean_std") return NormMode::kMeanStd;
  UVC_INVALID << "unknown normalization mode: '" << name << "'";
}

BinStrategy ParseBinStrategy(const std::string &name) {
  if (name == "uniform") return BinStrategy::kUniform;
  if (name == "adaptive") return BinStrategy::kAdaptive;
  UVC_INVALID << "unknown bin strategy: '" << name << "'";
}

DecodeRule ParseDecodeRule(const std::string &name) {
  if (name == "argmax") return DecodeRule::kArgmax;
  if (name == "weighted_average" || name == "w-avg")
    return DecodeRule::kWeightedAverage;
  UVC_INVALID << "unknown decode rule: '" << name << "'";
}

const std::string &NormModeName(NormMode m) {
  static const std::string names[] = {"none", "mean", "mean_std"};
  return names[static_cast<int>(m)];
}

const std::string &BinStrategyName(BinStrategy s) {
  static const std::string names[] = {"uniform", "adaptive"};
  return names[static_cast<int>(s)];
}

const std::string &DecodeRuleName(DecodeRule r) {
  static const std::string names[] = {"argmax", "weighted_average"};
  return names[static_cast<int>(r)];
}

NormalizedTrack NormalizeF0(const ProsodyTrack &track,
                            const SpeakerStats &stats, NormMode mode) {
  NormalizedTrack out;
  out.value.reserve(track.size());
  out.voiced.reserve(track.size());
  for (double v : track) {
    bool voiced = v > 0.0;
    out.voiced.push_back(voiced ? 1 : 0);
    if (!voiced) {
      out.value.push_back(0.0);
      continue;
    }
    switch (mode) {
      case NormMode::kNone:
        out.value.push_back(v);
        break;
      case NormMode::kMean:
        out.value.push_back(v - stats.mu_hz);
        break;
      case NormMode::kMeanStd:
        out.value.push_back((v - stats.mu_hz) / stats.sigma_hz);
        break;
    }
  }
  return out;
}

double DenormalizeValue(double v, const SpeakerStats &stats, NormMode mode) {
  switch (mode) {
    case NormMode::kNone:
      return v;
    case NormMode::kMean:
      return v + stats.mu_hz;
    case NormMode::kMeanStd:
      return v * stats.sigma_hz + stats.mu_hz;
  }
  UVC_ERR << "bad norm mode";
}

ProsodyTrack DenormalizeF0(const NormalizedTrack &track,
                           const SpeakerStats &stats, NormMode mode) {
  UVC_CHECK(track.value.size() == track.voiced.size());
  ProsodyTrack out;
  out.reserve(track.value.size());
  for (size_t i = 0; i < track.value.size(); ++i) {
    out.push_back(track.voiced[i] ? DenormalizeValue(track.value[i], stats, mode)
                                  : 0.0);
  }
  return out;
}

int BinSpec::BinIndex(double v) const {
  int below = 0;
  while (below < static_cast<int>(edges.size()) &&
         edges[static_cast<size_t>(below)] < v)
    ++below;
  return std::clamp(below - 1, 0, d - 1);
}

void BinSpec::Validate() const {
  UVC_CHECK_INPUT(d >= 2);
  UVC_CHECK_INPUT(static_cast<int>(edges.size()) == d + 1);
  UVC_CHECK_INPUT(static_cast<int>(representatives.size()) == d);
  for (int i = 0; i < d; ++i) {
    UVC_CHECK_INPUT(edges[static_cast<size_t>(i)] <
                    edges[static_cast<size_t>(i) + 1]);
    UVC_CHECK_INPUT(representatives[static_cast<size_t>(i)] >=
                        edges[static_cast<size_t>(i)] &&
                    representatives[static_cast<size_t>(i)] <=
                        edges[static_cast<size_t>(i) + 1]);
  }
}

nlohmann::json BinSpec::ToJson() const {
  nlohmann::json j;
  j["strategy"] = BinStrategyName(strategy);
  j["normalization"] = NormModeName(normalization);
  j["d"] = d;
  j["edges"] = edges;
  j["representatives"] = representatives;
  nlohmann::json stats = nlohmann::json::object();
  for (const auto &[speaker, st] : speaker_stats) {
    stats[std::to_string(speaker)] = {{"mu_hz", st.mu_hz},
                                      {"sigma_hz", st.sigma_hz}};
  }
  j["speaker_stats"] = stats;
  return j;
}

BinSpec BinSpec::FromJson(const nlohmann::json &j) {
  BinSpec spec;
  spec.strategy = ParseBinStrategy(j.at("strategy").get<std::string>());
  spec.normalization = ParseNormMode(j.at("normalization").get<std::string>());
  spec.d = j.at("d").get<int>();
  spec.edges = j.at("edges").get<std::vector<double>>();
  spec.representatives = j.at("representatives").get<std::vector<double>>();
  for (const auto &[key, st] : j.at("speaker_stats").items()) {
    spec.speaker_stats[static_cast<SpeakerId>(ParseInt(key))] = {
        st.at("mu_hz").get<double>(), st.at("sigma_hz").get<double>()};
  }
  spec.Validate();
  return spec;
}

std::string BinSpec::ToText() const {
  std::string out;
  out += "strategy\t" + BinStrategyName(strategy) + "\n";
  out += "normalization\t" + NormModeName(normalization) + "\n";
  out += "bins\t" + std::to_string(d) + "\n";
  out += "edges";
  for (double e : edges) out += "\t" + FormatDouble(e);
  out += "\nrepresentatives";
  for (double r : representatives) out += "\t" + FormatDouble(r);
  out += "\n";
  for (const auto &[speaker, st] : speaker_stats) {
    out += "speaker\t" + std::to_string(speaker) + "\t" +
           FormatDouble(st.mu_hz) + "\t" + FormatDouble(st.sigma_hz) + "\n";
  }
  return out;
}

BinSpec MakeBins(const std::vector<double> &voiced_normalized,
                 BinStrategy strategy, int d, NormMode normalization,
                 std::map<SpeakerId, SpeakerStats> speaker_stats) {
  UVC_CHECK_INPUT(d >= 2);
  UVC_CHECK_INPUT(!voiced_normalized.empty());

  std::vector<double> sorted = voiced_normalized;
  std::sort(sorted.begin(), sorted.end());
  size_t n = sorted.size();

  BinSpec spec;
  spec.strategy = strategy;
  spec.normalization = normalization;
  spec.d = d;
  spec.speaker_stats = std::move(speaker_stats);

  if (strategy == BinStrategy::kUniform) {
    double lo = sorted.front(), hi = sorted.back();
    if (!(hi > lo))
      UVC_INVALID << "uniform binning needs a non-degenerate value range";
    for (int k = 0; k <= d; ++k)
      spec.edges.push_back(lo + (hi - lo) * k / d);
  } else {
    // Distinct-value precondition.
    size_t distinct = 1;
    for (size_t i = 1; i < n; ++i)
      if (sorted[i] != sorted[i - 1]) ++distinct;
    if (distinct < static_cast<size_t>(d))
      UVC_INVALID << "adaptive binning needs at least " << d
                  << " distinct values, got " << distinct;
    spec.edges.push_back(sorted.front());
    for (int k = 1; k < d; ++k) {
      // Empirical quantile k/d; an edge between samples splits the mass
      // exactly, otherwise the edge sits on a sample and ties go lower.
      size_t idx_num = static_cast<size_t>(k) * n;
      if (idx_num % static_cast<size_t>(d) == 0) {
        size_t idx = idx_num / static_cast<size_t>(d);
        spec.edges.push_back(0.5 * (sorted[idx - 1] + sorted[idx]));
      } else {
        spec.edges.push_back(sorted[idx_num / static_cast<size_t>(d)]);
      }
    }
    spec.edges.push_back(sorted.back());
    for (int k = 0; k < d; ++k) {
      if (!(spec.edges[static_cast<size_t>(k)] <
            spec.edges[static_cast<size_t>(k) + 1]))
        UVC_INVALID << "adaptive bin edges collapsed; the training values "
                    << "are too concentrated for " << d << " bins";
    }
  }

  // Per-bin means as representatives; empty (uniform) bins take the
  // midpoint.
  std::vector<double> sums(static_cast<size_t>(d), 0.0);
  std::vector<int64_t> counts(static_cast<size_t>(d), 0);
  for (double v : sorted) {
    int b = spec.BinIndex(v);
    sums[static_cast<size_t>(b)] += v;
    ++counts[static_cast<size_t>(b)];
  }
  for (int b = 0; b < d; ++b) {
    if (counts[static_cast<size_t>(b)] > 0) {
      spec.representatives.push_back(
          sums[static_cast<size_t>(b)] /
          static_cast<double>(counts[static_cast<size_t>(b)]));
    } else {
      spec.representatives.push_back(0.5 * (spec.edges[static_cast<size_t>(b)] +
                                            spec.edges[static_cast<size_t>(b) + 1]));
    }
  }
  spec.Validate();
  return spec;
}

EncodedF0 EncodeF0Targets(const NormalizedTrack &track, const BinSpec &bins,
                          double blur_sigma_bins) {
  UVC_CHECK(track.value.size() == track.voiced.size());
  int t_len = static_cast<int>(track.value.size());
  EncodedF0 out;
  out.targets = nn::Tensor({t_len, bins.d});
  out.voicing.assign(static_cast<size_t>(t_len), 0.0f);
  for (int t = 0; t < t_len; ++t) {
    if (!track.voiced[static_cast<size_t>(t)]) continue;
    out.voicing[static_cast<size_t>(t)] = 1.0f;
    double v = track.value[static_cast<size_t>(t)];
    if (v < bins.edges.front() || v > bins.edges.back()) ++out.clamped;
    int k = bins.BinIndex(v);
    if (blur_sigma_bins <= 1e-9) {
      out.targets.at(t, k) = 1.0f;
      continue;
    }
    int radius = static_cast<int>(
        std::ceil(kBlurTruncationSigmas * blur_sigma_bins));
    for (int j = std::max(0, k - radius);
         j <= std::min(bins.d - 1, k + radius); ++j) {
      double z = (j - k) / blur_sigma_bins;
      out.targets.at(t, j) = static_cast<float>(std::exp(-0.5 * z * z));
    }
  }
  return out;
}

ProsodyTrack DecodeF0(const nn::Tensor &activations,
                      const std::vector<float> &voicing, const BinSpec &bins,
                      DecodeRule rule, const SpeakerStats &stats) {
  UVC_CHECK(activations.shape.size() == 2 && activations.dim(1) == bins.d);
  UVC_CHECK(static_cast<size_t>(activations.dim(0)) == voicing.size());
  ProsodyTrack out(voicing.size(), 0.0);
  for (int t = 0; t < activations.dim(0); ++t) {
    if (voicing[static_cast<size_t>(t)] < 0.5f) continue;
    int argmax = 0;
    for (int j = 1; j < bins.d; ++j)
      if (activations.at(t, j) > activations.at(t, argmax)) argmax = j;
    double value;
    if (rule == DecodeRule::kArgmax) {
      value = bins.representatives[static_cast<size_t>(argmax)];
    } else {
      double num = 0.0, den = 0.0;
      for (int j = 0; j < bins.d; ++j) {
        double a = activations.at(t, j);
        if (a < kActivationFloor) continue;
        num += a * bins.representatives[static_cast<size_t>(j)];
        den += a;
      }
      value = den > 0.0 ? num / den
                        : bins.representatives[static_cast<size_t>(argmax)];
    }
    out[static_cast<size_t>(t)] =
        DenormalizeValue(value, stats, bins.normalization);
  }
  return out;
}

double F0MaeVoicedHz(const ProsodyTrack &pred, const ProsodyTrack &target) {
  UVC_CHECK_INPUT(pred.size() == target.size());
  double sum = 0.0;
  int64_t n = 0;
  for (size_t i = 0; i < target.size(); ++i) {
    if (target[i] <= 0.0) continue;
    sum += std::abs(pred[i] - target[i]);
    ++n;
  }
  if (n == 0) UVC_INVALID << "no voiced frames in the reference track";
  return sum / static_cast<double>(n);
}

}  // namespace uvc
