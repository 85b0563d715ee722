// corpus/corpus.cc

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

#include "corpus/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "base/rng.h"

namespace uvc {

namespace {

// Declination span and jitter of the synthetic F0 contours, in units of the
// speaker's pitch sigma.
constexpr double kDeclinationSpanSigma = 0.6;
constexpr double kRunOffsetSigma = 0.35;
constexpr double kFrameNoiseSigma = 0.08;
constexpr double kMinVoicedHz = 50.0;

int32_t RoundHalfUp(double v) {
  return static_cast<int32_t>(std::floor(v + 0.5));
}

struct Run {
  UnitId unit;
  int32_t dur;
  std::vector<double> f0;  // one entry per frame; 0 = unvoiced
};

std::vector<Run> ToRuns(const Utterance &u) {
  auto [units, durations] = Dedup(u.units);
  std::vector<Run> runs;
  runs.reserve(units.size());
  size_t frame = 0;
  for (size_t i = 0; i < units.size(); ++i) {
    Run r;
    r.unit = units[i];
    r.dur = durations[i];
    r.f0.assign(u.f0_hz.begin() + static_cast<long>(frame),
                u.f0_hz.begin() + static_cast<long>(frame + durations[i]));
    frame += static_cast<size_t>(durations[i]);
    runs.push_back(std::move(r));
  }
  return runs;
}

void FromRuns(const std::vector<Run> &runs, Utterance *out) {
  out->units.clear();
  out->f0_hz.clear();
  for (const Run &r : runs) {
    out->units.insert(out->units.end(), static_cast<size_t>(r.dur), r.unit);
    out->f0_hz.insert(out->f0_hz.end(), r.f0.begin(), r.f0.end());
  }
}

// Linear time-stretch of a run's F0 segment. Voicing follows the nearest
// source frame so unvoiced frames never leak interpolated values.
std::vector<double> ResampleSegment(const std::vector<double> &src, int n_out) {
  int n_in = static_cast<int>(src.size());
  if (n_out == n_in) return src;
  std::vector<double> out(static_cast<size_t>(n_out));
  for (int i = 0; i < n_out; ++i) {
    double pos = (n_out == 1 || n_in == 1)
                     ? 0.0
                     : static_cast<double>(i) * (n_in - 1) / (n_out - 1);
    int lo = static_cast<int>(std::floor(pos));
    int hi = std::min(lo + 1, n_in - 1);
    double frac = pos - lo;
    int nearest = frac < 0.5 ? lo : hi;
    if (src[static_cast<size_t>(nearest)] <= 0.0) {
      out[static_cast<size_t>(i)] = 0.0;
    } else if (src[static_cast<size_t>(lo)] <= 0.0 ||
               src[static_cast<size_t>(hi)] <= 0.0) {
      out[static_cast<size_t>(i)] = src[static_cast<size_t>(nearest)];
    } else {
      out[static_cast<size_t>(i)] = (1.0 - frac) * src[static_cast<size_t>(lo)] +
                                    frac * src[static_cast<size_t>(hi)];
    }
  }
  return out;
}

}  // namespace

void Utterance::CheckInvariants() const {
  UVC_CHECK(units.size() == f0_hz.size());
  for (double v : f0_hz) UVC_CHECK(std::isfinite(v) && v >= 0.0);
}

MotifPosition ParseMotifPosition(const std::string &name) {
  if (name == "prefix") return MotifPosition::kPrefix;
  if (name == "suffix") return MotifPosition::kSuffix;
  if (name == "boundary") return MotifPosition::kBoundary;
  UVC_INVALID << "unknown motif position: '" << name << "'";
}

const std::string &MotifPositionName(MotifPosition p) {
  static const std::string names[] = {"prefix", "suffix", "boundary"};
  return names[static_cast<int>(p)];
}

void CorpusConfig::Validate() const {
  UVC_CHECK_INPUT(vocab_size > 0);
  UVC_CHECK_INPUT(content_units > 0 && content_units <= vocab_size);
  UVC_CHECK_INPUT(word_inventory > 0);
  UVC_CHECK_INPUT(n_transcripts > 0);
  UVC_CHECK_INPUT(!speakers.empty());
  UVC_CHECK_INPUT(!transforms.empty());
  UVC_CHECK_INPUT(words_min >= 1 && words_max >= words_min);
  UVC_CHECK_INPUT(word_len_min >= 1 && word_len_max >= word_len_min);
  UVC_CHECK_INPUT(unit_frames_min >= 1 && unit_frames_max >= unit_frames_min);
  UVC_CHECK_INPUT(separator_frames_min >= 1 &&
                  separator_frames_max >= separator_frames_min);
  UVC_CHECK_INPUT(separator_unit >= 0 && separator_unit < content_units);
  // At least two non-separator content units, or words degenerate.
  UVC_CHECK_INPUT(content_units >= 3);
  for (const auto &sp : speakers) {
    UVC_CHECK_INPUT(sp.base_hz > 0.0 && sp.sigma_hz > 0.0);
  }
  for (const auto &[emotion, spec] : transforms) {
    UVC_CHECK_INPUT(emotion != Emotion::kNeutral);
    UVC_CHECK_INPUT(spec.duration_scale > 0.0);
    UVC_CHECK_INPUT(spec.f0_var_scale > 0.0);
    UVC_CHECK_INPUT(spec.motif_probability >= 0.0 &&
                    spec.motif_probability <= 1.0);
  }
}

EmotionTransformSpec DefaultTransform(Emotion e, const CorpusConfig &cfg) {
  UnitId base = cfg.content_units;
  EmotionTransformSpec spec;
  switch (e) {
    case Emotion::kAmused:
      spec.motif = {base, static_cast<UnitId>(base + 1), base};  // laughter
      spec.motif_probability = 0.8;
      spec.motif_position = MotifPosition::kSuffix;
      spec.f0_shift_sigma = 0.5;
      break;
    case Emotion::kAngry:
      spec.duration_scale = 0.8;
      spec.f0_shift_sigma = 0.8;
      spec.f0_var_scale = 1.5;
      break;
    case Emotion::kSleepy:
      spec.motif = {static_cast<UnitId>(base + 2),
                    static_cast<UnitId>(base + 3)};  // yawn
      spec.motif_probability = 0.5;
      spec.motif_position = MotifPosition::kPrefix;
      spec.duration_scale = 1.6;
      spec.f0_shift_sigma = -0.5;
      break;
    case Emotion::kDisgusted:
      spec.motif = {static_cast<UnitId>(base + 4),
                    static_cast<UnitId>(base + 5),
                    static_cast<UnitId>(base + 4)};  // groan
      spec.motif_probability = 0.5;
      spec.motif_position = MotifPosition::kBoundary;
      spec.duration_scale = 1.1;
      spec.f0_shift_sigma = -0.2;
      break;
    case Emotion::kNeutral:
      UVC_INVALID << "neutral has no transform";
  }
  return spec;
}

namespace {

Utterance BuildNeutral(const std::vector<int> &word_ids,
                       const std::vector<std::vector<UnitId>> &inventory,
                       const CorpusConfig &cfg, SpeakerId speaker_id,
                       const SpeakerSpec &speaker, Rng *rng) {
  std::vector<Run> runs;
  auto push_sep = [&]() {
    Run r;
    r.unit = cfg.separator_unit;
    r.dur = static_cast<int32_t>(
        rng->UniformInt(cfg.separator_frames_min, cfg.separator_frames_max));
    r.f0.assign(static_cast<size_t>(r.dur), 0.0);
    runs.push_back(std::move(r));
  };
  push_sep();
  for (int w : word_ids) {
    for (UnitId unit : inventory[static_cast<size_t>(w)]) {
      Run r;
      r.unit = unit;
      r.dur = static_cast<int32_t>(
          rng->UniformInt(cfg.unit_frames_min, cfg.unit_frames_max));
      r.f0.assign(static_cast<size_t>(r.dur), 1.0);  // marked voiced below
      runs.push_back(std::move(r));
    }
    push_sep();
  }

  int total_frames = 0;
  for (const Run &r : runs) total_frames += r.dur;

  // Piecewise-smooth contour: utterance-level declination, a per-run offset
  // and bounded per-frame noise around the speaker's base pitch.
  double sigma = speaker.sigma_hz;
  int frame = 0;
  for (Run &r : runs) {
    bool voiced = r.unit != cfg.separator_unit;
    double run_offset = voiced ? rng->Normal(0.0, kRunOffsetSigma * sigma) : 0.0;
    for (int i = 0; i < r.dur; ++i, ++frame) {
      if (!voiced) {
        r.f0[static_cast<size_t>(i)] = 0.0;
        continue;
      }
      double pos = total_frames > 1
                       ? static_cast<double>(frame) / (total_frames - 1)
                       : 0.5;
      double decl = kDeclinationSpanSigma * sigma * (1.0 - 2.0 * pos);
      double noise = rng->Uniform(-kFrameNoiseSigma * sigma,
                                  kFrameNoiseSigma * sigma);
      r.f0[static_cast<size_t>(i)] =
          std::max(kMinVoicedHz, speaker.base_hz + decl + run_offset + noise);
    }
  }

  Utterance u;
  u.speaker = speaker_id;
  u.emotion = Emotion::kNeutral;
  FromRuns(runs, &u);
  u.CheckInvariants();
  return u;
}

}  // namespace

Utterance ApplyEmotionTransform(const Utterance &neutral, Emotion target,
                                const EmotionTransformSpec &spec,
                                const SpeakerSpec &speaker,
                                const UnitVocab &vocab, uint64_t seed) {
  UVC_CHECK_INPUT(neutral.emotion == Emotion::kNeutral);
  UVC_CHECK_INPUT(target != Emotion::kNeutral);
  for (size_t i = 0; i < spec.motif.size(); ++i) {
    if (!vocab.IsVocalization(spec.motif[i]))
      UVC_INVALID << "motif id " << spec.motif[i]
                  << " outside the reserved vocalization range ["
                  << vocab.vocalization_base() << ", " << vocab.content_size()
                  << ")";
    if (i > 0 && spec.motif[i] == spec.motif[i - 1])
      UVC_INVALID << "motif has adjacent repeated ids";
  }
  neutral.CheckInvariants();

  Rng rng(seed);
  std::vector<Run> runs = ToRuns(neutral);

  // Durations: scale, round half up, clamp to one frame.
  for (Run &r : runs) {
    int32_t nd = std::max(1, RoundHalfUp(r.dur * spec.duration_scale));
    r.f0 = ResampleSegment(r.f0, nd);
    r.dur = nd;
  }

  // Non-verbal motif insertion at a word-boundary position.
  if (!spec.motif.empty() && rng.Bernoulli(spec.motif_probability)) {
    double anchor = 0.0;
    int voiced_count = 0;
    for (double v : neutral.f0_hz)
      if (v > 0.0) {
        anchor += v;
        ++voiced_count;
      }
    anchor = voiced_count > 0 ? anchor / voiced_count : speaker.base_hz;

    std::vector<Run> motif_runs;
    for (UnitId id : spec.motif) {
      Run r;
      r.unit = id;
      r.dur = static_cast<int32_t>(rng.UniformInt(2, 4));
      r.f0.assign(static_cast<size_t>(r.dur), anchor);
      motif_runs.push_back(std::move(r));
    }

    size_t insert_at = runs.size();
    switch (spec.motif_position) {
      case MotifPosition::kPrefix:
        insert_at = 0;
        break;
      case MotifPosition::kSuffix:
        insert_at = runs.size();
        break;
      case MotifPosition::kBoundary: {
        std::vector<size_t> boundaries;
        for (size_t i = 0; i < runs.size(); ++i) {
          bool unvoiced = true;
          for (double v : runs[i].f0) unvoiced = unvoiced && v <= 0.0;
          if (unvoiced) boundaries.push_back(i + 1);
        }
        insert_at = boundaries.empty()
                        ? runs.size()
                        : boundaries[static_cast<size_t>(rng.UniformInt(
                              static_cast<int64_t>(boundaries.size())))];
        break;
      }
    }
    runs.insert(runs.begin() + static_cast<long>(insert_at),
                motif_runs.begin(), motif_runs.end());
  }

  // F0 shift and spread in speaker-normalized space; unvoiced frames stay 0.
  double mu = speaker.base_hz, sigma = speaker.sigma_hz;
  for (Run &r : runs) {
    for (double &v : r.f0) {
      if (v <= 0.0) continue;
      double normalized = (v - mu) / sigma;
      v = std::max(1.0, mu + sigma * (spec.f0_shift_sigma +
                                      spec.f0_var_scale * normalized));
    }
  }

  Utterance out;
  out.id = neutral.id + ":" + EmotionName(target);
  out.speaker = neutral.speaker;
  out.emotion = target;
  out.transcript_group = neutral.transcript_group;
  FromRuns(runs, &out);
  out.CheckInvariants();
  return out;
}

std::vector<Utterance> GenerateCorpus(const CorpusConfig &cfg, uint64_t seed) {
  cfg.Validate();
  UnitVocab vocab = cfg.Vocab();
  Rng master(DeriveSeed(seed, 0));

  // Content word inventory over non-separator content ids; no two adjacent
  // units of a word are equal so dedup keeps the word intact.
  std::vector<std::vector<UnitId>> inventory;
  inventory.reserve(static_cast<size_t>(cfg.word_inventory));
  for (int w = 0; w < cfg.word_inventory; ++w) {
    int len = static_cast<int>(master.UniformInt(cfg.word_len_min,
                                                 cfg.word_len_max));
    std::vector<UnitId> word;
    for (int i = 0; i < len; ++i) {
      UnitId id;
      do {
        id = static_cast<UnitId>(master.UniformInt(cfg.content_units));
      } while (id == cfg.separator_unit || (!word.empty() && id == word.back()));
      word.push_back(id);
    }
    inventory.push_back(std::move(word));
  }

  std::vector<std::vector<int>> transcripts;
  transcripts.reserve(static_cast<size_t>(cfg.n_transcripts));
  for (int t = 0; t < cfg.n_transcripts; ++t) {
    int n = static_cast<int>(master.UniformInt(cfg.words_min, cfg.words_max));
    std::vector<int> words;
    for (int i = 0; i < n; ++i)
      words.push_back(static_cast<int>(master.UniformInt(cfg.word_inventory)));
    transcripts.push_back(std::move(words));
  }

  std::vector<Utterance> corpus;
  corpus.reserve(static_cast<size_t>(cfg.n_transcripts) *
                 cfg.speakers.size() * (1 + cfg.transforms.size()));
  for (int t = 0; t < cfg.n_transcripts; ++t) {
    uint64_t group_seed = DeriveSeed(seed, 1 + static_cast<uint64_t>(t));
    char group[32];
    std::snprintf(group, sizeof(group), "t%04d", t);
    for (size_t s = 0; s < cfg.speakers.size(); ++s) {
      Rng rng(DeriveSeed(group_seed, s));
      Utterance neutral = BuildNeutral(transcripts[static_cast<size_t>(t)],
                                       inventory, cfg,
                                       static_cast<SpeakerId>(s),
                                       cfg.speakers[s], &rng);
      neutral.transcript_group = group;
      char id[64];
      std::snprintf(id, sizeof(id), "%s_s%zu_neutral", group, s);
      neutral.id = id;
      corpus.push_back(neutral);
      for (size_t k = 0; k < cfg.transforms.size(); ++k) {
        const auto &[emotion, tspec] = cfg.transforms[k];
        Utterance converted = ApplyEmotionTransform(
            neutral, emotion, tspec, cfg.speakers[s], vocab,
            DeriveSeed(group_seed, 100 + s * 16 + k));
        std::snprintf(id, sizeof(id), "%s_s%zu_%s", group, s,
                      EmotionName(emotion).c_str());
        converted.id = id;
        corpus.push_back(std::move(converted));
      }
    }
  }
  return corpus;
}

std::vector<ParallelPair> MakeParallelPairs(
    const std::vector<Utterance> &corpus) {
  std::map<std::string, std::vector<int32_t>> by_group;
  for (size_t i = 0; i < corpus.size(); ++i)
    by_group[corpus[i].transcript_group].push_back(static_cast<int32_t>(i));
  std::vector<ParallelPair> pairs;
  for (const auto &[group, members] : by_group) {
    for (int32_t a : members) {
      for (int32_t b : members) {
        if (a == b) continue;
        if (corpus[static_cast<size_t>(a)].emotion ==
            corpus[static_cast<size_t>(b)].emotion)
          continue;
        pairs.push_back({a, b});
      }
    }
  }
  return pairs;
}

std::array<std::vector<std::string>, 3> SplitGroups(
    std::vector<std::string> groups, const std::array<double, 3> &ratios,
    uint64_t seed) {
  double ratio_sum = ratios[0] + ratios[1] + ratios[2];
  UVC_CHECK_INPUT(std::abs(ratio_sum - 1.0) <= 1e-9);
  for (double r : ratios) UVC_CHECK_INPUT(r >= 0.0);
  std::sort(groups.begin(), groups.end());
  groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
  if (groups.size() < 3)
    UVC_INVALID << "need at least 3 transcript groups to split, got "
                << groups.size();
  Rng rng(seed);
  rng.Shuffle(&groups);

  // Floor counts, then distribute the remainder by largest fractional part
  // (ties resolved toward the earlier split).
  size_t n = groups.size();
  std::array<size_t, 3> counts;
  std::array<double, 3> frac;
  size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double exact = ratios[static_cast<size_t>(i)] * static_cast<double>(n);
    counts[static_cast<size_t>(i)] = static_cast<size_t>(std::floor(exact));
    frac[static_cast<size_t>(i)] = exact - std::floor(exact);
    assigned += counts[static_cast<size_t>(i)];
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (frac[static_cast<size_t>(i)] > frac[static_cast<size_t>(best)] + 1e-12)
        best = i;
    ++counts[static_cast<size_t>(best)];
    frac[static_cast<size_t>(best)] = -1.0;
    ++assigned;
  }

  std::array<std::vector<std::string>, 3> out;
  size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    for (size_t j = 0; j < counts[static_cast<size_t>(i)]; ++j)
      out[static_cast<size_t>(i)].push_back(groups[pos++]);
    std::sort(out[static_cast<size_t>(i)].begin(),
              out[static_cast<size_t>(i)].end());
  }
  return out;
}

PairSplit SplitByTranscript(const std::vector<ParallelPair> &pairs,
                            const std::vector<Utterance> &corpus,
                            const std::array<double, 3> &ratios,
                            uint64_t seed) {
  std::vector<std::string> groups;
  for (const ParallelPair &p : pairs)
    groups.push_back(corpus[static_cast<size_t>(p.source)].transcript_group);

  PairSplit split;
  split.groups = SplitGroups(std::move(groups), ratios, seed);

  auto in = [](const std::vector<std::string> &v, const std::string &g) {
    return std::binary_search(v.begin(), v.end(), g);
  };
  for (const ParallelPair &p : pairs) {
    const std::string &g = corpus[static_cast<size_t>(p.source)].transcript_group;
    if (in(split.groups[0], g)) {
      split.train.push_back(p);
    } else if (in(split.groups[1], g)) {
      split.valid.push_back(p);
    } else {
      UVC_CHECK(in(split.groups[2], g));
      split.test.push_back(p);
    }
  }
  return split;
}

}  // namespace uvc
