// corpus/corpus.h

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

#ifndef UVC_CORPUS_CORPUS_H_
#define UVC_CORPUS_CORPUS_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "units/units.h"

namespace uvc {

using SpeakerId = int32_t;

// Per-frame F0 in Hz; 0.0 marks an unvoiced frame.
using ProsodyTrack = std::vector<double>;

struct Utterance {
  std::string id;
  SpeakerId speaker = 0;
  Emotion emotion = Emotion::kNeutral;
  std::string transcript_group;
  UnitSequence units;     // frame rate; same length as f0_hz
  ProsodyTrack f0_hz;

  void CheckInvariants() const;
};

// Indices into the owning corpus vector.
struct ParallelPair {
  int32_t source = -1;
  int32_t target = -1;
};

enum class MotifPosition { kPrefix, kSuffix, kBoundary };

MotifPosition ParseMotifPosition(const std::string &name);
const std::string &MotifPositionName(MotifPosition p);

// How one emotion perturbs a neutral utterance: a non-verbal vocalization
// motif (reserved unit ids), a duration scale and an F0 shift/spread in
// speaker-normalized units.
struct EmotionTransformSpec {
  std::vector<UnitId> motif;         // ids in [vocalization_base, K)
  double motif_probability = 0.0;
  MotifPosition motif_position = MotifPosition::kSuffix;
  double duration_scale = 1.0;
  double f0_shift_sigma = 0.0;
  double f0_var_scale = 1.0;
};

struct SpeakerSpec {
  double base_hz = 140.0;
  double sigma_hz = 20.0;
};

struct CorpusConfig {
  int vocab_size = 64;       // K; ids [content, K) are reserved vocalizations
  int content_units = 48;    // start of the reserved vocalization range
  int word_inventory = 40;   // W
  int n_transcripts = 20;
  int words_min = 3, words_max = 6;
  int word_len_min = 2, word_len_max = 4;
  int unit_frames_min = 2, unit_frames_max = 5;
  int separator_frames_min = 2, separator_frames_max = 3;
  UnitId separator_unit = 0;  // silence / word boundary; unvoiced frames
  std::vector<SpeakerSpec> speakers = {SpeakerSpec{}};
  // Non-neutral emotions to generate, in a fixed order.
  std::vector<std::pair<Emotion, EmotionTransformSpec>> transforms;

  UnitVocab Vocab() const { return UnitVocab(vocab_size, content_units); }
  void Validate() const;
};

// Built-in transform table mirroring the qualitative cue classes: amused
// appends a laughter motif, sleepy yawns and drags, angry compresses and
// raises pitch, disgusted groans.
EmotionTransformSpec DefaultTransform(Emotion e, const CorpusConfig &cfg);

// One neutral utterance per (transcript, speaker) plus one utterance per
// configured emotion derived from it. Deterministic given the seed;
// transcript groups use derived seeds so per-group generation order does
// not matter.
std::vector<Utterance> GenerateCorpus(const CorpusConfig &cfg, uint64_t seed);

// Applies spec to a neutral utterance. The content-unit subsequence is
// preserved; durations are rescaled (round half up, clamp >= 1); F0 is
// shifted/scaled in speaker-normalized space with unvoiced frames kept 0.
Utterance ApplyEmotionTransform(const Utterance &neutral, Emotion target,
                                const EmotionTransformSpec &spec,
                                const SpeakerSpec &speaker,
                                const UnitVocab &vocab, uint64_t seed);

// All ordered cross-emotion pairs sharing a transcript group, including
// cross-speaker pairs.
std::vector<ParallelPair> MakeParallelPairs(
    const std::vector<Utterance> &corpus);

// Largest-remainder partition of sorted distinct groups, shuffled by seed.
std::array<std::vector<std::string>, 3> SplitGroups(
    std::vector<std::string> groups, const std::array<double, 3> &ratios,
    uint64_t seed);

struct PairSplit {
  std::vector<ParallelPair> train, valid, test;
  std::array<std::vector<std::string>, 3> groups;
};

// Partitions pairs by transcript group so no group straddles two splits.
// Requires at least 3 groups and ratios summing to 1 (1e-9 slack).
PairSplit SplitByTranscript(const std::vector<ParallelPair> &pairs,
                            const std::vector<Utterance> &corpus,
                            const std::array<double, 3> &ratios,
                            uint64_t seed);

}  // namespace uvc

#endif  // UVC_CORPUS_CORPUS_H_
