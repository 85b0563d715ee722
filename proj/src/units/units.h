// units/units.h

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

#ifndef UVC_UNITS_UNITS_H_
#define UVC_UNITS_UNITS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "base/common.h"

namespace uvc {

using UnitId = int32_t;

// Frame-rate content sequence; one entry per 20 ms frame.
using UnitSequence = std::vector<UnitId>;

// Run-length collapsed sequence; no two adjacent entries are equal.
using DedupedUnits = std::vector<UnitId>;

// One positive frame count per deduped unit.
using Durations = std::vector<int32_t>;

constexpr double kFrameSeconds = 0.020;
constexpr int kSampleRate = 16000;
constexpr int kSamplesPerFrame = 320;  // 20 ms at 16 kHz

// The emotion inventory is fixed; configs select a subset.
enum class Emotion : int32_t {
  kNeutral = 0,
  kAmused = 1,
  kAngry = 2,
  kSleepy = 3,
  kDisgusted = 4,
};
constexpr int kNumEmotions = 5;

const std::string &EmotionName(Emotion e);
Emotion ParseEmotion(const std::string &name);  // trims; ValidationError if unknown

// Content vocabulary of size K plus special symbols at ids >= K.
// Content ids [0, content_size) are ordinary units; within them,
// [vocalization_base, content_size) is the reserved non-verbal range used
// by the synthetic corpus (laughter/yawn/groan motifs).
class UnitVocab {
 public:
  UnitVocab(int content_size, int vocalization_base);

  int content_size() const { return content_size_; }
  int vocalization_base() const { return vocalization_base_; }
  // Total symbol count including specials; embedding tables use this.
  int total_size() const { return content_size_ + 4 + kNumEmotions; }

  UnitId pad() const { return content_size_; }
  UnitId bos() const { return content_size_ + 1; }
  UnitId eos() const { return content_size_ + 2; }
  UnitId mask() const { return content_size_ + 3; }
  UnitId emotion_token(Emotion e) const {
    return content_size_ + 4 + static_cast<int32_t>(e);
  }

  bool IsContent(UnitId id) const { return id >= 0 && id < content_size_; }
  bool IsVocalization(UnitId id) const {
    return id >= vocalization_base_ && id < content_size_;
  }
  bool IsSpecial(UnitId id) const {
    return id >= content_size_ && id < total_size();
  }

  void CheckSequence(const UnitSequence &seq) const;

 private:
  int content_size_;
  int vocalization_base_;
};

// Run-length collapse: [0,0,0,1,1,2] -> ([0,1,2], [3,2,1]).
std::pair<DedupedUnits, Durations> Dedup(const UnitSequence &seq);

// Inverse of Dedup. Durations must match in length and be >= 1.
UnitSequence Inflate(const DedupedUnits &units, const Durations &durations);

// Unit file format: UTF-8 text, whitespace-separated decimal integers,
// optional trailing newline. If vocab is non-null, ids are range-checked
// against its content size.
UnitSequence ReadUnits(const std::string &path,
                       const UnitVocab *vocab = nullptr);
void WriteUnits(const std::string &path, const UnitSequence &seq);

std::string FormatUnits(const UnitSequence &seq);
UnitSequence ParseUnits(const std::string &text, const UnitVocab *vocab,
                        const std::string &where);

// Durations reuse the unit text format; entries must be >= 1.
Durations ReadDurations(const std::string &path);
void WriteDurations(const std::string &path, const Durations &durations);

}  // namespace uvc

#endif  // UVC_UNITS_UNITS_H_
