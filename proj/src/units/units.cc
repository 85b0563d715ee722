// units/units.cc

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

#include "units/units.h"

#include <array>
#include <numeric>

#include "base/textio.h"

namespace uvc {

namespace {
const std::array<std::string, kNumEmotions> kEmotionNames = {
    "neutral", "amused", "angry", "sleepy", "disgusted"};
}  // namespace

const std::string &EmotionName(Emotion e) {
  int i = static_cast<int>(e);
  UVC_CHECK(i >= 0 && i < kNumEmotions);
  return kEmotionNames[i];
}

Emotion ParseEmotion(const std::string &name) {
  std::string t = Trim(name);
  for (int i = 0; i < kNumEmotions; ++i) {
    if (kEmotionNames[i] == t) return static_cast<Emotion>(i);
  }
  UVC_INVALID << "unknown emotion label: '" << name << "'";
}

UnitVocab::UnitVocab(int content_size, int vocalization_base)
    : content_size_(content_size), vocalization_base_(vocalization_base) {
  UVC_CHECK_INPUT(content_size > 0);
  UVC_CHECK_INPUT(vocalization_base > 0 && vocalization_base <= content_size);
}

void UnitVocab::CheckSequence(const UnitSequence &seq) const {
  for (size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] < 0 || seq[i] >= content_size_)
      UVC_INVALID << "unit id " << seq[i] << " at position " << i
                  << " outside content vocabulary [0, " << content_size_
                  << ")";
  }
}

std::pair<DedupedUnits, Durations> Dedup(const UnitSequence &seq) {
  DedupedUnits units;
  Durations durations;
  for (UnitId id : seq) {
    if (!units.empty() && units.back() == id) {
      ++durations.back();
    } else {
      units.push_back(id);
      durations.push_back(1);
    }
  }
  return {std::move(units), std::move(durations)};
}

UnitSequence Inflate(const DedupedUnits &units, const Durations &durations) {
  if (units.size() != durations.size())
    UVC_INVALID << "inflate: " << units.size() << " units vs "
                << durations.size() << " durations";
  int64_t total = 0;
  for (size_t i = 0; i < durations.size(); ++i) {
    if (durations[i] < 1)
      UVC_INVALID << "inflate: non-positive duration " << durations[i]
                  << " at position " << i;
    total += durations[i];
  }
  UnitSequence out;
  out.reserve(static_cast<size_t>(total));
  for (size_t i = 0; i < units.size(); ++i) {
    out.insert(out.end(), static_cast<size_t>(durations[i]), units[i]);
  }
  return out;
}

UnitSequence ParseUnits(const std::string &text, const UnitVocab *vocab,
                        const std::string &where) {
  UnitSequence out;
  std::vector<std::string> tokens = SplitWhitespace(text);
  out.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    int64_t v;
    try {
      v = ParseInt(tokens[i]);
    } catch (const ValidationError &) {
      UVC_INVALID << where << ": parse error at token " << (i + 1) << ": '"
                  << tokens[i] << "'";
    }
    if (v < 0)
      UVC_INVALID << where << ": negative unit id at token " << (i + 1);
    out.push_back(static_cast<UnitId>(v));
  }
  if (vocab != nullptr) vocab->CheckSequence(out);
  return out;
}

UnitSequence ReadUnits(const std::string &path, const UnitVocab *vocab) {
  return ParseUnits(ReadTextFile(path), vocab, path);
}

std::string FormatUnits(const UnitSequence &seq) {
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(seq[i]);
  }
  if (!seq.empty()) out += '\n';
  return out;
}

void WriteUnits(const std::string &path, const UnitSequence &seq) {
  WriteTextFile(path, FormatUnits(seq));
}

Durations ReadDurations(const std::string &path) {
  UnitSequence raw = ReadUnits(path);
  Durations out(raw.begin(), raw.end());
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1)
      UVC_INVALID << path << ": duration must be >= 1 at token " << (i + 1);
  }
  return out;
}

void WriteDurations(const std::string &path, const Durations &durations) {
  UnitSequence raw(durations.begin(), durations.end());
  WriteUnits(path, raw);
}

}  // namespace uvc
