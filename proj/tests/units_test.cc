// tests/units_test.cc

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

#include <cstdio>
#include <numeric>

#include <doctest.h>

#include "base/rng.h"
#include "base/textio.h"
#include "units/units.h"

using namespace uvc;

namespace {

std::string TempPath(const char *name) {
  return std::string("units_test_tmp_") + name;
}

}  // namespace

TEST_CASE("dedup collapses runs") {
  auto [units, durations] = Dedup({0, 0, 0, 1, 1, 2});
  CHECK(units == DedupedUnits{0, 1, 2});
  CHECK(durations == Durations{3, 2, 1});
}

TEST_CASE("dedup of empty sequence") {
  auto [units, durations] = Dedup({});
  CHECK(units.empty());
  CHECK(durations.empty());
}

TEST_CASE("dedup keeps non-adjacent repeats") {
  auto [units, durations] = Dedup({7, 7, 5, 7});
  CHECK(units == DedupedUnits{7, 5, 7});
  CHECK(durations == Durations{2, 1, 1});
}

TEST_CASE("inflate inverts the paper example") {
  CHECK(Inflate({0, 1, 2}, {3, 2, 1}) == UnitSequence{0, 0, 0, 1, 1, 2});
  CHECK(Inflate({}, {}).empty());
  CHECK(Inflate({4}, {5}) == UnitSequence{4, 4, 4, 4, 4});
}

TEST_CASE("inflate rejects bad durations") {
  CHECK_THROWS_AS(Inflate({1, 2}, {1}), ValidationError);
  CHECK_THROWS_AS(Inflate({1}, {0}), ValidationError);
  CHECK_THROWS_AS(Inflate({1}, {-3}), ValidationError);
}

TEST_CASE("codec round-trip fuzz") {
  Rng rng(20260810);
  for (int iter = 0; iter < 10000; ++iter) {
    int len = static_cast<int>(rng.UniformInt(0, 512));
    UnitSequence seq(static_cast<size_t>(len));
    // Small alphabet so runs actually occur.
    for (auto &u : seq) u = static_cast<UnitId>(rng.UniformInt(0, 7));
    auto [units, durations] = Dedup(seq);
    // Adjacency invariant.
    for (size_t i = 1; i < units.size(); ++i) CHECK(units[i] != units[i - 1]);
    // Length conservation.
    int total = std::accumulate(durations.begin(), durations.end(), 0);
    CHECK(total == len);
    CHECK(Inflate(units, durations) == seq);
    // Idempotence: deduping a deduped sequence gives all-ones durations.
    auto [units2, durations2] = Dedup(units);
    CHECK(units2 == units);
    for (int d : durations2) CHECK(d == 1);
  }
}

TEST_CASE("unit file round-trip") {
  std::string path = TempPath("roundtrip.units");
  WriteUnits(path, {0, 0, 1});
  CHECK(ReadUnits(path) == UnitSequence{0, 0, 1});

  WriteTextFile(path, "0 0 1");
  CHECK(ReadUnits(path) == UnitSequence{0, 0, 1});

  WriteTextFile(path, "");
  CHECK(ReadUnits(path).empty());

  WriteTextFile(path, "  3\n\n4\t5  ");
  CHECK(ReadUnits(path) == UnitSequence{3, 4, 5});
  std::remove(path.c_str());
}

TEST_CASE("unit file parse errors") {
  std::string path = TempPath("bad.units");
  WriteTextFile(path, "0 x 1");
  try {
    ReadUnits(path);
    FAIL("expected parse error");
  } catch (const ValidationError &e) {
    CHECK(std::string(e.what()).find("token 2") != std::string::npos);
  }

  WriteTextFile(path, "0 -1 2");
  CHECK_THROWS_AS(ReadUnits(path), ValidationError);

  UnitVocab vocab(4, 2);
  WriteTextFile(path, "0 9 1");
  CHECK_THROWS_AS(ReadUnits(path, &vocab), ValidationError);
  std::remove(path.c_str());
}

TEST_CASE("vocab special ids are disjoint from content") {
  UnitVocab vocab(64, 48);
  CHECK(vocab.pad() == 64);
  CHECK(vocab.bos() == 65);
  CHECK(vocab.eos() == 66);
  CHECK(vocab.mask() == 67);
  for (int e = 0; e < kNumEmotions; ++e) {
    UnitId tok = vocab.emotion_token(static_cast<Emotion>(e));
    CHECK(tok >= 64);
    CHECK(!vocab.IsContent(tok));
    CHECK(vocab.IsSpecial(tok));
  }
  CHECK(vocab.total_size() == 64 + 4 + kNumEmotions);
  CHECK(vocab.IsVocalization(48));
  CHECK(vocab.IsVocalization(63));
  CHECK(!vocab.IsVocalization(47));
  CHECK(!vocab.IsVocalization(64));
}

TEST_CASE("emotion labels parse with trimming") {
  CHECK(ParseEmotion("angry ") == Emotion::kAngry);
  CHECK(ParseEmotion("neutral") == Emotion::kNeutral);
  CHECK_THROWS_AS(ParseEmotion("bored"), ValidationError);
  CHECK(EmotionName(Emotion::kDisgusted) == "disgusted");
}
