// tests/corpus_test.cc

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
#include <filesystem>
#include <set>

#include <doctest.h>

#include "base/textio.h"
#include "corpus/corpus.h"
#include "corpus/manifest.h"
#include "dsp/pitch.h"

using namespace uvc;

namespace {

CorpusConfig SmallConfig(std::vector<Emotion> emotions = {Emotion::kAmused}) {
  CorpusConfig cfg;
  cfg.n_transcripts = 4;
  cfg.word_inventory = 8;
  cfg.speakers = {SpeakerSpec{120.0, 20.0}};
  cfg.transforms.clear();
  for (Emotion e : emotions) cfg.transforms.push_back({e, DefaultTransform(e, cfg)});
  return cfg;
}

// Reserved ids removed, then re-deduped: the lexical content of a sequence.
DedupedUnits ContentOf(const UnitSequence &units, const UnitVocab &vocab) {
  UnitSequence filtered;
  for (UnitId id : units)
    if (!vocab.IsVocalization(id)) filtered.push_back(id);
  return Dedup(filtered).first;
}

bool ContainsSubsequence(const DedupedUnits &seq, const std::vector<UnitId> &sub) {
  if (sub.empty()) return true;
  size_t j = 0;
  for (UnitId id : seq) {
    if (id == sub[j]) {
      ++j;
      if (j == sub.size()) return true;
    } else {
      j = id == sub[0] ? 1 : 0;
    }
  }
  return false;
}

Utterance TinyNeutral() {
  Utterance u;
  u.id = "tiny_s0_neutral";
  u.speaker = 0;
  u.emotion = Emotion::kNeutral;
  u.transcript_group = "tiny";
  u.units = {0, 0, 5, 5, 5, 7, 7, 0, 0};
  u.f0_hz = {0, 0, 118, 120, 122, 121, 119, 0, 0};
  return u;
}

}  // namespace

TEST_CASE("corpus size is transcripts x speakers x emotion set") {
  CorpusConfig cfg = SmallConfig();
  cfg.n_transcripts = 2;
  cfg.speakers = {SpeakerSpec{120, 20}, SpeakerSpec{200, 30}};
  auto corpus = GenerateCorpus(cfg, 7);
  // 2 transcripts x 2 speakers x {neutral, amused}
  CHECK(corpus.size() == 8);
  int neutral = 0, amused = 0;
  for (const auto &u : corpus) {
    u.CheckInvariants();
    if (u.emotion == Emotion::kNeutral) ++neutral;
    if (u.emotion == Emotion::kAmused) ++amused;
  }
  CHECK(neutral == 4);
  CHECK(amused == 4);
}

TEST_CASE("same seed gives identical corpora") {
  CorpusConfig cfg = SmallConfig({Emotion::kAmused, Emotion::kSleepy});
  auto a = GenerateCorpus(cfg, 99);
  auto b = GenerateCorpus(cfg, 99);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].units == b[i].units);
    CHECK(a[i].f0_hz == b[i].f0_hz);
  }
  auto c = GenerateCorpus(cfg, 100);
  bool any_diff = false;
  for (size_t i = 0; i < a.size() && !any_diff; ++i)
    any_diff = a[i].units != c[i].units;
  CHECK(any_diff);
}

TEST_CASE("motif insertion at probability one is always present") {
  CorpusConfig cfg = SmallConfig();
  cfg.transforms[0].second.motif_probability = 1.0;
  auto corpus = GenerateCorpus(cfg, 3);
  UnitVocab vocab = cfg.Vocab();
  const auto &motif = cfg.transforms[0].second.motif;
  int amused_seen = 0;
  for (const auto &u : corpus) {
    if (u.emotion != Emotion::kAmused) continue;
    ++amused_seen;
    CHECK(ContainsSubsequence(Dedup(u.units).first, motif));
  }
  CHECK(amused_seen == 4);
}

TEST_CASE("lexical preservation across every generated pair") {
  CorpusConfig cfg = SmallConfig({Emotion::kAmused, Emotion::kAngry,
                                  Emotion::kSleepy, Emotion::kDisgusted});
  auto corpus = GenerateCorpus(cfg, 11);
  UnitVocab vocab = cfg.Vocab();
  // Group by (transcript, speaker); all content sequences must agree.
  for (const auto &u : corpus) {
    for (const auto &v : corpus) {
      if (u.transcript_group != v.transcript_group || u.speaker != v.speaker)
        continue;
      CHECK(ContentOf(u.units, vocab) == ContentOf(v.units, vocab));
    }
  }
}

TEST_CASE("identity transform keeps units") {
  Utterance u = TinyNeutral();
  EmotionTransformSpec identity;  // no motif, scale 1, shift 0
  UnitVocab vocab(64, 48);
  Utterance out = ApplyEmotionTransform(u, Emotion::kAmused, identity,
                                        SpeakerSpec{120, 20}, vocab, 5);
  CHECK(out.units == u.units);
  CHECK(out.emotion == Emotion::kAmused);
  for (size_t i = 0; i < u.f0_hz.size(); ++i)
    CHECK(out.f0_hz[i] == doctest::Approx(u.f0_hz[i]).epsilon(1e-12));
}

TEST_CASE("duration scale rounds half up and clamps") {
  Utterance u;
  u.id = "d";
  u.emotion = Emotion::kNeutral;
  u.transcript_group = "d";
  u.units = {3, 3, 9, 9};  // durations [2, 2]
  u.f0_hz = {100, 100, 100, 100};
  EmotionTransformSpec sleepy;
  sleepy.duration_scale = 1.6;
  UnitVocab vocab(64, 48);
  Utterance out = ApplyEmotionTransform(u, Emotion::kSleepy, sleepy,
                                        SpeakerSpec{120, 20}, vocab, 5);
  auto [units, durations] = Dedup(out.units);
  CHECK(units == DedupedUnits{3, 9});
  CHECK(durations == Durations{3, 3});  // 3.2 -> 3 each

  EmotionTransformSpec shrink;
  shrink.duration_scale = 0.1;
  Utterance tiny = ApplyEmotionTransform(u, Emotion::kAngry, shrink,
                                         SpeakerSpec{120, 20}, vocab, 5);
  auto [units2, durations2] = Dedup(tiny.units);
  CHECK(durations2 == Durations{1, 1});  // clamp at one frame
}

TEST_CASE("f0 shift of 0.8 sigma raises the voiced mean by 16 Hz") {
  Utterance u = TinyNeutral();
  EmotionTransformSpec angry;
  angry.f0_shift_sigma = 0.8;
  UnitVocab vocab(64, 48);
  SpeakerSpec spk{120.0, 20.0};
  Utterance out = ApplyEmotionTransform(u, Emotion::kAngry, angry, spk, vocab, 5);

  auto voiced_mean = [](const ProsodyTrack &t) {
    double sum = 0;
    int n = 0;
    for (double v : t)
      if (v > 0) {
        sum += v;
        ++n;
      }
    return sum / n;
  };
  double before = voiced_mean(u.f0_hz);
  double after = voiced_mean(out.f0_hz);
  CHECK(after - before == doctest::Approx(16.0).epsilon(1e-9));
  // Unvoiced frames stay zero.
  for (size_t i = 0; i < u.f0_hz.size(); ++i)
    if (u.f0_hz[i] == 0.0) CHECK(out.f0_hz[i] == 0.0);
}

TEST_CASE("transform rejects motif ids outside the reserved range") {
  Utterance u = TinyNeutral();
  EmotionTransformSpec bad;
  bad.motif = {5};  // plain content id
  bad.motif_probability = 1.0;
  UnitVocab vocab(64, 48);
  CHECK_THROWS_AS(ApplyEmotionTransform(u, Emotion::kAmused, bad,
                                        SpeakerSpec{120, 20}, vocab, 5),
                  ValidationError);
}

TEST_CASE("pair counts: one speaker, two emotions") {
  CorpusConfig cfg = SmallConfig();
  cfg.n_transcripts = 1;
  auto corpus = GenerateCorpus(cfg, 1);
  REQUIRE(corpus.size() == 2);
  auto pairs = MakeParallelPairs(corpus);
  CHECK(pairs.size() == 2);  // both orders
}

TEST_CASE("pair counts: two speakers, two emotions, cross-speaker included") {
  CorpusConfig cfg = SmallConfig();
  cfg.n_transcripts = 1;
  cfg.speakers = {SpeakerSpec{120, 20}, SpeakerSpec{200, 30}};
  auto corpus = GenerateCorpus(cfg, 1);
  REQUIRE(corpus.size() == 4);  // 2 neutral + 2 amused
  auto pairs = MakeParallelPairs(corpus);
  // Brute-force oracle: ordered (a, b), a != b, emotion(a) != emotion(b).
  int expected = 0;
  for (size_t a = 0; a < corpus.size(); ++a)
    for (size_t b = 0; b < corpus.size(); ++b)
      if (a != b && corpus[a].emotion != corpus[b].emotion) ++expected;
  CHECK(expected == 8);
  CHECK(pairs.size() == 8);
  // Pairing symmetry: (a,b) present iff (b,a) present.
  std::set<std::pair<int32_t, int32_t>> seen;
  for (const auto &p : pairs) seen.insert({p.source, p.target});
  for (const auto &p : pairs)
    CHECK(seen.count({p.target, p.source}) == 1);
}

TEST_CASE("empty corpus yields no pairs") {
  CHECK(MakeParallelPairs({}).empty());
}

TEST_CASE("split by transcript: 100 groups at 90/5/5") {
  std::vector<std::string> groups;
  for (int i = 0; i < 100; ++i) groups.push_back("g" + std::to_string(i));
  auto split = SplitGroups(groups, {0.90, 0.05, 0.05}, 17);
  CHECK(split[0].size() == 90);
  CHECK(split[1].size() == 5);
  CHECK(split[2].size() == 5);
  // Disjoint and exhaustive.
  std::set<std::string> all;
  for (const auto &part : split)
    for (const auto &g : part) CHECK(all.insert(g).second);
  CHECK(all.size() == 100);
}

TEST_CASE("split by transcript: 20 groups -> 18/1/1") {
  std::vector<std::string> groups;
  for (int i = 0; i < 20; ++i) groups.push_back("g" + std::to_string(i));
  auto split = SplitGroups(groups, {0.9, 0.05, 0.05}, 3);
  CHECK(split[0].size() == 18);
  CHECK(split[1].size() == 1);
  CHECK(split[2].size() == 1);
}

TEST_CASE("split requires at least 3 groups and normalized ratios") {
  CHECK_THROWS_AS(SplitGroups({"a", "b"}, {0.9, 0.05, 0.05}, 1),
                  ValidationError);
  std::vector<std::string> groups = {"a", "b", "c", "d"};
  CHECK_THROWS_AS(SplitGroups(groups, {0.9, 0.05, 0.2}, 1), ValidationError);
}

TEST_CASE("pair split keeps groups disjoint and is deterministic") {
  CorpusConfig cfg = SmallConfig();
  cfg.n_transcripts = 10;
  auto corpus = GenerateCorpus(cfg, 5);
  auto pairs = MakeParallelPairs(corpus);
  auto s1 = SplitByTranscript(pairs, corpus, {0.6, 0.2, 0.2}, 42);
  auto s2 = SplitByTranscript(pairs, corpus, {0.6, 0.2, 0.2}, 42);
  CHECK(s1.groups == s2.groups);
  CHECK(s1.train.size() == s2.train.size());
  CHECK(s1.train.size() + s1.valid.size() + s1.test.size() == pairs.size());
  for (const auto &g : s1.groups[0])
    for (const auto &h : s1.groups[1]) CHECK(g != h);
  // Pairs land with their group.
  for (const auto &p : s1.valid) {
    const std::string &g = corpus[size_t(p.source)].transcript_group;
    CHECK(std::binary_search(s1.groups[1].begin(), s1.groups[1].end(), g));
    CHECK(corpus[size_t(p.target)].transcript_group == g);
  }
}

TEST_CASE("manifest save/load round trip") {
  std::string dir = "corpus_test_tmp";
  std::filesystem::remove_all(dir);
  CorpusConfig cfg = SmallConfig();
  cfg.n_transcripts = 3;
  auto corpus = GenerateCorpus(cfg, 21);
  SaveCorpus(dir, "manifest.tsv", corpus, "cafe0123");
  auto loaded = LoadManifest(dir + "/manifest.tsv");
  CHECK(loaded.truncation_warnings == 0);
  CHECK(loaded.config_hash == "cafe0123");
  REQUIRE(loaded.utterances.size() == corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    CHECK(loaded.utterances[i].id == corpus[i].id);
    CHECK(loaded.utterances[i].speaker == corpus[i].speaker);
    CHECK(loaded.utterances[i].emotion == corpus[i].emotion);
    CHECK(loaded.utterances[i].units == corpus[i].units);
    REQUIRE(loaded.utterances[i].f0_hz.size() == corpus[i].f0_hz.size());
    for (size_t t = 0; t < corpus[i].f0_hz.size(); ++t)
      CHECK(loaded.utterances[i].f0_hz[t] ==
            doctest::Approx(corpus[i].f0_hz[t]).epsilon(1e-12));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("manifest handles mismatched lengths and odd labels") {
  std::string dir = "corpus_test_tmp2";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  WriteUnits(dir + "/a.units", {1, 2, 3, 4});
  WriteF0File(dir + "/a.f0", {100, 110, 120});  // one frame short
  WriteTextFile(dir + "/manifest.tsv",
                "# comment line\n"
                "a\t0\tangry \tg0\ta.units\ta.f0\n");
  auto loaded = LoadManifest(dir + "/manifest.tsv");
  CHECK(loaded.truncation_warnings == 1);
  REQUIRE(loaded.utterances.size() == 1);
  CHECK(loaded.utterances[0].units.size() == 3);  // truncated to shorter
  CHECK(loaded.utterances[0].emotion == Emotion::kAngry);

  WriteTextFile(dir + "/bad.tsv", "a\t0\tbored\tg0\ta.units\ta.f0\n");
  CHECK_THROWS_AS(LoadManifest(dir + "/bad.tsv"), ValidationError);
  WriteTextFile(dir + "/missing.tsv", "a\t0\tangry\tg0\tnope.units\ta.f0\n");
  CHECK_THROWS_AS(LoadManifest(dir + "/missing.tsv"), ValidationError);
  WriteTextFile(dir + "/short.tsv", "a\t0\tangry\tg0\ta.units\n");
  CHECK_THROWS_AS(LoadManifest(dir + "/short.tsv"), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("generate rejects invalid configs") {
  CorpusConfig cfg = SmallConfig();
  cfg.word_inventory = 0;
  CHECK_THROWS_AS(GenerateCorpus(cfg, 1), ValidationError);
  cfg = SmallConfig();
  cfg.transforms.clear();
  CHECK_THROWS_AS(GenerateCorpus(cfg, 1), ValidationError);
}
