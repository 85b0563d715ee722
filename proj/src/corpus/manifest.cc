// corpus/manifest.cc

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

#include "corpus/manifest.h"

#include <filesystem>

#include "base/textio.h"
#include "dsp/pitch.h"

namespace uvc {

namespace {
constexpr const char *kHashPrefix = "# config_hash=";
}  // namespace

ManifestLoadResult LoadManifest(const std::string &path) {
  ManifestLoadResult result;
  std::string dir = DirName(path);
  std::vector<std::string> lines = SplitLines(ReadTextFile(path));
  int line_no = 0;
  for (const std::string &raw : lines) {
    ++line_no;
    std::string line = Trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind(kHashPrefix, 0) == 0)
        result.config_hash = Trim(line.substr(std::string(kHashPrefix).size()));
      continue;
    }
    std::vector<std::string> fields = SplitChar(raw, '\t');
    if (fields.size() != 6)
      UVC_INVALID << path << ":" << line_no << ": expected 6 tab-separated "
                  << "fields, got " << fields.size();
    Utterance u;
    u.id = Trim(fields[0]);
    u.speaker = static_cast<SpeakerId>(ParseInt(Trim(fields[1])));
    u.emotion = ParseEmotion(fields[2]);
    u.transcript_group = Trim(fields[3]);
    if (u.id.empty() || u.transcript_group.empty())
      UVC_INVALID << path << ":" << line_no << ": empty utt_id or group";
    u.units = ReadUnits(PathJoin(dir, Trim(fields[4])));
    u.f0_hz = ReadF0File(PathJoin(dir, Trim(fields[5])));
    if (u.units.size() != u.f0_hz.size()) {
      size_t keep = std::min(u.units.size(), u.f0_hz.size());
      u.units.resize(keep);
      u.f0_hz.resize(keep);
      ++result.truncation_warnings;
    }
    u.CheckInvariants();
    result.utterances.push_back(std::move(u));
  }
  return result;
}

void WriteManifestFile(const std::string &path,
                       const std::vector<const Utterance *> &utterances,
                       const std::string &config_hash) {
  std::string out = "# utt_id\tspeaker\temotion\ttranscript_group\t"
                    "units_path\tf0_path\n";
  if (!config_hash.empty()) out += std::string(kHashPrefix) + config_hash + "\n";
  for (const Utterance *u : utterances) {
    out += u->id;
    out += '\t';
    out += std::to_string(u->speaker);
    out += '\t';
    out += EmotionName(u->emotion);
    out += '\t';
    out += u->transcript_group;
    out += "\tunits/" + u->id + ".units";
    out += "\tf0/" + u->id + ".f0";
    out += '\n';
  }
  WriteTextFile(path, out);
}

void SaveCorpus(const std::string &dir, const std::string &manifest_name,
                const std::vector<Utterance> &corpus,
                const std::string &config_hash) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "units");
  fs::create_directories(fs::path(dir) / "f0");
  std::vector<const Utterance *> ptrs;
  ptrs.reserve(corpus.size());
  for (const Utterance &u : corpus) {
    WriteUnits(PathJoin(dir, "units/" + u.id + ".units"), u.units);
    WriteF0File(PathJoin(dir, "f0/" + u.id + ".f0"), u.f0_hz);
    ptrs.push_back(&u);
  }
  WriteManifestFile(PathJoin(dir, manifest_name), ptrs, config_hash);
}

}  // namespace uvc
