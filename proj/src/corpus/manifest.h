// corpus/manifest.h

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

#ifndef UVC_CORPUS_MANIFEST_H_
#define UVC_CORPUS_MANIFEST_H_

#include <string>
#include <vector>

#include "corpus/corpus.h"

namespace uvc {

// Manifest format: UTF-8, one record per line, tab-separated
//   utt_id  speaker  emotion  transcript_group  units_path  f0_path
// with '#' comment lines ignored. Paths are resolved against the manifest's
// directory. A `# config_hash=<hex>` comment, when present, tags the
// artifact set that produced the manifest.

struct ManifestLoadResult {
  std::vector<Utterance> utterances;
  // Records whose unit and F0 lengths disagreed and were truncated.
  int truncation_warnings = 0;
  std::string config_hash;  // empty if untagged
};

ManifestLoadResult LoadManifest(const std::string &path);

// Writes units/<id>.units and f0/<id>.f0 under dir, plus the manifest
// itself at dir/<manifest_name>.
void SaveCorpus(const std::string &dir, const std::string &manifest_name,
                const std::vector<Utterance> &corpus,
                const std::string &config_hash);

// Manifest referencing already-written unit/F0 files for the given subset
// (the SaveCorpus layout is assumed).
void WriteManifestFile(const std::string &path,
                       const std::vector<const Utterance *> &utterances,
                       const std::string &config_hash);

}  // namespace uvc

#endif  // UVC_CORPUS_MANIFEST_H_
