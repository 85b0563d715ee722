// nn/checkpoint.h

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

#ifndef UVC_NN_CHECKPOINT_H_
#define UVC_NN_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nn/layers.h"
#include "nn/tensor.h"

namespace uvc::nn {

// Container format shared by every trained model:
//   magic "UVCK" | u16 version (LE) | u32 header length | header JSON (UTF-8)
//   | u32 block count | blocks.
// Each block: u32 name length | name | u32 ndim | u32 dims[] | f32 data (LE).
// The header carries model_kind, hyperparameters, vocab sizes and, for the
// F0 model, the bin spec. Loading rejects unknown magic or version.
constexpr uint16_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<float> data;
};

struct CheckpointData {
  std::string model_kind;
  nlohmann::json header;  // model_kind is mirrored inside on save
  std::vector<NamedTensor> params;

  const NamedTensor &Find(const std::string &name) const;
};

void SaveCheckpoint(const std::string &path, const CheckpointData &ckpt);
CheckpointData LoadCheckpoint(const std::string &path);

// Snapshot / restore helpers between live parameters and blocks.
std::vector<NamedTensor> SnapshotParams(const ParamList<float> &params);
void RestoreParams(const std::vector<NamedTensor> &blocks,
                   const ParamList<float> &params);

}  // namespace uvc::nn

#endif  // UVC_NN_CHECKPOINT_H_
