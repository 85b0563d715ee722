// prosody/duration.h

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

#ifndef UVC_PROSODY_DURATION_H_
#define UVC_PROSODY_DURATION_H_

#include <map>
#include <string>
#include <vector>

#include "nn/adam.h"
#include "nn/checkpoint.h"
#include "nn/layers.h"
#include "units/units.h"

namespace uvc {

using DurationExample = std::pair<DedupedUnits, Durations>;

struct DurationMetrics {
  double mae_frames = 0.0;
  double acc_0ms = 0.0;   // exact frame match
  double acc_20ms = 0.0;  // within one frame
  double acc_40ms = 0.0;  // within two frames
};

DurationMetrics ComputeDurationMetrics(const Durations &pred,
                                       const Durations &target);

// Raw duration to frames: clamp to at least one frame, round half up.
int32_t QuantizeDuration(double raw);

struct TrainConfig {
  double lr = 1e-3;
  int batch_size = 16;
  int max_epochs = 60;
  int patience = 5;
  uint64_t seed = 1;
  bool quiet = true;
};

// n-gram table of duration statistics keyed by the unit plus its n-1
// predecessors; unseen contexts back off to the next shorter order and
// finally to the global statistic. Prediction samples N(mu, sigma).
class NgramDurationModel {
 public:
  explicit NgramDurationModel(int order);

  void Train(const std::vector<DurationExample> &data);
  Durations Predict(const DedupedUnits &units, uint64_t seed) const;

  struct Stats {
    double mu = 0.0;
    double sigma = 0.0;  // population std of the observed durations
    int64_t count = 0;
  };
  // Back-off lookup for the unit ending at position i of the sequence.
  Stats Lookup(const DedupedUnits &units, size_t i) const;

  int order() const { return order_; }
  bool trained() const { return trained_; }

  nn::CheckpointData ToCheckpoint() const;
  static NgramDurationModel FromCheckpoint(const nn::CheckpointData &ckpt);

 private:
  int order_;
  bool trained_ = false;
  // tables_[k] holds contexts of length k+1.
  std::vector<std::map<std::vector<UnitId>, Stats>> tables_;
  Stats global_;
};

struct CnnDurationConfig {
  int vocab_size = 64;  // content ids only; the model never sees specials
  int embed_dim = 64;
  int channels = 128;
  int kernel = 3;
  double dropout = 0.1;
};

// Two conv1d blocks with layer norm over unit embeddings and a scalar head
// per position. Shared between the float training path and the double
// gradient-verification path.
template <typename T>
struct CnnDurationNetT {
  CnnDurationConfig cfg;
  nn::EmbeddingLayerT<T> embed;
  nn::Conv1dLayerT<T> conv1, conv2;
  nn::LayerNormLayerT<T> ln1, ln2;
  nn::LinearLayerT<T> head;

  CnnDurationNetT(const CnnDurationConfig &c, uint64_t seed) : cfg(c) {
    Rng rng(seed);
    embed.Init("embed", c.vocab_size, c.embed_dim, &rng);
    conv1.Init("conv1", c.embed_dim, c.channels, c.kernel, &rng);
    ln1.Init("ln1", c.channels);
    conv2.Init("conv2", c.channels, c.channels, c.kernel, &rng);
    ln2.Init("ln2", c.channels);
    head.Init("head", c.channels, 1, &rng);
  }

  // Returns [len x 1] raw frame counts.
  nn::NodeId Forward(nn::TapeT<T> &tape, const DedupedUnits &units) {
    nn::NodeId x =
        embed.Apply(tape, std::vector<int32_t>(units.begin(), units.end()));
    x = tape.Dropout(ln1.Apply(tape, tape.Relu(conv1.Apply(tape, x))),
                     cfg.dropout);
    x = tape.Dropout(ln2.Apply(tape, tape.Relu(conv2.Apply(tape, x))),
                     cfg.dropout);
    return head.Apply(tape, x);
  }

  nn::ParamList<T> Params() {
    nn::ParamList<T> out;
    embed.Collect(&out);
    conv1.Collect(&out);
    ln1.Collect(&out);
    conv2.Collect(&out);
    ln2.Collect(&out);
    head.Collect(&out);
    return out;
  }
};

// Training/prediction wrapper around the float instantiation, trained with
// MSE in frame units and early-stopped on validation MAE.
class CnnDurationModel {
 public:
  CnnDurationModel(const CnnDurationConfig &cfg, uint64_t init_seed);

  // Returns the per-epoch validation MAE history.
  std::vector<double> Train(const std::vector<DurationExample> &train_data,
                            const std::vector<DurationExample> &valid_data,
                            const TrainConfig &cfg);

  Durations Predict(const DedupedUnits &units) const;
  std::vector<double> PredictRaw(const DedupedUnits &units) const;

  double ValidMae(const std::vector<DurationExample> &data) const;
  bool trained() const { return trained_; }
  const CnnDurationConfig &config() const { return net_.cfg; }

  nn::CheckpointData ToCheckpoint() const;
  static CnnDurationModel FromCheckpoint(const nn::CheckpointData &ckpt);

 private:
  mutable CnnDurationNetT<float> net_;
  bool trained_ = false;
};

}  // namespace uvc

#endif  // UVC_PROSODY_DURATION_H_
