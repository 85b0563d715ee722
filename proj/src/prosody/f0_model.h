// prosody/f0_model.h

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

#ifndef UVC_PROSODY_F0_MODEL_H_
#define UVC_PROSODY_F0_MODEL_H_

#include <utility>
#include <vector>

#include "nn/adam.h"
#include "nn/checkpoint.h"
#include "nn/layers.h"
#include "prosody/bins.h"
#include "prosody/duration.h"

namespace uvc {

struct F0ModelConfig {
  int vocab_size = 64;
  int unit_embed = 32;
  int emotion_embed = 8;
  int channels = 64;
  int kernel = 7;
  int conv_layers = 6;
  int bins = 50;
};

// Frame-rate F0 estimator: per-frame unit embeddings concatenated with the
// target-emotion embedding feed a six-layer conv stack; the head emits d
// bin logits plus one voicing logit per frame.
template <typename T>
struct F0NetT {
  F0ModelConfig cfg;
  nn::EmbeddingLayerT<T> unit_embed;
  nn::EmbeddingLayerT<T> emotion_embed;
  std::vector<nn::Conv1dLayerT<T>> convs;
  nn::LinearLayerT<T> head;

  F0NetT(const F0ModelConfig &c, uint64_t seed) : cfg(c) {
    Rng rng(seed);
    unit_embed.Init("unit_embed", c.vocab_size, c.unit_embed, &rng);
    emotion_embed.Init("emotion_embed", kNumEmotions, c.emotion_embed, &rng);
    convs.resize(static_cast<size_t>(c.conv_layers));
    int in = c.unit_embed + c.emotion_embed;
    for (int l = 0; l < c.conv_layers; ++l) {
      convs[static_cast<size_t>(l)].Init("conv" + std::to_string(l), in,
                                         c.channels, c.kernel, &rng);
      in = c.channels;
    }
    head.Init("head", c.channels, c.bins + 1, &rng);
  }

  // Returns [T x (bins+1)] logits.
  nn::NodeId Forward(nn::TapeT<T> &tape, const UnitSequence &units,
                     Emotion emotion) {
    int t_len = static_cast<int>(units.size());
    nn::NodeId u =
        unit_embed.Apply(tape, std::vector<int32_t>(units.begin(), units.end()));
    nn::NodeId e = emotion_embed.Apply(
        tape, std::vector<int32_t>(static_cast<size_t>(t_len),
                                   static_cast<int32_t>(emotion)));
    nn::NodeId x = tape.ConcatCols({u, e});
    for (auto &conv : convs) x = tape.Relu(conv.Apply(tape, x));
    return head.Apply(tape, x);
  }

  nn::ParamList<T> Params() {
    nn::ParamList<T> out;
    unit_embed.Collect(&out);
    emotion_embed.Collect(&out);
    for (auto &conv : convs) conv.Collect(&out);
    head.Collect(&out);
    return out;
  }
};

struct F0Example {
  UnitSequence units;  // inflated to frame rate
  Emotion emotion = Emotion::kNeutral;
  SpeakerId speaker = 0;
  ProsodyTrack target_hz;  // ground truth, for validation MAE
  nn::Tensor targets;      // [T x d] blurred one-hots
  std::vector<float> voicing;
};

// Builds an F0Example from an utterance under the model's bin spec.
F0Example MakeF0Example(const Utterance &u, const BinSpec &bins,
                        double blur_sigma_bins = 1.0);

class F0Model {
 public:
  F0Model(const F0ModelConfig &cfg, BinSpec bins, uint64_t init_seed);

  // Optimizes per-coordinate BCE plus the voicing BCE; early stops on
  // validation voiced-frame MAE (weighted-average decoding).
  void Train(const std::vector<F0Example> &train_data,
             const std::vector<F0Example> &valid_data, const TrainConfig &cfg);

  // Sigmoid activations [T x d] and per-frame voicing probabilities.
  std::pair<nn::Tensor, std::vector<float>> Predict(const UnitSequence &units,
                                                    Emotion emotion) const;

  // Full path to Hz: predict, decode, denormalize for the given speaker.
  ProsodyTrack PredictTrack(const UnitSequence &units, Emotion emotion,
                            SpeakerId speaker, DecodeRule rule) const;

  double ValidMae(const std::vector<F0Example> &data, DecodeRule rule) const;

  const BinSpec &bins() const { return bins_; }
  const F0ModelConfig &config() const { return net_.cfg; }
  bool trained() const { return trained_; }

  nn::CheckpointData ToCheckpoint() const;
  static F0Model FromCheckpoint(const nn::CheckpointData &ckpt);

 private:
  mutable F0NetT<float> net_;
  BinSpec bins_;
  bool trained_ = false;
};

}  // namespace uvc

#endif  // UVC_PROSODY_F0_MODEL_H_
