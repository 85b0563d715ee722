// prosody/f0_model.cc

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

#include "prosody/f0_model.h"

#include <algorithm>
#include <cstdio>

namespace uvc {

F0Example MakeF0Example(const Utterance &u, const BinSpec &bins,
                        double blur_sigma_bins) {
  auto it = bins.speaker_stats.find(u.speaker);
  if (it == bins.speaker_stats.end())
    UVC_INVALID << "no speaker stats for speaker " << u.speaker;
  F0Example ex;
  ex.units = u.units;
  ex.emotion = u.emotion;
  ex.speaker = u.speaker;
  ex.target_hz = u.f0_hz;
  NormalizedTrack norm = NormalizeF0(u.f0_hz, it->second, bins.normalization);
  EncodedF0 enc = EncodeF0Targets(norm, bins, blur_sigma_bins);
  ex.targets = std::move(enc.targets);
  ex.voicing = std::move(enc.voicing);
  return ex;
}

F0Model::F0Model(const F0ModelConfig &cfg, BinSpec bins, uint64_t init_seed)
    : net_(cfg, init_seed), bins_(std::move(bins)) {
  UVC_CHECK_INPUT(net_.cfg.bins == bins_.d);
}

void F0Model::Train(const std::vector<F0Example> &train_data,
                    const std::vector<F0Example> &valid_data,
                    const TrainConfig &cfg) {
  UVC_CHECK_INPUT(!train_data.empty());
  UVC_CHECK_INPUT(!valid_data.empty());
  for (const F0Example &ex : train_data)
    UVC_CHECK_INPUT(ex.targets.dim(1) == bins_.d);

  nn::AdamConfig adam_cfg;
  adam_cfg.lr = cfg.lr;
  nn::Adam adam(net_.Params(), adam_cfg);
  Rng shuffle_rng(DeriveSeed(cfg.seed, 0xf0));

  std::vector<size_t> order(train_data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  trained_ = true;
  double best_mae = 1e18;
  std::vector<nn::NamedTensor> best_params = SnapshotParams(net_.Params());
  int bad_epochs = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    shuffle_rng.Shuffle(&order);
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg.batch_size)) {
      size_t end = std::min(order.size(),
                            start + static_cast<size_t>(cfg.batch_size));
      nn::Tape tape(DeriveSeed(cfg.seed, 0xf00000 + adam.step_count()),
                    /*training=*/true);
      std::vector<nn::NodeId> losses;
      std::vector<float> weights;
      for (size_t bi = start; bi < end; ++bi) {
        const F0Example &ex = train_data[order[bi]];
        int t_len = static_cast<int>(ex.units.size());
        if (t_len == 0) continue;
        nn::NodeId logits = net_.Forward(tape, ex.units, ex.emotion);
        nn::NodeId bin_logits = tape.SliceCols(logits, 0, bins_.d);
        nn::NodeId voice_logits = tape.SliceCols(logits, bins_.d, bins_.d + 1);
        nn::Tensor voice_target({t_len, 1});
        for (int t = 0; t < t_len; ++t)
          voice_target.data[static_cast<size_t>(t)] =
              ex.voicing[static_cast<size_t>(t)];
        nn::NodeId bce_bins = tape.BceWithLogits(bin_logits, ex.targets);
        nn::NodeId bce_voice =
            tape.BceWithLogits(voice_logits, std::move(voice_target));
        nn::NodeId total =
            tape.WeightedSum({tape.SumAll(bce_bins), tape.SumAll(bce_voice)},
                             {1.0f, 1.0f});
        losses.push_back(tape.Scale(total, 1.0f / static_cast<float>(t_len)));
        weights.push_back(1.0f);
      }
      if (losses.empty()) continue;
      for (auto &w : weights) w = 1.0f / static_cast<float>(weights.size());
      tape.Backward(tape.WeightedSum(losses, weights));
      adam.Step();
    }
    double mae = ValidMae(valid_data, DecodeRule::kWeightedAverage);
    if (!cfg.quiet)
      std::fprintf(stderr, "f0 epoch %d valid voiced mae %.3f Hz\n", epoch,
                   mae);
    if (mae < best_mae - 1e-6) {
      best_mae = mae;
      best_params = SnapshotParams(net_.Params());
      bad_epochs = 0;
    } else if (++bad_epochs > cfg.patience) {
      break;
    }
  }
  RestoreParams(best_params, net_.Params());
}

std::pair<nn::Tensor, std::vector<float>> F0Model::Predict(
    const UnitSequence &units, Emotion emotion) const {
  UVC_CHECK(trained_);
  int t_len = static_cast<int>(units.size());
  nn::Tensor activations({t_len, bins_.d});
  std::vector<float> voicing(static_cast<size_t>(t_len), 0.0f);
  if (t_len == 0) return {std::move(activations), std::move(voicing)};
  nn::Tape tape;
  nn::NodeId logits = net_.Forward(tape, units, emotion);
  nn::NodeId probs = tape.Sigmoid(logits);
  const nn::Tensor &p = tape.value(probs);
  for (int t = 0; t < t_len; ++t) {
    for (int j = 0; j < bins_.d; ++j) activations.at(t, j) = p.at(t, j);
    voicing[static_cast<size_t>(t)] = p.at(t, bins_.d);
  }
  return {std::move(activations), std::move(voicing)};
}

ProsodyTrack F0Model::PredictTrack(const UnitSequence &units, Emotion emotion,
                                   SpeakerId speaker, DecodeRule rule) const {
  auto it = bins_.speaker_stats.find(speaker);
  if (it == bins_.speaker_stats.end())
    UVC_INVALID << "no speaker stats for speaker " << speaker;
  auto [activations, voicing] = Predict(units, emotion);
  return DecodeF0(activations, voicing, bins_, rule, it->second);
}

double F0Model::ValidMae(const std::vector<F0Example> &data,
                         DecodeRule rule) const {
  double sum = 0.0;
  int64_t n = 0;
  for (const F0Example &ex : data) {
    if (ex.units.empty()) continue;
    ProsodyTrack pred = PredictTrack(ex.units, ex.emotion, ex.speaker, rule);
    for (size_t t = 0; t < ex.target_hz.size(); ++t) {
      if (ex.target_hz[t] <= 0.0) continue;
      sum += std::abs(pred[t] - ex.target_hz[t]);
      ++n;
    }
  }
  UVC_CHECK(n > 0);
  return sum / static_cast<double>(n);
}

nn::CheckpointData F0Model::ToCheckpoint() const {
  nn::CheckpointData ckpt;
  ckpt.model_kind = "f0";
  ckpt.header["vocab_size"] = net_.cfg.vocab_size;
  ckpt.header["unit_embed"] = net_.cfg.unit_embed;
  ckpt.header["emotion_embed"] = net_.cfg.emotion_embed;
  ckpt.header["channels"] = net_.cfg.channels;
  ckpt.header["kernel"] = net_.cfg.kernel;
  ckpt.header["conv_layers"] = net_.cfg.conv_layers;
  ckpt.header["bins"] = net_.cfg.bins;
  ckpt.header["bin_spec"] = bins_.ToJson();
  ckpt.params = SnapshotParams(const_cast<F0Model *>(this)->net_.Params());
  return ckpt;
}

F0Model F0Model::FromCheckpoint(const nn::CheckpointData &ckpt) {
  UVC_CHECK_INPUT(ckpt.model_kind == "f0");
  F0ModelConfig cfg;
  cfg.vocab_size = ckpt.header.at("vocab_size").get<int>();
  cfg.unit_embed = ckpt.header.at("unit_embed").get<int>();
  cfg.emotion_embed = ckpt.header.at("emotion_embed").get<int>();
  cfg.channels = ckpt.header.at("channels").get<int>();
  cfg.kernel = ckpt.header.at("kernel").get<int>();
  cfg.conv_layers = ckpt.header.at("conv_layers").get<int>();
  cfg.bins = ckpt.header.at("bins").get<int>();
  F0Model model(cfg, BinSpec::FromJson(ckpt.header.at("bin_spec")),
                /*init_seed=*/0);
  RestoreParams(ckpt.params, model.net_.Params());
  model.trained_ = true;
  return model;
}

}  // namespace uvc
