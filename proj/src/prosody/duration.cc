// prosody/duration.cc

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

#include "prosody/duration.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "base/rng.h"
#include "base/textio.h"

namespace uvc {

DurationMetrics ComputeDurationMetrics(const Durations &pred,
                                       const Durations &target) {
  UVC_CHECK_INPUT(pred.size() == target.size());
  UVC_CHECK_INPUT(!pred.empty());
  DurationMetrics m;
  for (size_t i = 0; i < pred.size(); ++i) {
    int diff = std::abs(pred[i] - target[i]);
    m.mae_frames += diff;
    if (diff == 0) m.acc_0ms += 1.0;
    if (diff <= 1) m.acc_20ms += 1.0;
    if (diff <= 2) m.acc_40ms += 1.0;
  }
  double n = static_cast<double>(pred.size());
  m.mae_frames /= n;
  m.acc_0ms /= n;
  m.acc_20ms /= n;
  m.acc_40ms /= n;
  return m;
}

int32_t QuantizeDuration(double raw) {
  return static_cast<int32_t>(std::floor(std::max(raw, 1.0) + 0.5));
}

// ---- n-gram model -----------------------------------------------------------

NgramDurationModel::NgramDurationModel(int order) : order_(order) {
  UVC_CHECK_INPUT(order >= 1);
  tables_.resize(static_cast<size_t>(order));
}

void NgramDurationModel::Train(const std::vector<DurationExample> &data) {
  UVC_CHECK_INPUT(!data.empty());
  // Accumulate sums per context, then finish into mu/sigma.
  struct Acc {
    double sum = 0.0, sum_sq = 0.0;
    int64_t n = 0;
  };
  std::vector<std::map<std::vector<UnitId>, Acc>> accs(
      static_cast<size_t>(order_));
  Acc global;
  for (const auto &[units, durations] : data) {
    UVC_CHECK_INPUT(units.size() == durations.size());
    for (size_t i = 0; i < units.size(); ++i) {
      double d = durations[i];
      global.sum += d;
      global.sum_sq += d * d;
      ++global.n;
      for (int k = 1; k <= order_; ++k) {
        if (i + 1 < static_cast<size_t>(k)) break;
        std::vector<UnitId> ctx(units.begin() + static_cast<long>(i + 1 - k),
                                units.begin() + static_cast<long>(i + 1));
        Acc &a = accs[static_cast<size_t>(k) - 1][std::move(ctx)];
        a.sum += d;
        a.sum_sq += d * d;
        ++a.n;
      }
    }
  }
  UVC_CHECK_INPUT(global.n > 0);

  auto finish = [](const Acc &a) {
    Stats s;
    s.count = a.n;
    s.mu = a.sum / static_cast<double>(a.n);
    double var = a.sum_sq / static_cast<double>(a.n) - s.mu * s.mu;
    s.sigma = std::sqrt(std::max(var, 0.0));
    return s;
  };
  for (int k = 0; k < order_; ++k) {
    for (const auto &[ctx, acc] : accs[static_cast<size_t>(k)])
      tables_[static_cast<size_t>(k)][ctx] = finish(acc);
  }
  global_ = finish(global);
  trained_ = true;
}

NgramDurationModel::Stats NgramDurationModel::Lookup(const DedupedUnits &units,
                                                     size_t i) const {
  UVC_CHECK(trained_);
  for (int k = order_; k >= 1; --k) {
    if (i + 1 < static_cast<size_t>(k)) continue;
    std::vector<UnitId> ctx(units.begin() + static_cast<long>(i + 1 - k),
                            units.begin() + static_cast<long>(i + 1));
    const auto &table = tables_[static_cast<size_t>(k) - 1];
    auto it = table.find(ctx);
    if (it != table.end()) return it->second;
  }
  return global_;
}

Durations NgramDurationModel::Predict(const DedupedUnits &units,
                                      uint64_t seed) const {
  UVC_CHECK(trained_);
  Rng rng(seed);
  Durations out;
  out.reserve(units.size());
  for (size_t i = 0; i < units.size(); ++i) {
    Stats s = Lookup(units, i);
    double sample = rng.Normal(s.mu, s.sigma);
    out.push_back(QuantizeDuration(sample));
  }
  return out;
}

nn::CheckpointData NgramDurationModel::ToCheckpoint() const {
  UVC_CHECK(trained_);
  nn::CheckpointData ckpt;
  ckpt.model_kind = "duration_ngram";
  ckpt.header["order"] = order_;
  ckpt.header["global"] = {{"mu", global_.mu},
                           {"sigma", global_.sigma},
                           {"count", global_.count}};
  nlohmann::json tables = nlohmann::json::array();
  for (int k = 0; k < order_; ++k) {
    nlohmann::json table = nlohmann::json::object();
    for (const auto &[ctx, s] : tables_[static_cast<size_t>(k)]) {
      std::string key;
      for (size_t i = 0; i < ctx.size(); ++i) {
        if (i) key += ',';
        key += std::to_string(ctx[i]);
      }
      table[key] = {{"mu", s.mu}, {"sigma", s.sigma}, {"count", s.count}};
    }
    tables.push_back(std::move(table));
  }
  ckpt.header["tables"] = std::move(tables);
  return ckpt;
}

NgramDurationModel NgramDurationModel::FromCheckpoint(
    const nn::CheckpointData &ckpt) {
  UVC_CHECK_INPUT(ckpt.model_kind == "duration_ngram");
  NgramDurationModel model(ckpt.header.at("order").get<int>());
  const auto &g = ckpt.header.at("global");
  model.global_ = {g.at("mu").get<double>(), g.at("sigma").get<double>(),
                   g.at("count").get<int64_t>()};
  const auto &tables = ckpt.header.at("tables");
  UVC_CHECK_INPUT(static_cast<int>(tables.size()) == model.order_);
  for (int k = 0; k < model.order_; ++k) {
    for (const auto &[key, s] : tables[static_cast<size_t>(k)].items()) {
      std::vector<UnitId> ctx;
      for (const std::string &tok : SplitChar(key, ','))
        ctx.push_back(static_cast<UnitId>(ParseInt(tok)));
      model.tables_[static_cast<size_t>(k)][ctx] = {
          s.at("mu").get<double>(), s.at("sigma").get<double>(),
          s.at("count").get<int64_t>()};
    }
  }
  model.trained_ = true;
  return model;
}

// ---- CNN model ----------------------------------------------------------------

CnnDurationModel::CnnDurationModel(const CnnDurationConfig &cfg,
                                   uint64_t init_seed)
    : net_(cfg, init_seed) {}

std::vector<double> CnnDurationModel::Train(
    const std::vector<DurationExample> &train_data,
    const std::vector<DurationExample> &valid_data, const TrainConfig &cfg) {
  UVC_CHECK_INPUT(!train_data.empty());
  UVC_CHECK_INPUT(!valid_data.empty());
  nn::AdamConfig adam_cfg;
  adam_cfg.lr = cfg.lr;
  nn::Adam adam(net_.Params(), adam_cfg);
  Rng shuffle_rng(DeriveSeed(cfg.seed, 0xd0));

  std::vector<size_t> order(train_data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  trained_ = true;  // Predict is callable during validation below.
  std::vector<double> history;
  double best_mae = 1e18;
  std::vector<nn::NamedTensor> best_params = SnapshotParams(net_.Params());
  int bad_epochs = 0;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    shuffle_rng.Shuffle(&order);
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg.batch_size)) {
      size_t end = std::min(order.size(),
                            start + static_cast<size_t>(cfg.batch_size));
      nn::Tape tape(DeriveSeed(cfg.seed, 0x7a0000 + adam.step_count()),
                    /*training=*/true);
      std::vector<nn::NodeId> losses;
      std::vector<float> weights;
      for (size_t bi = start; bi < end; ++bi) {
        const auto &[units, durations] = train_data[order[bi]];
        if (units.empty()) continue;
        nn::NodeId raw = net_.Forward(tape, units);
        nn::Tensor target({static_cast<int>(durations.size()), 1});
        for (size_t i = 0; i < durations.size(); ++i)
          target.data[i] = static_cast<float>(durations[i]);
        losses.push_back(tape.MseLoss(raw, std::move(target)));
        weights.push_back(1.0f);
      }
      if (losses.empty()) continue;
      for (auto &w : weights) w = 1.0f / static_cast<float>(weights.size());
      tape.Backward(tape.WeightedSum(losses, weights));
      adam.Step();
    }
    double mae = ValidMae(valid_data);
    history.push_back(mae);
    if (!cfg.quiet)
      std::fprintf(stderr, "duration-cnn epoch %d valid mae %.4f\n", epoch,
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
  return history;
}

std::vector<double> CnnDurationModel::PredictRaw(
    const DedupedUnits &units) const {
  UVC_CHECK(trained_);
  if (units.empty()) return {};
  nn::Tape tape;
  nn::NodeId raw = net_.Forward(tape, units);
  const nn::Tensor &v = tape.value(raw);
  std::vector<double> out(units.size());
  for (size_t i = 0; i < units.size(); ++i)
    out[i] = static_cast<double>(v.data[i]);
  return out;
}

Durations CnnDurationModel::Predict(const DedupedUnits &units) const {
  std::vector<double> raw = PredictRaw(units);
  Durations out;
  out.reserve(raw.size());
  for (double r : raw) out.push_back(QuantizeDuration(r));
  return out;
}

double CnnDurationModel::ValidMae(
    const std::vector<DurationExample> &data) const {
  double sum = 0.0;
  int64_t n = 0;
  for (const auto &[units, durations] : data) {
    if (units.empty()) continue;
    Durations pred = Predict(units);
    for (size_t i = 0; i < durations.size(); ++i) {
      sum += std::abs(pred[i] - durations[i]);
      ++n;
    }
  }
  UVC_CHECK(n > 0);
  return sum / static_cast<double>(n);
}

nn::CheckpointData CnnDurationModel::ToCheckpoint() const {
  nn::CheckpointData ckpt;
  ckpt.model_kind = "duration_cnn";
  ckpt.header["vocab_size"] = net_.cfg.vocab_size;
  ckpt.header["embed_dim"] = net_.cfg.embed_dim;
  ckpt.header["channels"] = net_.cfg.channels;
  ckpt.header["kernel"] = net_.cfg.kernel;
  ckpt.header["dropout"] = net_.cfg.dropout;
  ckpt.params = SnapshotParams(const_cast<CnnDurationModel *>(this)->net_.Params());
  return ckpt;
}

CnnDurationModel CnnDurationModel::FromCheckpoint(
    const nn::CheckpointData &ckpt) {
  UVC_CHECK_INPUT(ckpt.model_kind == "duration_cnn");
  CnnDurationConfig cfg;
  cfg.vocab_size = ckpt.header.at("vocab_size").get<int>();
  cfg.embed_dim = ckpt.header.at("embed_dim").get<int>();
  cfg.channels = ckpt.header.at("channels").get<int>();
  cfg.kernel = ckpt.header.at("kernel").get<int>();
  cfg.dropout = ckpt.header.at("dropout").get<double>();
  CnnDurationModel model(cfg, /*init_seed=*/0);
  RestoreParams(ckpt.params, model.net_.Params());
  model.trained_ = true;
  return model;
}

}  // namespace uvc
