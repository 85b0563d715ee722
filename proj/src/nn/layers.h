// nn/layers.h

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

#ifndef UVC_NN_LAYERS_H_
#define UVC_NN_LAYERS_H_

#include <string>
#include <vector>

#include "nn/tape.h"
#include "nn/tensor.h"

namespace uvc::nn {

template <typename T>
using ParamList = std::vector<ParamT<T> *>;

template <typename T>
struct LinearLayerT {
  ParamT<T> w, b;

  void Init(const std::string &name, int in, int out, Rng *rng) {
    w.Init(name + ".w", TensorT<T>::FanInUniform({out, in}, in, rng));
    b.Init(name + ".b", TensorT<T>({out}));
  }
  NodeId Apply(TapeT<T> &tape, NodeId x) {
    return tape.Linear(x, tape.Param(&w), tape.Param(&b));
  }
  void Collect(ParamList<T> *out) {
    out->push_back(&w);
    out->push_back(&b);
  }
};

template <typename T>
struct LayerNormLayerT {
  ParamT<T> gain, bias;

  void Init(const std::string &name, int dim) {
    gain.Init(name + ".gain", TensorT<T>::Full({dim}, T(1)));
    bias.Init(name + ".bias", TensorT<T>({dim}));
  }
  NodeId Apply(TapeT<T> &tape, NodeId x) {
    return tape.LayerNorm(x, tape.Param(&gain), tape.Param(&bias));
  }
  void Collect(ParamList<T> *out) {
    out->push_back(&gain);
    out->push_back(&bias);
  }
};

template <typename T>
struct EmbeddingLayerT {
  ParamT<T> table;

  void Init(const std::string &name, int vocab, int dim, Rng *rng) {
    table.Init(name + ".table", TensorT<T>::FanInUniform({vocab, dim}, dim, rng));
  }
  NodeId Apply(TapeT<T> &tape, const std::vector<int32_t> &ids) {
    return tape.Embedding(tape.Param(&table), ids);
  }
  void Collect(ParamList<T> *out) { out->push_back(&table); }
};

// Sinusoidal position table; no parameters.
template <typename T>
TensorT<T> SinusoidalPositions(int length, int dim) {
  TensorT<T> pe({length, dim});
  for (int t = 0; t < length; ++t) {
    for (int i = 0; i < dim; i += 2) {
      double rate = std::pow(10000.0, static_cast<double>(i) / dim);
      double angle = t / rate;
      pe.at(t, i) = static_cast<T>(std::sin(angle));
      if (i + 1 < dim) pe.at(t, i + 1) = static_cast<T>(std::cos(angle));
    }
  }
  return pe;
}

// Additive masks feeding SoftmaxRows: 0 keeps, -1e9 blocks.
template <typename T>
TensorT<T> CausalMask(int len) {
  TensorT<T> m({len, len});
  for (int i = 0; i < len; ++i)
    for (int j = i + 1; j < len; ++j) m.at(i, j) = T(-1e9);
  return m;
}

template <typename T>
struct MultiHeadAttentionT {
  LinearLayerT<T> wq, wk, wv, wo;
  int heads = 1;
  int dim = 0;

  void Init(const std::string &name, int d, int h, Rng *rng) {
    UVC_CHECK(d % h == 0);
    dim = d;
    heads = h;
    wq.Init(name + ".q", d, d, rng);
    wk.Init(name + ".k", d, d, rng);
    wv.Init(name + ".v", d, d, rng);
    wo.Init(name + ".out", d, d, rng);
  }

  // q_in [Lq x d] attends over kv_in [Lk x d]; mask (optional) is [Lq x Lk].
  NodeId Apply(TapeT<T> &tape, NodeId q_in, NodeId kv_in,
               const TensorT<T> *mask) {
    NodeId q = wq.Apply(tape, q_in);
    NodeId k = wk.Apply(tape, kv_in);
    NodeId v = wv.Apply(tape, kv_in);
    int dh = dim / heads;
    T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));
    std::vector<NodeId> ctx;
    ctx.reserve(static_cast<size_t>(heads));
    for (int h = 0; h < heads; ++h) {
      NodeId qh = tape.SliceCols(q, h * dh, (h + 1) * dh);
      NodeId kh = tape.SliceCols(k, h * dh, (h + 1) * dh);
      NodeId vh = tape.SliceCols(v, h * dh, (h + 1) * dh);
      NodeId scores = tape.Scale(tape.MatMulNT(qh, kh), scale);
      NodeId probs = tape.SoftmaxRows(scores, mask);
      ctx.push_back(tape.MatMul(probs, vh));
    }
    return wo.Apply(tape, tape.ConcatCols(ctx));
  }

  void Collect(ParamList<T> *out) {
    wq.Collect(out);
    wk.Collect(out);
    wv.Collect(out);
    wo.Collect(out);
  }
};

template <typename T>
struct FeedForwardT {
  LinearLayerT<T> up, down;

  void Init(const std::string &name, int dim, int hidden, Rng *rng) {
    up.Init(name + ".up", dim, hidden, rng);
    down.Init(name + ".down", hidden, dim, rng);
  }
  NodeId Apply(TapeT<T> &tape, NodeId x, double dropout) {
    NodeId h = tape.Dropout(tape.Relu(up.Apply(tape, x)), dropout);
    return down.Apply(tape, h);
  }
  void Collect(ParamList<T> *out) {
    up.Collect(out);
    down.Collect(out);
  }
};

// Pre-norm transformer encoder layer.
template <typename T>
struct EncoderLayerT {
  LayerNormLayerT<T> ln1, ln2;
  MultiHeadAttentionT<T> attn;
  FeedForwardT<T> ff;
  double dropout = 0.0;

  void Init(const std::string &name, int dim, int hidden, int heads,
            double drop, Rng *rng) {
    dropout = drop;
    ln1.Init(name + ".ln1", dim);
    ln2.Init(name + ".ln2", dim);
    attn.Init(name + ".attn", dim, heads, rng);
    ff.Init(name + ".ff", dim, hidden, rng);
  }
  NodeId Apply(TapeT<T> &tape, NodeId x) {
    NodeId a = ln1.Apply(tape, x);
    x = tape.Add(x, tape.Dropout(attn.Apply(tape, a, a, nullptr), dropout));
    NodeId f = ln2.Apply(tape, x);
    return tape.Add(x, tape.Dropout(ff.Apply(tape, f, dropout), dropout));
  }
  void Collect(ParamList<T> *out) {
    ln1.Collect(out);
    ln2.Collect(out);
    attn.Collect(out);
    ff.Collect(out);
  }
};

// Pre-norm transformer decoder layer: causal self-attention, then
// cross-attention over the encoder memory.
template <typename T>
struct DecoderLayerT {
  LayerNormLayerT<T> ln1, ln2, ln3;
  MultiHeadAttentionT<T> self_attn, cross_attn;
  FeedForwardT<T> ff;
  double dropout = 0.0;

  void Init(const std::string &name, int dim, int hidden, int heads,
            double drop, Rng *rng) {
    dropout = drop;
    ln1.Init(name + ".ln1", dim);
    ln2.Init(name + ".ln2", dim);
    ln3.Init(name + ".ln3", dim);
    self_attn.Init(name + ".self", dim, heads, rng);
    cross_attn.Init(name + ".cross", dim, heads, rng);
    ff.Init(name + ".ff", dim, hidden, rng);
  }
  NodeId Apply(TapeT<T> &tape, NodeId x, NodeId memory,
               const TensorT<T> *causal) {
    NodeId a = ln1.Apply(tape, x);
    x = tape.Add(x, tape.Dropout(self_attn.Apply(tape, a, a, causal), dropout));
    NodeId c = ln2.Apply(tape, x);
    x = tape.Add(x,
                 tape.Dropout(cross_attn.Apply(tape, c, memory, nullptr), dropout));
    NodeId f = ln3.Apply(tape, x);
    return tape.Add(x, tape.Dropout(ff.Apply(tape, f, dropout), dropout));
  }
  void Collect(ParamList<T> *out) {
    ln1.Collect(out);
    ln2.Collect(out);
    ln3.Collect(out);
    self_attn.Collect(out);
    cross_attn.Collect(out);
    ff.Collect(out);
  }
};

template <typename T>
struct Conv1dLayerT {
  ParamT<T> w, b;
  int kernel = 1;

  void Init(const std::string &name, int cin, int cout, int k, Rng *rng) {
    kernel = k;
    w.Init(name + ".w", TensorT<T>::FanInUniform({cout, k * cin}, k * cin, rng));
    b.Init(name + ".b", TensorT<T>({cout}));
  }
  NodeId Apply(TapeT<T> &tape, NodeId x) {
    return tape.Conv1dSame(x, tape.Param(&w), tape.Param(&b), kernel);
  }
  void Collect(ParamList<T> *out) {
    out->push_back(&w);
    out->push_back(&b);
  }
};

}  // namespace uvc::nn

#endif  // UVC_NN_LAYERS_H_
