// nn/tape.h

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

#ifndef UVC_NN_TAPE_H_
#define UVC_NN_TAPE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "base/rng.h"
#include "nn/kernels.h"
#include "nn/tensor.h"

namespace uvc::nn {

using NodeId = int32_t;
constexpr NodeId kNoNode = -1;

// Reverse-mode tape. Ops execute eagerly and record a backward closure;
// Backward() replays them in reverse. Graphs are rebuilt per step
// (define-by-run), so control flow in model code needs no special casing.
// Every op checks its output for NaN/Inf and throws on the first hit.
template <typename T>
class TapeT {
 public:
  using Tensor = TensorT<T>;

  explicit TapeT(uint64_t dropout_seed = 0, bool training = false)
      : rng_(dropout_seed), training_(training) {}

  bool training() const { return training_; }

  // ---- graph construction -------------------------------------------------

  NodeId Constant(Tensor v) {
    return AddNode(std::move(v), /*needs_grad=*/false, {});
  }

  NodeId Param(ParamT<T> *p) {
    NodeId id = AddNode(Tensor(), true, {});
    nodes_[id].param = p;
    return id;
  }

  // ---- ops -----------------------------------------------------------------

  // Row gather: table [V x E], ids in [0, V) -> [ids.size() x E].
  NodeId Embedding(NodeId table, std::vector<int32_t> ids) {
    const Tensor &tab = value(table);
    UVC_CHECK(tab.shape.size() == 2);
    int e = tab.dim(1);
    Tensor out({static_cast<int>(ids.size()), e});
    for (size_t r = 0; r < ids.size(); ++r) {
      UVC_CHECK(ids[r] >= 0 && ids[r] < tab.dim(0));
      const T *src = tab.data.data() + static_cast<int64_t>(ids[r]) * e;
      std::copy(src, src + e, out.data.data() + r * e);
    }
    NodeId id = AddNode(std::move(out), needs_grad(table), {table});
    auto idv = std::move(ids);
    SetBackward(id, [this, id, table, idv, e]() {
      Tensor &dt = grad_[table];
      const Tensor &dout = grad_[id];
      for (size_t r = 0; r < idv.size(); ++r) {
        T *dst = dt.data.data() + static_cast<int64_t>(idv[r]) * e;
        const T *src = dout.data.data() + r * e;
        for (int j = 0; j < e; ++j) dst[j] += src[j];
      }
    });
    return id;
  }

  // y = x * W^T + b with x [m x in], W [out x in], b [out] (or kNoNode).
  NodeId Linear(NodeId x, NodeId w, NodeId b) {
    const Tensor &xv = value(x);
    const Tensor &wv = value(w);
    int m = xv.rows(), in = xv.cols(), out = wv.dim(0);
    UVC_CHECK(wv.dim(1) == in);
    Tensor y({m, out});
    kernels::GemmNT(xv.data.data(), wv.data.data(), y.data.data(), m, in, out);
    if (b != kNoNode) {
      const Tensor &bv = value(b);
      UVC_CHECK(bv.numel() == out);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < out; ++j) y.at(i, j) += bv.data[j];
    }
    std::vector<NodeId> deps = {x, w};
    if (b != kNoNode) deps.push_back(b);
    NodeId id = AddNode(std::move(y), AnyNeedsGrad(deps), deps);
    SetBackward(id, [this, id, x, w, b, m, in, out]() {
      const Tensor &dy = grad_[id];
      if (needs_grad(x))
        kernels::Gemm(dy.data.data(), value(w).data.data(),
                      grad_[x].data.data(), m, out, in, true);
      if (needs_grad(w))
        kernels::GemmTN(dy.data.data(), value(x).data.data(),
                        grad_[w].data.data(), out, m, in, true);
      if (b != kNoNode && needs_grad(b)) {
        Tensor &db = grad_[b];
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < out; ++j) db.data[j] += dy.at(i, j);
      }
    });
    return id;
  }

  // C = A * B with A [m x k], B [k x n].
  NodeId MatMul(NodeId a, NodeId b) {
    const Tensor &av = value(a);
    const Tensor &bv = value(b);
    int m = av.rows(), k = av.cols(), n = bv.cols();
    UVC_CHECK(bv.rows() == k);
    Tensor c({m, n});
    kernels::Gemm(av.data.data(), bv.data.data(), c.data.data(), m, k, n);
    NodeId id = AddNode(std::move(c), AnyNeedsGrad({a, b}), {a, b});
    SetBackward(id, [this, id, a, b, m, k, n]() {
      const Tensor &dc = grad_[id];
      if (needs_grad(a))
        kernels::GemmNT(dc.data.data(), value(b).data.data(),
                        grad_[a].data.data(), m, n, k, true);
      if (needs_grad(b))
        kernels::GemmTN(value(a).data.data(), dc.data.data(),
                        grad_[b].data.data(), k, m, n, true);
    });
    return id;
  }

  // C = A * B^T with A [m x k], B [n x k]; attention scores.
  NodeId MatMulNT(NodeId a, NodeId b) {
    const Tensor &av = value(a);
    const Tensor &bv = value(b);
    int m = av.rows(), k = av.cols(), n = bv.rows();
    UVC_CHECK(bv.cols() == k);
    Tensor c({m, n});
    kernels::GemmNT(av.data.data(), bv.data.data(), c.data.data(), m, k, n);
    NodeId id = AddNode(std::move(c), AnyNeedsGrad({a, b}), {a, b});
    SetBackward(id, [this, id, a, b, m, k, n]() {
      const Tensor &dc = grad_[id];
      if (needs_grad(a))
        kernels::Gemm(dc.data.data(), value(b).data.data(),
                      grad_[a].data.data(), m, n, k, true);
      if (needs_grad(b))
        kernels::GemmTN(dc.data.data(), value(a).data.data(),
                        grad_[b].data.data(), n, m, k, true);
    });
    return id;
  }

  NodeId Add(NodeId a, NodeId b) {
    const Tensor &av = value(a);
    const Tensor &bv = value(b);
    UVC_CHECK(av.SameShape(bv));
    Tensor c = av;
    for (int64_t i = 0; i < c.numel(); ++i) c.data[i] += bv.data[i];
    NodeId id = AddNode(std::move(c), AnyNeedsGrad({a, b}), {a, b});
    SetBackward(id, [this, id, a, b]() {
      const Tensor &dc = grad_[id];
      if (needs_grad(a))
        for (int64_t i = 0; i < dc.numel(); ++i) grad_[a].data[i] += dc.data[i];
      if (needs_grad(b))
        for (int64_t i = 0; i < dc.numel(); ++i) grad_[b].data[i] += dc.data[i];
    });
    return id;
  }

  NodeId Scale(NodeId a, T s) {
    Tensor c = value(a);
    for (auto &v : c.data) v *= s;
    NodeId id = AddNode(std::move(c), needs_grad(a), {a});
    SetBackward(id, [this, id, a, s]() {
      if (!needs_grad(a)) return;
      const Tensor &dc = grad_[id];
      for (int64_t i = 0; i < dc.numel(); ++i)
        grad_[a].data[i] += s * dc.data[i];
    });
    return id;
  }

  NodeId Relu(NodeId a) {
    Tensor c = value(a);
    for (auto &v : c.data) v = v > T(0) ? v : T(0);
    NodeId id = AddNode(std::move(c), needs_grad(a), {a});
    SetBackward(id, [this, id, a]() {
      if (!needs_grad(a)) return;
      const Tensor &dc = grad_[id];
      const Tensor &av = value(a);
      for (int64_t i = 0; i < dc.numel(); ++i)
        if (av.data[i] > T(0)) grad_[a].data[i] += dc.data[i];
    });
    return id;
  }

  NodeId Sigmoid(NodeId a) {
    Tensor c = value(a);
    for (auto &v : c.data) v = StableSigmoid(v);
    NodeId id = AddNode(std::move(c), needs_grad(a), {a});
    SetBackward(id, [this, id, a]() {
      if (!needs_grad(a)) return;
      const Tensor &dc = grad_[id];
      const Tensor &s = value(id);
      for (int64_t i = 0; i < dc.numel(); ++i)
        grad_[a].data[i] += dc.data[i] * s.data[i] * (T(1) - s.data[i]);
    });
    return id;
  }

  // Row-wise softmax over the last dim; optional additive mask (same shape,
  // typically 0 / -1e9) applied before normalization.
  NodeId SoftmaxRows(NodeId a, const Tensor *additive_mask = nullptr) {
    Tensor c = value(a);
    int m = c.rows(), n = c.cols();
    if (additive_mask != nullptr) {
      UVC_CHECK(additive_mask->SameShape(c));
      for (int64_t i = 0; i < c.numel(); ++i)
        c.data[i] += additive_mask->data[i];
    }
    for (int i = 0; i < m; ++i) {
      T *row = c.data.data() + static_cast<int64_t>(i) * n;
      T mx = row[0];
      for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
      T sum = T(0);
      for (int j = 0; j < n; ++j) {
        row[j] = std::exp(row[j] - mx);
        sum += row[j];
      }
      for (int j = 0; j < n; ++j) row[j] /= sum;
    }
    NodeId id = AddNode(std::move(c), needs_grad(a), {a});
    SetBackward(id, [this, id, a, m, n]() {
      if (!needs_grad(a)) return;
      const Tensor &dc = grad_[id];
      const Tensor &s = value(id);
      for (int i = 0; i < m; ++i) {
        const T *srow = s.data.data() + static_cast<int64_t>(i) * n;
        const T *drow = dc.data.data() + static_cast<int64_t>(i) * n;
        T dot = T(0);
        for (int j = 0; j < n; ++j) dot += srow[j] * drow[j];
        T *out = grad_[a].data.data() + static_cast<int64_t>(i) * n;
        for (int j = 0; j < n; ++j) out[j] += srow[j] * (drow[j] - dot);
      }
    });
    return id;
  }

  // Per-row layer norm with learned gain/bias (population variance).
  NodeId LayerNorm(NodeId x, NodeId gain, NodeId bias, T eps = T(1e-5)) {
    const Tensor &xv = value(x);
    int m = xv.rows(), n = xv.cols();
    UVC_CHECK(value(gain).numel() == n && value(bias).numel() == n);
    Tensor c({m, n});
    Tensor xhat({m, n});
    std::vector<T> inv_std(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      const T *row = xv.data.data() + static_cast<int64_t>(i) * n;
      T mu = T(0);
      for (int j = 0; j < n; ++j) mu += row[j];
      mu /= T(n);
      T var = T(0);
      for (int j = 0; j < n; ++j) var += (row[j] - mu) * (row[j] - mu);
      var /= T(n);
      T is = T(1) / std::sqrt(var + eps);
      inv_std[static_cast<size_t>(i)] = is;
      for (int j = 0; j < n; ++j) {
        T xh = (row[j] - mu) * is;
        xhat.at(i, j) = xh;
        c.at(i, j) = xh * value(gain).data[j] + value(bias).data[j];
      }
    }
    NodeId id = AddNode(std::move(c), AnyNeedsGrad({x, gain, bias}),
                        {x, gain, bias});
    aux_[id] = std::move(xhat);
    auto is_vec = std::move(inv_std);
    SetBackward(id, [this, id, x, gain, bias, m, n, is_vec]() {
      const Tensor &dc = grad_[id];
      const Tensor &xh = aux_[id];
      const Tensor &g = value(gain);
      for (int i = 0; i < m; ++i) {
        const T *drow = dc.data.data() + static_cast<int64_t>(i) * n;
        const T *xrow = xh.data.data() + static_cast<int64_t>(i) * n;
        if (needs_grad(gain)) {
          Tensor &dg = grad_[gain];
          for (int j = 0; j < n; ++j) dg.data[j] += drow[j] * xrow[j];
        }
        if (needs_grad(bias)) {
          Tensor &db = grad_[bias];
          for (int j = 0; j < n; ++j) db.data[j] += drow[j];
        }
        if (needs_grad(x)) {
          T mean_a = T(0), mean_ax = T(0);
          for (int j = 0; j < n; ++j) {
            T aj = drow[j] * g.data[j];
            mean_a += aj;
            mean_ax += aj * xrow[j];
          }
          mean_a /= T(n);
          mean_ax /= T(n);
          T is = is_vec[static_cast<size_t>(i)];
          T *out = grad_[x].data.data() + static_cast<int64_t>(i) * n;
          for (int j = 0; j < n; ++j) {
            T aj = drow[j] * g.data[j];
            out[j] += is * (aj - mean_a - xrow[j] * mean_ax);
          }
        }
      }
    });
    return id;
  }

  // Inverted dropout; identity when not training or p == 0.
  NodeId Dropout(NodeId a, double p) {
    if (!training_ || p <= 0.0) return a;
    UVC_CHECK(p < 1.0);
    const Tensor &av = value(a);
    Tensor mask(av.shape);
    T keep_scale = static_cast<T>(1.0 / (1.0 - p));
    for (int64_t i = 0; i < mask.numel(); ++i)
      mask.data[i] = rng_.Bernoulli(p) ? T(0) : keep_scale;
    Tensor c = av;
    for (int64_t i = 0; i < c.numel(); ++i) c.data[i] *= mask.data[i];
    NodeId id = AddNode(std::move(c), needs_grad(a), {a});
    aux_[id] = std::move(mask);
    SetBackward(id, [this, id, a]() {
      if (!needs_grad(a)) return;
      const Tensor &dc = grad_[id];
      const Tensor &mk = aux_[id];
      for (int64_t i = 0; i < dc.numel(); ++i)
        grad_[a].data[i] += dc.data[i] * mk.data[i];
    });
    return id;
  }

  // conv1d with odd kernel and same padding: x [t x cin], w [cout x k*cin],
  // b [cout] or kNoNode -> [t x cout]. Built on im2col + GEMM.
  NodeId Conv1dSame(NodeId x, NodeId w, NodeId b, int kernel) {
    UVC_CHECK(kernel % 2 == 1);
    const Tensor &xv = value(x);
    const Tensor &wv = value(w);
    int t = xv.rows(), cin = xv.cols(), cout = wv.dim(0);
    UVC_CHECK(wv.dim(1) == kernel * cin);
    int pad = kernel / 2;
    Tensor col({t, kernel * cin});
    ParallelFor(t, [&](int64_t i) {
      T *dst = col.data.data() + i * kernel * cin;
      for (int kk = 0; kk < kernel; ++kk) {
        int64_t src_t = i + kk - pad;
        if (src_t >= 0 && src_t < t) {
          const T *src = xv.data.data() + src_t * cin;
          std::copy(src, src + cin, dst + kk * cin);
        } else {
          std::fill(dst + kk * cin, dst + (kk + 1) * cin, T(0));
        }
      }
    });
    Tensor y({t, cout});
    kernels::GemmNT(col.data.data(), wv.data.data(), y.data.data(), t,
                    kernel * cin, cout);
    if (b != kNoNode) {
      const Tensor &bv = value(b);
      UVC_CHECK(bv.numel() == cout);
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < cout; ++j) y.at(i, j) += bv.data[j];
    }
    std::vector<NodeId> deps = {x, w};
    if (b != kNoNode) deps.push_back(b);
    NodeId id = AddNode(std::move(y), AnyNeedsGrad(deps), deps);
    aux_[id] = std::move(col);
    SetBackward(id, [this, id, x, w, b, t, cin, cout, kernel, pad]() {
      const Tensor &dy = grad_[id];
      const Tensor &colv = aux_[id];
      if (needs_grad(w))
        kernels::GemmTN(dy.data.data(), colv.data.data(),
                        grad_[w].data.data(), cout, t, kernel * cin, true);
      if (b != kNoNode && needs_grad(b)) {
        Tensor &db = grad_[b];
        for (int i = 0; i < t; ++i)
          for (int j = 0; j < cout; ++j) db.data[j] += dy.at(i, j);
      }
      if (needs_grad(x)) {
        Tensor dcol({t, kernel * cin});
        kernels::Gemm(dy.data.data(), value(w).data.data(), dcol.data.data(),
                      t, cout, kernel * cin);
        // col2im as a gather so rows stay independent.
        Tensor &dx = grad_[x];
        ParallelFor(t, [&](int64_t s) {
          T *out = dx.data.data() + s * cin;
          for (int kk = 0; kk < kernel; ++kk) {
            int64_t row = s - kk + pad;
            if (row < 0 || row >= t) continue;
            const T *src = dcol.data.data() + row * kernel * cin + kk * cin;
            for (int c = 0; c < cin; ++c) out[c] += src[c];
          }
        });
      }
    });
    return id;
  }

  NodeId SliceCols(NodeId a, int begin, int end) {
    const Tensor &av = value(a);
    int m = av.rows(), n = av.cols();
    UVC_CHECK(0 <= begin && begin < end && end <= n);
    int w = end - begin;
    Tensor c({m, w});
    for (int i = 0; i < m; ++i)
      std::copy(av.data.data() + static_cast<int64_t>(i) * n + begin,
                av.data.data() + static_cast<int64_t>(i) * n + end,
                c.data.data() + static_cast<int64_t>(i) * w);
    NodeId id = AddNode(std::move(c), needs_grad(a), {a});
    SetBackward(id, [this, id, a, begin, w, m, n]() {
      if (!needs_grad(a)) return;
      const Tensor &dc = grad_[id];
      Tensor &da = grad_[a];
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < w; ++j)
          da.data[static_cast<int64_t>(i) * n + begin + j] +=
              dc.data[static_cast<int64_t>(i) * w + j];
    });
    return id;
  }

  NodeId ConcatCols(const std::vector<NodeId> &parts) {
    UVC_CHECK(!parts.empty());
    int m = value(parts[0]).rows();
    int total = 0;
    for (NodeId p : parts) {
      UVC_CHECK(value(p).rows() == m);
      total += value(p).cols();
    }
    Tensor c({m, total});
    int off = 0;
    for (NodeId p : parts) {
      const Tensor &pv = value(p);
      int w = pv.cols();
      for (int i = 0; i < m; ++i)
        std::copy(pv.data.data() + static_cast<int64_t>(i) * w,
                  pv.data.data() + static_cast<int64_t>(i) * (w + 0) + w,
                  c.data.data() + static_cast<int64_t>(i) * total + off);
      off += w;
    }
    NodeId id = AddNode(std::move(c), AnyNeedsGrad(parts), parts);
    auto parts_copy = parts;
    SetBackward(id, [this, id, parts_copy, m, total]() {
      const Tensor &dc = grad_[id];
      int off = 0;
      for (NodeId p : parts_copy) {
        int w = value(p).cols();
        if (needs_grad(p)) {
          Tensor &dp = grad_[p];
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < w; ++j)
              dp.data[static_cast<int64_t>(i) * w + j] +=
                  dc.data[static_cast<int64_t>(i) * total + off + j];
        }
        off += w;
      }
    });
    return id;
  }

  // Mean over rows of -log softmax(logits)[r, target_r]. Fused for
  // numerical stability.
  NodeId SoftmaxCrossEntropy(NodeId logits, std::vector<int32_t> targets) {
    const Tensor &lv = value(logits);
    int m = lv.rows(), n = lv.cols();
    UVC_CHECK(static_cast<int>(targets.size()) == m);
    UVC_CHECK(m > 0);
    Tensor probs({m, n});
    double loss = 0.0;
    for (int i = 0; i < m; ++i) {
      UVC_CHECK(targets[static_cast<size_t>(i)] >= 0 &&
                targets[static_cast<size_t>(i)] < n);
      const T *row = lv.data.data() + static_cast<int64_t>(i) * n;
      T mx = row[0];
      for (int j = 1; j < n; ++j) mx = std::max(mx, row[j]);
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += std::exp(static_cast<double>(row[j] - mx));
      double log_z = std::log(sum) + static_cast<double>(mx);
      loss -= static_cast<double>(row[targets[static_cast<size_t>(i)]]) - log_z;
      for (int j = 0; j < n; ++j)
        probs.at(i, j) =
            static_cast<T>(std::exp(static_cast<double>(row[j]) - log_z));
    }
    NodeId id = AddNode(Tensor::Scalar(static_cast<T>(loss / m)),
                        needs_grad(logits), {logits});
    aux_[id] = std::move(probs);
    auto tgt = std::move(targets);
    SetBackward(id, [this, id, logits, tgt, m, n]() {
      if (!needs_grad(logits)) return;
      T scale = grad_[id].data[0] / static_cast<T>(m);
      const Tensor &p = aux_[id];
      Tensor &dl = grad_[logits];
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
          T delta = (j == tgt[static_cast<size_t>(i)]) ? T(1) : T(0);
          dl.data[static_cast<int64_t>(i) * n + j] +=
              scale * (p.at(i, j) - delta);
        }
      }
    });
    return id;
  }

  // Elementwise binary cross-entropy on logits; targets in [0, 1].
  NodeId BceWithLogits(NodeId logits, Tensor targets) {
    const Tensor &lv = value(logits);
    UVC_CHECK(lv.SameShape(targets));
    Tensor c(lv.shape);
    for (int64_t i = 0; i < lv.numel(); ++i) {
      double z = static_cast<double>(lv.data[i]);
      double y = static_cast<double>(targets.data[i]);
      c.data[i] = static_cast<T>(std::max(z, 0.0) - z * y +
                                 std::log1p(std::exp(-std::abs(z))));
    }
    NodeId id = AddNode(std::move(c), needs_grad(logits), {logits});
    aux_[id] = std::move(targets);
    SetBackward(id, [this, id, logits]() {
      if (!needs_grad(logits)) return;
      const Tensor &dc = grad_[id];
      const Tensor &y = aux_[id];
      const Tensor &lv = value(logits);
      Tensor &dl = grad_[logits];
      for (int64_t i = 0; i < dc.numel(); ++i)
        dl.data[i] += dc.data[i] * (StableSigmoid(lv.data[i]) - y.data[i]);
    });
    return id;
  }

  // Scalar mean of squared error against a constant target.
  NodeId MseLoss(NodeId pred, Tensor target) {
    const Tensor &pv = value(pred);
    UVC_CHECK(pv.SameShape(target));
    UVC_CHECK(pv.numel() > 0);
    double sum = 0.0;
    for (int64_t i = 0; i < pv.numel(); ++i) {
      double d = static_cast<double>(pv.data[i]) -
                 static_cast<double>(target.data[i]);
      sum += d * d;
    }
    int64_t n = pv.numel();
    NodeId id = AddNode(Tensor::Scalar(static_cast<T>(sum / n)),
                        needs_grad(pred), {pred});
    aux_[id] = std::move(target);
    SetBackward(id, [this, id, pred, n]() {
      if (!needs_grad(pred)) return;
      T scale = grad_[id].data[0] * T(2) / static_cast<T>(n);
      const Tensor &tv = aux_[id];
      const Tensor &pv = value(pred);
      Tensor &dp = grad_[pred];
      for (int64_t i = 0; i < n; ++i)
        dp.data[i] += scale * (pv.data[i] - tv.data[i]);
    });
    return id;
  }

  NodeId SumAll(NodeId a) {
    const Tensor &av = value(a);
    double sum = 0.0;
    for (const T &v : av.data) sum += static_cast<double>(v);
    NodeId id = AddNode(Tensor::Scalar(static_cast<T>(sum)), needs_grad(a), {a});
    SetBackward(id, [this, id, a]() {
      if (!needs_grad(a)) return;
      T g = grad_[id].data[0];
      for (auto &v : grad_[a].data) v += g;
    });
    return id;
  }

  NodeId MeanAll(NodeId a) {
    const Tensor &av = value(a);
    UVC_CHECK(av.numel() > 0);
    return Scale(SumAll(a), T(1) / static_cast<T>(av.numel()));
  }

  // Fixed-weight combination of scalar nodes; batch loss aggregation.
  NodeId WeightedSum(const std::vector<NodeId> &terms,
                     const std::vector<T> &weights) {
    UVC_CHECK(!terms.empty() && terms.size() == weights.size());
    double sum = 0.0;
    for (size_t i = 0; i < terms.size(); ++i)
      sum += static_cast<double>(weights[i]) *
             static_cast<double>(value(terms[i]).scalar());
    NodeId id = AddNode(Tensor::Scalar(static_cast<T>(sum)),
                        AnyNeedsGrad(terms), terms);
    auto ts = terms;
    auto ws = weights;
    SetBackward(id, [this, id, ts, ws]() {
      T g = grad_[id].data[0];
      for (size_t i = 0; i < ts.size(); ++i)
        if (needs_grad(ts[i])) grad_[ts[i]].data[0] += g * ws[i];
    });
    return id;
  }

  // ---- execution -----------------------------------------------------------

  const Tensor &value(NodeId id) const {
    const Node &n = nodes_[static_cast<size_t>(id)];
    return n.param != nullptr ? n.param->value : n.value;
  }

  const Tensor &grad(NodeId id) const { return grad_[id]; }

  // Seeds d(loss)/d(loss) = 1 and replays the tape in reverse; parameter
  // gradients are accumulated into their ParamT::grad buffers.
  void Backward(NodeId loss) {
    UVC_CHECK(value(loss).is_scalar());
    grad_.assign(nodes_.size(), Tensor());
    for (size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].needs_grad) grad_[i] = Tensor(value(static_cast<NodeId>(i)).shape);
    }
    UVC_CHECK(nodes_[static_cast<size_t>(loss)].needs_grad);
    grad_[loss].data[0] = T(1);
    for (int32_t i = loss; i >= 0; --i) {
      Node &n = nodes_[static_cast<size_t>(i)];
      if (n.needs_grad && n.backward) n.backward();
    }
    // Fold leaf gradients into their parameters.
    for (size_t i = 0; i < nodes_.size(); ++i) {
      Node &n = nodes_[i];
      if (n.param != nullptr && !grad_[i].data.empty()) {
        UVC_CHECK(n.param->grad.SameShape(n.param->value));
        for (int64_t j = 0; j < grad_[i].numel(); ++j)
          n.param->grad.data[j] += grad_[i].data[j];
      }
    }
  }

  size_t NumNodes() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    ParamT<T> *param = nullptr;
    bool needs_grad = false;
    std::function<void()> backward;
  };

  bool needs_grad(NodeId id) const {
    return nodes_[static_cast<size_t>(id)].needs_grad;
  }

  bool AnyNeedsGrad(const std::vector<NodeId> &deps) const {
    for (NodeId d : deps)
      if (needs_grad(d)) return true;
    return false;
  }

  NodeId AddNode(Tensor v, bool needs, const std::vector<NodeId> &) {
    Node n;
    n.value = std::move(v);
    n.needs_grad = needs;
    if (n.param == nullptr) n.value.CheckFinite("op output");
    nodes_.push_back(std::move(n));
    aux_.emplace_back();
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  void SetBackward(NodeId id, std::function<void()> fn) {
    if (nodes_[static_cast<size_t>(id)].needs_grad)
      nodes_[static_cast<size_t>(id)].backward = std::move(fn);
  }

  static T StableSigmoid(T v) {
    double z = static_cast<double>(v);
    if (z >= 0) return static_cast<T>(1.0 / (1.0 + std::exp(-z)));
    double e = std::exp(z);
    return static_cast<T>(e / (1.0 + e));
  }

  std::vector<Node> nodes_;
  std::vector<Tensor> grad_;
  std::vector<Tensor> aux_;  // per-node saved intermediates for backward
  Rng rng_;
  bool training_;
};

using Tape = TapeT<float>;

}  // namespace uvc::nn

#endif  // UVC_NN_TAPE_H_
