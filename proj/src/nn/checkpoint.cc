// nn/checkpoint.cc

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

#include "nn/checkpoint.h"

#include <cstring>
#include <fstream>

#include "base/common.h"

namespace uvc::nn {

namespace {

constexpr char kMagic[4] = {'U', 'V', 'C', 'K'};

void PutU16(std::string *out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

void PutU32(std::string *out, uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutF32(std::string *out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, 4);
  PutU32(out, bits);
}

class Reader {
 public:
  Reader(const std::string &buf, const std::string &path)
      : buf_(buf), path_(path) {}

  const char *Take(size_t n) {
    if (pos_ + n > buf_.size())
      UVC_INVALID << path_ << ": truncated checkpoint";
    const char *p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  uint16_t U16() {
    const unsigned char *p = reinterpret_cast<const unsigned char *>(Take(2));
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
  }
  uint32_t U32() {
    const unsigned char *p = reinterpret_cast<const unsigned char *>(Take(4));
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) |
           (static_cast<uint32_t>(p[3]) << 24);
  }
  float F32() {
    uint32_t bits = U32();
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }
  bool AtEnd() const { return pos_ == buf_.size(); }

 private:
  const std::string &buf_;
  std::string path_;
  size_t pos_ = 0;
};

}  // namespace

const NamedTensor &CheckpointData::Find(const std::string &name) const {
  for (const auto &p : params)
    if (p.name == name) return p;
  UVC_INVALID << "checkpoint has no parameter block named '" << name << "'";
}

void SaveCheckpoint(const std::string &path, const CheckpointData &ckpt) {
  nlohmann::json header = ckpt.header;
  header["model_kind"] = ckpt.model_kind;
  std::string header_str = header.dump();

  std::string out;
  out.append(kMagic, 4);
  PutU16(&out, kCheckpointVersion);
  PutU32(&out, static_cast<uint32_t>(header_str.size()));
  out += header_str;
  PutU32(&out, static_cast<uint32_t>(ckpt.params.size()));
  for (const NamedTensor &p : ckpt.params) {
    PutU32(&out, static_cast<uint32_t>(p.name.size()));
    out += p.name;
    PutU32(&out, static_cast<uint32_t>(p.shape.size()));
    int64_t numel = 1;
    for (int d : p.shape) {
      UVC_CHECK(d >= 0);
      PutU32(&out, static_cast<uint32_t>(d));
      numel *= d;
    }
    UVC_CHECK(numel == static_cast<int64_t>(p.data.size()));
    for (float f : p.data) PutF32(&out, f);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) UVC_ERR << "cannot open checkpoint for writing: " << path;
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) UVC_ERR << "checkpoint write failed: " << path;
}

CheckpointData LoadCheckpoint(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) UVC_INVALID << "cannot open checkpoint: " << path;
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  Reader r(buf, path);

  const char *magic = r.Take(4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    UVC_INVALID << path << ": not a UVCK checkpoint";
  uint16_t version = r.U16();
  if (version != kCheckpointVersion)
    UVC_INVALID << path << ": unsupported checkpoint version " << version
                << " (expected " << kCheckpointVersion << ")";

  CheckpointData ckpt;
  uint32_t header_len = r.U32();
  std::string header_str(r.Take(header_len), header_len);
  ckpt.header = nlohmann::json::parse(header_str, nullptr, false);
  if (ckpt.header.is_discarded())
    UVC_INVALID << path << ": corrupt checkpoint header";
  if (!ckpt.header.contains("model_kind"))
    UVC_INVALID << path << ": checkpoint header missing model_kind";
  ckpt.model_kind = ckpt.header["model_kind"].get<std::string>();

  uint32_t n_blocks = r.U32();
  ckpt.params.reserve(n_blocks);
  for (uint32_t b = 0; b < n_blocks; ++b) {
    NamedTensor p;
    uint32_t name_len = r.U32();
    p.name.assign(r.Take(name_len), name_len);
    uint32_t ndim = r.U32();
    int64_t numel = 1;
    for (uint32_t d = 0; d < ndim; ++d) {
      uint32_t dim = r.U32();
      p.shape.push_back(static_cast<int>(dim));
      numel *= dim;
    }
    p.data.resize(static_cast<size_t>(numel));
    for (int64_t i = 0; i < numel; ++i) p.data[static_cast<size_t>(i)] = r.F32();
    ckpt.params.push_back(std::move(p));
  }
  if (!r.AtEnd()) UVC_INVALID << path << ": trailing bytes in checkpoint";
  return ckpt;
}

std::vector<NamedTensor> SnapshotParams(const ParamList<float> &params) {
  std::vector<NamedTensor> out;
  out.reserve(params.size());
  for (const auto *p : params)
    out.push_back({p->name, p->value.shape, p->value.data});
  return out;
}

void RestoreParams(const std::vector<NamedTensor> &blocks,
                   const ParamList<float> &params) {
  UVC_CHECK_INPUT(blocks.size() == params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    const NamedTensor &b = blocks[i];
    ParamT<float> *p = params[i];
    if (b.name != p->name)
      UVC_INVALID << "checkpoint parameter order mismatch: got '" << b.name
                  << "', expected '" << p->name << "'";
    if (b.shape != p->value.shape)
      UVC_INVALID << "shape mismatch for parameter '" << b.name << "'";
    p->value.data = b.data;
    p->ZeroGrad();
  }
}

}  // namespace uvc::nn
