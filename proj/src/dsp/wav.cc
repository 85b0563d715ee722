// dsp/wav.cc

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

#include "dsp/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "base/common.h"

namespace uvc {

namespace {

void PutU32(std::string *out, uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string *out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

uint32_t GetU32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t GetU16(const unsigned char *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void WriteWav(const std::string &path, const Waveform &wav) {
  UVC_CHECK_INPUT(wav.sample_rate == kSampleRate);
  uint32_t n = static_cast<uint32_t>(wav.samples.size());
  uint32_t data_bytes = n * 2;
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, static_cast<uint32_t>(wav.sample_rate));
  PutU32(&out, static_cast<uint32_t>(wav.sample_rate * 2));  // byte rate
  PutU16(&out, 2);   // block align
  PutU16(&out, 16);  // bits per sample
  out += "data";
  PutU32(&out, data_bytes);
  for (float s : wav.samples) {
    float clamped = std::clamp(s, -1.0f, 1.0f);
    int32_t q = static_cast<int32_t>(std::lrintf(clamped * 32767.0f));
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) UVC_ERR << "cannot open wav for writing: " << path;
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) UVC_ERR << "wav write failed: " << path;
}

Waveform ReadWav(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) UVC_INVALID << "cannot open wav: " << path;
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  const unsigned char *p = reinterpret_cast<const unsigned char *>(buf.data());
  if (buf.size() < 44 || std::memcmp(p, "RIFF", 4) != 0 ||
      std::memcmp(p + 8, "WAVE", 4) != 0)
    UVC_INVALID << path << ": not a RIFF/WAVE file";

  // Walk chunks; accept only 16-bit PCM mono at the fixed rate.
  size_t pos = 12;
  int channels = 0, bits = 0;
  uint32_t rate = 0;
  Waveform wav;
  bool have_fmt = false, have_data = false;
  while (pos + 8 <= buf.size()) {
    uint32_t chunk_size = GetU32(p + pos + 4);
    const char *tag = buf.data() + pos;
    size_t body = pos + 8;
    if (std::memcmp(tag, "fmt ", 4) == 0 && chunk_size >= 16 &&
        body + 16 <= buf.size()) {
      uint16_t format = GetU16(p + body);
      channels = GetU16(p + body + 2);
      rate = GetU32(p + body + 4);
      bits = GetU16(p + body + 14);
      if (format != 1) UVC_INVALID << path << ": only PCM wav supported";
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) UVC_INVALID << path << ": data chunk before fmt";
      if (channels != 1 || bits != 16)
        UVC_INVALID << path << ": expected 16-bit mono PCM";
      if (rate != static_cast<uint32_t>(kSampleRate))
        UVC_INVALID << path << ": sample rate " << rate << ", expected "
                    << kSampleRate;
      size_t count = std::min<size_t>(chunk_size, buf.size() - body) / 2;
      wav.samples.resize(count);
      for (size_t i = 0; i < count; ++i) {
        int16_t q = static_cast<int16_t>(GetU16(p + body + 2 * i));
        wav.samples[i] = static_cast<float>(q) / 32767.0f;
      }
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  if (!have_data) UVC_INVALID << path << ": missing data chunk";
  return wav;
}

}  // namespace uvc
