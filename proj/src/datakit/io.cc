// Copyright 2026 The EEG Shield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eegshield/datakit/io.h"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "eegshield/common/error.h"

namespace eegshield::datakit {

namespace {

constexpr std::string_view kDatasetMagic = "EEGUNLRN";
constexpr std::string_view kDeltaMagic = "EEGDELTA";

class Writer {
 public:
  void Magic(std::string_view magic) {
    bytes_.insert(bytes_.end(), magic.begin(), magic.end());
  }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(double v) { U32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void Crc() { U32(Crc32(bytes_)); }
  std::vector<std::uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t U32() {
    Require(pos_ + 4 <= bytes_.size(), ErrorCode::kCorruption, "file is truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double F32() { return static_cast<double>(std::bit_cast<float>(U32())); }
  void Seek(std::size_t pos) { pos_ = pos; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void CheckMagic(std::span<const std::uint8_t> bytes, std::string_view magic) {
  Require(bytes.size() >= magic.size() + 4, ErrorCode::kFormat,
          "file too short for a " + std::string(magic) + " header");
  Require(std::memcmp(bytes.data(), magic.data(), magic.size()) == 0,
          ErrorCode::kFormat, "bad magic, expected " + std::string(magic));
}

// Size and checksum checks shared by both containers; `payload` is the byte
// count the header promises before the trailing CRC.
void CheckBody(std::span<const std::uint8_t> bytes, std::uint64_t payload) {
  Require(bytes.size() >= payload + 4, ErrorCode::kCorruption,
          "file is truncated: " + std::to_string(bytes.size()) + " bytes, header implies " +
              std::to_string(payload + 4));
  Require(bytes.size() == payload + 4, ErrorCode::kCorruption,
          "trailing bytes after checksum");
  Reader crc_reader(bytes);
  crc_reader.Seek(payload);
  const std::uint32_t stored = crc_reader.U32();
  Require(stored == Crc32(bytes.first(payload)), ErrorCode::kCorruption,
          "CRC-32 mismatch");
}

}  // namespace

std::uint32_t Crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(chunk));
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> EncodeDataset(const Dataset& d) {
  d.Validate();
  Writer w;
  w.Magic(kDatasetMagic);
  w.U32(kFormatVersion);
  w.U32(static_cast<std::uint32_t>(d.size()));
  for (int v : {d.channels, d.samples, d.num_classes, d.num_users, d.num_sessions}) {
    w.U32(static_cast<std::uint32_t>(v));
  }
  for (int v : d.task_labels) w.U32(static_cast<std::uint32_t>(v));
  for (int v : d.user_labels) w.U32(static_cast<std::uint32_t>(v));
  for (int v : d.session_labels) w.U32(static_cast<std::uint32_t>(v));
  for (double v : d.data) w.F32(v);
  w.Crc();
  return w.Take();
}

Dataset DecodeDataset(std::span<const std::uint8_t> bytes) {
  CheckMagic(bytes, kDatasetMagic);
  Reader r(bytes);
  r.Seek(kDatasetMagic.size());
  const std::uint32_t version = r.U32();
  Require(version == kFormatVersion, ErrorCode::kFormat,
          "unsupported dataset version " + std::to_string(version));
  Require(bytes.size() >= kDatasetMagic.size() + 4 * 7, ErrorCode::kCorruption,
          "file is truncated inside the header");
  const std::uint64_t n = r.U32();
  Dataset d;
  d.channels = static_cast<int>(r.U32());
  d.samples = static_cast<int>(r.U32());
  d.num_classes = static_cast<int>(r.U32());
  d.num_users = static_cast<int>(r.U32());
  d.num_sessions = static_cast<int>(r.U32());
  const std::uint64_t values = n * static_cast<std::uint64_t>(static_cast<std::uint32_t>(d.channels)) *
                               static_cast<std::uint32_t>(d.samples);
  const std::uint64_t payload = kDatasetMagic.size() + 4 * 7 + 4 * 3 * n + 4 * values;
  CheckBody(bytes, payload);

  d.task_labels.resize(n);
  d.user_labels.resize(n);
  d.session_labels.resize(n);
  for (auto* labels : {&d.task_labels, &d.user_labels, &d.session_labels}) {
    for (auto& v : *labels) {
      const std::uint32_t raw = r.U32();
      v = raw > 0x7fffffffu ? -1 : static_cast<int>(raw);
    }
  }
  d.data.resize(values);
  for (auto& v : d.data) v = r.F32();
  d.Validate();
  return d;
}

std::vector<std::uint8_t> EncodePerturbation(const PerturbationSet& p) {
  p.Validate();
  Writer w;
  w.Magic(kDeltaMagic);
  w.U32(kFormatVersion);
  w.U32(static_cast<std::uint32_t>(p.mode));
  w.U32(static_cast<std::uint32_t>(p.count()));
  w.U32(static_cast<std::uint32_t>(p.channels));
  w.U32(static_cast<std::uint32_t>(p.samples));
  w.F32(p.mode == PerturbationMode::kUserWise ? 0.0 : p.epsilon);
  for (double v : p.deltas) w.F32(v);
  w.Crc();
  return w.Take();
}

PerturbationSet DecodePerturbation(std::span<const std::uint8_t> bytes) {
  CheckMagic(bytes, kDeltaMagic);
  Reader r(bytes);
  r.Seek(kDeltaMagic.size());
  const std::uint32_t version = r.U32();
  Require(version == kFormatVersion, ErrorCode::kFormat,
          "unsupported perturbation version " + std::to_string(version));
  Require(bytes.size() >= kDeltaMagic.size() + 4 * 6, ErrorCode::kCorruption,
          "file is truncated inside the header");
  const std::uint32_t mode = r.U32();
  Require(mode <= 1, ErrorCode::kFormat, "unknown perturbation mode " + std::to_string(mode));
  PerturbationSet p;
  p.mode = static_cast<PerturbationMode>(mode);
  const std::uint64_t count = r.U32();
  p.channels = static_cast<int>(r.U32());
  p.samples = static_cast<int>(r.U32());
  p.epsilon = r.F32();
  const std::uint64_t values = count * static_cast<std::uint32_t>(p.channels) *
                               static_cast<std::uint32_t>(p.samples);
  CheckBody(bytes, kDeltaMagic.size() + 4 * 6 + 4 * values);
  p.deltas.resize(values);
  for (auto& v : p.deltas) v = r.F32();
  p.Validate();
  return p;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  Require(!in.bad(), ErrorCode::kIo, "read failed for " + path.string());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(static_cast<bool>(out), ErrorCode::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  Require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
}

void WriteDataset(const Dataset& d, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeDataset(d));
}

Dataset ReadDataset(const std::filesystem::path& path) {
  return DecodeDataset(ReadFileBytes(path));
}

void WritePerturbation(const PerturbationSet& p, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodePerturbation(p));
}

PerturbationSet ReadPerturbation(const std::filesystem::path& path) {
  return DecodePerturbation(ReadFileBytes(path));
}

}  // namespace eegshield::datakit
