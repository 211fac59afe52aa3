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

#include "eegshield/nets/checkpoint.h"

#include <bit>
#include <cstring>
#include <string>
#include <string_view>

#include "eegshield/common/error.h"
#include "eegshield/datakit/io.h"

namespace eegshield::nets {

namespace {

constexpr std::string_view kMagic = "EEGMODL1";

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::uint32_t U32() {
    Require(pos_ + 4 <= bytes_.size(), ErrorCode::kCorruption, "checkpoint is truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::string Bytes(std::size_t n) {
    Require(pos_ + n <= bytes_.size(), ErrorCode::kCorruption, "checkpoint is truncated");
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> EncodeCheckpoint(const SurrogateModels& m) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  nlohmann::ordered_json config = {{"extractor", m.extractor.ToJson()},
                                   {"channels", m.channels},
                                   {"samples", m.samples},
                                   {"num_classes", m.num_classes},
                                   {"num_users", m.num_users},
                                   {"hidden", m.hidden}};
  const std::string blob = config.dump();
  PutU32(out, static_cast<std::uint32_t>(blob.size()));
  out.insert(out.end(), blob.begin(), blob.end());
  for (const Tensor* t : m.Parameters()) {
    PutU32(out, static_cast<std::uint32_t>(t->rank()));
    for (std::size_t d : t->shape()) PutU32(out, static_cast<std::uint32_t>(d));
    for (double v : t->data()) PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

SurrogateModels DecodeCheckpoint(std::span<const std::uint8_t> bytes) {
  Require(bytes.size() >= kMagic.size() &&
              std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) == 0,
          ErrorCode::kFormat, "bad checkpoint magic");
  Cursor c(bytes.subspan(kMagic.size()));
  const std::uint32_t len = c.U32();
  nlohmann::ordered_json config;
  try {
    config = nlohmann::ordered_json::parse(c.Bytes(len));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("bad checkpoint config: ") + e.what());
  }
  SurrogateModels m;
  try {
    m = SurrogateModels::Create(ExtractorConfig::FromJson(config.at("extractor")),
                                config.at("channels").get<int>(),
                                config.at("samples").get<int>(),
                                config.at("num_classes").get<int>(),
                                config.at("num_users").get<int>(),
                                config.at("hidden").get<int>(), 0);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("bad checkpoint config: ") + e.what());
  }
  for (Tensor* t : m.Parameters()) {
    const std::uint32_t rank = c.U32();
    numerics::Shape shape(rank);
    for (auto& d : shape) d = c.U32();
    Require(shape == t->shape(), ErrorCode::kFormat,
            "checkpoint tensor shape " + numerics::ShapeString(shape) +
                " does not match config " + numerics::ShapeString(t->shape()));
    for (double& v : t->data()) v = static_cast<double>(std::bit_cast<float>(c.U32()));
  }
  Require(c.done(), ErrorCode::kCorruption, "trailing bytes in checkpoint");
  return m;
}

void WriteCheckpoint(const SurrogateModels& models, const std::filesystem::path& path) {
  datakit::WriteFileBytes(path, EncodeCheckpoint(models));
}

SurrogateModels ReadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(datakit::ReadFileBytes(path));
}

}  // namespace eegshield::nets
