// Copyright 2026 The HideSim Authors
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
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hidesim/errors.h"
#include "hidesim/model.h"

namespace hidesim {
namespace {

class Writer {
 public:
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  void Need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw ParseError("checkpoint: truncated file");
  }
  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t U64() {
    Need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Raw(std::size_t n) {
    Need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> SerializeCheckpoint(
    const Params& params, const std::map<std::string, std::vector<double>>& extra) {
  Writer w;
  w.Raw("THMC");
  w.U32(kCheckpointVersion);
  const ModelDims& dims = params.dims();
  w.U32(static_cast<std::uint32_t>(dims.vocab_size));
  w.U32(static_cast<std::uint32_t>(dims.embed_dim));
  w.U32(static_cast<std::uint32_t>(dims.rep_dim));
  w.U32(static_cast<std::uint32_t>(dims.hidden.size()));
  for (int h : dims.hidden) w.U32(static_cast<std::uint32_t>(h));
  w.U32(static_cast<std::uint32_t>(dims.num_classes));
  w.U64(params.values().size());
  for (double v : params.values()) w.F64(v);
  w.U32(static_cast<std::uint32_t>(extra.size()));
  for (const auto& [name, block] : extra) {
    w.U32(static_cast<std::uint32_t>(name.size()));
    w.Raw(name);
    w.U64(block.size());
    for (double v : block) w.F64(v);
  }
  return w.Take();
}

Checkpoint DeserializeCheckpoint(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.Raw(4) != "THMC") throw ParseError("checkpoint: bad magic (expected THMC)");
  const std::uint32_t version = r.U32();
  if (version != kCheckpointVersion) {
    throw ParseError("checkpoint: unsupported format version " + std::to_string(version));
  }
  ModelDims dims;
  dims.vocab_size = static_cast<int>(r.U32());
  dims.embed_dim = static_cast<int>(r.U32());
  dims.rep_dim = static_cast<int>(r.U32());
  const std::uint32_t num_hidden = r.U32();
  if (num_hidden > 64) throw ParseError("checkpoint: implausible hidden layer count");
  dims.hidden.clear();
  for (std::uint32_t i = 0; i < num_hidden; ++i) dims.hidden.push_back(static_cast<int>(r.U32()));
  dims.num_classes = static_cast<int>(r.U32());
  Checkpoint ckpt{Params(dims), {}};
  const std::uint64_t count = r.U64();
  if (count != ckpt.params.values().size()) {
    throw ParseError("checkpoint: parameter count does not match dimensions");
  }
  for (double& v : ckpt.params.values()) v = r.F64();
  const std::uint32_t num_extra = r.U32();
  for (std::uint32_t i = 0; i < num_extra; ++i) {
    const std::string name = r.Raw(r.U32());
    const std::uint64_t n = r.U64();
    r.Need(n * 8);
    std::vector<double> block(n);
    for (double& v : block) v = r.F64();
    ckpt.extra.emplace(name, std::move(block));
  }
  if (!r.AtEnd()) throw ParseError("checkpoint: trailing bytes");
  return ckpt;
}

void WriteCheckpoint(const std::filesystem::path& path, const Params& params,
                     const std::map<std::string, std::vector<double>>& extra) {
  const auto bytes = SerializeCheckpoint(params, extra);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("write failed: " + path.string());
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DeserializeCheckpoint(bytes);
}

}  // namespace hidesim
