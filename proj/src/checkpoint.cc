// Copyright 2026 The asgcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asgcl/checkpoint.h"

#include <bit>
#include <cstring>

#include "asgcl/errors.h"
#include "asgcl/io.h"

namespace asgcl {

namespace {

class Writer {
 public:
  void bytes(const void* p, size_t n) {
    out_.append(static_cast<const char*>(p), n);
  }
  void u32(uint32_t v) { little(v); }
  void u64(uint64_t v) { little(v); }
  void f64(double v) { little(std::bit_cast<uint64_t>(v)); }
  void matrix(const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
    }
  }
  std::string take() { return std::move(out_); }

 private:
  template <typename T>
  void little(T v) {
    for (size_t b = 0; b < sizeof(T); ++b) {
      out_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    }
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}
  void expect(size_t n) const {
    if (pos_ + n > in_.size()) throw DataError("checkpoint is truncated");
  }
  std::string bytes(size_t n) {
    expect(n);
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  uint32_t u32() { return little<uint32_t>(); }
  uint64_t u64() { return little<uint64_t>(); }
  double f64() { return std::bit_cast<double>(little<uint64_t>()); }
  Matrix matrix(uint32_t rows, uint32_t cols) {
    expect(static_cast<size_t>(rows) * cols * 8);
    Matrix m(rows, cols);
    for (uint32_t r = 0; r < rows; ++r) {
      for (uint32_t c = 0; c < cols; ++c) m(r, c) = f64();
    }
    return m;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  template <typename T>
  T little() {
    expect(sizeof(T));
    T v = 0;
    for (size_t b = 0; b < sizeof(T); ++b) {
      v |= static_cast<T>(static_cast<unsigned char>(in_[pos_ + b])) << (8 * b);
    }
    pos_ += sizeof(T);
    return v;
  }
  const std::string& in_;
  size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const Checkpoint& ckpt) {
  const EncoderWeights& w = ckpt.weights;
  if (ckpt.adam.first.size() != w.layers.size() ||
      ckpt.adam.second.size() != w.layers.size()) {
    throw std::invalid_argument("checkpoint: optimizer state does not match weights");
  }
  Writer out;
  out.bytes(kCheckpointMagic, 6);
  out.u32(kCheckpointVersion);
  out.u64(ckpt.seed);
  out.u32(static_cast<uint32_t>(ckpt.config_json.size()));
  out.bytes(ckpt.config_json.data(), ckpt.config_json.size());
  out.u32(static_cast<uint32_t>(w.layers.size()));
  out.u32(static_cast<uint32_t>(w.extra_diffusions));
  for (const Matrix& m : w.layers) {
    out.u32(static_cast<uint32_t>(m.rows()));
    out.u32(static_cast<uint32_t>(m.cols()));
    out.matrix(m);
  }
  out.u64(static_cast<uint64_t>(ckpt.adam.step));
  for (size_t l = 0; l < w.layers.size(); ++l) {
    out.matrix(ckpt.adam.first[l]);
    out.matrix(ckpt.adam.second[l]);
  }
  return out.take();
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (bytes.size() < 6 || std::memcmp(bytes.data(), kCheckpointMagic, 6) != 0) {
    throw DataError("not a checkpoint (bad magic header)");
  }
  in.bytes(6);
  const uint32_t version = in.u32();
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  ckpt.seed = in.u64();
  ckpt.config_json = in.bytes(in.u32());
  const uint32_t layers = in.u32();
  ckpt.weights.extra_diffusions = static_cast<int32_t>(in.u32());
  for (uint32_t l = 0; l < layers; ++l) {
    const uint32_t rows = in.u32();
    const uint32_t cols = in.u32();
    ckpt.weights.layers.push_back(in.matrix(rows, cols));
  }
  ckpt.adam.step = static_cast<long>(in.u64());
  for (const Matrix& w : ckpt.weights.layers) {
    ckpt.adam.first.push_back(in.matrix(w.rows(), w.cols()));
    ckpt.adam.second.push_back(in.matrix(w.rows(), w.cols()));
  }
  if (!in.done()) throw DataError("checkpoint has trailing bytes");
  try {
    ckpt.weights.validate();
  } catch (const ConfigError& e) {
    throw DataError(std::string("checkpoint weights invalid: ") + e.what());
  }
  return ckpt;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  write_text_file(path, encode_checkpoint(ckpt));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_text_file(path));
}

}  // namespace asgcl
