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

#include "asgcl/io.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "asgcl/errors.h"
#include "asgcl/log.h"
#include "asgcl/rng.h"

namespace asgcl {

namespace fs = std::filesystem;

void DatasetSpec::validate() const {
  if (files.has_value() == sbm.has_value()) {
    throw ConfigError("dataset: exactly one of file paths or sbm parameters");
  }
  if (files && (files->edges.empty() || files->features.empty())) {
    throw ConfigError("dataset: edge and feature paths are required");
  }
}

Graph generate_sbm(const SbmParams& p) {
  if (p.n < 1 || p.blocks < 1 || p.blocks > p.n) {
    throw ConfigError("sbm: need n >= blocks >= 1");
  }
  if (!(p.p_out >= 0.0 && p.p_in <= 1.0 && (p.p_out < p.p_in ||
                                             (p.p_in == 0.0 && p.p_out == 0.0)))) {
    throw ConfigError("sbm: need 0 <= p_out < p_in <= 1");
  }
  if (!(p.feature_noise >= 0.0)) throw ConfigError("sbm: feature_noise < 0");

  std::vector<int> labels(p.n);
  const int base = p.n / p.blocks;
  const int extra = p.n % p.blocks;
  int node = 0;
  for (int b = 0; b < p.blocks; ++b) {
    const int size = base + (b < extra ? 1 : 0);
    for (int t = 0; t < size; ++t) labels[node++] = b;
  }

  Rng rng(p.seed);
  Matrix adjacency = Matrix::Zero(p.n, p.n);
  for (int i = 0; i < p.n; ++i) {
    for (int j = i + 1; j < p.n; ++j) {
      const double prob = labels[i] == labels[j] ? p.p_in : p.p_out;
      if (rng.bernoulli(prob)) {
        adjacency(i, j) = 1.0;
        adjacency(j, i) = 1.0;
      }
    }
  }
  Matrix features(p.n, p.blocks);
  for (int i = 0; i < p.n; ++i) {
    for (int c = 0; c < p.blocks; ++c) {
      features(i, c) = (labels[i] == c ? 1.0 : 0.0) +
                       rng.uniform(-p.feature_noise, p.feature_noise);
    }
  }
  return Graph(std::move(adjacency), std::move(features), std::move(labels));
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << contents;
  if (!out) throw DataError("write failed for " + path.string());
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view token, T& value) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void malformed(const fs::path& path, int line,
                            const std::string& why) {
  std::ostringstream msg;
  msg << path.string() << ":" << line << ": " << why;
  throw DataError(msg.str());
}

template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    fn(body, number);
  }
}

uint32_t load_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void store_u32(std::string& out, uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

}  // namespace

std::vector<Edge> read_edge_list(const fs::path& path) {
  std::vector<Edge> edges;
  for_each_line(read_text_file(path), [&](std::string_view body, int line) {
    auto tokens = split_ws(body);
    if (tokens.size() != 2) malformed(path, line, "expected two node indices");
    int i, j;
    if (!parse_number(tokens[0], i) || !parse_number(tokens[1], j)) {
      malformed(path, line, "node index is not an integer");
    }
    if (i < 0 || j < 0) malformed(path, line, "negative node index");
    edges.emplace_back(i, j);
  });
  return edges;
}

Matrix read_features_csv(const fs::path& path) {
  std::vector<std::vector<double>> rows;
  for_each_line(read_text_file(path), [&](std::string_view body, int line) {
    std::vector<double> row;
    size_t start = 0;
    while (true) {
      const size_t comma = body.find(',', start);
      std::string_view cell = body.substr(
          start, comma == std::string_view::npos ? body.npos : comma - start);
      double v;
      if (!parse_number(cell, v)) malformed(path, line, "bad real value");
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      malformed(path, line, "row width differs from the first row");
    }
    rows.push_back(std::move(row));
  });
  const size_t d = rows.empty() ? 0 : rows.front().size();
  Matrix x(rows.size(), d);
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < d; ++c) x(r, c) = rows[r][c];
  }
  return x;
}

Matrix read_features_binary(const fs::path& path) {
  const std::string raw = read_text_file(path);
  const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());
  if (raw.size() < 8) throw DataError(path.string() + ": truncated header");
  const uint64_t n = load_u32(bytes);
  const uint64_t d = load_u32(bytes + 4);
  if (raw.size() != 8 + 4 * n * d) {
    std::ostringstream msg;
    msg << path.string() << ": header says " << n << " x " << d
        << " floats but payload has " << (raw.size() - 8) << " bytes";
    throw DataError(msg.str());
  }
  Matrix x(n, d);
  for (uint64_t r = 0; r < n; ++r) {
    for (uint64_t c = 0; c < d; ++c) {
      x(r, c) = std::bit_cast<float>(load_u32(bytes + 8 + 4 * (r * d + c)));
    }
  }
  return x;
}

Matrix read_features(const fs::path& path) {
  return path.extension() == ".bin" ? read_features_binary(path)
                                    : read_features_csv(path);
}

std::vector<int> read_labels(const fs::path& path) {
  std::vector<long> raw;
  for_each_line(read_text_file(path), [&](std::string_view body, int line) {
    long v;
    if (!parse_number(body, v)) malformed(path, line, "label is not an integer");
    raw.push_back(v);
  });
  std::vector<long> ids(raw);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const bool contiguous = ids.empty() || (ids.front() == 0 &&
                                          ids.back() == static_cast<long>(ids.size()) - 1);
  if (!contiguous) {
    log_warning("labels in " + path.string() +
                " are not contiguous from 0; remapping to 0.." +
                std::to_string(ids.size() - 1));
  }
  std::vector<int> out(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    out[i] = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), raw[i]) -
                              ids.begin());
  }
  return out;
}

Graph load_dataset(const DatasetSpec& spec) {
  spec.validate();
  if (spec.sbm) return generate_sbm(*spec.sbm);
  const DatasetFiles& f = *spec.files;
  Matrix features = read_features(f.features);
  const long n = features.rows();
  std::vector<Edge> edges = read_edge_list(f.edges);
  long loops = 0;
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.first >= n || e.second >= n) {
      std::ostringstream msg;
      msg << f.edges << ": edge (" << e.first << ", " << e.second
          << ") references a node beyond the " << n << " feature rows";
      throw DataError(msg.str());
    }
    if (e.first == e.second) {
      ++loops;
      continue;
    }
    kept.push_back(e);
  }
  if (loops > 0) {
    log_warning(std::to_string(loops) + " self-loop lines dropped from " +
                f.edges);
  }
  std::optional<std::vector<int>> labels;
  if (!f.labels.empty()) {
    labels = read_labels(f.labels);
    if (static_cast<long>(labels->size()) != n) {
      std::ostringstream msg;
      msg << f.labels << ": " << labels->size() << " labels for " << n
          << " feature rows";
      throw DataError(msg.str());
    }
  }
  return build_graph(kept, std::move(features), std::move(labels));
}

void write_edge_list(const fs::path& path, const Graph& g) {
  std::string out;
  for (const auto& [i, j] : g.edges()) {
    out += std::to_string(i) + ' ' + std::to_string(j) + '\n';
  }
  write_text_file(path, out);
}

void write_features_csv(const fs::path& path, const Matrix& x) {
  std::string out;
  char buf[40];
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", x(r, c));
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_features_binary(const fs::path& path, const Matrix& x) {
  std::string out;
  out.reserve(8 + 4 * x.size());
  store_u32(out, static_cast<uint32_t>(x.rows()));
  store_u32(out, static_cast<uint32_t>(x.cols()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      store_u32(out, std::bit_cast<uint32_t>(static_cast<float>(x(r, c))));
    }
  }
  write_text_file(path, out);
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::string out;
  for (int l : labels) out += std::to_string(l) + '\n';
  write_text_file(path, out);
}

}  // namespace asgcl
