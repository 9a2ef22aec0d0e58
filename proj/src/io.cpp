// Copyright 2026 The PrivFed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privfed/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace privfed::io {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

FlatConfig FlatConfig::parse_file(const std::string& path) {
  return parse_text(read_file(path));
}

FlatConfig FlatConfig::parse_text(std::string_view text) {
  FlatConfig config;
  config.text_ = std::string(text);
  std::istringstream in(config.text_);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key");
    }
    config.values_[key] = value;
  }
  return config;
}

bool FlatConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string FlatConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw std::runtime_error("config: missing key '" + key + "'");
  }
  return it->second;
}

namespace {

double parse_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "inf" || v == "+inf" || v == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' is not a number: " + v);
  }
  if (pos != v.size()) {
    throw std::runtime_error("config: key '" + key +
                             "' has trailing characters: " + v);
  }
  return out;
}

}  // namespace

double FlatConfig::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int64_t FlatConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int64_t out = static_cast<int64_t>(v);
  if (static_cast<double>(out) != v) {
    throw std::runtime_error("config: key '" + key + "' is not an integer");
  }
  return out;
}

int64_t FlatConfig::get_int(const std::string& key, int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> FlatConfig::get_double_list(const std::string& key) const {
  const std::string raw = get_string(key);
  std::vector<double> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    const std::string v = trim(item);
    if (v.empty()) continue;
    out.push_back(parse_double(key, v));
  }
  if (out.empty()) {
    throw std::runtime_error("config: key '" + key + "' is an empty list");
  }
  return out;
}

uint64_t manifest_hash(std::string_view config_text, uint64_t master_seed) {
  std::string keyed(config_text);
  keyed += "\nseed=" + std::to_string(master_seed);
  return fnv1a64(keyed);
}

std::string Manifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_path"] = config_path;
  j["master_seed"] = master_seed;
  j["config_hash"] = hex64(config_hash);
  j["out_dir"] = out_dir;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["schema"] = "privfed.manifest.v1";
  return j.dump(2) + "\n";
}

void Manifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << to_json();
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema,
                     uint64_t hash, const std::vector<std::string>& header) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (f == nullptr) throw std::runtime_error("cannot write csv: " + path);
  file_ = f;
  std::fprintf(f, "# schema=%s manifest=%s\n", schema.c_str(),
               hex64(hash).c_str());
  for (size_t i = 0; i < header.size(); ++i) {
    std::fprintf(f, "%s%s", i == 0 ? "" : ",", header[i].c_str());
  }
  std::fprintf(f, "\n");
}

CsvWriter::~CsvWriter() {
  if (file_ != nullptr) std::fclose(static_cast<std::FILE*>(file_));
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  std::FILE* f = static_cast<std::FILE*>(file_);
  for (size_t i = 0; i < cells.size(); ++i) {
    std::fprintf(f, "%s%s", i == 0 ? "" : ",", cells[i].c_str());
  }
  std::fprintf(f, "\n");
}

}  // namespace privfed::io
