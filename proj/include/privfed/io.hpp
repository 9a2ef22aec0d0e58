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

#ifndef PRIVFED_IO_HPP_
#define PRIVFED_IO_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace privfed::io {

// Doubles serialized with 17 significant digits (round-trip exact);
// infinities as "inf"/"-inf".
std::string format_double(double v);

uint64_t fnv1a64(std::string_view bytes);
std::string hex64(uint64_t v);

// Flat declarative key/value document: one `key = value` per line,
// '#' comments, values may be scalars or comma-separated lists.
class FlatConfig {
 public:
  static FlatConfig parse_file(const std::string& path);
  static FlatConfig parse_text(std::string_view text);

  bool has(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int64_t get_int(const std::string& key) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  std::string get_string(const std::string& key) const;
  // Comma-separated doubles; "inf" allowed.
  std::vector<double> get_double_list(const std::string& key) const;

  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::map<std::string, std::string> values_;
};

struct Manifest {
  std::string command;
  std::string config_path;
  uint64_t master_seed = 0;
  uint64_t config_hash = 0;  // content hash of config text + seed
  std::string out_dir;
  std::string started_at;
  std::string finished_at;

  std::string to_json() const;
  void write(const std::string& path) const;
};

uint64_t manifest_hash(std::string_view config_text, uint64_t master_seed);

// CSV with a schema/manifest comment line then a header row; all rows
// written through format_double for numeric cells.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema,
            uint64_t manifest_hash, const std::vector<std::string>& header);
  ~CsvWriter();

  void write_row(const std::vector<std::string>& cells);

 private:
  void* file_;
};

std::string read_file(const std::string& path);

}  // namespace privfed::io

#endif  // PRIVFED_IO_HPP_
