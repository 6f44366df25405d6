// Copyright 2026 The ldpest Authors
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

#ifndef LDP_IO_H_
#define LDP_IO_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ldp/core.h"
#include "ldp/mechanisms.h"

namespace ldp {

// Minimal streaming JSON writer with deterministic output: insertion-ordered
// keys and every double printed with 17 significant digits, so equal inputs
// produce byte-identical documents and values round-trip exactly.
class JsonWriter {
 public:
  JsonWriter& BeginObject();
  JsonWriter& EndObject();
  JsonWriter& BeginArray();
  JsonWriter& EndArray();
  JsonWriter& Key(const std::string& key);
  JsonWriter& Value(double value);
  JsonWriter& Value(uint64_t value);
  JsonWriter& Value(uint32_t value);
  JsonWriter& Value(int value);
  JsonWriter& Value(const std::string& value);
  JsonWriter& Value(const char* value);
  JsonWriter& Value(bool value);
  JsonWriter& Null();

  const std::string& str() const { return out_; }

  static std::string FormatDouble(double value);  // %.17g

 private:
  void Separate();

  std::string out_;
  std::vector<bool> has_items_;  // per open container
};

// Channel CSV: a header row of output labels, then one row of probabilities
// (17 significant digits) per input category.
void WriteChannelCsv(const ChannelMatrix& channel, std::ostream& out);

// Splits CSV text (one comma-separated row, or one value per line) into
// numbers. Blank fields and trailing newlines are ignored.
std::vector<double> ParseNumberList(const std::string& text);

// Resolves a --dist argument: "uniform", inline CSV (contains a comma), or
// a path to a file in the distribution format. The result is validated and
// must have exactly k categories.
ProbabilityVector LoadDistribution(const std::string& arg, uint32_t k);

}  // namespace ldp

#endif  // LDP_IO_H_
