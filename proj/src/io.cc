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

#include "ldp/io.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ldp {

JsonWriter& JsonWriter::BeginObject() {
  Separate();
  out_ += '{';
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::EndObject() {
  out_ += '}';
  has_items_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::BeginArray() {
  Separate();
  out_ += '[';
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::EndArray() {
  out_ += ']';
  has_items_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::Key(const std::string& key) {
  Separate();
  out_ += '"';
  out_ += key;
  out_ += "\":";
  // A key counts as the start of the member; the value must not add a comma.
  has_items_.back() = false;
  return *this;
}

void JsonWriter::Separate() {
  if (!has_items_.empty()) {
    if (has_items_.back()) out_ += ',';
    has_items_.back() = true;
  }
}

std::string JsonWriter::FormatDouble(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

JsonWriter& JsonWriter::Value(double value) {
  Separate();
  if (value != value) {
    out_ += "null";  // JSON has no NaN
  } else {
    out_ += FormatDouble(value);
  }
  return *this;
}

JsonWriter& JsonWriter::Value(uint64_t value) {
  Separate();
  out_ += std::to_string(value);
  return *this;
}

JsonWriter& JsonWriter::Value(uint32_t value) {
  return Value(static_cast<uint64_t>(value));
}

JsonWriter& JsonWriter::Value(int value) {
  Separate();
  out_ += std::to_string(value);
  return *this;
}

JsonWriter& JsonWriter::Value(const std::string& value) {
  Separate();
  out_ += '"';
  for (char c : value) {
    if (c == '"' || c == '\\') out_ += '\\';
    out_ += c;
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::Value(const char* value) {
  return Value(std::string(value));
}

JsonWriter& JsonWriter::Value(bool value) {
  Separate();
  out_ += value ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::Null() {
  Separate();
  out_ += "null";
  return *this;
}

void WriteChannelCsv(const ChannelMatrix& channel, std::ostream& out) {
  for (uint32_t y = 0; y < channel.num_outputs(); ++y) {
    if (y > 0) out << ',';
    out << channel.output_labels[y];
  }
  out << '\n';
  for (uint32_t x = 0; x < channel.k; ++x) {
    for (uint32_t y = 0; y < channel.num_outputs(); ++y) {
      if (y > 0) out << ',';
      out << JsonWriter::FormatDouble(channel.probs[x][y]);
    }
    out << '\n';
  }
}

std::vector<double> ParseNumberList(const std::string& text) {
  std::vector<double> values;
  std::string token;
  const auto flush = [&] {
    // Trim surrounding whitespace.
    size_t begin = token.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
      token.clear();
      return;
    }
    size_t end = token.find_last_not_of(" \t\r");
    const std::string trimmed = token.substr(begin, end - begin + 1);
    token.clear();
    char* parse_end = nullptr;
    const double value = std::strtod(trimmed.c_str(), &parse_end);
    if (parse_end == trimmed.c_str() || *parse_end != '\0') {
      Fail(ErrorCode::kInvalidArgument, "not a number: '" + trimmed + "'");
    }
    values.push_back(value);
  };
  for (char c : text) {
    if (c == ',' || c == '\n') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return values;
}

ProbabilityVector LoadDistribution(const std::string& arg, uint32_t k) {
  std::vector<double> entries;
  if (arg == "uniform") {
    return ProbabilityVector::Uniform(k);
  }
  if (arg.find(',') != std::string::npos) {
    entries = ParseNumberList(arg);
  } else {
    std::ifstream in(arg);
    if (!in) {
      Fail(ErrorCode::kInvalidArgument,
           "cannot open distribution file '" + arg + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    entries = ParseNumberList(buffer.str());
  }
  if (entries.size() != k) {
    Fail(ErrorCode::kDimensionMismatch,
         "distribution has " + std::to_string(entries.size()) +
             " entries, expected k=" + std::to_string(k));
  }
  return ProbabilityVector::Validate(std::move(entries));
}

}  // namespace ldp
