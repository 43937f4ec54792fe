// Copyright 2026 The combdec Authors
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

// Sample file formats.
//
// Text:   one signed decimal integer per line. Blank lines and lines starting
//         with '#' are ignored. The width comes from the caller.
// Binary: a header line `width=<W> count=<K>\n` followed by K samples of
//         ceil(W/8) bytes each, little-endian two's complement, sign-extended
//         from bit W-1.

#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include "combdec/filter_params.hpp"
#include "combdec/fixed.hpp"

namespace combdec {

enum class SampleFormat { text, binary };

inline SampleFormat parse_sample_format(std::string_view s) {
  if (s == "text") return SampleFormat::text;
  if (s == "binary") return SampleFormat::binary;
  throw ConfigError("unknown sample format '" + std::string(s) + "' (expected text|binary)");
}

inline int bytes_per_sample(int width) { return (width + 7) / 8; }

namespace detail {

inline std::int64_t parse_int(std::string_view tok, std::size_t line) {
  std::int64_t v = 0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last)
    throw DataError("line " + std::to_string(line) + ": not a signed integer: '" +
                    std::string(tok) + "'");
  return v;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline FixedSequence read_binary(std::string_view header, std::istream& body) {
  std::map<std::string, std::string> kv;
  try {
    kv = parse_kv(header);
  } catch (const ConfigError& e) {
    throw DataError(std::string("bad binary header: ") + e.what());
  }
  if (kv.size() != 2 || !kv.contains("width") || !kv.contains("count"))
    throw DataError("binary header must be 'width=<W> count=<K>'");
  std::int64_t width = 0, count = 0;
  try {
    width = parse_int(kv["width"], 1);
    count = parse_int(kv["count"], 1);
  } catch (const DataError&) {
    throw DataError("binary header must be 'width=<W> count=<K>'");
  }
  if (width < 1 || width > kMaxWidth) throw DataError("binary header width out of range");
  if (count < 0) throw DataError("binary header count is negative");
  const int w = static_cast<int>(width);
  const int nb = bytes_per_sample(w);
  FixedSequence out;
  out.width = w;
  out.samples.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    unsigned char buf[8] = {};
    body.read(reinterpret_cast<char*>(buf), nb);
    if (body.gcount() != nb)
      throw DataError("binary frame truncated at sample " + std::to_string(i));
    std::uint64_t bits = 0;
    for (int b = nb - 1; b >= 0; --b) bits = (bits << 8) | buf[b];
    if (w < nb * 8 && (bits & ~width_mask(w)) != 0)
      throw DataError("binary sample " + std::to_string(i) + " has bits above width " +
                      std::to_string(w));
    out.samples.push_back(wrap_bits(bits, w));
  }
  if (body.peek() != std::char_traits<char>::eof())
    throw DataError("trailing bytes after binary frame");
  return out;
}

}  // namespace detail

/// Reads either format; text input is tagged with `text_width`.
inline FixedSequence read_samples(std::istream& is, int text_width) {
  std::string first;
  // Look for a binary header on the first line without consuming the body.
  if (is.peek() == 'w') {
    std::getline(is, first);
    return detail::read_binary(first, is);
  }
  check_width(text_width);
  FixedSequence out;
  out.width = text_width;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.samples.push_back(detail::parse_int(t, lineno));
  }
  out.validate();
  return out;
}

inline void write_samples(std::ostream& os, const FixedSequence& s, SampleFormat fmt) {
  if (fmt == SampleFormat::text) {
    for (auto v : s.samples) os << v << '\n';
    return;
  }
  os << "width=" << s.width << " count=" << s.size() << '\n';
  const int nb = bytes_per_sample(s.width);
  const auto mask = width_mask(s.width);
  for (auto v : s.samples) {
    std::uint64_t bits = static_cast<std::uint64_t>(v) & mask;
    for (int b = 0; b < nb; ++b) {
      os.put(static_cast<char>(bits & 0xFFu));
      bits >>= 8;
    }
  }
}

inline std::string samples_to_string(const FixedSequence& s, SampleFormat fmt) {
  std::ostringstream os;
  write_samples(os, s, fmt);
  return os.str();
}

inline FixedSequence samples_from_string(const std::string& text, int text_width) {
  std::istringstream is(text);
  return read_samples(is, text_width);
}

}  // namespace combdec
