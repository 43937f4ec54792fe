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

// Two's-complement helpers and the sample container shared by every filter.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace combdec {

using BigInt = boost::multiprecision::cpp_int;

// Widest register any streaming filter may declare.
inline constexpr int kMaxWidth = 64;

/// Invalid filter configuration or design request.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sample data that cannot be parsed or does not match its declared format.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sample width disagrees with the width the configuration expects.
class WidthMismatch : public DataError {
 public:
  using DataError::DataError;
};

/// An internal consistency check failed.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void check_width(int width) {
  if (width < 1 || width > kMaxWidth)
    throw ConfigError("register width " + std::to_string(width) +
                      " outside [1, " + std::to_string(kMaxWidth) + "]");
}

inline constexpr std::int64_t min_value(int width) {
  return width == 64 ? INT64_MIN : -(std::int64_t{1} << (width - 1));
}

inline constexpr std::int64_t max_value(int width) {
  return width == 64 ? INT64_MAX : (std::int64_t{1} << (width - 1)) - 1;
}

inline constexpr bool fits(std::int64_t v, int width) {
  return v >= min_value(width) && v <= max_value(width);
}

inline constexpr std::uint64_t width_mask(int width) {
  return width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

/// Reduces a bit pattern modulo 2^width and sign-extends it.
inline constexpr std::int64_t wrap_bits(std::uint64_t bits, int width) {
  bits &= width_mask(width);
  if (width < 64 && (bits >> (width - 1)) & 1u) bits |= ~width_mask(width);
  return static_cast<std::int64_t>(bits);
}

inline constexpr std::int64_t wrap(std::int64_t v, int width) {
  return wrap_bits(static_cast<std::uint64_t>(v), width);
}

// Unsigned arithmetic keeps the intermediate mod 2^64, which agrees with
// mod 2^width for every width <= 64.
inline constexpr std::int64_t wrap_add(std::int64_t a, std::int64_t b, int width) {
  return wrap_bits(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b), width);
}

inline constexpr std::int64_t wrap_sub(std::int64_t a, std::int64_t b, int width) {
  return wrap_bits(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b), width);
}

/// Drops `bits` LSBs (floor division by 2^bits).
inline constexpr std::int64_t drop_lsbs(std::int64_t v, int bits) {
  return bits == 0 ? v : (v >> bits);
}

/// Reduces an exact integer into the two's-complement range of `width` bits.
inline std::int64_t wrap(const BigInt& v, int width) {
  BigInt m = BigInt{1} << width;
  BigInt r = v % m;
  if (r < 0) r += m;
  return wrap_bits(static_cast<std::uint64_t>(r), width);
}

/// A run of two's-complement samples sharing one declared width.
struct FixedSequence {
  std::vector<std::int64_t> samples;
  int width = 1;

  FixedSequence() = default;
  FixedSequence(std::vector<std::int64_t> s, int w) : samples(std::move(s)), width(w) {}

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::int64_t operator[](std::size_t i) const { return samples[i]; }
  std::span<const std::int64_t> view() const { return samples; }

  /// Throws WidthMismatch when a sample falls outside the declared width.
  void validate() const {
    check_width(width);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (!fits(samples[i], width))
        throw WidthMismatch("sample " + std::to_string(i) + " = " + std::to_string(samples[i]) +
                        " does not fit in " + std::to_string(width) + " bits");
    }
  }

  friend bool operator==(const FixedSequence&, const FixedSequence&) = default;
};

/// Exact-precision samples, used by the reference decimator.
using ExactSequence = std::vector<BigInt>;

inline FixedSequence reduce_to_width(const ExactSequence& exact, int width) {
  check_width(width);
  FixedSequence out;
  out.width = width;
  out.samples.reserve(exact.size());
  for (const auto& v : exact) out.samples.push_back(wrap(v, width));
  return out;
}

}  // namespace combdec
