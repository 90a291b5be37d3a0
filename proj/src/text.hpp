#pragma once

// Small text helpers shared by the file readers.

#include <charconv>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abtrack::text {

std::string_view trim(std::string_view s) noexcept;

std::vector<std::string_view> split(std::string_view s, char sep);

std::optional<double> to_double(std::string_view s) noexcept;
std::optional<long long> to_integer(std::string_view s) noexcept;

struct KeyValue {
  std::size_t line = 0;
  std::string key;
  std::string value;
};

/// `key = value` lines with `#` comments; throws ParseError on a line without '='.
std::vector<KeyValue> read_key_values(std::istream& in);

std::string format_fixed(double v, int decimals);
/// Shortest round-trip representation.
std::string format_real(double v);

}  // namespace abtrack::text
