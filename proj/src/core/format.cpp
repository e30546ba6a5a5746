#include "lossynet/format.hpp"

#include <charconv>
#include <cmath>

#include "lossynet/errors.hpp"

namespace lossynet {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view what) {
  const auto t = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw DomainError("invalid number for " + std::string(what) + ": '" + std::string(t) + "'");
  }
  return value;
}

unsigned long long parse_unsigned(std::string_view text, std::string_view what) {
  const auto t = trim(text);
  unsigned long long value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw DomainError("invalid non-negative integer for " + std::string(what) + ": '" +
                      std::string(t) + "'");
  }
  return value;
}

}  // namespace lossynet
