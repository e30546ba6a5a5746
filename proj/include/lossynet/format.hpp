#pragma once

#include <string>
#include <string_view>

namespace lossynet {

/// Shortest decimal text that round-trips to the same double. Used for every
/// CSV field so identical runs produce byte-identical files.
std::string format_double(double value);

/// Parses a full string as a double; throws DomainError naming `what` otherwise.
double parse_double(std::string_view text, std::string_view what);

/// Parses a full string as an unsigned integer.
unsigned long long parse_unsigned(std::string_view text, std::string_view what);

std::string_view trim(std::string_view text);

}  // namespace lossynet
