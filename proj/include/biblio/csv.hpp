#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace biblio::csv {

/// RFC 4180 quoting: fields with comma, quote or newline are wrapped in quotes.
std::string escape(std::string_view field);

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);

/// Shortest round-trip representation, so identical values print identically.
std::string number(double value);

}  // namespace biblio::csv
