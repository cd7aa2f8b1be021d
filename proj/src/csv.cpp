#include "biblio/csv.hpp"

#include <fmt/format.h>

namespace biblio::csv {

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out << ',';
    first = false;
    out << escape(f);
  }
  out << '\n';
}

std::string number(double value) { return fmt::format("{}", value); }

}  // namespace biblio::csv
