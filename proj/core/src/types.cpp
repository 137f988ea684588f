#include "pnu/types.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace pnu {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::pn: return "PN";
    case Mode::pu: return "PU";
    case Mode::nu: return "NU";
  }
  return "?";
}

Mode mode_from_string(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "PN") return Mode::pn;
  if (upper == "PU") return Mode::pu;
  if (upper == "NU") return Mode::nu;
  throw std::invalid_argument("unknown learning mode '" + std::string(text) + "'");
}

}  // namespace pnu
