#include "ldlfmon/verdict.hpp"

#include <stdexcept>
#include <string>

namespace ldlfmon {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::TempTrue: return "temp_true";
    case Verdict::TempFalse: return "temp_false";
  }
  return "?";
}

Verdict verdict_from_name(std::string_view name) {
  for (Verdict v : {Verdict::True, Verdict::False, Verdict::TempTrue,
                    Verdict::TempFalse}) {
    if (name == verdict_name(v)) return v;
  }
  throw std::invalid_argument("unknown verdict '" + std::string(name) + "'");
}

bool verdict_is_final(Verdict v) {
  return v == Verdict::True || v == Verdict::False;
}

}  // namespace ldlfmon
