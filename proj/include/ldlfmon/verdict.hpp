#pragma once

#include <string_view>

namespace ldlfmon {

// Four-valued verdict for a finite prefix: the two permanent values, which no
// continuation can change, and their revisable counterparts reporting how the
// prefix stands if the trace were to end now.
enum class Verdict { True, False, TempTrue, TempFalse };

std::string_view verdict_name(Verdict v);
// Inverse of verdict_name; throws std::invalid_argument on unknown names.
Verdict verdict_from_name(std::string_view name);
bool verdict_is_final(Verdict v);

}  // namespace ldlfmon
