// Command-line front end: trace ingestion (JSON Lines), model and formula
// loading, batch and streaming monitoring, compilation artifacts and the
// model reasoning report. run_cli is the whole program minus process setup,
// so tests drive it in-process with string streams.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ldlfmon {

// Exit codes. Anything nonzero is a failure; the value says which kind.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;    // false verdict, inconsistency
inline constexpr int kExitUsage = 2;        // bad command line
inline constexpr int kExitInput = 3;        // I/O, JSON or formula syntax
inline constexpr int kExitUnknownSymbol = 4;  // event outside the alphabet
inline constexpr int kExitStateLimit = 5;   // automaton cap exceeded

// One trace event: either a single task or a full interpretation. The
// timestamp is carried into outputs but never interpreted.
struct EventRecord {
  std::optional<std::string> task;
  std::optional<std::vector<std::string>> props;
  std::string timestamp;
};

// Reads JSON Lines, one event object per line; blank lines are skipped.
// Malformed lines and mixed task/props traces throw std::invalid_argument
// naming the line.
std::vector<EventRecord> load_trace(std::istream& in);

// Runs one command; args exclude the program name. Reads traces from `in`
// when the trace source is "-". Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace ldlfmon
