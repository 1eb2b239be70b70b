#include "ldlfmon/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldlfmon/automata.hpp"
#include "ldlfmon/declare.hpp"
#include "ldlfmon/monitor.hpp"
#include "ldlfmon/parser.hpp"
#include "ldlfmon/semantics.hpp"

namespace ldlfmon {

namespace {

using nlohmann::json;

// Events outside the alphabet get their own exit code, so they are kept
// apart from ordinary input problems.
struct SymbolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

size_t env_max_states() {
  const char* s = std::getenv("LDLFMON_MAX_STATES");
  if (!s || !*s) return kDefaultMaxStates;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || v == 0)
    throw UsageError("LDLFMON_MAX_STATES must be a positive integer");
  return static_cast<size_t>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write '" + path + "'");
  f << text;
}

std::shared_ptr<const Alphabet> parse_alphabet(const std::string& csv) {
  std::vector<Prop> tasks;
  std::string cur;
  std::istringstream ss(csv);
  while (std::getline(ss, cur, ',')) {
    size_t b = cur.find_first_not_of(" \t");
    size_t e = cur.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw UsageError("--alphabet has an empty task name");
    tasks.push_back(prop_atom(cur.substr(b, e - b + 1)));
  }
  if (tasks.empty()) throw UsageError("--alphabet names no tasks");
  return Alphabet::tasks(tasks);
}

// What a command works on: labeled formulas plus their common alphabet.
// A null alphabet means each formula gets the power set of its own atoms.
struct Sources {
  std::shared_ptr<const Alphabet> alphabet;
  struct Row {
    std::string id;
    Formula f;
  };
  std::vector<Row> rows;
  Formula conjunction = nullptr;
};

Sources gather(const std::string& model_path, const std::string& formula_text,
               const std::string& alphabet_csv, size_t max_states) {
  if (model_path.empty() == formula_text.empty())
    throw UsageError("exactly one of --model and --formula is required");
  Sources s;
  if (!model_path.empty()) {
    if (!alphabet_csv.empty())
      throw UsageError("--alphabet conflicts with --model: the model's tasks "
                       "define the alphabet");
    DeclareModel m = load_model(read_file(model_path));
    s.alphabet = model_alphabet(m);
    for (const Constraint& c : m.constraints)
      s.rows.push_back({c.id, constraint_formula(m, c)});
    for (size_t i = 0; i < m.metaconstraints.size(); ++i)
      s.rows.push_back({"meta" + std::to_string(i + 1),
                        compile_metaconstraint(m.metaconstraints[i], m,
                                               max_states)});
  } else {
    if (!alphabet_csv.empty()) s.alphabet = parse_alphabet(alphabet_csv);
    s.rows.push_back({"formula", parse_ldlf(formula_text)});
  }
  for (const Sources::Row& r : s.rows)
    s.conjunction = s.conjunction ? f_and(s.conjunction, r.f) : r.f;
  if (!s.conjunction) s.conjunction = f_tt();
  return s;
}

// ---------------------------------------------------------------------------
// Trace events

EventRecord parse_event_line(const std::string& line, size_t lineno) {
  auto fail = [&](const std::string& msg) -> void {
    throw std::invalid_argument("trace line " + std::to_string(lineno) + ": " +
                                msg);
  };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    fail(e.what());
  }
  if (!j.is_object()) fail("event must be a JSON object");
  EventRecord rec;
  for (const auto& item : j.items()) {
    if (item.key() == "task") {
      if (!item.value().is_string()) fail("\"task\" must be a string");
      rec.task = item.value().get<std::string>();
    } else if (item.key() == "props") {
      if (!item.value().is_array()) fail("\"props\" must be an array");
      std::vector<std::string> names;
      for (const json& p : item.value()) {
        if (!p.is_string()) fail("\"props\" entries must be strings");
        names.push_back(p.get<std::string>());
      }
      rec.props = std::move(names);
    } else if (item.key() == "timestamp") {
      if (!item.value().is_string()) fail("\"timestamp\" must be a string");
      rec.timestamp = item.value().get<std::string>();
    } else {
      fail("unknown key \"" + item.key() + "\"");
    }
  }
  if (rec.task.has_value() == rec.props.has_value())
    fail("needs exactly one of \"task\" and \"props\"");
  return rec;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// A trace must stick to one event shape throughout.
class ModeGuard {
 public:
  void note(const EventRecord& e, size_t lineno) {
    int m = e.task ? 1 : 2;
    if (mode_ == 0)
      mode_ = m;
    else if (mode_ != m)
      throw std::invalid_argument("trace line " + std::to_string(lineno) +
                                  ": mixed task and props events");
  }

 private:
  int mode_ = 0;
};

Step event_step(const EventRecord& e) {
  if (e.task) return make_step({prop_atom(*e.task)});
  std::vector<Prop> ps;
  ps.reserve(e.props->size());
  for (const std::string& n : *e.props) ps.push_back(prop_atom(n));
  return make_step(std::move(ps));
}

std::string event_label(const EventRecord& e) {
  if (e.task) return *e.task;
  std::string out = "{";
  for (size_t i = 0; i < e.props->size(); ++i) {
    if (i) out += ",";
    out += (*e.props)[i];
  }
  return out + "}";
}

// Unknown events are rejected up front so frozen monitors cannot let them
// slip through unchecked.
void check_symbol(const Sources& s, const Step& st) {
  if (!s.alphabet) return;
  try {
    s.alphabet->index_of(st);
  } catch (const std::invalid_argument& e) {
    throw SymbolError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Timelines and rendering

struct TimelineResult {
  std::vector<std::string> labels;
  std::vector<std::string> timestamps;
  std::vector<std::vector<Verdict>> rows;  // [row][0..events]
};

TimelineResult run_monitors(const Sources& s,
                            const std::vector<EventRecord>& events,
                            size_t max_states) {
  std::vector<Monitor> mons;
  mons.reserve(s.rows.size());
  for (const Sources::Row& r : s.rows)
    mons.push_back(build_monitor(r.f, s.alphabet, max_states));
  TimelineResult res;
  res.rows.resize(mons.size());
  for (size_t i = 0; i < mons.size(); ++i)
    res.rows[i].push_back(mons[i].verdict());
  for (const EventRecord& e : events) {
    res.labels.push_back(event_label(e));
    res.timestamps.push_back(e.timestamp);
    Step st = event_step(e);
    check_symbol(s, st);
    for (size_t i = 0; i < mons.size(); ++i) {
      mons[i].step(st);
      res.rows[i].push_back(mons[i].verdict());
    }
  }
  return res;
}

bool any_false(const TimelineResult& r) {
  for (const std::vector<Verdict>& row : r.rows)
    if (row.back() == Verdict::False) return true;
  return false;
}

void print_table(const Sources& s, const TimelineResult& r,
                 std::ostream& out) {
  std::vector<std::string> headers{"constraint", "start"};
  headers.insert(headers.end(), r.labels.begin(), r.labels.end());
  std::vector<size_t> width(headers.size());
  for (size_t c = 0; c < headers.size(); ++c) width[c] = headers[c].size();
  for (size_t i = 0; i < s.rows.size(); ++i) {
    width[0] = std::max(width[0], s.rows[i].id.size());
    for (size_t c = 0; c < r.rows[i].size(); ++c)
      width[c + 1] =
          std::max(width[c + 1], verdict_name(r.rows[i][c]).size());
  }
  auto cell = [&](const std::string& text, size_t c, bool last) {
    out << text;
    if (!last)
      out << std::string(width[c] - text.size() + 2, ' ');
  };
  for (size_t c = 0; c < headers.size(); ++c)
    cell(headers[c], c, c + 1 == headers.size());
  out << "\n";
  for (size_t i = 0; i < s.rows.size(); ++i) {
    cell(s.rows[i].id, 0, false);
    for (size_t c = 0; c < r.rows[i].size(); ++c)
      cell(std::string(verdict_name(r.rows[i][c])), c + 1,
           c + 1 == r.rows[i].size());
    out << "\n";
  }
}

void print_tsv(const Sources& s, const TimelineResult& r, std::ostream& out) {
  out << "constraint\tstart";
  for (const std::string& l : r.labels) out << "\t" << l;
  out << "\n";
  for (size_t i = 0; i < s.rows.size(); ++i) {
    out << s.rows[i].id;
    for (Verdict v : r.rows[i]) out << "\t" << verdict_name(v);
    out << "\n";
  }
}

void print_json(const Sources& s, const TimelineResult& r,
                std::ostream& out) {
  json events = json::array();
  for (size_t i = 0; i < r.labels.size(); ++i) {
    json e{{"label", r.labels[i]}};
    if (!r.timestamps[i].empty()) e["timestamp"] = r.timestamps[i];
    events.push_back(std::move(e));
  }
  json rows = json::array();
  for (size_t i = 0; i < s.rows.size(); ++i) {
    json verdicts = json::array();
    for (Verdict v : r.rows[i]) verdicts.push_back(verdict_name(v));
    rows.push_back({{"id", s.rows[i].id}, {"verdicts", std::move(verdicts)}});
  }
  json j{{"events", std::move(events)},
         {"timelines", std::move(rows)},
         {"violated", any_false(r)}};
  out << j.dump(2) << "\n";
}

// DOT of a verdict-colored automaton.
std::string colored_dot(const Dfa& d, const std::vector<Verdict>& colors) {
  auto fill = [](Verdict v) {
    switch (v) {
      case Verdict::True: return "palegreen";
      case Verdict::False: return "lightcoral";
      case Verdict::TempTrue: return "lightcyan";
      case Verdict::TempFalse: return "khaki";
    }
    return "white";
  };
  std::ostringstream out;
  out << "digraph monitor {\n  rankdir=LR;\n";
  out << "  __start [shape=point];\n";
  for (size_t q = 0; q < d.num_states(); ++q) {
    out << "  q" << q << " [shape="
        << (d.accepting.get(q) ? "doublecircle" : "circle")
        << ", style=filled, fillcolor=" << fill(colors[q]) << ", label=\"q"
        << q << "\\n" << verdict_name(colors[q]) << "\"];\n";
  }
  out << "  __start -> q" << d.initial << ";\n";
  size_t nsym = d.alphabet->size();
  for (size_t q = 0; q < d.num_states(); ++q) {
    // one edge per target, labels joined
    std::vector<std::pair<size_t, std::string>> edges;
    for (size_t sym = 0; sym < nsym; ++sym) {
      size_t to = d.next[q][sym];
      auto it = std::find_if(edges.begin(), edges.end(),
                             [&](const auto& e) { return e.first == to; });
      if (it == edges.end())
        edges.push_back({to, d.alphabet->symbol_name(sym)});
      else
        it->second += ", " + d.alphabet->symbol_name(sym);
    }
    for (const auto& [to, label] : edges)
      out << "  q" << q << " -> q" << to << " [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Commands

struct MonitorOpts {
  std::string model, formula, trace = "-", alphabet, format = "table", dot;
  bool follow = false;
};

int do_follow(const Sources& s, std::istream& tr, std::ostream& out,
              const std::string& format, size_t max_states) {
  std::vector<Monitor> mons;
  for (const Sources::Row& r : s.rows)
    mons.push_back(build_monitor(r.f, s.alphabet, max_states));

  auto emit = [&](const std::string& label) {
    if (format == "json") {
      json verdicts;
      for (size_t i = 0; i < mons.size(); ++i)
        verdicts[s.rows[i].id] = verdict_name(mons[i].verdict());
      out << json{{"event", label}, {"verdicts", std::move(verdicts)}}.dump()
          << "\n";
    } else {
      out << label;
      for (const Monitor& m : mons) out << "\t" << verdict_name(m.verdict());
      out << "\n";
    }
    out.flush();
  };

  if (format != "json") {
    out << "event";
    for (const Sources::Row& r : s.rows) out << "\t" << r.id;
    out << "\n";
  }
  emit("start");

  ModeGuard guard;
  std::string line;
  size_t lineno = 0;
  while (std::getline(tr, line)) {
    ++lineno;
    if (blank(line)) continue;
    EventRecord e = parse_event_line(line, lineno);
    guard.note(e, lineno);
    Step st = event_step(e);
    check_symbol(s, st);
    // Stable verdicts freeze their monitor; stepping it further could not
    // change anything.
    for (Monitor& m : mons)
      if (!verdict_is_final(m.verdict())) m.step(st);
    emit(event_label(e));
  }
  for (const Monitor& m : mons)
    if (m.verdict() == Verdict::False) return kExitViolation;
  return kExitOk;
}

int do_monitor(const MonitorOpts& o, std::istream& in, std::ostream& out,
               size_t max_states) {
  Sources s = gather(o.model, o.formula, o.alphabet, max_states);
  std::ifstream file;
  std::istream* tr = &in;
  if (o.trace != "-") {
    file.open(o.trace);
    if (!file) throw std::invalid_argument("cannot open '" + o.trace + "'");
    tr = &file;
  }
  if (!o.dot.empty()) {
    Monitor mon = build_monitor(s.conjunction, s.alphabet, max_states);
    write_file(o.dot, colored_dot(mon.dfa(), mon.colors()));
  }
  if (o.follow) return do_follow(s, *tr, out, o.format, max_states);

  std::vector<EventRecord> events = load_trace(*tr);
  TimelineResult res = run_monitors(s, events, max_states);
  if (o.format == "tsv")
    print_tsv(s, res, out);
  else if (o.format == "json")
    print_json(s, res, out);
  else
    print_table(s, res, out);
  return any_false(res) ? kExitViolation : kExitOk;
}

struct CompileOpts {
  std::string model, formula, alphabet, nfa, dfa, monitor;
  bool pref = false;
  bool stats = false;
};

int do_compile(const CompileOpts& o, std::ostream& out, size_t max_states) {
  Sources s = gather(o.model, o.formula, o.alphabet, max_states);
  Formula f = s.conjunction;
  Nfa nfa = ldlf_to_nfa(f, s.alphabet, max_states);
  if (!o.nfa.empty()) write_file(o.nfa, to_dot(nfa));
  Dfa dfa = minimize(determinize(strip_last(nfa), max_states));
  if (!o.dfa.empty()) write_file(o.dfa, to_dot(dfa));
  if (!o.monitor.empty())
    write_file(o.monitor, colored_dot(dfa, color_states(dfa)));
  if (o.pref) {
    Dfa good = minimize(prefix_automaton(dfa));
    out << render(to_regex(good)) << "\n";
  }
  bool stats =
      o.stats || (o.nfa.empty() && o.dfa.empty() && o.monitor.empty() &&
                  !o.pref);
  if (stats) {
    size_t ntrans = 0;
    for (const std::vector<Bits>& row : nfa.next)
      for (const Bits& cell : row) ntrans += cell.count();
    out << "alphabet symbols: " << dfa.alphabet->size() << "\n";
    out << "nfa states: " << nfa.num_states() << "\n";
    out << "nfa transitions: " << ntrans << "\n";
    out << "dfa states: " << dfa.num_states() << "\n";
    out << "dfa transitions: " << dfa.num_states() * dfa.alphabet->size()
        << "\n";
    out << "language: " << (language_empty(dfa) ? "empty" : "nonempty")
        << "\n";
  }
  return kExitOk;
}

int do_check(const std::string& model_path, std::ostream& out,
             size_t max_states) {
  DeclareModel m = load_model(read_file(model_path));
  if (!check_consistency(m, max_states)) {
    out << "inconsistent\n";
    return kExitViolation;
  }
  out << "consistent\n";
  std::vector<Prop> dead = dead_tasks(m, max_states);
  if (dead.empty()) {
    out << "no dead tasks\n";
    return kExitOk;
  }
  out << "dead tasks:";
  for (Prop p : dead) out << " " << p->name;
  out << "\n";
  return kExitViolation;
}

struct EvalOpts {
  std::string model, formula, trace = "-", alphabet;
};

int do_eval(const EvalOpts& o, std::istream& in, std::ostream& out,
            size_t max_states) {
  Sources s = gather(o.model, o.formula, o.alphabet, max_states);
  std::ifstream file;
  std::istream* tr = &in;
  if (o.trace != "-") {
    file.open(o.trace);
    if (!file) throw std::invalid_argument("cannot open '" + o.trace + "'");
    tr = &file;
  }
  std::vector<EventRecord> events = load_trace(*tr);
  Trace t;
  for (const EventRecord& e : events) {
    Step st = event_step(e);
    check_symbol(s, st);
    t.push_back(std::move(st));
  }
  bool all = true;
  for (const Sources::Row& r : s.rows) {
    bool ok = satisfies(t, r.f);
    out << r.id << ": " << (ok ? "satisfied" : "violated") << "\n";
    all = all && ok;
  }
  return all ? kExitOk : kExitViolation;
}

}  // namespace

std::vector<EventRecord> load_trace(std::istream& in) {
  std::vector<EventRecord> events;
  ModeGuard guard;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    EventRecord e = parse_event_line(line, lineno);
    guard.note(e, lineno);
    events.push_back(std::move(e));
  }
  return events;
}

int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err) {
  CLI::App app{"Runtime monitoring for linear dynamic logic and Declare "
               "models over finite traces",
               "ldlfmon"};
  app.require_subcommand(1);

  MonitorOpts mo;
  CLI::App* mon = app.add_subcommand(
      "monitor", "Replay a trace and print verdict timelines");
  mon->add_option("--model", mo.model, "Declare model file (JSON)");
  mon->add_option("--formula", mo.formula, "Formula text to monitor");
  mon->add_option("--trace", mo.trace,
                  "Trace file in JSON Lines, or - for standard input")
      ->capture_default_str();
  mon->add_option("--alphabet", mo.alphabet,
                  "Comma-separated task alphabet for --formula");
  mon->add_option("--format", mo.format, "table, tsv or json")
      ->check(CLI::IsMember({"table", "tsv", "json"}))
      ->capture_default_str();
  mon->add_flag("--follow", mo.follow,
                "Print one verdict row per event as lines arrive");
  mon->add_option("--dot", mo.dot,
                  "Write the verdict-colored automaton to this DOT file");

  CompileOpts co;
  CLI::App* comp = app.add_subcommand(
      "compile", "Build automata artifacts from a formula or model");
  comp->add_option("--model", co.model, "Declare model file (JSON)");
  comp->add_option("--formula", co.formula, "Formula text to compile");
  comp->add_option("--alphabet", co.alphabet,
                   "Comma-separated task alphabet for --formula");
  comp->add_option("--nfa", co.nfa, "Write the NFA to this DOT file");
  comp->add_option("--dfa", co.dfa,
                   "Write the minimized DFA to this DOT file");
  comp->add_option("--monitor", co.monitor,
                   "Write the verdict-colored DFA to this DOT file");
  comp->add_flag("--pref", co.pref,
                 "Print the extracted good-prefix expression");
  comp->add_flag("--stats", co.stats,
                 "Print state and transition counts (default when no "
                 "artifact is requested)");

  std::string check_model;
  CLI::App* chk = app.add_subcommand(
      "check", "Report model consistency and dead tasks");
  chk->add_option("--model", check_model, "Declare model file (JSON)")
      ->required();

  EvalOpts eo;
  CLI::App* ev = app.add_subcommand(
      "eval", "Evaluate a completed trace with the reference semantics");
  ev->add_option("--model", eo.model, "Declare model file (JSON)");
  ev->add_option("--formula", eo.formula, "Formula text to evaluate");
  ev->add_option("--trace", eo.trace,
                 "Trace file in JSON Lines, or - for standard input")
      ->capture_default_str();
  ev->add_option("--alphabet", eo.alphabet,
                 "Comma-separated task alphabet for --formula");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    size_t max_states = env_max_states();
    if (mon->parsed()) return do_monitor(mo, in, out, max_states);
    if (comp->parsed()) return do_compile(co, out, max_states);
    if (chk->parsed()) return do_check(check_model, out, max_states);
    if (ev->parsed()) return do_eval(eo, in, out, max_states);
    err << "error: no command selected\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StateLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitStateLimit;
  } catch (const SymbolError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnknownSymbol;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (line " << e.line() << ", column "
        << e.col() << ")\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace ldlfmon
