#pragma once

#include <algorithm>
#include <cassert>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "enumerate.hpp"
#include "machine.hpp"
#include "scenario.hpp"

namespace genprob {

enum class Severity { Error, Warning };

/// A parse or validation finding, anchored to the 1-based source position
/// it refers to.
struct Diagnostic {
  int line = 1;
  int column = 1;
  Severity severity = Severity::Error;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

/// Declared: every situation states its entropy with `bits <int>` (or, when
/// no situation carries any annotation, defaults to the 3-bit minimum).
/// Enumerated: every situation carries `program "<mnemonics>"`; its results
/// and entropy are derived by running the program.
enum class ScenarioMode { Declared, Enumerated };

struct ScenarioDocument {
  Scenario scenario;
  ScenarioMode mode = ScenarioMode::Declared;
  std::vector<Diagnostic> diagnostics;

  bool ok() const {
    return std::none_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
      return d.severity == Severity::Error;
    });
  }
};

struct ParseOptions {
  EvalLimit limit{};              // step budget for running enumerated programs
  int compression_max_bits = 20;  // search cap when measuring a trace's entropy
};

namespace detail {

struct Pos {
  int line = 1;
  int column = 1;
};

struct Token {
  std::string text;
  int column = 1;
  bool quoted = false;
};

inline std::vector<Token> tokenize_line(std::string_view line, int line_no,
                                        std::vector<Diagnostic>& diagnostics) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '"') {
      const std::size_t start = i++;
      std::string text;
      while (i < n && line[i] != '"') text += line[i++];
      if (i == n) {
        diagnostics.push_back({line_no, static_cast<int>(start) + 1, Severity::Error,
                               "unterminated quote"});
      } else {
        ++i;
      }
      tokens.push_back({std::move(text), static_cast<int>(start) + 1, true});
      continue;
    }
    const std::size_t start = i;
    std::string text;
    while (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '#' && line[i] != '"') {
      text += line[i++];
    }
    if (i < n && line[i] == '"') {
      diagnostics.push_back({line_no, static_cast<int>(i) + 1, Severity::Error,
                             "quote in the middle of a token"});
      i = n;  // the rest of the line is not trustworthy
    }
    tokens.push_back({std::move(text), static_cast<int>(start) + 1, false});
  }
  return tokens;
}

struct ScenarioParser {
  explicit ScenarioParser(ParseOptions options) : opts(options) {}

  ParseOptions opts;
  ScenarioDocument doc;

  enum class Annotation { None, Bits, Program };
  struct SituationMeta {
    Pos pos;
    Annotation annotation = Annotation::None;
    std::string program_text;
    Pos program_pos;
    std::vector<Pos> result_pos;
    std::vector<Pos> result_prestate_pos;
    bool failed = false;  // program processing already reported a problem
  };

  bool any_directive = false;
  bool scenario_seen = false;
  bool header_missing_reported = false;
  Pos scenario_pos{1, 1};
  std::optional<std::size_t> current_situation;

  std::vector<SituationMeta> situation_meta;
  std::vector<std::vector<Pos>> outcome_ref_pos;  // aligned with outcomes' results
  std::vector<Pos> outcome_pos;

  std::set<std::string> prestate_set;
  std::set<std::string> situation_set;
  std::set<std::string> result_set;
  std::set<std::string> outcome_set;
  std::set<std::string> covered;  // result ids already claimed by an outcome
  std::map<std::string, Pos> result_decl_pos;

  void error(int line, int column, std::string message) {
    doc.diagnostics.push_back({line, column, Severity::Error, std::move(message)});
  }
  void error(Pos pos, std::string message) { error(pos.line, pos.column, std::move(message)); }
  void warn(Pos pos, std::string message) {
    doc.diagnostics.push_back({pos.line, pos.column, Severity::Warning, std::move(message)});
  }

  /// Ids and labels must be plain tokens; quotes are reserved for programs.
  bool id_token(const Token& token, int line) {
    if (token.quoted) {
      error(line, token.column, "quoted token not allowed here");
      return false;
    }
    return true;
  }

  void handle_line(const std::vector<Token>& tokens, int line) {
    if (tokens.empty()) return;
    const Token& head = tokens[0];
    const std::string& directive = head.text;
    if (head.quoted) {
      error(line, head.column, "a line cannot start with a quoted token");
      return;
    }
    if (directive == "format") {
      if (any_directive) {
        error(line, head.column, "format directive must come first");
      } else if (tokens.size() != 2) {
        error(line, head.column, "format needs exactly one version number");
      } else if (tokens[1].text != "1") {
        error(line, tokens[1].column,
              "unsupported format version '" + tokens[1].text + "'");
      }
      any_directive = true;
      return;
    }
    any_directive = true;
    if (directive == "scenario") {
      if (scenario_seen) {
        error(line, head.column, "duplicate scenario directive");
        return;
      }
      scenario_seen = true;
      scenario_pos = {line, head.column};
      if (tokens.size() < 2) {
        error(line, head.column, "scenario needs an id");
        return;
      }
      if (!id_token(tokens[1], line)) return;
      doc.scenario.id = tokens[1].text;
      if (tokens.size() > 2) {
        error(line, tokens[2].column,
              "unexpected token '" + tokens[2].text + "' after the scenario id");
      }
      return;
    }
    if (!scenario_seen && !header_missing_reported) {
      error(line, head.column, "missing scenario header");
      header_missing_reported = true;
    }
    if (directive == "prestates") {
      handle_prestates(tokens, line);
    } else if (directive == "situation") {
      handle_situation(tokens, line);
    } else if (directive == "result") {
      handle_result(tokens, line);
    } else if (directive == "outcome") {
      handle_outcome(tokens, line);
    } else {
      error(line, head.column, "unknown directive '" + directive + "'");
    }
  }

  void handle_prestates(const std::vector<Token>& tokens, int line) {
    if (tokens.size() < 2) {
      error(line, tokens[0].column, "prestates needs at least one label");
      return;
    }
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      if (!id_token(tokens[i], line)) continue;
      const std::string& label = tokens[i].text;
      if (!prestate_set.insert(label).second) {
        error(line, tokens[i].column, "duplicate prestate '" + label + "'");
        continue;
      }
      doc.scenario.prestates.push_back(label);
    }
  }

  void handle_situation(const std::vector<Token>& tokens, int line) {
    if (tokens.size() < 2 || !id_token(tokens[1], line)) {
      error(line, tokens[0].column, "situation needs an id");
      current_situation.reset();
      return;
    }
    const std::string& id = tokens[1].text;
    if (!situation_set.insert(id).second) {
      error(line, tokens[1].column, "duplicate situation '" + id + "'");
    }
    Situation situation;
    situation.id = id;
    situation.entropy_bits = Rational(3);  // the 3-bit default for bare files
    SituationMeta meta;
    meta.pos = {line, tokens[1].column};

    std::size_t i = 2;
    while (i < tokens.size()) {
      const Token& key = tokens[i];
      if (!key.quoted && key.text == "bits") {
        if (i + 1 == tokens.size()) {
          error(line, key.column, "bits needs an integer value");
          break;
        }
        const Token& value = tokens[i + 1];
        int bits = 0;
        const char* first = value.text.data();
        const char* last = value.text.data() + value.text.size();
        auto [ptr, ec] = std::from_chars(first, last, bits);
        if (value.quoted || ec != std::errc{} || ptr != last) {
          error(line, value.column, "bits value '" + value.text + "' is not an integer");
        } else if (bits < 1) {
          error(line, value.column, "bits must be at least 1");
        } else if (meta.annotation == Annotation::Bits) {
          error(line, key.column, "bits given twice");
        } else if (meta.annotation == Annotation::Program) {
          error(line, key.column,
                "situation '" + id + "' declares both bits and program");
        } else {
          meta.annotation = Annotation::Bits;
          situation.entropy_bits = Rational(bits);
        }
        i += 2;
      } else if (!key.quoted && key.text == "program") {
        if (i + 1 == tokens.size()) {
          error(line, key.column, "program needs a program text");
          break;
        }
        const Token& value = tokens[i + 1];
        if (meta.annotation == Annotation::Program) {
          error(line, key.column, "program given twice");
        } else if (meta.annotation == Annotation::Bits) {
          error(line, key.column,
                "situation '" + id + "' declares both bits and program");
        } else {
          meta.annotation = Annotation::Program;
          meta.program_text = value.text;
          meta.program_pos = {line, value.column};
        }
        i += 2;
      } else {
        error(line, key.column,
              "unexpected token '" + key.text + "' in situation directive");
        ++i;
      }
    }
    current_situation = doc.scenario.situations.size();
    doc.scenario.situations.push_back(std::move(situation));
    situation_meta.push_back(std::move(meta));
  }

  void handle_result(const std::vector<Token>& tokens, int line) {
    if (!current_situation) {
      error(line, tokens[0].column, "result outside of a situation");
      return;
    }
    if (tokens.size() != 4 || tokens[2].quoted || tokens[2].text != "prestate") {
      error(line, tokens[0].column, "expected 'result <id> prestate <label>'");
      return;
    }
    if (!id_token(tokens[1], line) || !id_token(tokens[3], line)) return;
    const std::string& id = tokens[1].text;
    if (!result_set.insert(id).second) {
      error(line, tokens[1].column, "duplicate result '" + id + "'");
      return;
    }
    result_decl_pos[id] = {line, tokens[1].column};
    doc.scenario.situations[*current_situation].results.push_back({id, tokens[3].text});
    situation_meta[*current_situation].result_pos.push_back({line, tokens[1].column});
    situation_meta[*current_situation].result_prestate_pos.push_back(
        {line, tokens[3].column});
  }

  void handle_outcome(const std::vector<Token>& tokens, int line) {
    current_situation.reset();
    if (tokens.size() < 2 || !id_token(tokens[1], line)) {
      error(line, tokens[0].column, "outcome needs an id");
      return;
    }
    const std::string& id = tokens[1].text;
    if (!outcome_set.insert(id).second) {
      error(line, tokens[1].column, "duplicate outcome '" + id + "'");
    }
    if (tokens.size() < 3 || tokens[2].quoted || tokens[2].text != "=") {
      error(line, tokens.size() < 3 ? tokens[1].column : tokens[2].column,
            "expected '=' after the outcome id");
      return;
    }
    if (tokens.size() < 4) {
      error(line, tokens[2].column, "outcome needs at least one result id");
      return;
    }
    OutcomeDecl outcome;
    outcome.id = id;
    std::vector<Pos> refs;
    for (std::size_t i = 3; i < tokens.size(); ++i) {
      if (!id_token(tokens[i], line)) continue;
      const std::string& rid = tokens[i].text;
      if (!covered.insert(rid).second) {
        error(line, tokens[i].column,
              "result '" + rid + "' appears in more than one outcome");
        continue;
      }
      outcome.results.push_back(rid);
      refs.push_back({line, tokens[i].column});
    }
    outcome_pos.push_back({line, tokens[1].column});
    outcome_ref_pos.push_back(std::move(refs));
    doc.scenario.outcomes.push_back(std::move(outcome));
  }

  void process_program(std::size_t index) {
    Situation& situation = doc.scenario.situations[index];
    SituationMeta& meta = situation_meta[index];
    auto parsed = parse_program(meta.program_text);
    if (const auto* message = std::get_if<std::string>(&parsed)) {
      error(meta.program_pos, "program: " + *message);
      meta.failed = true;
      return;
    }
    const Program program = std::get<Program>(std::move(parsed));
    const EvalResult outcome = evaluate(program, opts.limit);
    const Trace* trace = halted(outcome);
    if (!trace) {
      error(meta.program_pos,
            std::holds_alternative<Diverged>(outcome)
                ? "program did not halt within " + std::to_string(opts.limit.max_steps) +
                      " steps"
                : "program jumped outside its instructions");
      meta.failed = true;
      return;
    }
    const std::vector<std::string>& records = trace->records;
    if (records.size() < 2) {
      error(meta.program_pos,
            "program produced " + std::to_string(records.size()) +
                " record(s); need a prestate record and at least one result");
      meta.failed = true;
      return;
    }
    if (records[0].empty() || !prestate_set.count(records[0])) {
      error(meta.program_pos, "program's first record '" + records[0] +
                                  "' does not name a declared prestate");
      meta.failed = true;
      return;
    }
    for (std::size_t k = 1; k < records.size(); ++k) {
      if (records[k].empty()) {
        error(meta.program_pos, "program produced an empty result record");
        meta.failed = true;
        return;
      }
    }

    if (!situation.results.empty()) {
      // Explicit result lines in an enumerated situation are a cross-check
      // of what the program derives.
      if (situation.results.size() != records.size() - 1) {
        error(meta.pos, "situation '" + situation.id + "' declares " +
                            std::to_string(situation.results.size()) +
                            " results but its program produced " +
                            std::to_string(records.size() - 1));
        meta.failed = true;
        return;
      }
      bool mismatch = false;
      for (std::size_t j = 0; j < situation.results.size(); ++j) {
        if (situation.results[j].id != records[j + 1]) {
          error(meta.result_pos[j], "result '" + situation.results[j].id +
                                        "' does not match the program's record '" +
                                        records[j + 1] + "'");
          mismatch = true;
        } else if (situation.results[j].prestate != records[0]) {
          error(meta.result_prestate_pos[j],
                "result '" + situation.results[j].id + "' declares prestate '" +
                    situation.results[j].prestate +
                    "' but the program's first record is '" + records[0] + "'");
          mismatch = true;
        }
      }
      if (mismatch) {
        meta.failed = true;
        return;
      }
    } else {
      for (std::size_t k = 1; k < records.size(); ++k) {
        if (!result_set.insert(records[k]).second) {
          error(meta.pos, "program-derived result '" + records[k] +
                              "' duplicates an existing result id");
          meta.failed = true;
          return;
        }
      }
      for (std::size_t k = 1; k < records.size(); ++k) {
        situation.results.push_back({records[k], records[0]});
        meta.result_pos.push_back(meta.pos);
        meta.result_prestate_pos.push_back(meta.pos);
        result_decl_pos[records[k]] = meta.pos;
      }
    }

    // The situation's entropy is the length of the shortest program found
    // for the trace; the program in the file is itself a witness, so the
    // search cannot come back empty unless capped below the program size.
    const int search_bits = std::min(program.length_bits(), opts.compression_max_bits);
    const auto compressed = optimal_compression(trace->raw_output, search_bits, opts.limit);
    situation.entropy_bits =
        Rational(compressed ? compressed->entropy_bits : program.length_bits());
  }

  void finish() {
    if (!scenario_seen && !header_missing_reported) {
      error(1, 1, "missing scenario header");
      header_missing_reported = true;
    }

    std::optional<std::size_t> first_bits;
    std::optional<std::size_t> first_program;
    for (std::size_t i = 0; i < situation_meta.size(); ++i) {
      if (situation_meta[i].annotation == Annotation::Bits && !first_bits) first_bits = i;
      if (situation_meta[i].annotation == Annotation::Program && !first_program) {
        first_program = i;
      }
    }
    const bool mixed = first_bits && first_program;
    if (mixed) {
      const std::size_t later = std::max(*first_bits, *first_program);
      error(situation_meta[later].pos,
            "cannot mix bits and program situations in one file");
    }
    doc.mode = (first_program && !first_bits) ? ScenarioMode::Enumerated
                                              : ScenarioMode::Declared;
    if (!mixed) {
      for (std::size_t i = 0; i < situation_meta.size(); ++i) {
        if (situation_meta[i].annotation != Annotation::None) continue;
        if (first_bits) {
          error(situation_meta[i].pos, "situation '" + doc.scenario.situations[i].id +
                                           "' needs bits <int>");
        } else if (first_program) {
          error(situation_meta[i].pos, "situation '" + doc.scenario.situations[i].id +
                                           "' needs program \"<mnemonics>\"");
          situation_meta[i].failed = true;
        }
        // No annotations anywhere: declared mode with the 3-bit default.
      }
      if (doc.mode == ScenarioMode::Enumerated) {
        for (std::size_t i = 0; i < situation_meta.size(); ++i) {
          if (situation_meta[i].annotation == Annotation::Program) process_program(i);
        }
      }
    }

    // Semantic checks over the assembled scenario, each anchored to the
    // declaration it concerns.
    for (std::size_t i = 0; i < doc.scenario.situations.size(); ++i) {
      const Situation& situation = doc.scenario.situations[i];
      const SituationMeta& meta = situation_meta[i];
      for (std::size_t j = 0; j < situation.results.size(); ++j) {
        if (!prestate_set.count(situation.results[j].prestate)) {
          const Pos pos = j < meta.result_prestate_pos.size() ? meta.result_prestate_pos[j]
                                                              : meta.pos;
          error(pos, "result '" + situation.results[j].id +
                         "' names undeclared prestate '" +
                         situation.results[j].prestate + "'");
        }
      }
      if (situation.results.empty() && !meta.failed) {
        error(meta.pos, "situation '" + situation.id + "' has no results");
      }
    }
    for (std::size_t k = 0; k < doc.scenario.outcomes.size(); ++k) {
      const OutcomeDecl& outcome = doc.scenario.outcomes[k];
      for (std::size_t i = 0; i < outcome.results.size(); ++i) {
        if (!result_set.count(outcome.results[i])) {
          error(outcome_ref_pos[k][i], "outcome '" + outcome.id +
                                           "' references unknown result '" +
                                           outcome.results[i] + "'");
        }
      }
    }
    for (const Situation& situation : doc.scenario.situations) {
      for (const ResultDecl& result : situation.results) {
        if (!covered.count(result.id)) {
          const auto it = result_decl_pos.find(result.id);
          error(it != result_decl_pos.end() ? it->second : scenario_pos,
                "result '" + result.id + "' is not covered by any outcome");
        }
      }
    }
    if (doc.scenario.situations.empty()) {
      error(scenario_pos, "scenario declares no situations");
    }
    if (doc.scenario.prestates.empty()) {
      error(scenario_pos, "scenario declares no prestates");
    }
    std::map<std::string, std::string> result_home;
    for (const Situation& situation : doc.scenario.situations) {
      for (const ResultDecl& result : situation.results) {
        result_home[result.id] = situation.id;
      }
    }
    for (std::size_t k = 0; k < doc.scenario.outcomes.size(); ++k) {
      std::set<std::string> span;
      for (const std::string& rid : doc.scenario.outcomes[k].results) {
        const auto it = result_home.find(rid);
        if (it != result_home.end()) span.insert(it->second);
      }
      if (span.size() > 1) {
        std::string joined;
        for (const std::string& sid : span) {
          if (!joined.empty()) joined += ", ";
          joined += sid;
        }
        warn(outcome_pos[k], "outcome '" + doc.scenario.outcomes[k].id +
                                 "' mixes results from situations " + joined);
      }
    }

    // Safety net: a document that parsed cleanly must also satisfy the
    // scenario-level validator.
    if (doc.ok()) {
      for (const Violation& violation : validate_scenario(doc.scenario)) {
        if (!violation.warning) {
          error(scenario_pos, violation.message);
        }
      }
    }

    std::stable_sort(doc.diagnostics.begin(), doc.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) {
                       return a.line != b.line ? a.line < b.line : a.column < b.column;
                     });
  }
};

}  // namespace detail

inline ScenarioDocument parse_scenario(std::string_view text, ParseOptions options = {}) {
  detail::ScenarioParser parser(options);
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    ++line_no;
    const auto tokens =
        detail::tokenize_line(text.substr(start, end - start), line_no, parser.doc.diagnostics);
    parser.handle_line(tokens, line_no);
    if (end == text.size()) break;
    start = end + 1;
  }
  if (text.empty()) line_no = 1;
  parser.finish();
  return std::move(parser.doc);
}

namespace detail {
inline std::string integer_text(const Rational& value) {
  return value.is_integer() ? value.numerator().str() : value.to_string();
}
}  // namespace detail

/// Canonical declared-mode text for a scenario. Parsing the rendered text
/// reproduces the scenario exactly, whichever mode it originally came from.
inline std::string render_scenario(const Scenario& scenario) {
  std::string out = "format 1\n";
  out += "scenario " + scenario.id + "\n";
  if (!scenario.prestates.empty()) {
    out += "prestates";
    for (const std::string& label : scenario.prestates) out += " " + label;
    out += "\n";
  }
  for (const Situation& situation : scenario.situations) {
    out += "\nsituation " + situation.id + " bits " +
           detail::integer_text(situation.entropy_bits) + "\n";
    for (const ResultDecl& result : situation.results) {
      out += "  result " + result.id + " prestate " + result.prestate + "\n";
    }
  }
  if (!scenario.outcomes.empty()) out += "\n";
  for (const OutcomeDecl& outcome : scenario.outcomes) {
    out += "outcome " + outcome.id + " =";
    for (const std::string& rid : outcome.results) out += " " + rid;
    out += "\n";
  }
  return out;
}

enum class ReportFormat { Table, Machine };

struct ReportOptions {
  ReportFormat format = ReportFormat::Table;
  bool decimals = false;  // table format only; the machine format stays exact
};

namespace detail {

inline std::string fraction_pair(const Rational& value) {
  return "{" + value.numerator().str() + "," + value.denominator().str() + "}";
}

inline std::string decimal5(const Rational& value) {
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, value.to_double(),
                    std::chars_format::fixed, 5);
  assert(ec == std::errc{});
  return std::string(buffer, ptr);
}

inline std::string layout_columns(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += row[c];
      if (c + 1 < row.size()) line.append(widths[c] - row[c].size(), ' ');
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace detail

/// Text form of an OutcomeTable. The table format aligns human-readable
/// columns of exact fractions (optionally plus 5-digit decimals). The
/// machine format is a stable tree encoding with every probability as a
/// {numerator,denominator} pair — byte-identical across runs and platforms,
/// never decimal.
inline std::string render_report(const OutcomeTable& table, ReportOptions options = {}) {
  if (options.format == ReportFormat::Machine) {
    std::string out = "report {\n";
    out += "  scenario " + table.scenario + "\n";
    out += "  z " + detail::fraction_pair(table.z) + "\n";
    out += "  outcome_probs {\n";
    for (const OutcomeProb& entry : table.outcome_probs) {
      out += "    " + entry.outcome + " " + detail::fraction_pair(entry.p) + "\n";
    }
    out += "  }\n";
    out += "  result_given_outcome {\n";
    for (const ResultGivenOutcome& entry : table.result_given_outcome) {
      out += "    " + entry.result + " " + entry.outcome + " " +
             detail::fraction_pair(entry.p) + "\n";
    }
    out += "  }\n";
    out += "  result_given_situation {\n";
    for (const ResultGivenSituation& entry : table.result_given_situation) {
      out += "    " + entry.situation + " " + entry.result + " " +
             detail::fraction_pair(entry.p) + "\n";
    }
    out += "  }\n";
    out += "}\n";
    return out;
  }

  std::string out = "scenario " + table.scenario + "\n\n";
  {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"outcome", "p"};
    if (options.decimals) header.push_back("~p");
    rows.push_back(std::move(header));
    for (const OutcomeProb& entry : table.outcome_probs) {
      std::vector<std::string> row = {entry.outcome, entry.p.to_string()};
      if (options.decimals) row.push_back(detail::decimal5(entry.p));
      rows.push_back(std::move(row));
    }
    out += detail::layout_columns(rows) + "\n";
  }
  {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"result", "p(r|o)", "outcome", "situation",
                                       "p(r|i)"};
    if (options.decimals) {
      header = {"result", "p(r|o)", "~p(r|o)", "outcome", "situation", "p(r|i)",
                "~p(r|i)"};
    }
    rows.push_back(std::move(header));
    auto situation_entry = [&](const std::string& result) {
      for (const ResultGivenSituation& entry : table.result_given_situation) {
        if (entry.result == result) return entry;
      }
      return ResultGivenSituation{"?", result, Rational(0)};
    };
    std::set<std::string> listed;
    for (const ResultGivenOutcome& entry : table.result_given_outcome) {
      listed.insert(entry.result);
      const ResultGivenSituation rgs = situation_entry(entry.result);
      std::vector<std::string> row;
      if (options.decimals) {
        row = {entry.result,   entry.p.to_string(), detail::decimal5(entry.p),
               entry.outcome,  rgs.situation,       rgs.p.to_string(),
               detail::decimal5(rgs.p)};
      } else {
        row = {entry.result, entry.p.to_string(), entry.outcome, rgs.situation,
               rgs.p.to_string()};
      }
      rows.push_back(std::move(row));
    }
    for (const ResultGivenSituation& entry : table.result_given_situation) {
      if (listed.count(entry.result)) continue;
      std::vector<std::string> row;
      if (options.decimals) {
        row = {entry.result, "-", "-", "-", entry.situation, entry.p.to_string(),
               detail::decimal5(entry.p)};
      } else {
        row = {entry.result, "-", "-", entry.situation, entry.p.to_string()};
      }
      rows.push_back(std::move(row));
    }
    out += detail::layout_columns(rows) + "\n";
  }
  out += "Z = " + table.z.to_string();
  if (options.decimals) out += "  ~" + detail::decimal5(table.z);
  out += "\n";
  return out;
}

}  // namespace genprob
