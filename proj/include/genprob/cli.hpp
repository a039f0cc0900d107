#pragma once

#include <cstdint>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "enumerate.hpp"
#include "examples.hpp"
#include "machine.hpp"
#include "rational.hpp"
#include "scenario.hpp"
#include "scenario_io.hpp"

namespace genprob::cli {

namespace detail {

inline int eval_text(std::string_view text, const std::string& source,
                     const ParseOptions& parse_options, const ReportOptions& report_options,
                     std::ostream& out, std::ostream& err) {
  const ScenarioDocument doc = parse_scenario(text, parse_options);
  for (const Diagnostic& diagnostic : doc.diagnostics) {
    err << source << ":" << diagnostic.line << ":" << diagnostic.column << ": "
        << (diagnostic.severity == Severity::Error ? "error" : "warning") << ": "
        << diagnostic.message << "\n";
  }
  if (!doc.ok()) return 1;
  out << render_report(outcome_probabilities(doc.scenario), report_options);
  return 0;
}

inline int simulate_text(std::string_view text, const std::string& source,
                         const ParseOptions& parse_options,
                         const ReportOptions& report_options, long long samples,
                         std::uint64_t seed, std::ostream& out, std::ostream& err) {
  const ScenarioDocument doc = parse_scenario(text, parse_options);
  for (const Diagnostic& diagnostic : doc.diagnostics) {
    err << source << ":" << diagnostic.line << ":" << diagnostic.column << ": "
        << (diagnostic.severity == Severity::Error ? "error" : "warning") << ": "
        << diagnostic.message << "\n";
  }
  if (!doc.ok()) return 1;
  const OutcomeTable table = outcome_probabilities(doc.scenario);
  const SimulationResult sim = monte_carlo_check(doc.scenario, samples, seed);
  out << render_report(table, report_options);
  out << "\n";

  auto exact_probability = [&](const std::string& result) {
    for (const ResultGivenOutcome& entry : table.result_given_outcome) {
      if (entry.result == result) return entry.p;
    }
    return Rational(0);
  };
  if (report_options.format == ReportFormat::Machine) {
    out << "simulation {\n";
    out << "  samples " << samples << "\n";
    out << "  seed " << seed << "\n";
    out << "  results {\n";
    for (const auto& [result, count] : sim.counts) {
      out << "    " << result << " {" << count << "," << samples << "} exact "
          << genprob::detail::fraction_pair(exact_probability(result)) << "\n";
    }
    out << "  }\n";
    out << "}\n";
    return 0;
  }
  out << "simulation  samples=" << samples << "  seed=" << seed << "\n\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"result", "count", "exact", "empirical"});
  for (const auto& [result, count] : sim.counts) {
    rows.push_back({result, std::to_string(count), exact_probability(result).to_string(),
                    genprob::detail::decimal5(sim.frequency(result))});
  }
  out << genprob::detail::layout_columns(rows);
  return 0;
}

inline std::string quoted_target(std::string_view target) {
  return "\"" + std::string(target) + "\"";
}

}  // namespace detail

/// Runs the command line given in `args` (program name excluded), writing
/// reports to `out` and diagnostics to `err`. Returns the exit status:
/// 0 on success, 1 when diagnostics or lookup failures stop the work,
/// 2 on usage errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact generative-probability calculator over a tiny prefix-free "
               "machine language"};
  app.name("genprob");
  app.require_subcommand(1);

  int max_bits = 15;
  long fuel = 10'000;
  std::string format = "table";
  bool decimals = false;
  long long samples = 100'000;
  std::uint64_t seed = 1;
  std::string path;
  std::string target;
  std::string example;

  const auto add_max_bits = [&](CLI::App* cmd, const std::string& description) {
    cmd->add_option("--max-bits", max_bits, description)
        ->check(CLI::Range(3, 28))
        ->capture_default_str();
  };
  const auto add_fuel = [&](CLI::App* cmd) {
    cmd->add_option("--fuel", fuel, "Evaluation step budget per program")
        ->check(CLI::Range(1L, 1'000'000'000L))
        ->envname("GENPROB_FUEL")
        ->capture_default_str();
  };
  const auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"table", "machine"}))
        ->capture_default_str();
    cmd->add_flag("--decimals", decimals,
                  "Add approximate decimal columns to table output");
  };
  const auto add_target = [&](CLI::App* cmd) {
    cmd->add_option("target", target, "Output string over '0', '1' and '|'")
        ->required()
        ->check([](const std::string& value) -> std::string {
          for (char c : value) {
            if (c != '0' && c != '1' && c != kSep) {
              return "target may contain only '0', '1' and '|'";
            }
          }
          return {};
        });
  };

  CLI::App* cmd_eval = app.add_subcommand("eval", "Parse and evaluate a scenario file");
  cmd_eval->add_option("path", path, "Scenario file")->required()->check(CLI::ExistingFile);
  add_max_bits(cmd_eval, "Search cap when measuring enumerated situations");
  add_fuel(cmd_eval);
  add_format(cmd_eval);

  CLI::App* cmd_examples = app.add_subcommand("examples", "Evaluate a built-in scenario");
  cmd_examples->add_option("name", example, "replicator or sleeping-beauty")
      ->required()
      ->check(CLI::IsMember({"replicator", "sleeping-beauty"}));
  add_format(cmd_examples);

  CLI::App* cmd_enumerate =
      app.add_subcommand("enumerate", "List every valid program up to a size");
  add_max_bits(cmd_enumerate, "Largest program size in bits");

  CLI::App* cmd_prob = app.add_subcommand(
      "prob", "Lower-bound the generative probability of a target output");
  add_target(cmd_prob);
  add_max_bits(cmd_prob, "Largest program size in bits");
  add_fuel(cmd_prob);

  CLI::App* cmd_compress =
      app.add_subcommand("compress", "Find the shortest program generating a target");
  add_target(cmd_compress);
  add_max_bits(cmd_compress, "Largest program size in bits");
  add_fuel(cmd_compress);

  CLI::App* cmd_kraft =
      app.add_subcommand("kraft", "Total weight of all valid programs up to a size");
  add_max_bits(cmd_kraft, "Largest program size in bits");
  add_fuel(cmd_kraft);

  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "Exact table plus Monte Carlo frequencies for a scenario file");
  cmd_simulate->add_option("path", path, "Scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_simulate->add_option("--samples", samples, "Number of samples")
      ->check(CLI::Range(1LL, 1'000'000'000LL))
      ->capture_default_str();
  cmd_simulate->add_option("--seed", seed, "Random seed")->capture_default_str();
  add_max_bits(cmd_simulate, "Search cap when measuring enumerated situations");
  add_fuel(cmd_simulate);
  add_format(cmd_simulate);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("genprob");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.back()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    const auto parsed = app.get_subcommands();
    err << e.what() << "\n\n" << (parsed.empty() ? app.help() : parsed.back()->help());
    return 2;
  }

  const EvalLimit limit{fuel};
  ParseOptions parse_options;
  parse_options.limit = limit;
  parse_options.compression_max_bits = max_bits;
  ReportOptions report_options;
  report_options.format = format == "machine" ? ReportFormat::Machine : ReportFormat::Table;
  report_options.decimals = decimals;

  try {
    if (app.got_subcommand(cmd_eval) || app.got_subcommand(cmd_simulate)) {
      std::ifstream file(path, std::ios::binary);
      std::ostringstream buffer;
      buffer << file.rdbuf();
      if (!file) {
        err << "cannot read '" << path << "'\n";
        return 1;
      }
      if (app.got_subcommand(cmd_eval)) {
        return detail::eval_text(buffer.str(), path, parse_options, report_options, out,
                                 err);
      }
      return detail::simulate_text(buffer.str(), path, parse_options, report_options,
                                   samples, seed, out, err);
    }
    if (app.got_subcommand(cmd_examples)) {
      return detail::eval_text(*example_text(example), example, parse_options,
                               report_options, out, err);
    }
    if (app.got_subcommand(cmd_enumerate)) {
      for_each_valid(max_bits, [&](const Program& program) {
        out << program.bits << "  " << to_mnemonics(program) << "\n";
      });
      return 0;
    }
    if (app.got_subcommand(cmd_prob)) {
      const MassEstimate estimate = estimate_probability(target, max_bits, limit);
      out << "target " << detail::quoted_target(target) << "\n";
      out << "max_bits " << max_bits << "\n";
      out << "program_count " << estimate.program_count << "\n";
      out << "mass " << estimate.mass.to_string() << "\n";
      const auto compressed = optimal_compression(target, max_bits, limit);
      if (compressed) {
        out << "shortest " << to_mnemonics(compressed->program) << "\n";
        out << "entropy " << compressed->entropy_bits << "\n";
      } else {
        out << "shortest none\n";
      }
      return 0;
    }
    if (app.got_subcommand(cmd_compress)) {
      const auto compressed = optimal_compression(target, max_bits, limit);
      if (!compressed) {
        err << "no program of at most " << max_bits << " bits generates "
            << detail::quoted_target(target) << "\n";
        return 1;
      }
      out << "target " << detail::quoted_target(target) << "\n";
      out << "program " << to_mnemonics(compressed->program) << "\n";
      out << "bits " << compressed->program.bits << "\n";
      out << "entropy " << compressed->entropy_bits << "\n";
      return 0;
    }
    if (app.got_subcommand(cmd_kraft)) {
      const KraftReport report = kraft_report(max_bits, limit);
      out << "max_bits " << max_bits << "\n";
      out << "valid_programs " << report.valid_count << "\n";
      out << "halting_programs " << report.halting_count << "\n";
      out << "total_mass " << report.total_mass.to_string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable: a subcommand is required
}

}  // namespace genprob::cli
