#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace genprob {

/// One way an observation can land, declared inside a situation: the result
/// id plus the pre-observation state that leads to it.
struct ResultDecl {
  std::string id;
  std::string prestate;
  bool operator==(const ResultDecl&) const = default;
};

/// A complete way the observed part of the world can be: an entropy (the
/// length in bits of its shortest generator) and the results it offers.
/// Entropies must be positive integers for the calculus to stay exact;
/// non-integers are representable here and rejected at computation time.
struct Situation {
  std::string id;
  Rational entropy_bits;
  std::vector<ResultDecl> results;
  bool operator==(const Situation&) const = default;
};

/// An outcome groups the results an observer cannot tell apart. The
/// outcomes must partition the scenario's results.
struct OutcomeDecl {
  std::string id;
  std::vector<std::string> results;
  bool operator==(const OutcomeDecl&) const = default;
};

struct Scenario {
  std::string id;
  std::vector<std::string> prestates;
  std::vector<Situation> situations;
  std::vector<OutcomeDecl> outcomes;
  bool operator==(const Scenario&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationCode {
  NonTotalPartition,       // outcomes must cover every result exactly once
  UnknownPrestate,         // a result names a prestate that was never declared
  DuplicateId,             // repeated id within one kind of entity
  EmptyResults,            // a situation or outcome with no results
  EmptyPrestates,          // no prestates declared
  NoSituations,            // no situations declared
  NonPositiveEntropy,      // situation entropy below 1 bit
  OutcomeSpansSituations,  // warning: one outcome mixes several situations
};

inline constexpr const char* violation_code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::NonTotalPartition: return "NON_TOTAL_PARTITION";
    case ViolationCode::UnknownPrestate: return "UNKNOWN_PRESTATE";
    case ViolationCode::DuplicateId: return "DUPLICATE_ID";
    case ViolationCode::EmptyResults: return "EMPTY_RESULTS";
    case ViolationCode::EmptyPrestates: return "EMPTY_PRESTATES";
    case ViolationCode::NoSituations: return "NO_SITUATIONS";
    case ViolationCode::NonPositiveEntropy: return "NON_POSITIVE_ENTROPY";
    case ViolationCode::OutcomeSpansSituations: return "OUTCOME_SPANS_SITUATIONS";
  }
  return "?";
}

struct Violation {
  ViolationCode code;
  std::string subject;  // the offending id or label
  std::string message;
  bool warning = false;
  bool operator==(const Violation&) const = default;
};

/// Structural checks, reported in declaration order. Ids are scoped per
/// kind: a situation and an outcome may legitimately share a name, and a
/// result id may equal a prestate label.
inline std::vector<Violation> validate_scenario(const Scenario& scenario) {
  std::vector<Violation> violations;
  auto report = [&](ViolationCode code, std::string subject, std::string message,
                    bool warning = false) {
    violations.push_back({code, std::move(subject), std::move(message), warning});
  };

  std::set<std::string> prestates;
  if (scenario.prestates.empty()) {
    report(ViolationCode::EmptyPrestates, scenario.id, "scenario declares no prestates");
  }
  for (const std::string& label : scenario.prestates) {
    if (!prestates.insert(label).second) {
      report(ViolationCode::DuplicateId, label, "duplicate prestate '" + label + "'");
    }
  }

  if (scenario.situations.empty()) {
    report(ViolationCode::NoSituations, scenario.id, "scenario declares no situations");
  }
  std::set<std::string> situation_ids;
  std::set<std::string> result_ids;
  std::vector<std::string> result_order;           // declaration order
  std::vector<std::string> result_situation;       // parallel: owning situation
  for (const Situation& situation : scenario.situations) {
    if (!situation_ids.insert(situation.id).second) {
      report(ViolationCode::DuplicateId, situation.id,
             "duplicate situation '" + situation.id + "'");
    }
    if (situation.entropy_bits <= Rational(0)) {
      report(ViolationCode::NonPositiveEntropy, situation.id,
             "situation '" + situation.id + "' has entropy " +
                 situation.entropy_bits.to_string() + ", which is not positive");
    }
    if (situation.results.empty()) {
      report(ViolationCode::EmptyResults, situation.id,
             "situation '" + situation.id + "' has no results");
    }
    for (const ResultDecl& result : situation.results) {
      if (!result_ids.insert(result.id).second) {
        report(ViolationCode::DuplicateId, result.id,
               "duplicate result '" + result.id + "'");
      } else {
        result_order.push_back(result.id);
        result_situation.push_back(situation.id);
      }
      if (!prestates.count(result.prestate)) {
        report(ViolationCode::UnknownPrestate, result.prestate,
               "result '" + result.id + "' names undeclared prestate '" +
                   result.prestate + "'");
      }
    }
  }

  std::set<std::string> outcome_ids;
  std::set<std::string> covered;
  for (const OutcomeDecl& outcome : scenario.outcomes) {
    if (!outcome_ids.insert(outcome.id).second) {
      report(ViolationCode::DuplicateId, outcome.id,
             "duplicate outcome '" + outcome.id + "'");
    }
    if (outcome.results.empty()) {
      report(ViolationCode::EmptyResults, outcome.id,
             "outcome '" + outcome.id + "' has no results");
    }
    std::set<std::string> span;
    for (const std::string& rid : outcome.results) {
      if (!result_ids.count(rid)) {
        report(ViolationCode::NonTotalPartition, rid,
               "outcome '" + outcome.id + "' references unknown result '" + rid + "'");
        continue;
      }
      if (!covered.insert(rid).second) {
        report(ViolationCode::NonTotalPartition, rid,
               "result '" + rid + "' appears in more than one outcome");
      }
      for (std::size_t i = 0; i < result_order.size(); ++i) {
        if (result_order[i] == rid) span.insert(result_situation[i]);
      }
    }
    if (span.size() > 1) {
      std::string joined;
      for (const std::string& sid : span) {
        if (!joined.empty()) joined += ", ";
        joined += sid;
      }
      report(ViolationCode::OutcomeSpansSituations, outcome.id,
             "outcome '" + outcome.id + "' mixes results from situations " + joined,
             /*warning=*/true);
    }
  }
  for (const std::string& rid : result_order) {
    if (!covered.count(rid)) {
      report(ViolationCode::NonTotalPartition, rid,
             "result '" + rid + "' is not covered by any outcome");
    }
  }
  return violations;
}

/// True when the violation list contains no errors (warnings are fine).
inline bool scenario_ok(const std::vector<Violation>& violations) {
  return std::none_of(violations.begin(), violations.end(),
                      [](const Violation& v) { return !v.warning; });
}

namespace detail {
inline void require_valid(const Scenario& scenario) {
  for (const Violation& v : validate_scenario(scenario)) {
    if (!v.warning) {
      throw std::invalid_argument("invalid scenario: " + v.message);
    }
  }
}
}  // namespace detail

// ---------------------------------------------------------------------------
// The calculus

/// Raised for inputs that are structurally fine but outside what the exact
/// calculus can evaluate.
struct CalculusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An outcome with its derived quantities. The cheapest situation offering
/// any of the outcome's results (ties broken by situation id) acts as the
/// outcome's generator: the outcome's entropy is that situation's entropy,
/// n_compression counts the outcome's results inside it, n_generators the
/// distinct prestates behind those results, and branch_factor their ratio —
/// how many indistinguishable copies each prestate fans out into.
struct Outcome {
  std::string id;
  std::vector<std::string> results;  // declaration order
  std::string compression_situation;
  Rational entropy_bits;
  long long n_compression = 0;
  long long n_generators = 0;
  Rational branch_factor;
  bool operator==(const Outcome&) const = default;
};

inline std::vector<Outcome> resolve_outcomes(const Scenario& scenario) {
  detail::require_valid(scenario);
  std::vector<Outcome> outcomes;
  outcomes.reserve(scenario.outcomes.size());
  for (const OutcomeDecl& decl : scenario.outcomes) {
    Outcome outcome;
    outcome.id = decl.id;
    outcome.results = decl.results;

    const Situation* best = nullptr;
    for (const Situation& situation : scenario.situations) {
      const bool offers_any =
          std::any_of(situation.results.begin(), situation.results.end(),
                      [&](const ResultDecl& r) {
                        return std::find(decl.results.begin(), decl.results.end(),
                                         r.id) != decl.results.end();
                      });
      if (!offers_any) continue;
      if (!best || situation.entropy_bits < best->entropy_bits ||
          (situation.entropy_bits == best->entropy_bits && situation.id < best->id)) {
        best = &situation;
      }
    }
    assert(best != nullptr);  // outcomes cover only declared results
    outcome.compression_situation = best->id;
    outcome.entropy_bits = best->entropy_bits;

    std::set<std::string> generators;
    for (const ResultDecl& result : best->results) {
      if (std::find(decl.results.begin(), decl.results.end(), result.id) ==
          decl.results.end()) {
        continue;
      }
      ++outcome.n_compression;
      generators.insert(result.prestate);
    }
    outcome.n_generators = static_cast<long long>(generators.size());
    outcome.branch_factor = Rational(outcome.n_compression) / Rational(outcome.n_generators);
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

/// p(result | situation): results of one situation are equally likely.
inline Rational situation_result_probability(const Scenario& scenario,
                                             std::string_view situation_id,
                                             std::string_view result_id) {
  for (const Situation& situation : scenario.situations) {
    if (situation.id != situation_id) continue;
    for (const ResultDecl& result : situation.results) {
      if (result.id == result_id) {
        return Rational(1) / Rational(static_cast<long long>(situation.results.size()));
      }
    }
    throw CalculusError("RESULT_NOT_IN_SITUATION: result '" + std::string(result_id) +
                        "' is not a result of situation '" + std::string(situation_id) +
                        "'");
  }
  throw CalculusError("UNKNOWN_SITUATION: '" + std::string(situation_id) + "'");
}

struct OutcomeProb {
  std::string outcome;
  Rational p;
  bool operator==(const OutcomeProb&) const = default;
};

struct ResultGivenOutcome {
  std::string result;
  std::string outcome;
  Rational p;
  bool operator==(const ResultGivenOutcome&) const = default;
};

struct ResultGivenSituation {
  std::string situation;
  std::string result;
  Rational p;
  bool operator==(const ResultGivenSituation&) const = default;
};

/// Every probability the calculus assigns, in declaration order throughout.
/// The normalizer z sums branch_factor * 2^-(H - H_min) over outcomes, with
/// entropies reduced by the scenario-wide minimum H_min: probabilities are
/// untouched by the reduction, and the table comes out identical when every
/// entropy shifts by the same constant.
struct OutcomeTable {
  std::string scenario;
  Rational z;
  std::vector<OutcomeProb> outcome_probs;
  std::vector<ResultGivenOutcome> result_given_outcome;
  std::vector<ResultGivenSituation> result_given_situation;
  bool operator==(const OutcomeTable&) const = default;
};

inline OutcomeTable outcome_probabilities(const Scenario& scenario) {
  detail::require_valid(scenario);
  for (const Situation& situation : scenario.situations) {
    if (!situation.entropy_bits.is_integer()) {
      throw CalculusError("NON_INTEGRAL_ENTROPY: situation '" + situation.id +
                          "' has entropy " + situation.entropy_bits.to_string() +
                          " bits; the exact calculus needs whole bits");
    }
  }
  const std::vector<Outcome> outcomes = resolve_outcomes(scenario);

  Rational h_min = outcomes.front().entropy_bits;
  for (const Outcome& outcome : outcomes) {
    h_min = std::min(h_min, outcome.entropy_bits);
  }
  std::vector<Rational> weights;
  weights.reserve(outcomes.size());
  OutcomeTable table;
  table.scenario = scenario.id;
  for (const Outcome& outcome : outcomes) {
    const Rational reduced = outcome.entropy_bits - h_min;  // integral, >= 0
    const long shift = reduced.numerator().convert_to<long>();
    const Rational weight = outcome.branch_factor * Rational::pow2(-shift);
    weights.push_back(weight);
    table.z += weight;
  }
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    table.outcome_probs.push_back({outcomes[k].id, weights[k] / table.z});
  }

  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const Outcome& outcome = outcomes[k];
    const Rational share =
        table.outcome_probs[k].p / Rational(outcome.n_compression);
    for (const Situation& situation : scenario.situations) {
      if (situation.id != outcome.compression_situation) continue;
      for (const ResultDecl& result : situation.results) {
        if (std::find(outcome.results.begin(), outcome.results.end(), result.id) !=
            outcome.results.end()) {
          table.result_given_outcome.push_back({result.id, outcome.id, share});
        }
      }
    }
  }

  for (const Situation& situation : scenario.situations) {
    const Rational uniform =
        Rational(1) / Rational(static_cast<long long>(situation.results.size()));
    for (const ResultDecl& result : situation.results) {
      table.result_given_situation.push_back({situation.id, result.id, uniform});
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Simulation

/// Empirical frequencies from sampling the two-stage generative process:
/// draw an outcome by its probability, then one of its indistinguishable
/// copies uniformly. Counts cover the compression copies in table order.
struct SimulationResult {
  long long samples = 0;
  std::vector<std::pair<std::string, long long>> counts;

  Rational frequency(std::string_view result_id) const {
    for (const auto& [id, n] : counts) {
      if (id == result_id) return Rational(n) / Rational(samples);
    }
    throw std::out_of_range("no sampled result named '" + std::string(result_id) + "'");
  }
};

/// Deterministic for a given seed on every platform: the generator is the
/// standard-specified mt19937_64 and both draws below avoid
/// implementation-defined distributions. Outcome selection compares the raw
/// 64-bit draw against exact cumulative thresholds ceil(cum * 2^64).
inline SimulationResult monte_carlo_check(const Scenario& scenario, long long samples,
                                          std::uint64_t seed) {
  assert(samples >= 1);
  const OutcomeTable table = outcome_probabilities(scenario);
  const std::vector<Outcome> outcomes = resolve_outcomes(scenario);

  std::vector<BigInt> bounds;
  bounds.reserve(outcomes.size());
  Rational cumulative;
  for (const OutcomeProb& op : table.outcome_probs) {
    cumulative += op.p;
    const BigInt scaled = cumulative.numerator() << 64;
    bounds.push_back((scaled + cumulative.denominator() - 1) / cumulative.denominator());
  }

  SimulationResult sim;
  sim.samples = samples;
  std::vector<std::size_t> first_copy(outcomes.size(), 0);
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    first_copy[k] = sim.counts.size();
    for (const ResultGivenOutcome& rgo : table.result_given_outcome) {
      if (rgo.outcome == outcomes[k].id) sim.counts.emplace_back(rgo.result, 0);
    }
  }

  std::mt19937_64 rng(seed);
  for (long long i = 0; i < samples; ++i) {
    const BigInt u = BigInt(static_cast<std::uint64_t>(rng()));
    std::size_t k = 0;
    while (k + 1 < bounds.size() && u >= bounds[k]) ++k;
    // Draw the copy selector unconditionally so the stream position never
    // depends on which outcome came up.
    const std::uint64_t v = rng();
    const auto copies = static_cast<std::uint64_t>(outcomes[k].n_compression);
    ++sim.counts[first_copy[k] + static_cast<std::size_t>(v % copies)].second;
  }
  return sim;
}

}  // namespace genprob
