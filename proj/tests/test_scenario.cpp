#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <genprob/scenario.hpp>

using namespace genprob;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace {

Scenario replicator(long long bits = 3) {
  return Scenario{
      "replicator",
      {"m"},
      {{"s",
        Rational(bits),
        {{"cat-dead-1", "m"}, {"cat-dead-2", "m"}, {"cat-alive", "m"}}}},
      {{"cat-dead", {"cat-dead-1", "cat-dead-2"}}, {"cat-alive", {"cat-alive"}}}};
}

Scenario sleeping_beauty(long long bits = 3) {
  return Scenario{"sleeping-beauty",
                  {"H_Mon", "T_Mon", "T_Tue"},
                  {{"H", Rational(bits), {{"H_Mon", "H_Mon"}}},
                   {"T", Rational(bits), {{"T_Mon", "T_Mon"}, {"T_Tue", "T_Tue"}}}},
                  {{"H", {"H_Mon"}}, {"T", {"T_Mon", "T_Tue"}}}};
}

bool has_violation(const std::vector<Violation>& violations, ViolationCode code,
                   std::string_view subject) {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
    return v.code == code && v.subject == subject;
  });
}

}  // namespace

TEST_CASE("a replicated observer weighs the copied branch by its copy count") {
  const Scenario scenario = replicator();
  REQUIRE(scenario_ok(validate_scenario(scenario)));

  const std::vector<Outcome> outcomes = resolve_outcomes(scenario);
  REQUIRE(outcomes.size() == 2);
  CHECK(outcomes[0] == Outcome{"cat-dead",
                               {"cat-dead-1", "cat-dead-2"},
                               "s",
                               Rational(3),
                               2,
                               1,
                               Rational(2)});
  CHECK(outcomes[1] == Outcome{"cat-alive", {"cat-alive"}, "s", Rational(3), 1, 1,
                               Rational(1)});

  const OutcomeTable table = outcome_probabilities(scenario);
  CHECK(table.scenario == "replicator");
  CHECK(table.z == Rational(3));
  CHECK(table.outcome_probs ==
        std::vector<OutcomeProb>{{"cat-dead", Rational(2, 3)},
                                 {"cat-alive", Rational(1, 3)}});
  CHECK(table.result_given_outcome ==
        std::vector<ResultGivenOutcome>{{"cat-dead-1", "cat-dead", Rational(1, 3)},
                                        {"cat-dead-2", "cat-dead", Rational(1, 3)},
                                        {"cat-alive", "cat-alive", Rational(1, 3)}});
  CHECK(table.result_given_situation ==
        std::vector<ResultGivenSituation>{{"s", "cat-dead-1", Rational(1, 3)},
                                          {"s", "cat-dead-2", Rational(1, 3)},
                                          {"s", "cat-alive", Rational(1, 3)}});
}

TEST_CASE("the two-awakening coin scenario splits evenly between outcomes") {
  const Scenario scenario = sleeping_beauty();
  REQUIRE(scenario_ok(validate_scenario(scenario)));

  const std::vector<Outcome> outcomes = resolve_outcomes(scenario);
  REQUIRE(outcomes.size() == 2);
  CHECK(outcomes[0] ==
        Outcome{"H", {"H_Mon"}, "H", Rational(3), 1, 1, Rational(1)});
  CHECK(outcomes[1] == Outcome{"T", {"T_Mon", "T_Tue"}, "T", Rational(3), 2, 2,
                               Rational(1)});

  const OutcomeTable table = outcome_probabilities(scenario);
  CHECK(table.z == Rational(2));
  CHECK(table.outcome_probs == std::vector<OutcomeProb>{{"H", Rational(1, 2)},
                                                        {"T", Rational(1, 2)}});
  CHECK(table.result_given_outcome ==
        std::vector<ResultGivenOutcome>{{"H_Mon", "H", Rational(1, 2)},
                                        {"T_Mon", "T", Rational(1, 4)},
                                        {"T_Tue", "T", Rational(1, 4)}});
  CHECK(table.result_given_situation ==
        std::vector<ResultGivenSituation>{{"H", "H_Mon", Rational(1)},
                                          {"T", "T_Mon", Rational(1, 2)},
                                          {"T", "T_Tue", Rational(1, 2)}});
}

TEST_CASE("conditioning on the situation spreads mass over its results only") {
  const Scenario scenario = sleeping_beauty();
  CHECK(situation_result_probability(scenario, "H", "H_Mon") == Rational(1));
  CHECK(situation_result_probability(scenario, "T", "T_Mon") == Rational(1, 2));
  CHECK(situation_result_probability(scenario, "T", "T_Tue") == Rational(1, 2));

  CHECK_THROWS_AS(situation_result_probability(scenario, "H", "T_Mon"), CalculusError);
  CHECK_THROWS_WITH(situation_result_probability(scenario, "H", "T_Mon"),
                    StartsWith("RESULT_NOT_IN_SITUATION:"));
  CHECK_THROWS_AS(situation_result_probability(scenario, "week", "H_Mon"),
                  CalculusError);
  CHECK_THROWS_WITH(situation_result_probability(scenario, "week", "H_Mon"),
                    StartsWith("UNKNOWN_SITUATION:"));
}

TEST_CASE("validation flags every structural defect with its code") {
  SECTION("nothing declared") {
    const Scenario bare{"bare", {}, {}, {}};
    const auto violations = validate_scenario(bare);
    CHECK(has_violation(violations, ViolationCode::EmptyPrestates, "bare"));
    CHECK(has_violation(violations, ViolationCode::NoSituations, "bare"));
    CHECK_FALSE(scenario_ok(violations));
    CHECK_THROWS_AS(resolve_outcomes(bare), std::invalid_argument);
    CHECK_THROWS_AS(outcome_probabilities(bare), std::invalid_argument);
  }

  SECTION("duplicates of every kind") {
    Scenario scenario{"dups",
                      {"m", "m"},
                      {{"s", Rational(3), {{"r", "m"}, {"r", "m"}}},
                       {"s", Rational(3), {{"q", "m"}}}},
                      {{"o", {"r"}}, {"o", {"q"}}}};
    const auto violations = validate_scenario(scenario);
    CHECK(has_violation(violations, ViolationCode::DuplicateId, "m"));
    CHECK(has_violation(violations, ViolationCode::DuplicateId, "r"));
    CHECK(has_violation(violations, ViolationCode::DuplicateId, "s"));
    CHECK(has_violation(violations, ViolationCode::DuplicateId, "o"));
    CHECK_FALSE(scenario_ok(violations));
  }

  SECTION("missing pieces and bad references") {
    Scenario scenario{"holes",
                      {"m"},
                      {{"s", Rational(0), {{"r1", "m"}, {"r2", "ghost"}}},
                       {"empty", Rational(3), {}}},
                      {{"o1", {"r1", "missing"}}, {"o2", {"r1"}}, {"o3", {}}}};
    const auto violations = validate_scenario(scenario);
    CHECK(has_violation(violations, ViolationCode::NonPositiveEntropy, "s"));
    CHECK(has_violation(violations, ViolationCode::UnknownPrestate, "ghost"));
    CHECK(has_violation(violations, ViolationCode::EmptyResults, "empty"));
    CHECK(has_violation(violations, ViolationCode::EmptyResults, "o3"));
    // r1 is claimed twice, "missing" was never declared, r2 is never covered.
    CHECK(has_violation(violations, ViolationCode::NonTotalPartition, "missing"));
    CHECK(has_violation(violations, ViolationCode::NonTotalPartition, "r1"));
    CHECK(has_violation(violations, ViolationCode::NonTotalPartition, "r2"));
    CHECK_FALSE(scenario_ok(violations));
  }

  SECTION("a valid scenario reports nothing") {
    CHECK(validate_scenario(replicator()).empty());
    CHECK(validate_scenario(sleeping_beauty()).empty());
  }
}

TEST_CASE("violation codes render as stable machine-readable names") {
  CHECK(std::string_view(violation_code_name(ViolationCode::NonTotalPartition)) ==
        "NON_TOTAL_PARTITION");
  CHECK(std::string_view(violation_code_name(ViolationCode::UnknownPrestate)) ==
        "UNKNOWN_PRESTATE");
  CHECK(std::string_view(violation_code_name(ViolationCode::DuplicateId)) ==
        "DUPLICATE_ID");
  CHECK(std::string_view(violation_code_name(ViolationCode::EmptyResults)) ==
        "EMPTY_RESULTS");
  CHECK(std::string_view(violation_code_name(ViolationCode::EmptyPrestates)) ==
        "EMPTY_PRESTATES");
  CHECK(std::string_view(violation_code_name(ViolationCode::NoSituations)) ==
        "NO_SITUATIONS");
  CHECK(std::string_view(violation_code_name(ViolationCode::NonPositiveEntropy)) ==
        "NON_POSITIVE_ENTROPY");
  CHECK(std::string_view(violation_code_name(ViolationCode::OutcomeSpansSituations)) ==
        "OUTCOME_SPANS_SITUATIONS");
}

TEST_CASE("an outcome spanning situations warns and compresses via the cheapest") {
  const Scenario scenario{"span",
                          {"a", "b"},
                          {{"s1", Rational(3), {{"r1", "a"}}},
                           {"s2", Rational(4), {{"r2", "b"}, {"r3", "b"}}}},
                          {{"o1", {"r1", "r2"}}, {"o2", {"r3"}}}};
  const auto violations = validate_scenario(scenario);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].code == ViolationCode::OutcomeSpansSituations);
  CHECK(violations[0].subject == "o1");
  CHECK(violations[0].warning);
  CHECK(scenario_ok(violations));  // warnings do not invalidate

  const std::vector<Outcome> outcomes = resolve_outcomes(scenario);
  CHECK(outcomes[0].compression_situation == "s1");  // 3 bits beats 4
  CHECK(outcomes[0].entropy_bits == Rational(3));
  CHECK(outcomes[0].n_compression == 1);  // only r1 lives in s1
  CHECK(outcomes[1].compression_situation == "s2");

  // Weights 1 * 2^0 and 1 * 2^-1.
  const OutcomeTable table = outcome_probabilities(scenario);
  CHECK(table.z == Rational(3, 2));
  CHECK(table.outcome_probs == std::vector<OutcomeProb>{{"o1", Rational(2, 3)},
                                                        {"o2", Rational(1, 3)}});
}

TEST_CASE("equal-entropy compression candidates tie-break by situation id") {
  const Scenario scenario{"tie",
                          {"m"},
                          {{"zz", Rational(5), {{"r1", "m"}}},
                           {"aa", Rational(5), {{"r2", "m"}}}},
                          {{"o", {"r1", "r2"}}}};
  const std::vector<Outcome> outcomes = resolve_outcomes(scenario);
  REQUIRE(outcomes.size() == 1);
  CHECK(outcomes[0].compression_situation == "aa");
  CHECK(outcomes[0].n_compression == 1);
}

TEST_CASE("an extra bit of situation entropy halves the outcome weight") {
  const Scenario scenario{"coin-cost",
                          {"g"},
                          {{"s1", Rational(3), {{"r1", "g"}}},
                           {"s2", Rational(4), {{"r2", "g"}}}},
                          {{"o1", {"r1"}}, {"o2", {"r2"}}}};
  const OutcomeTable table = outcome_probabilities(scenario);
  CHECK(table.outcome_probs == std::vector<OutcomeProb>{{"o1", Rational(2, 3)},
                                                        {"o2", Rational(1, 3)}});
}

TEST_CASE("probabilities depend only on entropy differences, not absolute bits") {
  const OutcomeTable replicator_base = outcome_probabilities(replicator(3));
  CHECK(outcome_probabilities(replicator(10)) == replicator_base);
  CHECK(outcome_probabilities(replicator(17)) == replicator_base);

  const OutcomeTable beauty_base = outcome_probabilities(sleeping_beauty(3));
  CHECK(outcome_probabilities(sleeping_beauty(10)) == beauty_base);
  CHECK(outcome_probabilities(sleeping_beauty(17)) == beauty_base);
}

TEST_CASE("fractional entropies are rejected by the exact calculus") {
  Scenario scenario = replicator();
  scenario.situations[0].entropy_bits = Rational(7, 2);
  CHECK(scenario_ok(validate_scenario(scenario)));       // structurally fine
  CHECK_NOTHROW(resolve_outcomes(scenario));             // resolution is exact anyway
  CHECK_THROWS_AS(outcome_probabilities(scenario), CalculusError);
  CHECK_THROWS_WITH(outcome_probabilities(scenario),
                    StartsWith("NON_INTEGRAL_ENTROPY: situation 's'"));
  CHECK_THROWS_WITH(outcome_probabilities(scenario), ContainsSubstring("7/2"));
}

TEST_CASE("within one situation, outcome mass is proportional to copy count") {
  // Eight equally-weighted copies partitioned 3 / 1 / 4.
  Scenario scenario{"partition", {"m"}, {{"s", Rational(3), {}}}, {}};
  for (int i = 1; i <= 8; ++i) {
    scenario.situations[0].results.push_back({"r" + std::to_string(i), "m"});
  }
  scenario.outcomes = {{"first", {"r1", "r2", "r3"}},
                       {"second", {"r4"}},
                       {"third", {"r5", "r6", "r7", "r8"}}};
  const OutcomeTable table = outcome_probabilities(scenario);
  CHECK(table.outcome_probs == std::vector<OutcomeProb>{{"first", Rational(3, 8)},
                                                        {"second", Rational(1, 8)},
                                                        {"third", Rational(1, 2)}});
  for (const ResultGivenOutcome& rgo : table.result_given_outcome) {
    CHECK(rgo.p == Rational(1, 8));
  }
}

TEST_CASE("simulation is reproducible and tracks the exact probabilities") {
  const Scenario scenario = sleeping_beauty();

  const SimulationResult once = monte_carlo_check(scenario, 20000, 42);
  const SimulationResult again = monte_carlo_check(scenario, 20000, 42);
  CHECK(once.counts == again.counts);

  long long total = 0;
  for (const auto& [id, count] : once.counts) total += count;
  CHECK(total == once.samples);
  REQUIRE(once.counts.size() == 3);
  CHECK(once.counts[0].first == "H_Mon");
  CHECK(once.counts[1].first == "T_Mon");
  CHECK(once.counts[2].first == "T_Tue");

  const double h_mon = once.frequency("H_Mon").to_double();
  const double t_mon = once.frequency("T_Mon").to_double();
  const double t_tue = once.frequency("T_Tue").to_double();
  CHECK(std::abs(h_mon - 0.5) < 0.02);
  CHECK(std::abs(t_mon - 0.25) < 0.02);
  CHECK(std::abs(t_tue - 0.25) < 0.02);

  CHECK_THROWS_AS(once.frequency("T_Wed"), std::out_of_range);

  const SimulationResult tiny = monte_carlo_check(scenario, 1, 7);
  long long tiny_total = 0;
  for (const auto& [id, count] : tiny.counts) tiny_total += count;
  CHECK(tiny_total == 1);
}
