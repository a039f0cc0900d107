#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace genprob {

/// A coin decides between survival and a deadly split: on one face the
/// observer lives on unchanged, on the other the machine replaces them with
/// two identical copies. Three results of one 3-bit situation, grouped into
/// two outcomes; the copies tilt the odds to 2/3 despite the fair coin.
inline constexpr std::string_view kReplicatorScenario = R"(format 1
scenario replicator
# One observer steps into the machine.
prestates m

# A single situation covers the whole experiment; its shortest generator
# takes 3 bits. Two results are indistinguishable copies after a fatal
# coin flip, the third is plain survival.
situation s bits 3
  result cat-dead-1 prestate m
  result cat-dead-2 prestate m
  result cat-alive prestate m

outcome cat-dead = cat-dead-1 cat-dead-2
outcome cat-alive = cat-alive
)";

/// The classic week-long sleep experiment: a fair coin, one waking on
/// heads, two indistinguishable wakings on tails. Each waking continues a
/// distinct prestate, so no branch factor arises and heads keeps
/// probability 1/2 — while each individual tails waking gets 1/4.
inline constexpr std::string_view kSleepingBeautyScenario = R"(format 1
scenario sleeping-beauty
# Three possible wakings, each its own pre-observation state.
prestates H_Mon T_Mon T_Tue

situation H bits 3
  result H_Mon prestate H_Mon

situation T bits 3
  result T_Mon prestate T_Mon
  result T_Tue prestate T_Tue

outcome H = H_Mon
outcome T = T_Mon T_Tue
)";

inline std::vector<std::string_view> example_names() {
  return {"replicator", "sleeping-beauty"};
}

inline std::optional<std::string_view> example_text(std::string_view name) {
  if (name == "replicator") return kReplicatorScenario;
  if (name == "sleeping-beauty") return kSleepingBeautyScenario;
  return std::nullopt;
}

}  // namespace genprob
