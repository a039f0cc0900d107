#pragma once

#include <algorithm>
#include <cassert>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "machine.hpp"
#include "rational.hpp"

namespace genprob {

namespace detail {

template <typename Visitor>
bool visit_program(Visitor& visit, const Program& program) {
  if constexpr (std::is_void_v<std::invoke_result_t<Visitor&, const Program&>>) {
    visit(program);
    return true;
  } else {
    return static_cast<bool>(visit(program));
  }
}

inline Rational mass_from_length_counts(const std::vector<long long>& counts) {
  Rational mass;
  for (std::size_t length = 0; length < counts.size(); ++length) {
    if (counts[length] != 0) {
      mass += Rational(counts[length]) * Rational::pow2(-static_cast<long>(length));
    }
  }
  return mass;
}

}  // namespace detail

/// Calls `visit` once for every valid program of at most `max_bits` bits,
/// in nondecreasing bit length and lexicographic bit order within a length.
/// The Program reference is reused between calls; copy it to keep it.
/// A visitor may return void, or a bool where false stops the enumeration.
template <typename Visitor>
void for_each_valid(int max_bits, Visitor&& visitor) {
  auto& visit = visitor;
  if (max_bits < 3) return;

  // good[r]: some instruction sequence of exactly r bits ends the program
  // (unit ops are 3 bits, JZ is 7, the final HALT is 3).
  std::vector<char> good(static_cast<std::size_t>(max_bits) + 1, 0);
  for (int r = 3; r <= max_bits; ++r) {
    good[static_cast<std::size_t>(r)] =
        r == 3 || (r >= 6 && good[static_cast<std::size_t>(r - 3)]) ||
        (r >= 10 && good[static_cast<std::size_t>(r - 7)]);
  }

  Program scratch;
  auto push = [&](Instruction ins) {
    scratch.instructions.push_back(ins);
    const auto code = static_cast<unsigned>(ins.op);
    scratch.bits += (code & 4u) ? '1' : '0';
    scratch.bits += (code & 2u) ? '1' : '0';
    scratch.bits += (code & 1u) ? '1' : '0';
    if (ins.op == Op::Jz) {
      const auto pattern = static_cast<unsigned>(ins.offset) & 0xFu;
      scratch.bits += (pattern & 8u) ? '1' : '0';
      scratch.bits += (pattern & 4u) ? '1' : '0';
      scratch.bits += (pattern & 2u) ? '1' : '0';
      scratch.bits += (pattern & 1u) ? '1' : '0';
    }
  };
  auto pop = [&] {
    const Op op = scratch.instructions.back().op;
    scratch.instructions.pop_back();
    scratch.bits.resize(scratch.bits.size() - (op == Op::Jz ? 7 : 3));
  };

  // Opcodes are generated in ascending numeric order, which is exactly
  // lexicographic order of their encodings.
  auto gen = [&](auto&& self, int remaining) -> bool {
    if (remaining == 3) {
      push({Op::Halt, 0});
      const bool keep_going = detail::visit_program(visit, scratch);
      pop();
      return keep_going;
    }
    if (remaining >= 6 && good[static_cast<std::size_t>(remaining - 3)]) {
      for (int code = 1; code <= 6; ++code) {
        push({static_cast<Op>(code), 0});
        const bool keep_going = self(self, remaining - 3);
        pop();
        if (!keep_going) return false;
      }
    }
    if (remaining >= 10 && good[static_cast<std::size_t>(remaining - 7)]) {
      for (int pattern = 0; pattern < 16; ++pattern) {
        push({Op::Jz, pattern < 8 ? pattern : pattern - 16});
        const bool keep_going = self(self, remaining - 7);
        pop();
        if (!keep_going) return false;
      }
    }
    return true;
  };

  for (int length = 3; length <= max_bits; ++length) {
    if (!good[static_cast<std::size_t>(length)]) continue;
    if (!gen(gen, length)) return;
  }
}

/// Lower bound on the generative probability of `target`: the summed weight
/// 2^-|g| of every program g of at most `max_bits` bits that halts within
/// the limit with raw output exactly `target`.
struct MassEstimate {
  Rational mass;
  long long program_count = 0;
  bool operator==(const MassEstimate&) const = default;
};

inline MassEstimate estimate_probability(std::string_view target, int max_bits,
                                         EvalLimit limit = {}) {
  std::vector<long long> counts(static_cast<std::size_t>(std::max(max_bits, 0)) + 1, 0);
  long long total = 0;
  for_each_valid(max_bits, [&](const Program& program) {
    const Trace* trace = halted(evaluate(program, limit));
    if (trace && trace->raw_output == target) {
      ++counts[static_cast<std::size_t>(program.length_bits())];
      ++total;
    }
  });
  return {detail::mass_from_length_counts(counts), total};
}

/// The shortest program (ties broken by lexicographic bit order) of at most
/// `max_bits` bits whose raw output is `target`; its length is the measured
/// entropy of `target` in bits.
struct CompressionResult {
  Program program;
  int entropy_bits = 0;
  bool operator==(const CompressionResult&) const = default;
};

inline std::optional<CompressionResult> optimal_compression(std::string_view target,
                                                            int max_bits,
                                                            EvalLimit limit = {}) {
  std::optional<CompressionResult> best;
  for_each_valid(max_bits, [&](const Program& program) {
    const Trace* trace = halted(evaluate(program, limit));
    if (trace && trace->raw_output == target) {
      best = CompressionResult{program, program.length_bits()};
      return false;
    }
    return true;
  });
  return best;
}

/// Summed weight of every valid program of at most `max_bits` bits. The
/// prefix-free encoding keeps total_mass at or below 1 at every depth.
struct KraftReport {
  Rational total_mass;
  long long valid_count = 0;
  long long halting_count = 0;
  bool operator==(const KraftReport&) const = default;
};

inline KraftReport kraft_report(int max_bits, EvalLimit limit = {}) {
  std::vector<long long> counts(static_cast<std::size_t>(std::max(max_bits, 0)) + 1, 0);
  long long valid = 0;
  long long halting = 0;
  for_each_valid(max_bits, [&](const Program& program) {
    ++valid;
    ++counts[static_cast<std::size_t>(program.length_bits())];
    if (halted(evaluate(program, limit))) ++halting;
  });
  return {detail::mass_from_length_counts(counts), valid, halting};
}

/// estimate_probability split across worker threads. Programs fall into
/// buckets by their first `prefix_bits` bits (plus one bucket for programs
/// shorter than the prefix); each worker owns the buckets congruent to its
/// index, so every program is evaluated exactly once. Per-length hit counts
/// merge by integer addition, making the result identical to the sequential
/// scan regardless of scheduling.
inline MassEstimate estimate_probability_partitioned(std::string_view target, int max_bits,
                                                     int prefix_bits = 4,
                                                     EvalLimit limit = {}) {
  assert(prefix_bits >= 0 && prefix_bits <= 16);
  if (prefix_bits == 0) {
    return estimate_probability(target, max_bits, limit);
  }
  const int buckets = (1 << prefix_bits) + 1;  // bucket 0: shorter than the prefix
  const auto hardware = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::clamp(hardware, 1, buckets);

  auto scan_worker = [target = std::string(target), max_bits, prefix_bits, workers,
                      limit](int worker) {
    std::vector<long long> counts(static_cast<std::size_t>(std::max(max_bits, 0)) + 1, 0);
    for_each_valid(max_bits, [&](const Program& program) {
      int bucket = 0;
      if (program.length_bits() >= prefix_bits) {
        int value = 0;
        for (int i = 0; i < prefix_bits; ++i) {
          value = value << 1 | (program.bits[static_cast<std::size_t>(i)] == '1');
        }
        bucket = value + 1;
      }
      if (bucket % workers != worker) return;
      const Trace* trace = halted(evaluate(program, limit));
      if (trace && trace->raw_output == target) {
        ++counts[static_cast<std::size_t>(program.length_bits())];
      }
    });
    return counts;
  };

  std::vector<std::future<std::vector<long long>>> futures;
  futures.reserve(static_cast<std::size_t>(workers));
  for (int worker = 0; worker < workers; ++worker) {
    futures.push_back(std::async(std::launch::async, scan_worker, worker));
  }
  std::vector<long long> counts(static_cast<std::size_t>(std::max(max_bits, 0)) + 1, 0);
  long long total = 0;
  for (auto& future : futures) {
    const std::vector<long long> part = future.get();
    for (std::size_t length = 0; length < counts.size(); ++length) {
      counts[length] += part[length];
      total += part[length];
    }
  }
  return {detail::mass_from_length_counts(counts), total};
}

}  // namespace genprob
