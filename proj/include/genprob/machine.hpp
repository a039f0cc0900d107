#pragma once

#include <cassert>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace genprob {

/// Record separator in the machine's output alphabet {'0', '1', kSep}.
inline constexpr char kSep = '|';

/// The model language: a two-counter register machine with bit output.
///
///   code  mnemonic  effect
///   000   HALT      stop; must be the final instruction of every program
///   001   INC       A += 1
///   010   DEC       A -= 1, saturating at 0
///   011   SWAP      exchange A and B
///   100   OUT0      emit symbol 0
///   101   OUT1      emit symbol 1
///   110   SEP       emit the record separator
///   111   JZ n      if A == 0, jump n instructions relative to the next
///                   one; n is a 4-bit two's-complement operand in -8..7
///
/// Counters start at 0. A jump may land exactly one past the final
/// instruction (the program stops there); any other out-of-range target is
/// a runtime error. The mandatory final HALT makes the set of valid
/// encodings prefix-free.
enum class Op : std::uint8_t { Halt = 0, Inc, Dec, Swap, Out0, Out1, Sep, Jz };

inline constexpr const char* kOpNames[] = {"HALT", "INC",  "DEC", "SWAP",
                                           "OUT0", "OUT1", "SEP", "JZ"};

struct Instruction {
  Op op = Op::Halt;
  int offset = 0;  // JZ only, in -8..7
  bool operator==(const Instruction&) const = default;
};

/// A validated program: `bits` is exactly the encoding of `instructions`.
struct Program {
  std::string bits;  // '0'/'1' characters
  std::vector<Instruction> instructions;

  int length_bits() const { return static_cast<int>(bits.size()); }
  bool operator==(const Program&) const = default;
};

enum class DecodeError {
  TrailingBits,      // leftover fragment shorter than an instruction
  NoHalt,            // all bits consumed, last instruction is not HALT
  EarlyHalt,         // HALT before the end of the bit string
  TruncatedOperand,  // JZ with fewer than 4 operand bits left
};

inline constexpr const char* decode_error_name(DecodeError e) {
  switch (e) {
    case DecodeError::TrailingBits: return "TRAILING_BITS";
    case DecodeError::NoHalt: return "NO_HALT";
    case DecodeError::EarlyHalt: return "EARLY_HALT";
    case DecodeError::TruncatedOperand: return "TRUNCATED_OPERAND";
  }
  return "?";
}

inline std::string encode(const std::vector<Instruction>& instructions) {
  std::string bits;
  for (const Instruction& ins : instructions) {
    const auto code = static_cast<unsigned>(ins.op);
    bits += (code & 4u) ? '1' : '0';
    bits += (code & 2u) ? '1' : '0';
    bits += (code & 1u) ? '1' : '0';
    if (ins.op == Op::Jz) {
      const auto pattern = static_cast<unsigned>(ins.offset) & 0xFu;
      bits += (pattern & 8u) ? '1' : '0';
      bits += (pattern & 4u) ? '1' : '0';
      bits += (pattern & 2u) ? '1' : '0';
      bits += (pattern & 1u) ? '1' : '0';
    }
  }
  return bits;
}

/// Decodes a bit string into a Program. Returns a DecodeError unless the
/// string decodes completely and contains exactly one HALT, at the end.
/// `bits` must contain only '0' and '1' characters.
inline std::variant<Program, DecodeError> decode(std::string_view bits) {
  Program program;
  program.bits.assign(bits);
  const std::size_t n = bits.size();
  std::size_t pos = 0;
  auto bit = [&](std::size_t i) -> unsigned {
    assert(bits[i] == '0' || bits[i] == '1');
    return bits[i] == '1' ? 1u : 0u;
  };
  while (pos < n) {
    if (n - pos < 3) {
      return DecodeError::TrailingBits;
    }
    const unsigned code = bit(pos) << 2 | bit(pos + 1) << 1 | bit(pos + 2);
    pos += 3;
    const Op op = static_cast<Op>(code);
    int offset = 0;
    if (op == Op::Jz) {
      if (n - pos < 4) {
        return DecodeError::TruncatedOperand;
      }
      const unsigned pattern =
          bit(pos) << 3 | bit(pos + 1) << 2 | bit(pos + 2) << 1 | bit(pos + 3);
      pos += 4;
      offset = pattern < 8 ? static_cast<int>(pattern) : static_cast<int>(pattern) - 16;
    }
    program.instructions.push_back({op, offset});
    if (op == Op::Halt && pos != n) {
      return DecodeError::EarlyHalt;
    }
  }
  if (program.instructions.empty() || program.instructions.back().op != Op::Halt) {
    return DecodeError::NoHalt;
  }
  return program;
}

/// Step budget that makes every evaluation terminate.
struct EvalLimit {
  long max_steps = 10'000;  // >= 1
};

/// Splits the raw output at separator symbols, preserving empty records.
/// An empty output has zero records.
inline std::vector<std::string> split_records(std::string_view raw_output) {
  std::vector<std::string> records;
  if (raw_output.empty()) {
    return records;
  }
  std::string current;
  for (char c : raw_output) {
    if (c == kSep) {
      records.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  records.push_back(std::move(current));
  return records;
}

/// Decoded machine output. Record 0, when present, is the pre-observation
/// state label; records 1..k are result labels.
struct Trace {
  std::string raw_output;            // over {0, 1, kSep}
  std::vector<std::string> records;  // raw_output split at kSep
  bool operator==(const Trace&) const = default;
};

struct Diverged {
  bool operator==(const Diverged&) const = default;
};
struct JumpOutOfRange {
  bool operator==(const JumpOutOfRange&) const = default;
};

using EvalResult = std::variant<Trace, Diverged, JumpOutOfRange>;

inline const Trace* halted(const EvalResult& result) {
  return std::get_if<Trace>(&result);
}

/// Deterministic big-step execution. Pure: the result depends only on the
/// program and the limit, and the call is safe from any number of threads.
inline EvalResult evaluate(const Program& program, EvalLimit limit = {}) {
  assert(limit.max_steps >= 1);
  const long count = static_cast<long>(program.instructions.size());
  long pc = 0;
  long steps = 0;
  unsigned long long a = 0;
  unsigned long long b = 0;
  std::string out;
  while (pc != count) {
    if (++steps > limit.max_steps) {
      return Diverged{};
    }
    const Instruction& ins = program.instructions[static_cast<std::size_t>(pc)];
    switch (ins.op) {
      case Op::Halt:
        return Trace{out, split_records(out)};
      case Op::Inc:
        ++a;
        ++pc;
        break;
      case Op::Dec:
        if (a > 0) --a;
        ++pc;
        break;
      case Op::Swap:
        std::swap(a, b);
        ++pc;
        break;
      case Op::Out0:
        out += '0';
        ++pc;
        break;
      case Op::Out1:
        out += '1';
        ++pc;
        break;
      case Op::Sep:
        out += kSep;
        ++pc;
        break;
      case Op::Jz: {
        const long target = pc + 1 + (a == 0 ? ins.offset : 0);
        if (target < 0 || target > count) {
          return JumpOutOfRange{};
        }
        pc = target;
        break;
      }
    }
  }
  // A jump landed one past the final instruction.
  return Trace{out, split_records(out)};
}

/// Mnemonic text form, e.g. "OUT1 SEP OUT0 HALT" or "INC JZ 1 OUT0 HALT".
inline std::string to_mnemonics(const Program& program) {
  std::string text;
  for (const Instruction& ins : program.instructions) {
    if (!text.empty()) text += ' ';
    text += kOpNames[static_cast<unsigned>(ins.op)];
    if (ins.op == Op::Jz) {
      text += ' ';
      text += std::to_string(ins.offset);
    }
  }
  return text;
}

/// Reads a program from either text form: whitespace-separated mnemonics
/// (JZ takes a decimal offset token) or a raw '0'/'1' bit string with
/// optional whitespace. Returns an error message on failure.
inline std::variant<Program, std::string> parse_program(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  if (tokens.empty()) {
    return std::string("empty program");
  }

  bool bit_form = true;
  for (const std::string& t : tokens) {
    for (char c : t) {
      if (c != '0' && c != '1') bit_form = false;
    }
  }

  std::variant<Program, DecodeError> decoded;
  if (bit_form) {
    std::string bits;
    for (const std::string& t : tokens) bits += t;
    decoded = decode(bits);
  } else {
    std::vector<Instruction> instructions;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string& t = tokens[i];
      int code = -1;
      for (int k = 0; k < 8; ++k) {
        if (t == kOpNames[k]) code = k;
      }
      if (code < 0) {
        return "unknown mnemonic '" + t + "'";
      }
      Instruction ins{static_cast<Op>(code), 0};
      if (ins.op == Op::Jz) {
        if (i + 1 == tokens.size()) {
          return std::string("JZ is missing its offset");
        }
        const std::string& arg = tokens[++i];
        const char* first = arg.data();
        const char* last = arg.data() + arg.size();
        if (!arg.empty() && arg.front() == '+') ++first;
        int value = 0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) {
          return "JZ offset '" + arg + "' is not an integer";
        }
        if (value < -8 || value > 7) {
          return "JZ offset " + std::to_string(value) + " is outside -8..7";
        }
        ins.offset = value;
      }
      instructions.push_back(ins);
    }
    decoded = decode(encode(instructions));
  }
  if (const auto* err = std::get_if<DecodeError>(&decoded)) {
    return std::string("invalid program: ") + decode_error_name(*err);
  }
  return std::get<Program>(std::move(decoded));
}

}  // namespace genprob
