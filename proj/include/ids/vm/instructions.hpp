#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ids/core_types.hpp"

namespace ids::vm {

enum class Op : std::uint16_t {
    // integer
    IntegerAdd, IntegerSub, IntegerMult, IntegerQuot, IntegerMod,
    IntegerInc, IntegerDec, IntegerLt, IntegerGt, IntegerLte, IntegerGte, IntegerEq,
    IntegerMin, IntegerMax, IntegerDup, IntegerPop, IntegerSwap, IntegerRot, IntegerFromBoolean,
    // boolean
    BooleanAnd, BooleanOr, BooleanNot, BooleanXor, BooleanEq,
    BooleanDup, BooleanPop, BooleanSwap, BooleanFromInteger,
    // exec
    ExecIf, ExecWhen, ExecDup, ExecPop, ExecSwap,
    ExecDoTimes, ExecDoRange, ExecDoCount, ExecWhile, ExecNoop,
    // string
    StringConcat, StringLength, StringFromInteger, StringFromBoolean, StringEq,
    StringDup, StringPop, StringSwap, StringRot, StringEmpty, StringEmptyString,
    StringReverse, StringFirst, StringRest, StringButlast, StringContains, StringIterate,
    // vector of integer
    VectorLength, VectorNth, VectorFirst, VectorLast, VectorRest, VectorButlast,
    VectorEmpty, VectorDup, VectorPop, VectorSwap, VectorConj, VectorEmptyVector, VectorIterate,
    // inputs
    In1, In2, In3, In4, In5,
    Count_
};

inline constexpr auto kOpCount = static_cast<std::size_t>(Op::Count_);

struct InstructionInfo {
    std::string_view name;
    // number of code blocks the instruction consumes from the exec stack;
    // plushy translation opens this many blocks after the instruction
    std::uint8_t opens{};
};

inline constexpr std::array<InstructionInfo, kOpCount> kInstructions{{
    {"integer_add", 0}, {"integer_sub", 0}, {"integer_mult", 0}, {"integer_quot", 0}, {"integer_mod", 0},
    {"integer_inc", 0}, {"integer_dec", 0}, {"integer_lt", 0}, {"integer_gt", 0}, {"integer_lte", 0},
    {"integer_gte", 0}, {"integer_eq", 0}, {"integer_min", 0}, {"integer_max", 0}, {"integer_dup", 0},
    {"integer_pop", 0}, {"integer_swap", 0}, {"integer_rot", 0}, {"integer_from_boolean", 0},
    {"boolean_and", 0}, {"boolean_or", 0}, {"boolean_not", 0}, {"boolean_xor", 0}, {"boolean_eq", 0},
    {"boolean_dup", 0}, {"boolean_pop", 0}, {"boolean_swap", 0}, {"boolean_from_integer", 0},
    {"exec_if", 2}, {"exec_when", 1}, {"exec_dup", 1}, {"exec_pop", 1}, {"exec_swap", 2},
    {"exec_do_times", 1}, {"exec_do_range", 1}, {"exec_do_count", 1}, {"exec_while", 1}, {"exec_noop", 0},
    {"string_concat", 0}, {"string_length", 0}, {"string_from_integer", 0}, {"string_from_boolean", 0},
    {"string_eq", 0}, {"string_dup", 0}, {"string_pop", 0}, {"string_swap", 0}, {"string_rot", 0},
    {"string_empty", 0}, {"string_empty_string", 0}, {"string_reverse", 0}, {"string_first", 0},
    {"string_rest", 0}, {"string_butlast", 0}, {"string_contains", 0}, {"string_iterate", 1},
    {"vector_integer_length", 0}, {"vector_integer_nth", 0}, {"vector_integer_first", 0},
    {"vector_integer_last", 0}, {"vector_integer_rest", 0}, {"vector_integer_butlast", 0},
    {"vector_integer_empty", 0}, {"vector_integer_dup", 0}, {"vector_integer_pop", 0},
    {"vector_integer_swap", 0}, {"vector_integer_conj", 0}, {"vector_integer_empty_vector", 0},
    {"vector_integer_iterate", 1},
    {"in1", 0}, {"in2", 0}, {"in3", 0}, {"in4", 0}, {"in5", 0},
}};

constexpr auto Info(Op op) -> InstructionInfo const& { return kInstructions[static_cast<std::size_t>(op)]; }

inline auto OpFromName(std::string_view name) -> std::optional<Op>
{
    for (std::size_t i = 0; i < kOpCount; ++i) {
        if (kInstructions[i].name == name) { return static_cast<Op>(i); }
    }
    return std::nullopt;
}

// Range of ops [first, last] grouped by stack type.
inline auto OpRange(Op first, Op last) -> std::vector<Op>
{
    std::vector<Op> ops;
    for (auto i = static_cast<std::size_t>(first); i <= static_cast<std::size_t>(last); ++i) {
        ops.push_back(static_cast<Op>(i));
    }
    return ops;
}

inline auto IntegerOps() -> std::vector<Op> { return OpRange(Op::IntegerAdd, Op::IntegerFromBoolean); }
inline auto BooleanOps() -> std::vector<Op> { return OpRange(Op::BooleanAnd, Op::BooleanFromInteger); }
inline auto ExecOps() -> std::vector<Op> { return OpRange(Op::ExecIf, Op::ExecNoop); }
inline auto StringOps() -> std::vector<Op> { return OpRange(Op::StringConcat, Op::StringIterate); }
inline auto VectorOps() -> std::vector<Op> { return OpRange(Op::VectorLength, Op::VectorIterate); }

inline auto InputOps(std::size_t arity) -> std::vector<Op>
{
    std::vector<Op> ops;
    for (std::size_t i = 0; i < arity && i < 5; ++i) {
        ops.push_back(static_cast<Op>(static_cast<std::size_t>(Op::In1) + i));
    }
    return ops;
}

// Per-problem token pool: instructions, typed constants and an optional
// ephemeral random integer generator.
struct InstructionSet {
    std::vector<Op> instructions;
    std::vector<Value> constants;
    std::optional<std::pair<std::int64_t, std::int64_t>> random_integer_range;

    [[nodiscard]] auto TokenKinds() const -> std::size_t
    {
        // + 1 for the block-closing token
        return instructions.size() + constants.size() + 1 + (random_integer_range ? 1 : 0);
    }
};

} // namespace ids::vm
