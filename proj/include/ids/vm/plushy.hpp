#pragma once

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ids/core_types.hpp"
#include "ids/rng.hpp"
#include "ids/vm/instructions.hpp"

namespace ids::vm {

enum class GeneKind : std::uint8_t { Instruction, Close, Integer, Constant };

// One plushy token. payload is the Op, the integer literal, or the index into
// the instruction set's constant table, depending on kind.
struct Gene {
    GeneKind kind{GeneKind::Close};
    std::int64_t payload{};

    static constexpr auto Instr(Op op) -> Gene { return {GeneKind::Instruction, static_cast<std::int64_t>(op)}; }
    static constexpr auto Close() -> Gene { return {GeneKind::Close, 0}; }
    static constexpr auto Integer(std::int64_t v) -> Gene { return {GeneKind::Integer, v}; }
    static constexpr auto Constant(std::size_t i) -> Gene { return {GeneKind::Constant, static_cast<std::int64_t>(i)}; }

    [[nodiscard]] auto GetOp() const -> Op { return static_cast<Op>(payload); }
    auto operator==(Gene const&) const -> bool = default;
};

using Plushy = std::vector<Gene>;

inline auto RandomGene(InstructionSet const& set, Rng& rng) -> Gene
{
    auto const kinds = set.TokenKinds();
    if (set.instructions.empty()) { throw ConfigError("random_plushy: empty instruction set"); }
    auto pick = static_cast<std::size_t>(rng.Below(kinds));
    if (pick < set.instructions.size()) { return Gene::Instr(set.instructions[pick]); }
    pick -= set.instructions.size();
    if (pick < set.constants.size()) { return Gene::Constant(pick); }
    pick -= set.constants.size();
    if (pick == 0) { return Gene::Close(); }
    auto const [lo, hi] = *set.random_integer_range;
    return Gene::Integer(rng.Between(lo, hi));
}

// Length uniform in [1, max_size], tokens uniform over the token pool.
inline auto RandomPlushy(Rng& rng, InstructionSet const& set, std::size_t max_size) -> Plushy
{
    if (max_size < 1) { throw ConfigError("random_plushy: max_size must be >= 1"); }
    if (set.instructions.empty()) { throw ConfigError("random_plushy: empty instruction set"); }
    auto const len = 1 + static_cast<std::size_t>(rng.Below(max_size));
    Plushy genes;
    genes.reserve(len);
    for (std::size_t i = 0; i < len; ++i) { genes.push_back(RandomGene(set, rng)); }
    return genes;
}

// Uniform mutation by addition and deletion. Insertion before each gene (and at
// the end) with probability rate, then deletion with probability rate/(1+rate),
// which keeps the expected length unchanged.
inline auto Umad(Plushy const& parent, double rate, InstructionSet const& set, Rng& rng) -> Plushy
{
    if (!(rate > 0.0 && rate < 1.0)) { throw ConfigError("umad: rate must lie in (0, 1)"); }
    Plushy added;
    added.reserve(parent.size() + parent.size() / 4 + 2);
    for (auto const& g : parent) {
        if (rng.Bernoulli(rate)) { added.push_back(RandomGene(set, rng)); }
        added.push_back(g);
    }
    if (rng.Bernoulli(rate)) { added.push_back(RandomGene(set, rng)); }

    auto const deletion = rate / (1.0 + rate);
    Plushy child;
    child.reserve(added.size());
    for (auto const& g : added) {
        if (!rng.Bernoulli(deletion)) { child.push_back(g); }
    }
    return child;
}

inline auto ValueToJson(Value const& v) -> nlohmann::json
{
    return std::visit([](auto const& x) { return nlohmann::json(x); }, v);
}

inline auto GeneToString(Gene const& g, InstructionSet const& set) -> std::string
{
    switch (g.kind) {
    case GeneKind::Instruction: return std::string(Info(g.GetOp()).name);
    case GeneKind::Close: return "close";
    case GeneKind::Integer: return std::to_string(g.payload);
    case GeneKind::Constant: return ValueToJson(set.constants.at(static_cast<std::size_t>(g.payload))).dump();
    }
    return "?";
}

inline auto PlushyToString(Plushy const& p, InstructionSet const& set) -> std::string
{
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i != 0) { out += ' '; }
        out += GeneToString(p[i], set);
    }
    return out;
}

// Parses whitespace-separated tokens: instruction names, "close", integers, or
// JSON literals that must match one of the set's constants. Instruction names
// are accepted even if they are not in the set.
inline auto ParsePlushy(std::string_view text, InstructionSet const& set) -> Plushy
{
    Plushy genes;
    std::size_t pos = 0;
    auto const n = text.size();
    while (pos < n) {
        while (pos < n && std::isspace(static_cast<unsigned char>(text[pos])) != 0) { ++pos; }
        if (pos >= n) { break; }
        std::size_t end = pos;
        if (text[pos] == '"') {
            ++end;
            while (end < n && text[end] != '"') { end += text[end] == '\\' ? 2 : 1; }
            ++end;
        } else if (text[pos] == '[') {
            while (end < n && text[end] != ']') { ++end; }
            ++end;
        } else {
            while (end < n && std::isspace(static_cast<unsigned char>(text[end])) == 0) { ++end; }
        }
        auto const tok = text.substr(pos, end - pos);
        pos = end;
        if (tok == "close" || tok == ")") {
            genes.push_back(Gene::Close());
            continue;
        }
        if (auto op = OpFromName(tok)) {
            genes.push_back(Gene::Instr(*op));
            continue;
        }
        auto const j = nlohmann::json::parse(tok, nullptr, false);
        if (j.is_discarded()) { throw ConfigError("unknown plushy token: " + std::string(tok)); }
        if (j.is_number_integer()) {
            genes.push_back(Gene::Integer(j.get<std::int64_t>()));
            continue;
        }
        bool found = false;
        for (std::size_t c = 0; c < set.constants.size(); ++c) {
            if (ValueToJson(set.constants[c]) == j) {
                genes.push_back(Gene::Constant(c));
                found = true;
                break;
            }
        }
        if (!found) { throw ConfigError("literal is not a constant of this instruction set: " + std::string(tok)); }
    }
    return genes;
}

} // namespace ids::vm
