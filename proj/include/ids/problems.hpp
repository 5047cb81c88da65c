#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ids/core_types.hpp"
#include "ids/rng.hpp"
#include "ids/vm/instructions.hpp"

namespace ids {

enum class ProblemKind : std::uint8_t {
    CountOdds,
    FindPair,
    FizzBuzz,
    FuelCost,
    GCD,
    Grade,
    ScrabbleScore,
    SmallOrLarge,
    // constant-output smoke problem: "small" for every input
    ConstantSmall,
};

inline constexpr std::array kBenchmarkProblems{
    ProblemKind::CountOdds, ProblemKind::FindPair, ProblemKind::FizzBuzz, ProblemKind::FuelCost,
    ProblemKind::GCD, ProblemKind::Grade, ProblemKind::ScrabbleScore, ProblemKind::SmallOrLarge,
};

inline constexpr std::array kProblemNames{
    std::string_view{"count-odds"}, std::string_view{"find-pair"}, std::string_view{"fizz-buzz"},
    std::string_view{"fuel-cost"}, std::string_view{"gcd"}, std::string_view{"grade"},
    std::string_view{"scrabble-score"}, std::string_view{"small-or-large"}, std::string_view{"constant-small"},
};

inline auto ProblemName(ProblemKind k) -> std::string_view { return kProblemNames[static_cast<std::size_t>(k)]; }

inline auto ProblemFromName(std::string_view name) -> ProblemKind
{
    for (std::size_t i = 0; i < kProblemNames.size(); ++i) {
        if (kProblemNames[i] == name) { return static_cast<ProblemKind>(i); }
    }
    throw ConfigError("unknown problem: " + std::string(name));
}

using Inputs = std::vector<Value>;
using Outputs = std::vector<Value>;

struct ProblemSpec {
    ProblemKind kind{};
    std::string name;
    std::vector<ValueType> input_types;
    std::vector<ValueType> output_types;
    std::function<Outputs(Inputs const&)> oracle;
    std::vector<Inputs> edge_cases;
    std::function<Inputs(Rng&)> input_sampler;
    vm::InstructionSet instructions;
};

namespace oracle {

    inline auto CountOdds(IntVector const& v) -> std::int64_t
    {
        return static_cast<std::int64_t>(std::count_if(v.begin(), v.end(), [](auto x) { return x % 2 != 0; }));
    }

    // the unique pair (in order of appearance) summing to target
    inline auto FindPair(IntVector const& v, std::int64_t target) -> std::pair<std::int64_t, std::int64_t>
    {
        std::optional<std::pair<std::int64_t, std::int64_t>> found;
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                if (v[i] + v[j] == target) {
                    if (found) { throw DomainError("find-pair: more than one pair sums to target"); }
                    found = {v[i], v[j]};
                }
            }
        }
        if (!found) { throw DomainError("find-pair: no pair sums to target"); }
        return *found;
    }

    inline auto FizzBuzz(std::int64_t x) -> std::string
    {
        if (x % 15 == 0) { return "FizzBuzz"; }
        if (x % 3 == 0) { return "Fizz"; }
        if (x % 5 == 0) { return "Buzz"; }
        return std::to_string(x);
    }

    inline auto FuelCost(IntVector const& v) -> std::int64_t
    {
        std::int64_t total = 0;
        for (auto x : v) {
            if (x < 0) { throw DomainError("fuel-cost: inputs must be positive"); }
            total += x / 3 - 2;
        }
        return total;
    }

    inline auto Gcd(std::int64_t a, std::int64_t b) -> std::int64_t { return std::gcd(a, b); }

    inline auto Grade(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, std::int64_t score) -> std::string
    {
        if (!(a > b && b > c && c > d)) { throw DomainError("grade: thresholds must be distinct and descending"); }
        if (score >= a) { return "A"; }
        if (score >= b) { return "B"; }
        if (score >= c) { return "C"; }
        if (score >= d) { return "D"; }
        return "F";
    }

    // standard English tile values, a..z
    inline constexpr std::array<std::int64_t, 26> kLetterValues{
        1, 3, 3, 2, 1, 4, 2, 4, 1, 8, 5, 1, 3, 1, 1, 3, 10, 1, 1, 1, 1, 4, 4, 8, 4, 10};

    inline auto ScrabbleTable() -> IntVector
    {
        IntVector t(128, 0);
        for (std::size_t i = 0; i < 26; ++i) {
            t['a' + i] = kLetterValues[i];
            t['A' + i] = kLetterValues[i];
        }
        return t;
    }

    inline auto ScrabbleScore(std::string const& s) -> std::int64_t
    {
        std::int64_t total = 0;
        for (unsigned char ch : s) {
            if (std::isalpha(ch) != 0 && ch < 128) { total += kLetterValues[static_cast<std::size_t>(std::tolower(ch) - 'a')]; }
        }
        return total;
    }

    inline auto SmallOrLarge(std::int64_t n) -> std::string
    {
        if (n < 1000) { return "small"; }
        if (n >= 2000) { return "large"; }
        return "";
    }

} // namespace oracle

namespace detail {
    inline auto I(Value const& v) -> std::int64_t { return std::get<std::int64_t>(v); }
    inline auto V(Value const& v) -> IntVector const& { return std::get<IntVector>(v); }
    inline auto S(Value const& v) -> std::string const& { return std::get<std::string>(v); }

    inline auto RandomVector(Rng& rng, std::size_t min_len, std::size_t max_len, std::int64_t lo, std::int64_t hi) -> IntVector
    {
        auto const n = static_cast<std::size_t>(rng.Between(static_cast<std::int64_t>(min_len), static_cast<std::int64_t>(max_len)));
        IntVector v(n);
        for (auto& x : v) { x = rng.Between(lo, hi); }
        return v;
    }

    inline auto Instr(std::initializer_list<std::vector<vm::Op>> groups) -> std::vector<vm::Op>
    {
        std::vector<vm::Op> ops;
        for (auto const& g : groups) { ops.insert(ops.end(), g.begin(), g.end()); }
        return ops;
    }

    inline auto Ints(std::initializer_list<std::int64_t> xs) -> std::vector<Value>
    {
        std::vector<Value> out;
        for (auto x : xs) { out.push_back(Int(x)); }
        return out;
    }
} // namespace detail

// Version tag of the frozen expert edge-case lists below. Bump whenever a list
// changes, since composition logs index cases by position.
inline constexpr std::string_view kEdgeCaseVersion = "edge-cases-v1";

inline auto MakeProblem(ProblemKind kind) -> ProblemSpec
{
    using namespace vm;
    using detail::I;
    using detail::S;
    using detail::V;
    ProblemSpec p;
    p.kind = kind;
    p.name = std::string(ProblemName(kind));
    using VT = ValueType;

    switch (kind) {
    case ProblemKind::CountOdds:
        p.input_types = {VT::IntVector};
        p.output_types = {VT::Integer};
        p.oracle = [](Inputs const& in) { return Outputs{Int(oracle::CountOdds(V(in[0])))}; };
        for (auto const& v : std::vector<IntVector>{{}, {0}, {1}, {-1}, {2}, {-3}, {1, 3}, {2, 4}, {0, 1, 2, 3}, {-7, 8, 9}}) {
            p.edge_cases.push_back({Vec(v)});
        }
        p.input_sampler = [](Rng& rng) { return Inputs{Vec(detail::RandomVector(rng, 0, 50, -1000, 1000))}; };
        p.instructions = {detail::Instr({IntegerOps(), BooleanOps(), ExecOps(), VectorOps(), InputOps(1)}), detail::Ints({0, 1, 2}), std::pair{-10, 10}};
        break;

    case ProblemKind::FindPair:
        p.input_types = {VT::IntVector, VT::Integer};
        p.output_types = {VT::Integer, VT::Integer};
        p.oracle = [](Inputs const& in) {
            auto [a, b] = oracle::FindPair(V(in[0]), I(in[1]));
            return Outputs{Int(a), Int(b)};
        };
        p.edge_cases = {
            {Vec({1, 2}), Int(3)}, {Vec({-4, 4}), Int(0)}, {Vec({5, 5}), Int(10)}, {Vec({-3, -8}), Int(-11)},
            {Vec({1, 2, 3}), Int(5)}, {Vec({1, 2, 3}), Int(4)}, {Vec({-1, 0, 1}), Int(-1)}, {Vec({10, -3, 7}), Int(4)},
        };
        p.input_sampler = [](Rng& rng) {
            // plant exactly one pair; reject fillers that would complete another pair
            auto const n = static_cast<std::size_t>(rng.Between(2, 50));
            auto const target = rng.Between(-10000, 10000);
            auto const a = rng.Between(-10000, 10000);
            auto const b = target - a;
            auto const i = static_cast<std::size_t>(rng.Below(n));
            auto j = static_cast<std::size_t>(rng.Below(n - 1));
            if (j >= i) { ++j; }
            IntVector v(n, 0);
            std::multiset<std::int64_t> present{a, b};
            v[std::min(i, j)] = a;
            v[std::max(i, j)] = b;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) { continue; }
                std::int64_t x = 0;
                do {
                    x = rng.Between(-10000, 10000);
                } while (present.contains(target - x));
                present.insert(x);
                v[k] = x;
            }
            return Inputs{Vec(std::move(v)), Int(target)};
        };
        p.instructions = {detail::Instr({IntegerOps(), BooleanOps(), ExecOps(), VectorOps(), InputOps(2)}), detail::Ints({-1, 0, 1}), std::pair{-10, 10}};
        break;

    case ProblemKind::FizzBuzz:
        p.input_types = {VT::Integer};
        p.output_types = {VT::String};
        p.oracle = [](Inputs const& in) { return Outputs{Str(oracle::FizzBuzz(I(in[0])))}; };
        p.edge_cases = {{Int(1)}, {Int(3)}, {Int(5)}, {Int(15)}, {Int(2)}, {Int(6)}, {Int(10)}, {Int(30)}};
        p.input_sampler = [](Rng& rng) { return Inputs{Int(rng.Between(1, 1000000))}; };
        p.instructions = {detail::Instr({IntegerOps(), BooleanOps(), ExecOps(), StringOps(), InputOps(1)}),
            {Str("Fizz"), Str("Buzz"), Str("FizzBuzz"), Int(0), Int(3), Int(5)}, std::nullopt};
        break;

    case ProblemKind::FuelCost:
        p.input_types = {VT::IntVector};
        p.output_types = {VT::Integer};
        p.oracle = [](Inputs const& in) { return Outputs{Int(oracle::FuelCost(V(in[0])))}; };
        for (auto const& v : std::vector<IntVector>{{6}, {7}, {8}, {9}, {10}, {11}, {12}, {15}, {100000}, {6, 6}, {12, 14}}) {
            p.edge_cases.push_back({Vec(v)});
        }
        p.input_sampler = [](Rng& rng) { return Inputs{Vec(detail::RandomVector(rng, 1, 20, 6, 100000))}; };
        p.instructions = {detail::Instr({IntegerOps(), BooleanOps(), ExecOps(), VectorOps(), InputOps(1)}), detail::Ints({0, 1, 2, 3}), std::pair{-10, 10}};
        break;

    case ProblemKind::GCD:
        p.input_types = {VT::Integer, VT::Integer};
        p.output_types = {VT::Integer};
        p.oracle = [](Inputs const& in) { return Outputs{Int(oracle::Gcd(I(in[0]), I(in[1])))}; };
        p.edge_cases = {{Int(1), Int(1)}, {Int(4), Int(400000)}, {Int(54), Int(24)}, {Int(4200), Int(3528)},
            {Int(820000), Int(63550)}, {Int(123456), Int(654321)}, {Int(1), Int(1000000)}, {Int(1000000), Int(1000000)}};
        p.input_sampler = [](Rng& rng) { return Inputs{Int(rng.Between(1, 1000000)), Int(rng.Between(1, 1000000))}; };
        p.instructions = {detail::Instr({IntegerOps(), BooleanOps(), ExecOps(), InputOps(2)}), detail::Ints({0, 1}), std::pair{-10, 10}};
        break;

    case ProblemKind::Grade:
        p.input_types = {VT::Integer, VT::Integer, VT::Integer, VT::Integer, VT::Integer};
        p.output_types = {VT::String};
        p.oracle = [](Inputs const& in) { return Outputs{Str(oracle::Grade(I(in[0]), I(in[1]), I(in[2]), I(in[3]), I(in[4])))}; };
        for (auto const& g : std::vector<std::array<std::int64_t, 5>>{{80, 70, 60, 50, 85}, {80, 70, 60, 50, 80}, {80, 70, 60, 50, 79},
                 {80, 70, 60, 50, 70}, {80, 70, 60, 50, 60}, {80, 70, 60, 50, 50}, {80, 70, 60, 50, 49}, {4, 3, 2, 1, 5},
                 {4, 3, 2, 1, 0}, {100, 99, 98, 97, 98}, {100, 99, 98, 97, 97}}) {
            p.edge_cases.push_back({Int(g[0]), Int(g[1]), Int(g[2]), Int(g[3]), Int(g[4])});
        }
        p.input_sampler = [](Rng& rng) {
            std::set<std::int64_t, std::greater<>> th;
            while (th.size() < 4) { th.insert(rng.Between(0, 100)); }
            Inputs in;
            for (auto t : th) { in.push_back(Int(t)); }
            in.push_back(Int(rng.Between(0, 100)));
            return in;
        };
        p.instructions = {detail::Instr({IntegerOps(), BooleanOps(), ExecOps(), StringOps(), InputOps(5)}),
            {Str("A"), Str("B"), Str("C"), Str("D"), Str("F")}, std::nullopt};
        break;

    case ProblemKind::ScrabbleScore:
        p.input_types = {VT::String};
        p.output_types = {VT::Integer};
        p.oracle = [](Inputs const& in) { return Outputs{Int(oracle::ScrabbleScore(S(in[0])))}; };
        for (auto const* s : {"", "a", "z", "Q", "!", " ", "ab1", "Hello, World!", "zzzzz", "^^^"}) {
            p.edge_cases.push_back({Str(s)});
        }
        p.input_sampler = [](Rng& rng) {
            auto const n = static_cast<std::size_t>(rng.Between(0, 20));
            std::string s(n, ' ');
            for (auto& ch : s) { ch = static_cast<char>(rng.Between(32, 126)); }
            return Inputs{Str(std::move(s))};
        };
        p.instructions = {detail::Instr({IntegerOps(), BooleanOps(), ExecOps(), StringOps(), VectorOps(), InputOps(1)}),
            {Vec(oracle::ScrabbleTable()), Int(0)}, std::nullopt};
        break;

    case ProblemKind::SmallOrLarge:
    case ProblemKind::ConstantSmall:
        p.input_types = {VT::Integer};
        p.output_types = {VT::String};
        if (kind == ProblemKind::SmallOrLarge) {
            p.oracle = [](Inputs const& in) { return Outputs{Str(oracle::SmallOrLarge(I(in[0])))}; };
            p.edge_cases = {{Int(0)}, {Int(1)}, {Int(999)}, {Int(1000)}, {Int(1001)}, {Int(1999)}, {Int(2000)},
                {Int(2001)}, {Int(-10000)}, {Int(10000)}};
        } else {
            p.oracle = [](Inputs const&) { return Outputs{Str("small")}; };
            p.edge_cases = {{Int(0)}, {Int(1)}, {Int(-1)}};
        }
        p.input_sampler = [](Rng& rng) { return Inputs{Int(rng.Between(-10000, 10000))}; };
        p.instructions = {detail::Instr({IntegerOps(), BooleanOps(), ExecOps(), StringOps(), InputOps(1)}),
            {Str("small"), Str("large"), Str(""), Int(1000), Int(2000)}, std::nullopt};
        break;
    }
    return p;
}

inline auto OracleEval(ProblemSpec const& problem, Inputs const& inputs) -> Outputs
{
    if (inputs.size() != problem.input_types.size()) { throw DomainError(problem.name + ": wrong input arity"); }
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (TypeOf(inputs[i]) != problem.input_types[i]) { throw DomainError(problem.name + ": ill-typed input"); }
    }
    return problem.oracle(inputs);
}

// Training set = expert edge cases (fixed order) followed by oracle-labelled
// random cases; test set = oracle-labelled random cases whose inputs do not
// occur in the training set (up to a bounded number of redraws).
inline auto GenerateCaseSets(ProblemSpec const& problem, std::size_t train_size, std::size_t test_size, Rng& rng)
    -> std::pair<CaseSet, CaseSet>
{
    if (train_size < problem.edge_cases.size()) {
        throw ConfigError(problem.name + ": train_size smaller than the number of expert edge cases");
    }
    CaseSet train{{}, CaseRole::Train, problem.edge_cases.size()};
    CaseSet test{{}, CaseRole::Test, 0};
    std::set<Inputs, std::less<>> seen_train;
    auto label = [&](Inputs in, CaseOrigin origin, std::size_t index) {
        auto out = OracleEval(problem, in);
        return TrainingCase{index, std::move(in), std::move(out), origin};
    };
    for (auto const& in : problem.edge_cases) {
        seen_train.insert(in);
        train.cases.push_back(label(in, CaseOrigin::ExpertEdgeCase, train.cases.size()));
    }
    while (train.cases.size() < train_size) {
        auto in = problem.input_sampler(rng);
        seen_train.insert(in);
        train.cases.push_back(label(std::move(in), CaseOrigin::OracleGenerated, train.cases.size()));
    }
    constexpr int kMaxRedraws = 100;
    while (test.cases.size() < test_size) {
        auto in = problem.input_sampler(rng);
        for (int tries = 0; tries < kMaxRedraws && seen_train.contains(in); ++tries) { in = problem.input_sampler(rng); }
        test.cases.push_back(label(std::move(in), CaseOrigin::OracleGenerated, test.cases.size()));
    }
    return {std::move(train), std::move(test)};
}

inline auto GenerateCaseSets(ProblemSpec const& problem, std::size_t train_size, std::size_t test_size, std::uint64_t seed)
    -> std::pair<CaseSet, CaseSet>
{
    Rng rng(seed, Stream::ProblemGeneration);
    return GenerateCaseSets(problem, train_size, test_size, rng);
}

} // namespace ids
