#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "ids/case_io.hpp"
#include "ids/problems.hpp"

using namespace ids;

namespace {

auto Euclid(std::int64_t a, std::int64_t b) -> std::int64_t
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        auto const t = a % b;
        a = b;
        b = t;
    }
    return a;
}

auto TileValue(char c) -> std::int64_t
{
    switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'd': case 'g': return 2;
    case 'b': case 'c': case 'm': case 'p': return 3;
    case 'f': case 'h': case 'v': case 'w': case 'y': return 4;
    case 'k': return 5;
    case 'j': case 'x': return 8;
    case 'q': case 'z': return 10;
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'l': case 'n': case 's': case 't': case 'r': return 1;
    default: return 0;
    }
}

auto Serialize(ProblemSpec const& p, CaseSet const& set) -> std::string
{
    std::ostringstream os;
    WriteCases(os, p, set);
    return os.str();
}

} // namespace

TEST(Oracle, WorkedExamples)
{
    EXPECT_EQ(oracle::FizzBuzz(15), "FizzBuzz");
    EXPECT_EQ(oracle::FizzBuzz(9), "Fizz");
    EXPECT_EQ(oracle::FizzBuzz(10), "Buzz");
    EXPECT_EQ(oracle::FizzBuzz(7), "7");
    EXPECT_EQ(oracle::SmallOrLarge(999), "small");
    EXPECT_EQ(oracle::SmallOrLarge(1000), "");
    EXPECT_EQ(oracle::SmallOrLarge(1500), "");
    EXPECT_EQ(oracle::SmallOrLarge(2000), "large");
    EXPECT_EQ(oracle::Gcd(12, 18), 6);
    EXPECT_EQ(oracle::FuelCost({6}), 0);
    EXPECT_EQ(oracle::FuelCost({12, 14}), 4);
    EXPECT_EQ(oracle::CountOdds({}), 0);
    EXPECT_EQ(oracle::CountOdds({-3, -2, 0, 7}), 2);
    EXPECT_EQ(oracle::ScrabbleScore(""), 0);
    EXPECT_EQ(oracle::ScrabbleScore("Quiz"), 22);
    EXPECT_EQ(oracle::Grade(90, 80, 70, 60, 85), "B");
    EXPECT_EQ(oracle::Grade(90, 80, 70, 60, 10), "F");
    EXPECT_EQ(oracle::FindPair({1, 5, 9, 2}, 11), (std::pair<std::int64_t, std::int64_t>{9, 2}));
}

TEST(Oracle, DomainErrors)
{
    EXPECT_THROW(oracle::Grade(80, 90, 70, 60, 50), DomainError);
    EXPECT_THROW(oracle::Grade(90, 90, 70, 60, 50), DomainError);
    EXPECT_THROW(oracle::FuelCost({-1}), DomainError);
    EXPECT_THROW(oracle::FindPair({1, 2}, 10), DomainError);
    EXPECT_THROW(oracle::FindPair({1, 2, 1, 2}, 3), DomainError);
    auto const p = MakeProblem(ProblemKind::GCD);
    EXPECT_THROW(OracleEval(p, {Int(1)}), DomainError);
    EXPECT_THROW(OracleEval(p, {Int(1), Str("x")}), DomainError);
}

TEST(Oracle, GcdAgreesWithEuclid)
{
    Rng rng(1, Stream::ProblemGeneration);
    auto const p = MakeProblem(ProblemKind::GCD);
    for (int i = 0; i < 5000; ++i) {
        auto const in = p.input_sampler(rng);
        auto const a = std::get<std::int64_t>(in[0]);
        auto const b = std::get<std::int64_t>(in[1]);
        EXPECT_EQ(OracleEval(p, in), Outputs{Int(Euclid(a, b))});
    }
}

TEST(Oracle, ScrabbleAgreesWithTileTable)
{
    Rng rng(2, Stream::ProblemGeneration);
    auto const p = MakeProblem(ProblemKind::ScrabbleScore);
    auto const table = oracle::ScrabbleTable();
    ASSERT_EQ(table.size(), 128U);
    for (int c = 0; c < 128; ++c) { EXPECT_EQ(table[static_cast<std::size_t>(c)], TileValue(static_cast<char>(c))) << c; }
    for (int i = 0; i < 2000; ++i) {
        auto const in = p.input_sampler(rng);
        std::int64_t expected = 0;
        for (char c : std::get<std::string>(in[0])) { expected += TileValue(c); }
        EXPECT_EQ(OracleEval(p, in), Outputs{Int(expected)});
    }
}

TEST(Oracle, GradeThresholdsAlwaysDescend)
{
    Rng rng(3, Stream::ProblemGeneration);
    auto const p = MakeProblem(ProblemKind::Grade);
    std::set<std::string> letters;
    for (int i = 0; i < 10000; ++i) {
        auto const in = p.input_sampler(rng);
        ASSERT_EQ(in.size(), 5U);
        std::vector<std::int64_t> t;
        for (auto const& v : in) { t.push_back(std::get<std::int64_t>(v)); }
        EXPECT_GT(t[0], t[1]);
        EXPECT_GT(t[1], t[2]);
        EXPECT_GT(t[2], t[3]);
        letters.insert(std::get<std::string>(OracleEval(p, in)[0]));
    }
    EXPECT_EQ(letters, (std::set<std::string>{"A", "B", "C", "D", "F"}));
}

TEST(Oracle, FindPairSamplerPlantsUniquePair)
{
    Rng rng(4, Stream::ProblemGeneration);
    auto const p = MakeProblem(ProblemKind::FindPair);
    for (int i = 0; i < 2000; ++i) {
        auto const in = p.input_sampler(rng);
        auto const& v = std::get<IntVector>(in[0]);
        auto const target = std::get<std::int64_t>(in[1]);
        int pairs = 0;
        for (std::size_t a = 0; a < v.size(); ++a) {
            for (std::size_t b = a + 1; b < v.size(); ++b) { pairs += v[a] + v[b] == target ? 1 : 0; }
        }
        EXPECT_EQ(pairs, 1);
    }
}

TEST(Oracle, EveryProblemLabelsItsOwnSamples)
{
    Rng rng(5, Stream::ProblemGeneration);
    for (auto kind : kBenchmarkProblems) {
        auto const p = MakeProblem(kind);
        for (int i = 0; i < 500; ++i) {
            auto const in = p.input_sampler(rng);
            auto const out = OracleEval(p, in);
            ASSERT_EQ(out.size(), p.output_types.size()) << p.name;
            for (std::size_t k = 0; k < out.size(); ++k) { EXPECT_EQ(TypeOf(out[k]), p.output_types[k]) << p.name; }
            EXPECT_EQ(OracleEval(p, in), out);
        }
        for (auto const& in : p.edge_cases) { EXPECT_NO_THROW(OracleEval(p, in)) << p.name; }
    }
}

TEST(Problems, NamesRoundTrip)
{
    for (std::size_t i = 0; i < kProblemNames.size(); ++i) {
        auto const k = static_cast<ProblemKind>(i);
        EXPECT_EQ(ProblemFromName(ProblemName(k)), k);
        EXPECT_EQ(MakeProblem(k).name, ProblemName(k));
    }
    EXPECT_THROW(ProblemFromName("collatz"), ConfigError);
}

TEST(CaseSets, SizesAndExpertPrefix)
{
    for (auto kind : kBenchmarkProblems) {
        auto const p = MakeProblem(kind);
        auto const [train, test] = GenerateCaseSets(p, 200, 1000, 9);
        EXPECT_EQ(train.cases.size(), 200U);
        EXPECT_EQ(test.cases.size(), 1000U);
        EXPECT_EQ(train.expert_cutoff, p.edge_cases.size());
        EXPECT_GE(p.edge_cases.size(), 3U) << p.name;
        for (std::size_t i = 0; i < train.cases.size(); ++i) {
            EXPECT_EQ(train.cases[i].index, i);
            EXPECT_EQ(train.cases[i].origin, i < p.edge_cases.size() ? CaseOrigin::ExpertEdgeCase : CaseOrigin::OracleGenerated);
            EXPECT_EQ(train.cases[i].expected_outputs, OracleEval(p, train.cases[i].inputs));
        }
    }
}

TEST(CaseSets, FizzBuzzEdgeCasesLeadTheTrainingSet)
{
    auto const p = MakeProblem(ProblemKind::FizzBuzz);
    auto const [train, test] = GenerateCaseSets(p, 200, 10, 1);
    std::vector<std::int64_t> head;
    for (std::size_t i = 0; i < 4; ++i) { head.push_back(std::get<std::int64_t>(train.cases[i].inputs[0])); }
    EXPECT_EQ(head, (std::vector<std::int64_t>{1, 3, 5, 15}));
}

TEST(CaseSets, TestInputsAvoidTrainingInputs)
{
    auto const p = MakeProblem(ProblemKind::CountOdds);
    auto const [train, test] = GenerateCaseSets(p, 200, 1000, 4);
    std::set<Inputs, std::less<>> seen;
    for (auto const& c : train.cases) { seen.insert(c.inputs); }
    std::size_t overlap = 0;
    for (auto const& c : test.cases) { overlap += seen.contains(c.inputs) ? 1 : 0; }
    EXPECT_EQ(overlap, 0U);
}

TEST(CaseSets, ByteIdenticalForFixedSeed)
{
    for (auto kind : kBenchmarkProblems) {
        auto const p = MakeProblem(kind);
        auto const a = GenerateCaseSets(p, 200, 1000, 77);
        auto const b = GenerateCaseSets(p, 200, 1000, 77);
        auto const c = GenerateCaseSets(p, 200, 1000, 78);
        EXPECT_EQ(Serialize(p, a.first), Serialize(p, b.first));
        EXPECT_EQ(Serialize(p, a.second), Serialize(p, b.second));
        EXPECT_NE(Serialize(p, a.first), Serialize(p, c.first));
    }
}

TEST(CaseSets, TrainSmallerThanEdgeCasesThrows)
{
    auto const p = MakeProblem(ProblemKind::FizzBuzz);
    EXPECT_THROW(GenerateCaseSets(p, p.edge_cases.size() - 1, 10, 1), ConfigError);
    EXPECT_NO_THROW(GenerateCaseSets(p, p.edge_cases.size(), 0, 1));
}

TEST(CaseIo, RoundTrip)
{
    for (auto kind : kBenchmarkProblems) {
        auto const p = MakeProblem(kind);
        auto const [train, test] = GenerateCaseSets(p, 60, 40, 5);
        std::istringstream is(Serialize(p, train));
        auto const back = ReadCases(is, p, CaseRole::Train);
        ASSERT_EQ(back.cases.size(), train.cases.size()) << p.name;
        EXPECT_EQ(back.expert_cutoff, train.expert_cutoff);
        for (std::size_t i = 0; i < back.cases.size(); ++i) {
            EXPECT_EQ(back.cases[i].inputs, train.cases[i].inputs);
            EXPECT_EQ(back.cases[i].expected_outputs, train.cases[i].expected_outputs);
            EXPECT_EQ(back.cases[i].origin, train.cases[i].origin);
        }
        EXPECT_EQ(Serialize(p, back), Serialize(p, train));
    }
}

TEST(CaseIo, RejectsMislabelledRows)
{
    auto const p = MakeProblem(ProblemKind::GCD);
    std::istringstream is("case_index,origin,inputs,outputs\n0,oracle,\"[12,18]\",\"[7]\"\n");
    EXPECT_THROW(ReadCases(is, p, CaseRole::Train), DomainError);
}
