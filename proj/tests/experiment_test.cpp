#include <gtest/gtest.h>

#include <sstream>

#include "ids/experiment.hpp"
#include "ids/run_log.hpp"

using namespace ids;

namespace {

auto SmallConfig(ProblemKind problem, StrategyConfig strategy) -> ExperimentConfig
{
    ExperimentConfig c;
    c.problem = problem;
    c.strategy = strategy;
    c.population_size = 40;
    c.train_size = 40;
    c.test_size = 50;
    c.base_generations = 6;
    c.execution_budget = 40ULL * 40ULL * 6ULL;
    c.max_initial_plushy_size = 40;
    c.step_limit = 200;
    c.runs = 3;
    c.seed = 11;
    return c;
}

// Every down-sampled generation costs |pop| * |sample| plus, on recompute
// generations, the parent-sample evaluation on the full training set.
auto GenerationCost(ExperimentConfig const& c, GenerationRecord const& g) -> std::uint64_t
{
    std::uint64_t cost = c.population_size * g.active_cases;
    if (g.distances_recomputed) { cost += ParentSampleSize(c.strategy.rho, c.population_size) * c.train_size; }
    return cost;
}

} // namespace

TEST(GenerationLimit, StandardSweep)
{
    std::vector<std::int64_t> limits;
    for (auto const& s : SweepStrategies()) { limits.push_back(GenerationLimit(300, s)); }
    EXPECT_EQ(limits, (std::vector<std::int64_t>{300, 6000, 300, 5042, 5888, 5988, 3000, 300, 2752, 2973, 2997}));
}

TEST(GenerationLimit, ClosedForm)
{
    EXPECT_EQ(GenerationLimit(300, {StrategyKind::RandomDS, 1.0}), 300);
    EXPECT_EQ(GenerationLimit(100, {StrategyKind::RandomDS, 0.3}), 333);
    EXPECT_EQ(GenerationLimit(10, {StrategyKind::InformedDS, 0.5, 0.5, 2}), 16); // 10 / (0.5 + 0.5 * 0.5 / 2)
}

TEST(Experiment, TinyBudgetRunsExactlyGenerationZero)
{
    auto c = SmallConfig(ProblemKind::FizzBuzz, {StrategyKind::RandomDS, 0.1});
    c.execution_budget = 1;
    auto const rec = RunEvolution(c, 0);
    ASSERT_EQ(rec.generations.size(), 1U);
    EXPECT_EQ(rec.executions, 40U * 4U);
    EXPECT_GE(rec.executions, c.execution_budget);
}

TEST(Experiment, DeterministicAcrossCallsAndWorkerCounts)
{
    for (auto const& s : std::vector<StrategyConfig>{{}, {StrategyKind::RandomDS, 0.1}, {StrategyKind::InformedDS, 0.1, 0.05, 2}}) {
        auto c = SmallConfig(ProblemKind::SmallOrLarge, s);
        auto const a = RunExperiment(c);
        c.workers = 3;
        auto const b = RunExperiment(c);
        ASSERT_EQ(a.records.size(), 3U);
        EXPECT_EQ(a.records, b.records) << s.Label();
        EXPECT_EQ(RunEvolution(c, 1), a.records[1]);
        EXPECT_NE(a.records[0].seed, a.records[1].seed);
    }
}

TEST(Experiment, BudgetParityAcrossStrategies)
{
    for (auto s : SweepStrategies()) {
        if (s.kind == StrategyKind::InformedDS && s.rho < 1.0) { s.rho = 0.05; } // two parents at |pop| = 40
        auto c = SmallConfig(ProblemKind::GCD, s);
        auto const rec = RunEvolution(c, 0);
        std::uint64_t total = 0;
        for (auto const& g : rec.generations) {
            total += GenerationCost(c, g);
            EXPECT_EQ(g.cumulative_executions, total) << s.Label();
        }
        EXPECT_EQ(rec.executions, total);
        auto const last = GenerationCost(c, rec.generations.back());
        EXPECT_LT(rec.executions - last, c.execution_budget) << s.Label();
        auto const hit_limit = static_cast<std::int64_t>(rec.generations.size()) == rec.generation_limit;
        EXPECT_TRUE(hit_limit || rec.executions >= c.execution_budget) << s.Label();
        // at most one generation of overshoot, and never more than a few generations short
        EXPECT_LE(rec.executions, c.execution_budget + last) << s.Label();
        EXPECT_GE(rec.executions + 3 * last, c.execution_budget) << s.Label();
    }
}

TEST(Experiment, RandomDownsampleAtFullRateMatchesLexicase)
{
    auto lex = SmallConfig(ProblemKind::CountOdds, {});
    auto rnd = SmallConfig(ProblemKind::CountOdds, {StrategyKind::RandomDS, 1.0});
    for (std::size_t id = 0; id < 3; ++id) {
        auto const a = RunEvolution(lex, id);
        auto b = RunEvolution(rnd, id);
        ASSERT_EQ(a.generations.size(), b.generations.size());
        for (auto& g : b.generations) {
            EXPECT_EQ(g.downsample.size(), 40U);
            g.downsample.clear();
        }
        EXPECT_EQ(a.generations, b.generations);
        EXPECT_EQ(a.outcome, b.outcome);
        EXPECT_EQ(a.solution, b.solution);
    }
}

TEST(Experiment, ConstantProblemIsSolvedAndGeneralizes)
{
    auto c = SmallConfig(ProblemKind::ConstantSmall, {StrategyKind::InformedDS, 0.1, 0.05, 2});
    c.population_size = 100;
    c.generation_limit_override = 30;
    c.execution_budget = 1ULL << 40;
    c.early_stop = true;
    auto const s = RunExperiment(c);
    EXPECT_EQ(s.successes, 3U);
    for (auto const& r : s.records) {
        EXPECT_EQ(r.outcome, Outcome::SolvedAndGeneralized);
        ASSERT_TRUE(r.solving_generation.has_value());
        EXPECT_EQ(static_cast<std::int64_t>(r.generations.size()), *r.solving_generation + 1);
        EXPECT_FALSE(r.solution.empty());
        EXPECT_GT(r.posthoc_executions, 0U);
    }
}

TEST(Experiment, InvalidConfigsThrow)
{
    auto c = SmallConfig(ProblemKind::GCD, {});
    c.population_size = 0;
    EXPECT_THROW(RunEvolution(c, 0), ConfigError);
    c = SmallConfig(ProblemKind::GCD, {StrategyKind::InformedDS, 0.1, 0.0, 1});
    EXPECT_THROW(RunEvolution(c, 0), ConfigError);
    c = SmallConfig(ProblemKind::FizzBuzz, {});
    c.train_size = 3;
    EXPECT_THROW(RunEvolution(c, 0), ConfigError);
}

TEST(Summary, GeneralizationRates)
{
    EXPECT_FALSE(GeneralizationRate(0, 0).has_value());
    EXPECT_DOUBLE_EQ(*GeneralizationRate(5, 0), 1.0);
    EXPECT_DOUBLE_EQ(*GeneralizationRate(4, 1), 0.8);
    EXPECT_DOUBLE_EQ(*GeneralizationRate(0, 3), 0.0);

    auto make = [](std::vector<Outcome> const& outcomes) {
        std::vector<RunRecord> recs(outcomes.size());
        for (std::size_t i = 0; i < outcomes.size(); ++i) { recs[i].outcome = outcomes[i]; }
        return SummaryRowFor(Summarize(ExperimentConfig{}, std::move(recs)));
    };
    using O = Outcome;
    EXPECT_EQ(make({O::Unsolved, O::Unsolved}).generalization_rate, "-");
    EXPECT_EQ(make({O::SolvedAndGeneralized, O::SolvedAndGeneralized}).generalization_rate, "1.00");
    auto const row = make({O::SolvedAndGeneralized, O::SolvedAndGeneralized, O::SolvedAndGeneralized, O::SolvedAndGeneralized,
        O::SolvedTrainOnly, O::Unsolved});
    EXPECT_EQ(row.generalization_rate, "0.80");
    EXPECT_EQ(row.successes, 4U);
    EXPECT_EQ(row.solves, 5U);
    EXPECT_EQ(row.runs, 6U);
}

TEST(Summary, CsvRoundTrip)
{
    std::vector<SummaryRow> rows;
    for (auto const& s : SweepStrategies()) {
        ExperimentConfig c;
        c.strategy = s;
        std::vector<RunRecord> recs(4);
        recs[0].outcome = Outcome::SolvedAndGeneralized;
        rows.push_back(SummaryRowFor(Summarize(c, recs)));
    }
    std::ostringstream os;
    WriteSummary(os, rows);
    std::istringstream is(os.str());
    auto const back = ReadSummary(is);
    ASSERT_EQ(back.size(), 11U);
    std::ostringstream again;
    WriteSummary(again, back);
    EXPECT_EQ(again.str(), os.str());
    EXPECT_EQ(back[0].r, "-");
    EXPECT_EQ(back[3].rho, "0.01");
    EXPECT_EQ(back[5].k, "100");
    EXPECT_EQ(back[5].generation_limit, 5988);
}

TEST(RunLog, CsvRoundTrip)
{
    auto c = SmallConfig(ProblemKind::ConstantSmall, {StrategyKind::InformedDS, 0.25, 0.05, 2});
    c.generation_limit_override = 5;
    c.execution_budget = 1ULL << 40;
    auto const rec = RunEvolution(c, 2);
    auto const text = RunRecordToString(rec);
    std::istringstream is(text);
    auto const back = ReadRunRecord(is);
    EXPECT_EQ(RunRecordToString(back), text);
    EXPECT_EQ(back.outcome, rec.outcome);
    EXPECT_EQ(back.solving_generation, rec.solving_generation);
    EXPECT_EQ(back.solution, rec.solution);
    ASSERT_EQ(back.generations.size(), rec.generations.size());
    for (std::size_t i = 0; i < rec.generations.size(); ++i) {
        EXPECT_EQ(back.generations[i].downsample, rec.generations[i].downsample);
        EXPECT_EQ(back.generations[i].cumulative_executions, rec.generations[i].cumulative_executions);
    }
}

TEST(Composition, SingleRunRecordsItsSamples)
{
    RunRecord r;
    r.train_size = 5;
    r.expert_cutoff = 2;
    r.generations = {{0, 0, 2, {0, 3}}, {1, 0, 2, {1, 3}}};
    auto const log = DownsampleCompositionLog({r});
    ASSERT_EQ(log.Generations(), 2U);
    EXPECT_EQ(log.frequency[3], (std::vector<double>{1.0, 1.0}));
    EXPECT_EQ(log.frequency[0], (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(log.frequency[4], (std::vector<double>{0.0, 0.0}));
    EXPECT_DOUBLE_EQ(log.MeanFrequency(0, 2), 0.5);

    std::ostringstream os;
    WriteComposition(os, log);
    auto const text = os.str();
    EXPECT_NE(text.find("case_index,is_expert,g0,g1\n"), std::string::npos);
    EXPECT_NE(text.find("# expert_cutoff=2\n"), std::string::npos);
    EXPECT_LT(text.find("\n1,1,"), text.find("# expert_cutoff marker"));
    EXPECT_GT(text.find("\n2,0,"), text.find("# expert_cutoff marker"));
}

TEST(Composition, ShorterRunsOnlyCountWhileActive)
{
    RunRecord a;
    a.train_size = 3;
    a.generations = {{0, 0, 1, {0}}, {1, 0, 1, {0}}};
    RunRecord b = a;
    b.generations = {{0, 0, 1, {1}}};
    auto const log = DownsampleCompositionLog({a, b});
    EXPECT_EQ(log.active_runs, (std::vector<std::size_t>{2, 1}));
    EXPECT_EQ(log.frequency[0], (std::vector<double>{0.5, 1.0}));
    EXPECT_EQ(log.frequency[1], (std::vector<double>{0.5, 0.0}));
}

TEST(Composition, LexicaseRunsGiveEmptyLog)
{
    auto c = SmallConfig(ProblemKind::GCD, {});
    c.generation_limit_override = 2;
    EXPECT_TRUE(DownsampleCompositionLog({RunEvolution(c, 0)}).Empty());
}

TEST(Composition, RandomDownsampleFrequencyIsTheRate)
{
    auto c = SmallConfig(ProblemKind::GCD, {StrategyKind::RandomDS, 0.1});
    c.generation_limit_override = 40;
    c.execution_budget = 1ULL << 40;
    c.runs = 4;
    auto const s = RunExperiment(c);
    auto const log = DownsampleCompositionLog(s.records);
    EXPECT_NEAR(log.MeanFrequency(0, log.train_size), 0.1, 1e-12);
    EXPECT_NEAR(log.MeanFrequency(0, log.expert_cutoff), 0.1, 0.03);
}

TEST(Composition, InformedDownsamplingFavorsPlantedSpecialistCases)
{
    // Cases 0..3 are each solved by a distinct minority; the other 36 cases
    // share one behavior. Five behaviors and five slots: every sample holds all
    // four specialists plus one of the common cases.
    SolveMatrix m(40, 60);
    for (std::size_t c = 0; c < 40; ++c) {
        for (std::size_t i = 0; i < 60; ++i) {
            bool const pass = c < 4 ? (i % 4 == c && i < 12) : (i % 2 == 0);
            m.Set(c, i, pass);
        }
    }
    StrategyConfig const cfg{StrategyKind::InformedDS, 0.125, 1.0, 1};
    InformedState state;
    Rng rng(3, Stream::Sampling);
    std::vector<RunRecord> recs(1);
    recs[0].train_size = 40;
    recs[0].expert_cutoff = 4;
    for (std::size_t g = 0; g < 200; ++g) {
        auto const res = InformedDownsampleSparse(60, 40, cfg, g, state, rng, [&](auto) { return m; });
        recs[0].generations.push_back({static_cast<std::int64_t>(g), 0, 4, res.sample.case_indices});
    }
    auto const log = DownsampleCompositionLog(recs);
    EXPECT_DOUBLE_EQ(log.MeanFrequency(0, 4), 1.0);
    EXPECT_NEAR(log.MeanFrequency(4, 40), 1.0 / 36.0, 1e-12);
}
