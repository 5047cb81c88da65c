#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "ids/core_types.hpp"
#include "ids/problems.hpp"
#include "ids/rng.hpp"
#include "ids/selection.hpp"
#include "ids/vm/evaluate.hpp"
#include "ids/vm/plushy.hpp"

namespace ids {

// Defaults are the reference PushGP evolution parameters.
struct ExperimentConfig {
    ProblemKind problem{ProblemKind::FizzBuzz};
    StrategyConfig strategy{};
    std::size_t population_size{1000};
    std::size_t train_size{200};
    std::size_t test_size{1000};
    std::int64_t base_generations{300};
    std::uint64_t execution_budget{60'000'000};
    std::size_t step_limit{2000};
    double umad_rate{0.1};
    std::size_t max_initial_plushy_size{250};
    std::size_t runs{100};
    std::uint64_t seed{0};
    std::size_t workers{1};
    // stop a run at the first full-training-set solution instead of running to the limit
    bool early_stop{false};
    // replaces the budget-equivalent generation limit when set
    std::optional<std::int64_t> generation_limit_override;

    void Validate() const
    {
        strategy.Validate();
        if (population_size == 0) { throw ConfigError("population size must be positive"); }
        if (train_size == 0 || test_size == 0) { throw ConfigError("train and test sizes must be positive"); }
        if (base_generations < 1) { throw ConfigError("base generations must be >= 1"); }
        if (runs < 1) { throw ConfigError("runs must be >= 1"); }
        if (!(umad_rate > 0.0 && umad_rate < 1.0)) { throw ConfigError("umad rate must lie in (0, 1)"); }
        if (max_initial_plushy_size < 1) { throw ConfigError("max initial plushy size must be >= 1"); }
    }
};

// Generation limit that gives every strategy the same execution budget as
// `base` generations of full-training-set evaluation.
inline auto GenerationLimit(std::int64_t base, StrategyConfig const& s) -> std::int64_t
{
    s.Validate();
    auto const g = static_cast<double>(base);
    switch (s.kind) {
    case StrategyKind::Lexicase: return base;
    case StrategyKind::RandomDS: return static_cast<std::int64_t>(std::floor(g / s.r + 1e-6));
    case StrategyKind::InformedDS: {
        auto const per_gen = s.r + s.rho * (1.0 - s.r) / static_cast<double>(s.k);
        return static_cast<std::int64_t>(std::floor(g / per_gen + 1e-6));
    }
    }
    return base;
}

enum class Outcome : std::uint8_t { SolvedAndGeneralized, SolvedTrainOnly, Unsolved };

inline auto OutcomeName(Outcome o) -> std::string
{
    switch (o) {
    case Outcome::SolvedAndGeneralized: return "SolvedAndGeneralized";
    case Outcome::SolvedTrainOnly: return "SolvedTrainOnly";
    case Outcome::Unsolved: return "Unsolved";
    }
    return "?";
}

inline auto OutcomeFromName(std::string const& s) -> Outcome
{
    if (s == "SolvedAndGeneralized") { return Outcome::SolvedAndGeneralized; }
    if (s == "SolvedTrainOnly") { return Outcome::SolvedTrainOnly; }
    if (s == "Unsolved") { return Outcome::Unsolved; }
    throw DomainError("unknown outcome: " + s);
}

struct GenerationRecord {
    std::int64_t generation{};
    std::size_t best_score{};          // most active cases passed by one individual
    std::size_t active_cases{};
    std::vector<std::size_t> downsample; // empty for standard lexicase
    double mean_size{};
    double median_size{};
    std::size_t min_size{};
    std::size_t max_size{};
    std::uint64_t cumulative_executions{};
    bool distances_recomputed{};

    auto operator==(GenerationRecord const&) const -> bool = default;
};

struct RunRecord {
    std::size_t run_id{};
    std::uint64_t seed{};
    std::string problem;
    std::string strategy;
    std::size_t train_size{};
    std::size_t expert_cutoff{};
    std::int64_t generation_limit{};
    std::uint64_t execution_budget{};
    std::vector<GenerationRecord> generations;
    Outcome outcome{Outcome::Unsolved};
    std::optional<std::int64_t> solving_generation;
    std::string solution; // plushy text of the earliest full-training-set solution
    std::uint64_t executions{};
    std::uint64_t posthoc_executions{}; // full-train and test checks, outside the budget

    auto operator==(RunRecord const&) const -> bool = default;
};

struct ProblemData {
    ProblemSpec problem;
    CaseSet train;
    CaseSet test;
};

// Same data for every run of an experiment: generated from the experiment seed.
inline auto MakeProblemData(ExperimentConfig const& config) -> ProblemData
{
    auto spec = MakeProblem(config.problem);
    auto [train, test] = GenerateCaseSets(spec, config.train_size, config.test_size, config.seed);
    return {std::move(spec), std::move(train), std::move(test)};
}

inline auto RunSeed(std::uint64_t experiment_seed, std::size_t run_id) -> std::uint64_t
{
    return SplitMix64(experiment_seed + 0x632be59bd9b4e019ULL * (static_cast<std::uint64_t>(run_id) + 1));
}

namespace detail {
    struct PlushyLess {
        auto operator()(vm::Plushy const& a, vm::Plushy const& b) const -> bool
        {
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](vm::Gene const& x, vm::Gene const& y) {
                return std::pair{x.kind, x.payload} < std::pair{y.kind, y.payload};
            });
        }
    };

    inline void SizeStats(std::vector<Individual> const& pop, GenerationRecord& rec)
    {
        std::vector<std::size_t> sizes(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) { sizes[i] = pop[i].Size(); }
        std::sort(sizes.begin(), sizes.end());
        auto const n = sizes.size();
        rec.mean_size = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0})) / static_cast<double>(n);
        rec.median_size = n % 2 == 1 ? static_cast<double>(sizes[n / 2])
                                     : (static_cast<double>(sizes[n / 2 - 1]) + static_cast<double>(sizes[n / 2])) / 2.0;
        rec.min_size = sizes.front();
        rec.max_size = sizes.back();
    }

    inline auto PassesAll(Individual const& ind, CaseSet const& set, VmRunner& runner, ExecutionCounter& counter) -> bool
    {
        for (auto const& c : set.cases) {
            counter.Add(1);
            if (!runner(ind, c)) { return false; }
        }
        return true;
    }
} // namespace detail

// One evolutionary run. Generation 0 always runs; afterwards the loop stops once
// the generation limit is reached or the budgeted execution count has reached
// the budget, so the total overshoots by at most the generation in flight.
inline auto RunEvolution(ExperimentConfig const& config, ProblemData const& data, std::size_t run_id, std::uint64_t run_seed) -> RunRecord
{
    config.Validate();
    auto const& problem = data.problem;
    auto const& train = data.train;
    auto const& set = problem.instructions;
    auto const pop_size = config.population_size;
    auto const& strategy = config.strategy;

    RunRecord rec;
    rec.run_id = run_id;
    rec.seed = run_seed;
    rec.problem = problem.name;
    rec.strategy = strategy.Label();
    rec.train_size = train.size();
    rec.expert_cutoff = train.expert_cutoff;
    rec.generation_limit = config.generation_limit_override.value_or(GenerationLimit(config.base_generations, strategy));
    rec.execution_budget = config.execution_budget;

    Rng selection_rng(run_seed, Stream::Selection);
    Rng variation_rng(run_seed, Stream::Variation);
    Rng sampling_rng(run_seed, Stream::Sampling);

    std::uint64_t next_id = 0;
    std::vector<Individual> pop;
    pop.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        pop.emplace_back(vm::RandomPlushy(variation_rng, set, config.max_initial_plushy_size), next_id++);
    }

    ExecutionCounter budgeted;
    ExecutionCounter posthoc;
    VmRunner runner(problem, config.step_limit);
    InformedState ids_state;
    std::optional<Individual> solution;
    std::set<vm::Plushy, detail::PlushyLess> known_failures;
    auto const all_cases = AllIndices(train.size());

    for (std::int64_t gen = 0; gen < rec.generation_limit; ++gen) {
        if (gen > 0 && budgeted.executions >= config.execution_budget) { break; }

        GenerationRecord g;
        g.generation = gen;
        std::vector<std::size_t> active;
        switch (strategy.kind) {
        case StrategyKind::Lexicase:
            active = all_cases;
            break;
        case StrategyKind::RandomDS:
            g.downsample = RandomDownsample(train.size(), strategy.r, sampling_rng).case_indices;
            break;
        case StrategyKind::InformedDS: {
            auto evaluate_parents = [&](std::span<std::size_t const> parents) {
                std::vector<Individual> sample;
                sample.reserve(parents.size());
                for (auto p : parents) { sample.push_back(pop[p]); }
                return EvaluatePopulation(std::span<Individual const>(sample), train, all_cases, runner, budgeted);
            };
            auto res = InformedDownsampleSparse(pop.size(), train.size(), strategy, static_cast<std::size_t>(gen), ids_state,
                sampling_rng, evaluate_parents);
            g.downsample = std::move(res.sample.case_indices);
            g.distances_recomputed = res.recomputed;
            break;
        }
        }
        if (active.empty()) {
            // selection sees cases in index order, so the down-sample's build order does not matter
            active = g.downsample;
            std::sort(active.begin(), active.end());
        }
        g.active_cases = active.size();

        auto const solves = EvaluatePopulation(std::span<Individual const>(pop), train, active, runner, budgeted);
        g.cumulative_executions = budgeted.executions;
        detail::SizeStats(pop, g);

        for (std::size_t i = 0; i < pop.size(); ++i) {
            auto const passed = solves.PassCount(i);
            g.best_score = std::max(g.best_score, passed);
            if (solution || passed != active.size()) { continue; }
            bool full = active.size() == train.size();
            if (!full && !known_failures.contains(pop[i].genome)) {
                full = detail::PassesAll(pop[i], train, runner, posthoc);
                if (!full) {
                    if (known_failures.size() > 100000) { known_failures.clear(); }
                    known_failures.insert(pop[i].genome);
                }
            }
            if (full) {
                solution = pop[i];
                rec.solving_generation = gen;
            }
        }
        rec.generations.push_back(std::move(g));

        if (solution && config.early_stop) { break; }
        if (gen + 1 >= rec.generation_limit || budgeted.executions >= config.execution_budget) { break; }

        auto const parents = LexicaseSelect(solves, pop_size, selection_rng);
        std::vector<Individual> children;
        children.reserve(pop_size);
        for (auto p : parents) {
            children.emplace_back(vm::Umad(pop[p].genome, config.umad_rate, set, variation_rng), next_id++);
        }
        pop = std::move(children);
    }

    rec.executions = budgeted.executions;
    if (solution) {
        rec.solution = vm::PlushyToString(solution->genome, set);
        rec.outcome = detail::PassesAll(*solution, data.test, runner, posthoc) ? Outcome::SolvedAndGeneralized : Outcome::SolvedTrainOnly;
    }
    rec.posthoc_executions = posthoc.executions;
    return rec;
}

inline auto RunEvolution(ExperimentConfig const& config, std::size_t run_id = 0) -> RunRecord
{
    auto const data = MakeProblemData(config);
    return RunEvolution(config, data, run_id, RunSeed(config.seed, run_id));
}

struct ExperimentSummary {
    ExperimentConfig config;
    std::vector<RunRecord> records;
    std::size_t successes{}; // solved and generalized
    std::size_t solves{};    // passed the full training set
    std::optional<double> generalization_rate;
};

inline auto GeneralizationRate(std::size_t generalized, std::size_t train_only) -> std::optional<double>
{
    auto const solved = generalized + train_only;
    if (solved == 0) { return std::nullopt; }
    return static_cast<double>(generalized) / static_cast<double>(solved);
}

inline auto Summarize(ExperimentConfig const& config, std::vector<RunRecord> records) -> ExperimentSummary
{
    ExperimentSummary s{config, std::move(records), 0, 0, std::nullopt};
    std::size_t train_only = 0;
    for (auto const& r : s.records) {
        if (r.outcome == Outcome::SolvedAndGeneralized) { ++s.successes; }
        if (r.outcome == Outcome::SolvedTrainOnly) { ++train_only; }
    }
    s.solves = s.successes + train_only;
    s.generalization_rate = GeneralizationRate(s.successes, train_only);
    return s;
}

// Independent seeded runs spread over config.workers threads; records are
// ordered by run id regardless of scheduling.
inline auto RunExperiment(ExperimentConfig const& config) -> ExperimentSummary
{
    config.Validate();
    auto const data = MakeProblemData(config);
    std::vector<RunRecord> records(config.runs);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (auto id = next.fetch_add(1); id < config.runs; id = next.fetch_add(1)) {
            records[id] = RunEvolution(config, data, id, RunSeed(config.seed, id));
        }
    };
    auto const workers = std::clamp<std::size_t>(config.workers, 1, config.runs);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < workers; ++w) { pool.emplace_back(work); }
        work();
    }
    return Summarize(config, std::move(records));
}

// The eleven configurations of the standard sweep: lexicase, then per r random and four informed variants.
inline auto SweepStrategies() -> std::vector<StrategyConfig>
{
    using K = StrategyKind;
    std::vector<StrategyConfig> out{{K::Lexicase, 1.0, 1.0, 1}};
    for (double r : {0.05, 0.1}) {
        out.push_back({K::RandomDS, r, 1.0, 1});
        out.push_back({K::InformedDS, r, 1.0, 1});
        for (std::int64_t k : {1, 10, 100}) { out.push_back({K::InformedDS, r, 0.01, k}); }
    }
    return out;
}

} // namespace ids
