#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ids/core_types.hpp"
#include "ids/problems.hpp"
#include "ids/vm/interpreter.hpp"
#include "ids/vm/plushy.hpp"

namespace ids {

struct Individual {
    vm::Plushy genome;
    std::uint64_t id{};
    vm::Program program;

    Individual() = default;
    Individual(vm::Plushy g, std::uint64_t i)
        : genome(std::move(g))
        , id(i)
        , program(vm::Translate(genome))
    {
    }

    [[nodiscard]] auto Size() const -> std::size_t { return genome.size(); }
};

// Counts program executions (one per individual per case) for budget accounting.
struct ExecutionCounter {
    std::uint64_t executions{};
    void Add(std::uint64_t n) { executions += n; }
};

template <typename F>
concept CaseRunner = requires(F f, Individual const& ind, TrainingCase const& c) {
    { f(ind, c) } -> std::convertible_to<bool>;
};

// Fills a |cases| x |population| solve matrix with runner(individual, case),
// adding |population| * |cases| to the counter.
template <CaseRunner Runner>
auto EvaluatePopulation(std::span<Individual const> pop, CaseSet const& set, std::span<std::size_t const> case_indices,
    Runner&& runner, ExecutionCounter& counter) -> SolveMatrix
{
    if (case_indices.empty()) { throw ConfigError("evaluate_population: empty case set"); }
    SolveMatrix m(case_indices.size(), pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        for (std::size_t c = 0; c < case_indices.size(); ++c) {
            m.Set(c, i, runner(pop[i], set[case_indices[c]]));
        }
    }
    counter.Add(static_cast<std::uint64_t>(pop.size()) * case_indices.size());
    return m;
}

// Default runner: executes the individual on the stack VM and compares with
// the expected outputs exactly.
class VmRunner {
public:
    VmRunner(ProblemSpec const& problem, std::size_t step_limit)
        : problem_(&problem)
        , step_limit_(step_limit)
    {
    }

    auto Outputs(Individual const& ind, std::span<Value const> inputs) -> std::optional<std::vector<Value>>
    {
        return interp_.Execute(ind.program, problem_->instructions.constants, inputs, problem_->output_types, step_limit_).outputs;
    }

    auto operator()(Individual const& ind, TrainingCase const& c) -> bool
    {
        auto out = Outputs(ind, c.inputs);
        return out.has_value() && *out == c.expected_outputs;
    }

private:
    ProblemSpec const* problem_;
    std::size_t step_limit_;
    vm::Interpreter interp_;
};

inline auto AllIndices(std::size_t n) -> std::vector<std::size_t>
{
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) { v[i] = i; }
    return v;
}

} // namespace ids
