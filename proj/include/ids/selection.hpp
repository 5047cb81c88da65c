#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ids/core_types.hpp"
#include "ids/rng.hpp"

namespace ids {

enum class StrategyKind : std::uint8_t { Lexicase, RandomDS, InformedDS };

inline auto StrategyName(StrategyKind k) -> std::string
{
    switch (k) {
    case StrategyKind::Lexicase: return "lexicase";
    case StrategyKind::RandomDS: return "random-ds";
    case StrategyKind::InformedDS: return "informed-ds";
    }
    return "?";
}

inline auto StrategyFromName(std::string const& name) -> StrategyKind
{
    if (name == "lexicase" || name == "lex") { return StrategyKind::Lexicase; }
    if (name == "random-ds" || name == "rnd") { return StrategyKind::RandomDS; }
    if (name == "informed-ds" || name == "ids") { return StrategyKind::InformedDS; }
    throw ConfigError("unknown strategy: " + name);
}

struct StrategyConfig {
    StrategyKind kind{StrategyKind::Lexicase};
    double r{1.0};      // down-sample rate
    double rho{1.0};    // parent sampling rate
    std::int64_t k{1};  // generations between distance recomputations

    void Validate() const
    {
        if (kind == StrategyKind::Lexicase) { return; }
        if (!(r > 0.0 && r <= 1.0)) { throw ConfigError("down-sample rate r must lie in (0, 1]"); }
        if (kind == StrategyKind::InformedDS) {
            if (!(rho > 0.0 && rho <= 1.0)) { throw ConfigError("parent sampling rate rho must lie in (0, 1]"); }
            if (k < 1) { throw ConfigError("schedule k must be a positive integer"); }
        }
    }

    [[nodiscard]] auto FullInformation() const -> bool { return kind == StrategyKind::InformedDS && rho == 1.0 && k == 1; }

    [[nodiscard]] auto Label() const -> std::string
    {
        auto fmt = [](double x) {
            std::string s = std::to_string(x);
            s.erase(s.find_last_not_of('0') + 1);
            if (!s.empty() && s.back() == '.') { s.pop_back(); }
            return s;
        };
        switch (kind) {
        case StrategyKind::Lexicase: return "lex";
        case StrategyKind::RandomDS: return "rnd_r" + fmt(r);
        case StrategyKind::InformedDS: return "ids_r" + fmt(r) + "_rho" + fmt(rho) + "_k" + std::to_string(k);
        }
        return "?";
    }
};

namespace detail {
    // Individuals grouped by identical pass vectors over all cases. Lexicase
    // cannot tell such individuals apart, so filtering runs over groups and the
    // final uniform pick is weighted by group size.
    struct BehaviorGroups {
        std::vector<std::vector<std::size_t>> members;
        std::vector<std::vector<std::uint8_t>> passes; // [group][case]
    };

    inline auto GroupBehaviors(SolveMatrix const& solves) -> BehaviorGroups
    {
        BehaviorGroups g;
        std::map<std::vector<std::uint8_t>, std::size_t> index;
        for (std::size_t i = 0; i < solves.Individuals(); ++i) {
            std::vector<std::uint8_t> key(solves.Cases());
            for (std::size_t c = 0; c < solves.Cases(); ++c) { key[c] = solves.Passes(c, i) ? 1 : 0; }
            auto [it, inserted] = index.try_emplace(key, g.members.size());
            if (inserted) {
                g.members.emplace_back();
                g.passes.push_back(std::move(key));
            }
            g.members[it->second].push_back(i);
        }
        return g;
    }
} // namespace detail

// `count` independent lexicase selection events over the cases in `solves`.
// Returns column indices of the selected individuals.
inline auto LexicaseSelect(SolveMatrix const& solves, std::size_t count, Rng& rng) -> std::vector<std::size_t>
{
    if (solves.Individuals() == 0) { throw ConfigError("lexicase_select: empty population"); }
    auto const groups = detail::GroupBehaviors(solves);
    auto const ncases = solves.Cases();

    std::vector<std::size_t> selected;
    selected.reserve(count);
    std::vector<std::size_t> order(ncases);
    std::vector<std::size_t> pool;
    std::vector<std::size_t> next;
    for (std::size_t e = 0; e < count; ++e) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.Shuffle(order);
        pool.resize(groups.members.size());
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (auto c : order) {
            if (pool.size() == 1) { break; }
            next.clear();
            for (auto g : pool) {
                if (groups.passes[g][c] != 0) { next.push_back(g); }
            }
            // nobody passes: every survivor is equally best on this case
            if (!next.empty()) { pool.swap(next); }
        }
        std::size_t total = 0;
        for (auto g : pool) { total += groups.members[g].size(); }
        auto pick = static_cast<std::size_t>(rng.Below(total));
        for (auto g : pool) {
            auto const& m = groups.members[g];
            if (pick < m.size()) {
                selected.push_back(m[pick]);
                break;
            }
            pick -= m.size();
        }
    }
    return selected;
}

// Exact lexicase selection probabilities by enumerating every case ordering.
inline auto SelectionProbabilityOracle(SolveMatrix const& solves) -> std::vector<double>
{
    constexpr std::size_t kMaxCases = 8;
    auto const n = solves.Individuals();
    auto const c = solves.Cases();
    if (n == 0) { throw ConfigError("selection_probability_oracle: empty population"); }
    if (c > kMaxCases) { throw std::length_error("selection_probability_oracle: more than 8 cases"); }

    std::vector<double> prob(n, 0.0);
    std::vector<std::size_t> order(c);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t orderings = 0;
    std::vector<std::size_t> pool;
    std::vector<std::size_t> next;
    do {
        ++orderings;
        pool.resize(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (auto cs : order) {
            if (pool.size() == 1) { break; }
            next.clear();
            for (auto i : pool) {
                if (solves.Passes(cs, i)) { next.push_back(i); }
            }
            if (!next.empty()) { pool.swap(next); }
        }
        for (auto i : pool) { prob[i] += 1.0 / static_cast<double>(pool.size()); }
    } while (std::next_permutation(order.begin(), order.end()));
    for (auto& p : prob) { p /= static_cast<double>(orderings); }
    return prob;
}

// Uniform down-sample of floor(r * n) distinct cases (at least one), in draw order.
inline auto RandomDownsample(std::size_t train_size, double r, Rng& rng) -> DownSample
{
    if (!(r > 0.0 && r <= 1.0)) { throw ConfigError("random_downsample: r must lie in (0, 1]"); }
    if (train_size == 0) { throw DimensionError("random_downsample: empty training set"); }
    if (static_cast<std::size_t>(r * static_cast<double>(train_size) + 1e-9) == 0) {
        std::clog << "warning: down-sample size rounds to 0; using 1 case\n";
    }
    auto const size = DownSampleSize(r, train_size);
    std::vector<std::size_t> pool(train_size);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < size; ++i) {
        auto const j = i + static_cast<std::size_t>(rng.Below(train_size - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(size);
    return {std::move(pool), size};
}

// Farthest-first traversal: a random (or given) first case, then repeatedly the
// case whose distance to its closest already-chosen case is largest, ties broken
// uniformly. Once every remaining case is at distance 0 the ties span all of
// them and the fill is uniform.
inline auto FarthestFirstDownsample(CaseDistanceMatrix const& dist, std::size_t train_size, double r, Rng& rng,
    std::optional<std::size_t> first = std::nullopt) -> DownSample
{
    if (dist.Size() != train_size) { throw DimensionError("farthest_first_downsample: distance matrix does not match training set"); }
    if (!(r > 0.0 && r <= 1.0)) { throw ConfigError("farthest_first_downsample: r must lie in (0, 1]"); }
    if (train_size == 0) { throw DimensionError("farthest_first_downsample: empty training set"); }
    if (first && *first >= train_size) { throw DimensionError("farthest_first_downsample: first case out of range"); }

    auto const size = DownSampleSize(r, train_size);
    std::vector<std::size_t> remaining(train_size);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});

    DownSample ds{{}, size};
    ds.case_indices.reserve(size);
    auto const first_pos = first ? *first : static_cast<std::size_t>(rng.Below(train_size));
    auto const start = remaining[first_pos];
    ds.case_indices.push_back(start);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(first_pos));

    std::vector<CaseDistanceMatrix::Distance> min_dist(remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) { min_dist[i] = dist(remaining[i], start); }

    std::vector<std::size_t> ties;
    while (ds.case_indices.size() < size) {
        auto const best = *std::max_element(min_dist.begin(), min_dist.end());
        ties.clear();
        for (std::size_t i = 0; i < min_dist.size(); ++i) {
            if (min_dist[i] == best) { ties.push_back(i); }
        }
        auto const pos = ties.size() == 1 ? ties.front() : ties[static_cast<std::size_t>(rng.Below(ties.size()))];
        auto const chosen = remaining[pos];
        ds.case_indices.push_back(chosen);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
        min_dist.erase(min_dist.begin() + static_cast<std::ptrdiff_t>(pos));
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            min_dist[i] = std::min(min_dist[i], dist(remaining[i], chosen));
        }
    }
    return ds;
}

// Distance state carried across generations by informed down-sampling.
struct InformedState {
    CaseDistanceMatrix distances;
    std::size_t recomputations{};
};

struct InformedResult {
    DownSample sample;
    std::uint64_t executions_used{};
    bool recomputed{};
    std::vector<std::size_t> parent_sample;
};

inline auto ParentSampleSize(double rho, std::size_t population) -> std::size_t
{
    auto const m = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(population) - 1e-9));
    return std::clamp<std::size_t>(m, 1, population);
}

// One generation of informed down-sampling with sparse information. Every k-th
// generation a parent sample of ceil(rho * |pop|) individuals is evaluated on the
// whole training set through `evaluate(parent_indices)` (returning a
// |train| x |sample| solve matrix) and the distances are recomputed from
// scratch; the down-sample itself is rebuilt every generation.
template <typename EvaluateParents>
auto InformedDownsampleSparse(std::size_t population_size, std::size_t train_size, StrategyConfig const& config,
    std::size_t generation, InformedState& state, Rng& rng, EvaluateParents&& evaluate) -> InformedResult
{
    if (config.kind != StrategyKind::InformedDS) { throw ConfigError("informed_downsample_sparse: strategy is not informed-ds"); }
    config.Validate();
    if (population_size == 0) { throw ConfigError("informed_downsample_sparse: empty population"); }
    if (state.distances.Size() != train_size) {
        state.distances = CaseDistanceMatrix::MaximallyFar(train_size, population_size);
    }
    InformedResult result;
    if (generation % static_cast<std::size_t>(config.k) == 0) {
        auto const m = ParentSampleSize(config.rho, population_size);
        result.parent_sample = rng.SampleWithoutReplacement(population_size, m);
        SolveMatrix solves = evaluate(std::span<std::size_t const>(result.parent_sample));
        if (solves.Cases() != train_size || solves.Individuals() != m) {
            throw DimensionError("informed_downsample_sparse: parent evaluation has wrong shape");
        }
        state.distances = ComputeCaseDistances(solves);
        ++state.recomputations;
        result.executions_used = static_cast<std::uint64_t>(m) * train_size;
        result.recomputed = true;
    }
    result.sample = FarthestFirstDownsample(state.distances, train_size, config.r, rng);
    return result;
}

} // namespace ids
