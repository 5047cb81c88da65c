#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ids/core_types.hpp"

namespace ids::stats {

inline auto NormalCdf(double x) -> double { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

enum class Sidedness : std::uint8_t { Greater, TwoSided };

struct ZTest {
    double z{};
    double p{};
};

// Pooled two-proportion z-test of a against b. The one-sided alternative is
// "a succeeds more often than b". A pooled proportion of 0 or 1 carries no
// evidence: z = 0, p = 1.
inline auto TwoProportionZTest(std::size_t s_a, std::size_t n_a, std::size_t s_b, std::size_t n_b,
    Sidedness side = Sidedness::Greater) -> ZTest
{
    if (n_a == 0 || n_b == 0) { throw ConfigError("two_proportion_z_test: sample sizes must be >= 1"); }
    if (s_a > n_a || s_b > n_b) { throw ConfigError("two_proportion_z_test: successes exceed trials"); }
    auto const na = static_cast<double>(n_a);
    auto const nb = static_cast<double>(n_b);
    auto const pooled = static_cast<double>(s_a + s_b) / (na + nb);
    if (pooled <= 0.0 || pooled >= 1.0) { return {0.0, 1.0}; }
    auto const se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / na + 1.0 / nb));
    auto const z = (static_cast<double>(s_a) / na - static_cast<double>(s_b) / nb) / se;
    auto const p = side == Sidedness::Greater ? NormalCdf(-z) : std::min(1.0, 2.0 * NormalCdf(-std::abs(z)));
    return {z, p};
}

// Holm step-down adjustment; output is in input order, capped at 1 and
// monotone along the sorted order.
inline auto BonferroniHolm(std::vector<double> const& p) -> std::vector<double>
{
    auto const m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
    std::vector<double> adj(m);
    double running = 0.0;
    for (std::size_t rank = 0; rank < m; ++rank) {
        auto const i = order[rank];
        if (!(p[i] >= 0.0 && p[i] <= 1.0)) { throw ConfigError("bonferroni_holm: p-values must lie in [0, 1]"); }
        running = std::max(running, std::min(1.0, static_cast<double>(m - rank) * p[i]));
        adj[i] = running;
    }
    return adj;
}

// Most stringent level met among 0.01, 0.05, 0.1.
inline auto SignificanceLevel(double p_adjusted) -> std::optional<double>
{
    if (p_adjusted < 0.01) { return 0.01; }
    if (p_adjusted < 0.05) { return 0.05; }
    if (p_adjusted < 0.1) { return 0.1; }
    return std::nullopt;
}

inline auto Stars(double p_adjusted) -> std::string
{
    auto const lvl = SignificanceLevel(p_adjusted);
    if (!lvl) { return ""; }
    if (*lvl == 0.01) { return "***"; }
    if (*lvl == 0.05) { return "**"; }
    return "*";
}

struct ProportionResult {
    std::size_t successes_a{};
    std::size_t n_a{};
    std::size_t successes_b{};
    std::size_t n_b{};
    double z{};
    double p_raw{};
    double p_adjusted{};
    std::optional<double> significant_at;
};

struct Comparison {
    std::size_t successes_a{};
    std::size_t n_a{};
    std::size_t successes_b{};
    std::size_t n_b{};
};

// z-tests for one correction family followed by Holm adjustment.
inline auto CompareFamily(std::vector<Comparison> const& family, Sidedness side = Sidedness::Greater) -> std::vector<ProportionResult>
{
    std::vector<ProportionResult> out;
    std::vector<double> raw;
    for (auto const& c : family) {
        auto const t = TwoProportionZTest(c.successes_a, c.n_a, c.successes_b, c.n_b, side);
        out.push_back({c.successes_a, c.n_a, c.successes_b, c.n_b, t.z, t.p, 0.0, std::nullopt});
        raw.push_back(t.p);
    }
    auto const adj = BonferroniHolm(raw);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].p_adjusted = adj[i];
        out[i].significant_at = SignificanceLevel(adj[i]);
    }
    return out;
}

} // namespace ids::stats
