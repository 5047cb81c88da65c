#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace ids {

enum class Stream : std::uint64_t {
    Selection = 0x53454c4543543031ULL,
    Variation = 0x5641524941543031ULL,
    Sampling = 0x53414d504c453031ULL,
    ProblemGeneration = 0x50524f424c453031ULL,
};

constexpr auto StreamName(Stream s) -> std::string_view
{
    switch (s) {
    case Stream::Selection: return "selection";
    case Stream::Variation: return "variation";
    case Stream::Sampling: return "sampling";
    case Stream::ProblemGeneration: return "problem-generation";
    }
    return "unknown";
}

constexpr auto SplitMix64(std::uint64_t x) -> std::uint64_t
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

// Reproducible random source. mt19937_64 output is fixed by the standard; every
// derived quantity (bounded ints, reals, shuffles) is computed here rather than
// through <random> distributions, whose algorithms vary between vendors.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng(std::uint64_t seed, Stream stream)
        : seed_(seed)
        , stream_(stream)
        , engine_(SplitMix64(seed ^ static_cast<std::uint64_t>(stream)))
    {
    }

    static constexpr auto min() -> result_type { return std::mt19937_64::min(); }
    static constexpr auto max() -> result_type { return std::mt19937_64::max(); }
    auto operator()() -> result_type { return engine_(); }

    [[nodiscard]] auto Seed() const -> std::uint64_t { return seed_; }
    [[nodiscard]] auto GetStream() const -> Stream { return stream_; }

    // uniform in [0, n); n must be > 0
    auto Below(std::uint64_t n) -> std::uint64_t
    {
        // reject the low 2^64 mod n values so the modulo is unbiased
        auto const threshold = (0 - n) % n;
        for (;;) {
            auto const x = engine_();
            if (x >= threshold) { return x % n; }
        }
    }

    // uniform in [lo, hi]
    auto Between(std::int64_t lo, std::int64_t hi) -> std::int64_t
    {
        auto const span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1U;
        if (span == 0) { // full 64-bit range
            return static_cast<std::int64_t>(engine_());
        }
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + Below(span));
    }

    // uniform in [0, 1) with 53 bits
    auto Unit() -> double
    {
        return static_cast<double>(engine_() >> 11U) * 0x1.0p-53;
    }

    auto Bernoulli(double p) -> bool { return Unit() < p; }

    template <typename T>
    void Shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto const j = static_cast<std::size_t>(Below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

    template <typename T>
    void Shuffle(std::vector<T>& items) { Shuffle(std::span<T>(items)); }

    // m distinct values from [0, n) in draw order; m == n returns the identity without drawing
    auto SampleWithoutReplacement(std::size_t n, std::size_t m) -> std::vector<std::size_t>
    {
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) { pool[i] = i; }
        if (m >= n) { return pool; }
        for (std::size_t i = 0; i < m; ++i) {
            auto const j = i + static_cast<std::size_t>(Below(n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(m);
        return pool;
    }

private:
    std::uint64_t seed_;
    Stream stream_;
    std::mt19937_64 engine_;
};

} // namespace ids
