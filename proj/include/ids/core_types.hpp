#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ids {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

using IntVector = std::vector<std::int64_t>;

// Typed values flowing between problems and the interpreter.
using Value = std::variant<std::int64_t, bool, std::string, IntVector>;

enum class ValueType : std::uint8_t { Integer, Boolean, String, IntVector };

inline auto TypeOf(Value const& v) -> ValueType { return static_cast<ValueType>(v.index()); }

inline auto Int(std::int64_t x) -> Value { return Value{std::in_place_type<std::int64_t>, x}; }
inline auto Bool(bool b) -> Value { return Value{std::in_place_type<bool>, b}; }
inline auto Str(std::string s) -> Value { return Value{std::in_place_type<std::string>, std::move(s)}; }
inline auto Vec(IntVector v) -> Value { return Value{std::in_place_type<IntVector>, std::move(v)}; }

enum class CaseOrigin : std::uint8_t { ExpertEdgeCase, OracleGenerated };
enum class CaseRole : std::uint8_t { Train, Test };

struct TrainingCase {
    std::size_t index{};
    std::vector<Value> inputs;
    std::vector<Value> expected_outputs;
    CaseOrigin origin{CaseOrigin::OracleGenerated};

    auto operator==(TrainingCase const&) const -> bool = default;
};

struct CaseSet {
    std::vector<TrainingCase> cases;
    CaseRole role{CaseRole::Train};
    std::size_t expert_cutoff{};

    [[nodiscard]] auto size() const -> std::size_t { return cases.size(); }
    auto operator[](std::size_t i) const -> TrainingCase const& { return cases[i]; }
    auto operator==(CaseSet const&) const -> bool = default;
};

// Pass/fail outcomes, one row per case (its solve vector) and one column per
// individual. Rows are bit-packed so Hamming distances reduce to popcounts.
class SolveMatrix {
public:
    SolveMatrix() = default;

    SolveMatrix(std::size_t cases, std::size_t individuals)
        : cases_(cases)
        , individuals_(individuals)
        , words_((individuals + 63) / 64)
        , passes_(cases * words_, 0)
        , evaluated_(cases * words_, 0)
    {
    }

    [[nodiscard]] auto Cases() const -> std::size_t { return cases_; }
    [[nodiscard]] auto Individuals() const -> std::size_t { return individuals_; }

    void Set(std::size_t c, std::size_t i, bool pass)
    {
        auto const w = c * words_ + i / 64;
        auto const bit = std::uint64_t{1} << (i % 64);
        evaluated_[w] |= bit;
        if (pass) {
            passes_[w] |= bit;
        } else {
            passes_[w] &= ~bit;
        }
    }

    [[nodiscard]] auto Passes(std::size_t c, std::size_t i) const -> bool
    {
        return ((passes_[c * words_ + i / 64] >> (i % 64)) & 1U) != 0;
    }

    [[nodiscard]] auto Evaluated(std::size_t c, std::size_t i) const -> bool
    {
        return ((evaluated_[c * words_ + i / 64] >> (i % 64)) & 1U) != 0;
    }

    [[nodiscard]] auto FullyEvaluated() const -> bool
    {
        for (std::size_t c = 0; c < cases_; ++c) {
            for (std::size_t i = 0; i < individuals_; ++i) {
                if (!Evaluated(c, i)) { return false; }
            }
        }
        return true;
    }

    [[nodiscard]] auto Row(std::size_t c) const -> std::span<std::uint64_t const>
    {
        return {passes_.data() + c * words_, words_};
    }

    [[nodiscard]] auto SolveVector(std::size_t c) const -> std::vector<std::uint8_t>
    {
        std::vector<std::uint8_t> v(individuals_);
        for (std::size_t i = 0; i < individuals_; ++i) { v[i] = Passes(c, i) ? 1 : 0; }
        return v;
    }

    [[nodiscard]] auto PassCount(std::size_t i) const -> std::size_t
    {
        std::size_t n = 0;
        for (std::size_t c = 0; c < cases_; ++c) { n += Passes(c, i) ? 1 : 0; }
        return n;
    }

    // Build from dense rows (cases x individuals), mostly for tests and worked examples.
    static auto FromRows(std::vector<std::vector<int>> const& rows) -> SolveMatrix
    {
        if (rows.empty()) { return {}; }
        SolveMatrix m(rows.size(), rows.front().size());
        for (std::size_t c = 0; c < rows.size(); ++c) {
            if (rows[c].size() != m.individuals_) { throw DimensionError("ragged solve matrix rows"); }
            for (std::size_t i = 0; i < rows[c].size(); ++i) { m.Set(c, i, rows[c][i] != 0); }
        }
        return m;
    }

private:
    std::size_t cases_{};
    std::size_t individuals_{};
    std::size_t words_{};
    std::vector<std::uint64_t> passes_;
    std::vector<std::uint64_t> evaluated_;
};

// Symmetric integer case-distance table. Until the first computation every
// off-diagonal entry holds the "maximally far" sentinel.
class CaseDistanceMatrix {
public:
    using Distance = std::int64_t;

    CaseDistanceMatrix() = default;

    // sentinel = population size + 1, larger than any reachable Hamming distance
    static auto MaximallyFar(std::size_t cases, std::size_t population) -> CaseDistanceMatrix
    {
        CaseDistanceMatrix d;
        d.n_ = cases;
        d.max_distance_ = static_cast<Distance>(population) + 1;
        d.dist_.assign(cases * cases, d.max_distance_);
        for (std::size_t i = 0; i < cases; ++i) { d.dist_[i * cases + i] = 0; }
        d.computed_ = false;
        return d;
    }

    static auto FromTable(std::vector<std::vector<Distance>> const& rows, Distance max_distance) -> CaseDistanceMatrix
    {
        CaseDistanceMatrix d;
        d.n_ = rows.size();
        d.max_distance_ = max_distance;
        d.dist_.reserve(d.n_ * d.n_);
        for (auto const& r : rows) {
            if (r.size() != d.n_) { throw DimensionError("distance table must be square"); }
            d.dist_.insert(d.dist_.end(), r.begin(), r.end());
        }
        d.computed_ = true;
        return d;
    }

    [[nodiscard]] auto Size() const -> std::size_t { return n_; }
    [[nodiscard]] auto MaxDistance() const -> Distance { return max_distance_; }
    [[nodiscard]] auto Computed() const -> bool { return computed_; }
    [[nodiscard]] auto operator()(std::size_t x, std::size_t y) const -> Distance { return dist_[x * n_ + y]; }

    auto operator==(CaseDistanceMatrix const&) const -> bool = default;

private:
    friend auto ComputeCaseDistances(SolveMatrix const& solves) -> CaseDistanceMatrix;

    std::size_t n_{};
    Distance max_distance_{};
    bool computed_{};
    std::vector<Distance> dist_;
};

// Ordered, duplicate-free case indices active for one generation.
struct DownSample {
    std::vector<std::size_t> case_indices;
    std::size_t target_size{};

    auto operator==(DownSample const&) const -> bool = default;
};

// floor(r * n), at least 1
inline auto DownSampleSize(double rate, std::size_t n) -> std::size_t
{
    auto const raw = static_cast<std::size_t>(rate * static_cast<double>(n) + 1e-9);
    return std::clamp<std::size_t>(raw, 1, std::max<std::size_t>(n, 1));
}

template <typename Bits>
auto HammingDistance(Bits const& a, Bits const& b) -> std::int64_t
{
    if (std::size(a) != std::size(b)) { throw DimensionError("hamming_distance: length mismatch"); }
    std::int64_t d = 0;
    for (std::size_t i = 0; i < std::size(a); ++i) { d += (a[i] != 0) != (b[i] != 0) ? 1 : 0; }
    return d;
}

inline auto HammingDistance(std::vector<int> const& a, std::vector<int> const& b) -> std::int64_t
{
    return HammingDistance<std::vector<int>>(a, b);
}

inline auto PackedHamming(std::span<std::uint64_t const> a, std::span<std::uint64_t const> b) -> std::int64_t
{
    std::int64_t d = 0;
    for (std::size_t w = 0; w < a.size(); ++w) { d += std::popcount(a[w] ^ b[w]); }
    return d;
}

// Pairwise Hamming distances between the solve vectors of all cases.
inline auto ComputeCaseDistances(SolveMatrix const& solves) -> CaseDistanceMatrix
{
    if (solves.Cases() == 0 || solves.Individuals() == 0) {
        throw DimensionError("compute_case_distances: empty solve matrix");
    }
    auto const n = solves.Cases();
    CaseDistanceMatrix d;
    d.n_ = n;
    d.max_distance_ = static_cast<CaseDistanceMatrix::Distance>(solves.Individuals());
    d.computed_ = true;
    d.dist_.assign(n * n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        auto const rx = solves.Row(x);
        for (std::size_t y = x + 1; y < n; ++y) {
            auto const h = PackedHamming(rx, solves.Row(y));
            d.dist_[x * n + y] = h;
            d.dist_[y * n + x] = h;
        }
    }
    return d;
}

} // namespace ids
