#pragma once

#include <cstdint>
#include <iostream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ids/csv.hpp"
#include "ids/experiment.hpp"

namespace ids {

inline constexpr std::string_view kRunCsvVersion = "ids-run-record v1";
inline constexpr std::string_view kCompositionCsvVersion = "ids-composition v1";
inline constexpr std::string_view kSizesCsvVersion = "ids-sizes v1";
inline constexpr std::string_view kSummaryCsvVersion = "ids-summary v1";

namespace detail {
    inline auto JoinIndices(std::vector<std::size_t> const& v) -> std::string
    {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i != 0) { s += ';'; }
            s += std::to_string(v[i]);
        }
        return s;
    }

    inline auto SplitIndices(std::string const& s) -> std::vector<std::size_t>
    {
        std::vector<std::size_t> v;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            if (!tok.empty()) { v.push_back(std::stoull(tok)); }
        }
        return v;
    }

    inline auto ParseKeyValues(std::string const& line) -> std::map<std::string, std::string>
    {
        std::map<std::string, std::string> kv;
        for (auto const& field : csv::Split(line)) {
            auto const eq = field.find('=');
            if (eq != std::string::npos) { kv[field.substr(0, eq)] = field.substr(eq + 1); }
        }
        return kv;
    }
} // namespace detail

// Per-generation log of one run. Two comment lines (version, run metadata) and
// an optional solution line precede the table.
inline void WriteRunRecord(std::ostream& os, RunRecord const& r)
{
    os << "# " << kRunCsvVersion << '\n';
    os << "# " << csv::Join({"run_id=" + std::to_string(r.run_id), "seed=" + std::to_string(r.seed), "problem=" + r.problem,
                         "strategy=" + r.strategy, "train_size=" + std::to_string(r.train_size),
                         "expert_cutoff=" + std::to_string(r.expert_cutoff), "generation_limit=" + std::to_string(r.generation_limit),
                         "execution_budget=" + std::to_string(r.execution_budget), "outcome=" + OutcomeName(r.outcome),
                         "solving_generation=" + (r.solving_generation ? std::to_string(*r.solving_generation) : std::string("-")),
                         "generations=" + std::to_string(r.generations.size()), "executions=" + std::to_string(r.executions),
                         "posthoc_executions=" + std::to_string(r.posthoc_executions)})
       << '\n';
    if (!r.solution.empty()) { os << "# solution: " << r.solution << '\n'; }
    os << "generation,best_score,active_cases,mean_size,median_size,min_size,max_size,cumulative_executions,distances_recomputed,downsample\n";
    for (auto const& g : r.generations) {
        os << g.generation << ',' << g.best_score << ',' << g.active_cases << ',' << csv::Fixed(g.mean_size) << ','
           << csv::Fixed(g.median_size) << ',' << g.min_size << ',' << g.max_size << ',' << g.cumulative_executions << ','
           << (g.distances_recomputed ? 1 : 0) << ',' << detail::JoinIndices(g.downsample) << '\n';
    }
}

inline auto RunRecordToString(RunRecord const& r) -> std::string
{
    std::ostringstream os;
    WriteRunRecord(os, r);
    return os.str();
}

inline auto ReadRunRecord(std::istream& is) -> RunRecord
{
    RunRecord r;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.rfind("# solution: ", 0) == 0) {
            r.solution = line.substr(12);
            continue;
        }
        if (line.rfind("# run_id=", 0) == 0) {
            auto kv = detail::ParseKeyValues(line.substr(2));
            r.run_id = std::stoull(kv["run_id"]);
            r.seed = std::stoull(kv["seed"]);
            r.problem = kv["problem"];
            r.strategy = kv["strategy"];
            r.train_size = std::stoull(kv["train_size"]);
            r.expert_cutoff = std::stoull(kv["expert_cutoff"]);
            r.generation_limit = std::stoll(kv["generation_limit"]);
            r.execution_budget = std::stoull(kv["execution_budget"]);
            r.outcome = OutcomeFromName(kv["outcome"]);
            if (kv["solving_generation"] != "-") { r.solving_generation = std::stoll(kv["solving_generation"]); }
            r.executions = std::stoull(kv["executions"]);
            r.posthoc_executions = std::stoull(kv["posthoc_executions"]);
            continue;
        }
        if (line.empty() || line.front() == '#') { continue; }
        if (!header) {
            header = true;
            continue;
        }
        auto f = csv::Split(line);
        if (f.size() != 10) { throw DomainError("run record csv: expected 10 columns"); }
        GenerationRecord g;
        g.generation = std::stoll(f[0]);
        g.best_score = std::stoull(f[1]);
        g.active_cases = std::stoull(f[2]);
        g.mean_size = std::stod(f[3]);
        g.median_size = std::stod(f[4]);
        g.min_size = std::stoull(f[5]);
        g.max_size = std::stoull(f[6]);
        g.cumulative_executions = std::stoull(f[7]);
        g.distances_recomputed = f[8] == "1";
        g.downsample = detail::SplitIndices(f[9]);
        r.generations.push_back(std::move(g));
    }
    return r;
}

inline void WriteSizes(std::ostream& os, std::vector<RunRecord> const& records)
{
    os << "# " << kSizesCsvVersion << '\n';
    os << "run_id,generation,mean_size,median_size,min_size,max_size\n";
    for (auto const& r : records) {
        for (auto const& g : r.generations) {
            os << r.run_id << ',' << g.generation << ',' << csv::Fixed(g.mean_size) << ',' << csv::Fixed(g.median_size) << ','
               << g.min_size << ',' << g.max_size << '\n';
        }
    }
}

// Inclusion frequency of every training case at every generation, averaged
// over the runs still active at that generation.
struct CompositionLog {
    std::size_t train_size{};
    std::size_t expert_cutoff{};
    std::vector<std::size_t> active_runs;       // [generation]
    std::vector<std::vector<double>> frequency; // [case][generation]

    [[nodiscard]] auto Empty() const -> bool { return active_runs.empty(); }
    [[nodiscard]] auto Generations() const -> std::size_t { return active_runs.size(); }

    // mean over generations and cases in [lo, hi)
    [[nodiscard]] auto MeanFrequency(std::size_t lo, std::size_t hi) const -> double
    {
        double sum = 0.0;
        std::size_t n = 0;
        for (auto c = lo; c < hi; ++c) {
            for (auto f : frequency[c]) {
                sum += f;
                ++n;
            }
        }
        return n == 0 ? 0.0 : sum / static_cast<double>(n);
    }
};

inline auto DownsampleCompositionLog(std::vector<RunRecord> const& records) -> CompositionLog
{
    CompositionLog log;
    std::vector<RunRecord const*> usable;
    for (auto const& r : records) {
        bool has_samples = !r.generations.empty();
        for (auto const& g : r.generations) { has_samples = has_samples && !g.downsample.empty(); }
        if (has_samples) { usable.push_back(&r); }
    }
    if (usable.empty()) {
        std::clog << "warning: no down-sampled runs; composition log is empty (standard lexicase uses every case)\n";
        return log;
    }
    log.train_size = usable.front()->train_size;
    log.expert_cutoff = usable.front()->expert_cutoff;
    std::size_t gens = 0;
    for (auto const* r : usable) {
        if (r->train_size != log.train_size) { throw DimensionError("composition: runs use different training sets"); }
        gens = std::max(gens, r->generations.size());
    }
    log.active_runs.assign(gens, 0);
    std::vector<std::vector<std::size_t>> counts(log.train_size, std::vector<std::size_t>(gens, 0));
    for (auto const* r : usable) {
        for (auto const& g : r->generations) {
            auto const gi = static_cast<std::size_t>(g.generation);
            ++log.active_runs[gi];
            for (auto c : g.downsample) { ++counts[c][gi]; }
        }
    }
    log.frequency.assign(log.train_size, std::vector<double>(gens, 0.0));
    for (std::size_t c = 0; c < log.train_size; ++c) {
        for (std::size_t g = 0; g < gens; ++g) {
            if (log.active_runs[g] > 0) {
                log.frequency[c][g] = static_cast<double>(counts[c][g]) / static_cast<double>(log.active_runs[g]);
            }
        }
    }
    return log;
}

// Rows are cases, columns generations. A comment marker row sits at the
// expert-case cutoff.
inline void WriteComposition(std::ostream& os, CompositionLog const& log)
{
    os << "# " << kCompositionCsvVersion << '\n';
    os << "# expert_cutoff=" << log.expert_cutoff << '\n';
    os << "case_index,is_expert";
    for (std::size_t g = 0; g < log.Generations(); ++g) { os << ",g" << g; }
    os << '\n';
    os << "# active_runs,";
    for (std::size_t g = 0; g < log.Generations(); ++g) { os << ',' << log.active_runs[g]; }
    os << '\n';
    for (std::size_t c = 0; c < log.train_size; ++c) {
        if (c == log.expert_cutoff && c != 0) { os << "# expert_cutoff marker: rows above are expert edge cases\n"; }
        os << c << ',' << (c < log.expert_cutoff ? 1 : 0);
        for (std::size_t g = 0; g < log.Generations(); ++g) { os << ',' << csv::Fixed(log.frequency[c][g]); }
        os << '\n';
    }
}

struct SummaryRow {
    std::string problem;
    std::string strategy; // lexicase | random-ds | informed-ds
    std::string r;        // "-" when not applicable
    std::string rho;
    std::string k;
    std::int64_t generation_limit{};
    std::size_t runs{};
    std::size_t successes{};
    std::size_t solves{};
    std::string generalization_rate; // "-" when nothing solved
};

inline auto SummaryRowFor(ExperimentSummary const& s) -> SummaryRow
{
    auto const& st = s.config.strategy;
    auto fmt = [](double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    };
    SummaryRow row;
    row.problem = std::string(ProblemName(s.config.problem));
    row.strategy = StrategyName(st.kind);
    row.r = st.kind == StrategyKind::Lexicase ? "-" : fmt(st.r);
    row.rho = st.kind == StrategyKind::InformedDS ? fmt(st.rho) : "-";
    row.k = st.kind == StrategyKind::InformedDS ? std::to_string(st.k) : "-";
    row.generation_limit = s.config.generation_limit_override.value_or(GenerationLimit(s.config.base_generations, st));
    row.runs = s.records.size();
    row.successes = s.successes;
    row.solves = s.solves;
    row.generalization_rate = s.generalization_rate ? csv::Fixed(*s.generalization_rate, 2) : "-";
    return row;
}

inline void WriteSummary(std::ostream& os, std::vector<SummaryRow> const& rows)
{
    os << "# " << kSummaryCsvVersion << '\n';
    os << "problem,strategy,r,rho,k,generation_limit,runs,successes,solves,generalization_rate\n";
    for (auto const& row : rows) {
        os << csv::Join({row.problem, row.strategy, row.r, row.rho, row.k, std::to_string(row.generation_limit),
                  std::to_string(row.runs), std::to_string(row.successes), std::to_string(row.solves), row.generalization_rate})
           << '\n';
    }
}

inline auto ReadSummary(std::istream& is) -> std::vector<SummaryRow>
{
    std::vector<SummaryRow> rows;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') { continue; }
        if (!header) {
            header = true;
            continue;
        }
        auto f = csv::Split(line);
        if (f.size() != 10) { throw DomainError("summary csv: expected 10 columns"); }
        rows.push_back({f[0], f[1], f[2], f[3], f[4], std::stoll(f[5]), std::stoull(f[6]), std::stoull(f[7]), std::stoull(f[8]), f[9]});
    }
    return rows;
}

} // namespace ids
