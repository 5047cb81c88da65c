#pragma once

#include <cstdint>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "ids/csv.hpp"
#include "ids/run_log.hpp"
#include "ids/stats.hpp"

namespace ids::stats {

// Which comparisons share one Holm correction.
enum class Family : std::uint8_t {
    PerProblem, // every IDS-vs-random comparison of one problem, both rates
    PerRate,    // one problem at one down-sample rate
};

inline auto FamilyFromName(std::string const& s) -> Family
{
    if (s == "per-problem") { return Family::PerProblem; }
    if (s == "per-rate") { return Family::PerRate; }
    throw ConfigError("unknown correction family: " + s + " (expected per-problem or per-rate)");
}

struct SignificanceRow {
    std::string problem;
    std::string r;
    std::string rho;
    std::string k;
    ProportionResult result;
    std::string stars;
};

// Each informed-ds row is compared against the random-ds row of the same
// problem and r. Rows without a matching baseline are skipped with a warning.
inline auto SignificanceTable(std::vector<SummaryRow> const& rows, Family family = Family::PerProblem,
    Sidedness side = Sidedness::Greater) -> std::vector<SignificanceRow>
{
    std::map<std::pair<std::string, std::string>, SummaryRow const*> baseline;
    for (auto const& row : rows) {
        if (row.strategy == "random-ds") { baseline[{row.problem, row.r}] = &row; }
    }
    // family key -> indices into `out`
    std::map<std::tuple<std::string, std::string>, std::vector<std::size_t>> families;
    std::vector<SignificanceRow> out;
    std::vector<Comparison> comps;
    for (auto const& row : rows) {
        if (row.strategy != "informed-ds") { continue; }
        auto const it = baseline.find({row.problem, row.r});
        if (it == baseline.end()) {
            std::clog << "warning: no random-ds baseline for " << row.problem << " r=" << row.r << "; skipped\n";
            continue;
        }
        auto const key = std::tuple{row.problem, family == Family::PerRate ? row.r : std::string()};
        families[key].push_back(out.size());
        comps.push_back({row.successes, row.runs, it->second->successes, it->second->runs});
        out.push_back({row.problem, row.r, row.rho, row.k, {}, ""});
    }
    for (auto const& [key, members] : families) {
        std::vector<Comparison> fam;
        for (auto i : members) { fam.push_back(comps[i]); }
        auto const res = CompareFamily(fam, side);
        for (std::size_t j = 0; j < members.size(); ++j) {
            out[members[j]].result = res[j];
            out[members[j]].stars = Stars(res[j].p_adjusted);
        }
    }
    return out;
}

inline void WriteSignificance(std::ostream& os, std::vector<SignificanceRow> const& rows)
{
    os << "problem,r,rho,k,successes,runs,baseline_successes,baseline_runs,z,p_raw,p_adjusted,stars\n";
    for (auto const& s : rows) {
        auto const& x = s.result;
        os << csv::Join({s.problem, s.r, s.rho, s.k, std::to_string(x.successes_a), std::to_string(x.n_a), std::to_string(x.successes_b),
                  std::to_string(x.n_b), csv::Fixed(x.z, 4), csv::Fixed(x.p_raw, 6), csv::Fixed(x.p_adjusted, 6), s.stars})
           << '\n';
    }
}

} // namespace ids::stats
