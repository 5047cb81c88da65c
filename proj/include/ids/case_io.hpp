#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ids/core_types.hpp"
#include "ids/csv.hpp"
#include "ids/problems.hpp"
#include "ids/vm/plushy.hpp"

namespace ids {

inline constexpr std::string_view kCaseCsvVersion = "ids-cases v1";

namespace detail {
    inline auto ValuesToJson(std::vector<Value> const& vs) -> std::string
    {
        auto arr = nlohmann::json::array();
        for (auto const& v : vs) { arr.push_back(vm::ValueToJson(v)); }
        return arr.dump();
    }

    inline auto JsonToValue(nlohmann::json const& j, ValueType t) -> Value
    {
        switch (t) {
        case ValueType::Integer: return Int(j.get<std::int64_t>());
        case ValueType::Boolean: return Bool(j.get<bool>());
        case ValueType::String: return Str(j.get<std::string>());
        case ValueType::IntVector: return Vec(j.get<IntVector>());
        }
        return {};
    }

    inline auto JsonToValues(std::string const& text, std::vector<ValueType> const& types) -> std::vector<Value>
    {
        auto const j = nlohmann::json::parse(text);
        if (!j.is_array() || j.size() != types.size()) { throw DomainError("case literal does not match problem signature: " + text); }
        std::vector<Value> out;
        for (std::size_t i = 0; i < types.size(); ++i) { out.push_back(JsonToValue(j[i], types[i])); }
        return out;
    }
} // namespace detail

// Columns: case_index, origin, inputs, outputs; inputs/outputs are JSON arrays.
inline void WriteCases(std::ostream& os, ProblemSpec const& problem, CaseSet const& set)
{
    os << "# " << kCaseCsvVersion << " problem=" << problem.name << " role=" << (set.role == CaseRole::Train ? "train" : "test")
       << " expert_cutoff=" << set.expert_cutoff << " edge_cases=" << kEdgeCaseVersion << '\n';
    os << "case_index,origin,inputs,outputs\n";
    for (auto const& c : set.cases) {
        os << csv::Join({std::to_string(c.index), c.origin == CaseOrigin::ExpertEdgeCase ? "expert" : "oracle",
                  detail::ValuesToJson(c.inputs), detail::ValuesToJson(c.expected_outputs)})
           << '\n';
    }
}

inline auto ReadCases(std::istream& is, ProblemSpec const& problem, CaseRole role) -> CaseSet
{
    CaseSet set{{}, role, 0};
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') { continue; }
        if (!header) {
            header = true;
            continue;
        }
        auto f = csv::Split(line);
        if (f.size() != 4) { throw DomainError("case csv: expected 4 columns"); }
        TrainingCase c;
        c.index = std::stoull(f[0]);
        if (c.index != set.cases.size()) { throw DomainError("case csv: case_index must equal row position"); }
        c.origin = f[1] == "expert" ? CaseOrigin::ExpertEdgeCase : CaseOrigin::OracleGenerated;
        c.inputs = detail::JsonToValues(f[2], problem.input_types);
        c.expected_outputs = detail::JsonToValues(f[3], problem.output_types);
        if (OracleEval(problem, c.inputs) != c.expected_outputs) { throw DomainError("case csv: row " + f[0] + " disagrees with the oracle"); }
        if (c.origin == CaseOrigin::ExpertEdgeCase) {
            if (set.expert_cutoff != set.cases.size()) { throw DomainError("case csv: expert cases must form a prefix"); }
            ++set.expert_cutoff;
        }
        set.cases.push_back(std::move(c));
    }
    return set;
}

} // namespace ids
