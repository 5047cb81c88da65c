// ids: run, sweep and analyze down-sampled lexicase experiments.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <thread>

#include "ids/ids.hpp"

namespace fs = std::filesystem;
using namespace ids;

namespace {

struct Options {
    std::string problem{"fizz-buzz"};
    std::string strategy{"lexicase"};
    double r{0.05};
    double rho{0.01};
    std::int64_t k{10};
    std::size_t pop{1000};
    std::size_t train_size{200};
    std::size_t test_size{1000};
    std::int64_t generations{300};
    std::optional<std::uint64_t> budget;
    std::optional<std::int64_t> generation_limit;
    std::size_t runs{100};
    std::uint64_t seed{0};
    std::string out{"out"};
    std::size_t workers{0};
    std::size_t step_limit{2000};
    double umad_rate{0.1};
    std::size_t max_initial_size{250};
    bool early_stop{false};
    bool two_sided{false};
    std::string family{"per-problem"};
    std::string input; // compose / stats input
};

auto OpenOut(fs::path const& path) -> std::ofstream
{
    fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) { throw std::runtime_error("cannot write " + path.string()); }
    return os;
}

auto StrategyFrom(Options const& o) -> StrategyConfig
{
    StrategyConfig s;
    s.kind = StrategyFromName(o.strategy);
    if (s.kind != StrategyKind::Lexicase) { s.r = o.r; }
    if (s.kind == StrategyKind::InformedDS) {
        s.rho = o.rho;
        s.k = o.k;
    }
    return s;
}

auto ConfigFrom(Options const& o, ProblemKind problem, StrategyConfig const& strategy) -> ExperimentConfig
{
    ExperimentConfig c;
    c.problem = problem;
    c.strategy = strategy;
    c.population_size = o.pop;
    c.train_size = o.train_size;
    c.test_size = o.test_size;
    c.base_generations = o.generations;
    // without an explicit budget, match `generations` of full-training-set evaluation
    c.execution_budget = o.budget.value_or(static_cast<std::uint64_t>(o.pop) * o.train_size * static_cast<std::uint64_t>(o.generations));
    c.generation_limit_override = o.generation_limit;
    c.step_limit = o.step_limit;
    c.umad_rate = o.umad_rate;
    c.max_initial_plushy_size = o.max_initial_size;
    c.runs = o.runs;
    c.seed = o.seed;
    c.workers = o.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : o.workers;
    c.early_stop = o.early_stop;
    c.Validate();
    return c;
}

// Writes run_<id>.csv, sizes.csv and (when down-sampled) composition.csv.
auto RunAndWrite(ExperimentConfig const& c, fs::path const& dir) -> SummaryRow
{
    std::clog << "running " << ProblemName(c.problem) << ' ' << c.strategy.Label() << ": " << c.runs << " runs, limit "
              << c.generation_limit_override.value_or(GenerationLimit(c.base_generations, c.strategy)) << " generations, budget "
              << c.execution_budget << '\n';
    auto const summary = RunExperiment(c);
    for (auto const& rec : summary.records) {
        auto os = OpenOut(dir / ("run_" + std::to_string(rec.run_id) + ".csv"));
        WriteRunRecord(os, rec);
    }
    {
        auto os = OpenOut(dir / "sizes.csv");
        WriteSizes(os, summary.records);
    }
    if (c.strategy.kind != StrategyKind::Lexicase) {
        auto os = OpenOut(dir / "composition.csv");
        WriteComposition(os, DownsampleCompositionLog(summary.records));
    }
    auto row = SummaryRowFor(summary);
    std::clog << "  successes " << row.successes << '/' << row.runs << ", solves " << row.solves << ", generalization "
              << row.generalization_rate << '\n';
    return row;
}

auto Problems(std::string const& name) -> std::vector<ProblemKind>
{
    if (name == "all") { return {kBenchmarkProblems.begin(), kBenchmarkProblems.end()}; }
    return {ProblemFromName(name)};
}

void CmdRun(Options const& o)
{
    fs::path const out(o.out);
    std::vector<SummaryRow> rows;
    for (auto problem : Problems(o.problem)) {
        auto const c = ConfigFrom(o, problem, StrategyFrom(o));
        auto const dir = o.problem == "all" ? out / std::string(ProblemName(problem)) : out;
        rows.push_back(RunAndWrite(c, dir));
    }
    auto os = OpenOut(out / "summary.csv");
    WriteSummary(os, rows);
}

void CmdSweep(Options const& o)
{
    fs::path const out(o.out);
    std::vector<SummaryRow> rows;
    for (auto problem : Problems(o.problem)) {
        for (auto const& s : SweepStrategies()) {
            auto const c = ConfigFrom(o, problem, s);
            rows.push_back(RunAndWrite(c, out / std::string(ProblemName(problem)) / s.Label()));
        }
    }
    auto os = OpenOut(out / "summary.csv");
    WriteSummary(os, rows);
}

void CmdCompose(Options const& o)
{
    if (o.input.empty()) { throw ConfigError("compose: pass the directory holding run_<id>.csv files"); }
    std::regex const pattern(R"(run_\d+\.csv)");
    std::vector<fs::path> files;
    for (auto const& e : fs::directory_iterator(o.input)) {
        if (e.is_regular_file() && std::regex_match(e.path().filename().string(), pattern)) { files.push_back(e.path()); }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) { throw ConfigError("compose: no run_<id>.csv files in " + o.input); }
    std::vector<RunRecord> records;
    for (auto const& f : files) {
        std::ifstream is(f);
        records.push_back(ReadRunRecord(is));
    }
    auto const log = DownsampleCompositionLog(records);
    auto os = OpenOut(fs::path(o.out) / "composition.csv");
    WriteComposition(os, log);
    if (!log.Empty()) {
        std::cout << "runs " << records.size() << ", generations " << log.Generations() << ", mean inclusion: expert "
                  << csv::Fixed(log.MeanFrequency(0, log.expert_cutoff)) << ", other "
                  << csv::Fixed(log.MeanFrequency(log.expert_cutoff, log.train_size)) << '\n';
    }
}

void CmdStats(Options const& o)
{
    auto const path = o.input.empty() ? fs::path(o.out) / "summary.csv" : fs::path(o.input);
    std::ifstream is(path);
    if (!is) { throw ConfigError("stats: cannot read " + path.string()); }
    auto const rows = ReadSummary(is);
    auto const table = stats::SignificanceTable(rows, stats::FamilyFromName(o.family),
        o.two_sided ? stats::Sidedness::TwoSided : stats::Sidedness::Greater);
    stats::WriteSignificance(std::cout, table);
    auto os = OpenOut(fs::path(o.out) / "significance.csv");
    stats::WriteSignificance(os, table);
}

void CmdDumpInstructions(Options const& o)
{
    for (auto problem : Problems(o.problem)) {
        auto const p = MakeProblem(problem);
        std::cout << "# " << p.name << ": " << p.instructions.instructions.size() << " instructions, " << p.instructions.constants.size()
                  << " constants\n";
        std::cout << "token,kind,opens\n";
        for (auto op : p.instructions.instructions) { std::cout << vm::Info(op).name << ",instruction," << int{vm::Info(op).opens} << '\n'; }
        for (auto const& v : p.instructions.constants) { std::cout << csv::Escape(vm::ValueToJson(v).dump()) << ",constant,0\n"; }
        std::cout << "close,close,0\n";
        if (auto const range = p.instructions.random_integer_range) {
            std::cout << "erc[" << range->first << ".." << range->second << "],random-integer,0\n";
        }
    }
}

void CmdExportCases(Options const& o)
{
    fs::path const out(o.out);
    for (auto problem : Problems(o.problem)) {
        auto const p = MakeProblem(problem);
        auto const [train, test] = GenerateCaseSets(p, o.train_size, o.test_size, o.seed);
        auto const dir = o.problem == "all" ? out / p.name : out;
        auto tr = OpenOut(dir / "train.csv");
        WriteCases(tr, p, train);
        auto te = OpenOut(dir / "test.csv");
        WriteCases(te, p, test);
        std::clog << p.name << ": " << train.size() << " training cases (" << train.expert_cutoff << " expert), " << test.size()
                  << " test cases -> " << dir.string() << '\n';
    }
}

} // namespace

auto main(int argc, char** argv) -> int
{
    CLI::App app{"Informed down-sampled lexicase selection experiments"};
    app.set_config("--config", "", "TOML/INI file with any of the options below; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    Options o;

    app.add_option("--problem", o.problem, "problem name, or 'all'")->capture_default_str();
    app.add_option("--strategy", o.strategy, "lexicase | random-ds | informed-ds")
        ->check(CLI::IsMember({"lexicase", "random-ds", "informed-ds"}))
        ->capture_default_str();
    app.add_option("--r", o.r, "down-sample rate")->capture_default_str();
    app.add_option("--rho", o.rho, "parent sampling rate (informed-ds)")->capture_default_str();
    app.add_option("--k", o.k, "generations between distance updates (informed-ds)")->capture_default_str();
    app.add_option("--pop", o.pop, "population size")->capture_default_str();
    app.add_option("--train-size", o.train_size, "training cases")->capture_default_str();
    app.add_option("--test-size", o.test_size, "held-out test cases")->capture_default_str();
    app.add_option("--generations", o.generations, "lexicase-equivalent generations; sets the generation limit of every strategy")
        ->capture_default_str();
    app.add_option("--budget", o.budget, "program executions per run (default pop * train-size * generations)");
    app.add_option("--generation-limit", o.generation_limit, "fixed generation limit, replacing the budget-equivalent one");
    app.add_option("--runs", o.runs, "independent runs")->capture_default_str();
    app.add_option("--seed", o.seed, "experiment seed")->capture_default_str();
    app.add_option("--out", o.out, "output directory")->capture_default_str();
    app.add_option("--workers", o.workers, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--step-limit", o.step_limit, "interpreter step limit")->capture_default_str();
    app.add_option("--umad-rate", o.umad_rate, "UMAD addition rate")->capture_default_str();
    app.add_option("--max-initial-size", o.max_initial_size, "largest random initial genome")->capture_default_str();
    app.add_flag("--early-stop", o.early_stop, "end a run at its first training-set solution");
    app.add_flag("--two-sided", o.two_sided, "two-sided z-tests in stats");
    app.add_option("--family", o.family, "Holm correction family: per-problem | per-rate")
        ->check(CLI::IsMember({"per-problem", "per-rate"}))
        ->capture_default_str();

    auto* run = app.add_subcommand("run", "run one configuration");
    auto* sweep = app.add_subcommand("sweep", "run the eleven standard configurations");
    auto* compose = app.add_subcommand("compose", "down-sample composition from a directory of run_<id>.csv files");
    compose->add_option("input", o.input, "directory with run records")->required();
    auto* stats = app.add_subcommand("stats", "significance of informed vs random down-sampling from summary.csv");
    stats->add_option("input", o.input, "summary.csv (default <out>/summary.csv)");
    auto* dump = app.add_subcommand("dump-instructions", "list the token pool of a problem");
    auto* cases = app.add_subcommand("export-cases", "write train.csv and test.csv for a problem and seed");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) { CmdRun(o); }
        if (sweep->parsed()) { CmdSweep(o); }
        if (compose->parsed()) { CmdCompose(o); }
        if (stats->parsed()) { CmdStats(o); }
        if (dump->parsed()) { CmdDumpInstructions(o); }
        if (cases->parsed()) { CmdExportCases(o); }
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
