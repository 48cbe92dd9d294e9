#ifndef EVOC_EXPERIMENTS_HPP
#define EVOC_EXPERIMENTS_HPP

// Configuration files, replicate sweeps and output files.
//
// Config format: one `key = value` per line, `#` starts a comment, blank lines
// are ignored. Keys are dotted paths; see README.md for the full list. A line
// `sweep.<key> = v1 v2 ...` turns <key> into a swept parameter; multiple
// sweeps form a grid with the first sweep outermost.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "evoc/engine.hpp"

namespace evoc {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Setting {
    std::string value;
    int line = 0;
};

struct Sweep {
    std::string key;
    std::vector<std::string> values;
    int line = 0;
};

struct ExperimentPlan {
    SimConfig base;
    std::map<std::string, Setting> settings;  // as written, used to rebuild variants
    std::vector<Sweep> sweeps;
    int replicates = 1;
    std::filesystem::path output_dir = "out";
    std::vector<int> snapshot_iterations;
};

struct Variant {
    int id = 0;
    std::vector<std::pair<std::string, std::string>> assignment;  // sweep key -> value
    SimConfig config;
};

ExperimentPlan parse_config(const std::string& text);
ExperimentPlan load_config(const std::filesystem::path& path);  // ConfigError if unreadable

// Grid of sweep assignments in deterministic order; one variant without sweeps.
std::vector<Variant> expand_variants(const ExperimentPlan& plan);

// Seed of replicate `replicate` of variant `variant`; injective in the pair.
std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint32_t variant,
                             std::uint32_t replicate) noexcept;

struct RunRecord {
    int variant = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    RunResult result;
};

struct PlanResult {
    std::vector<Variant> variants;
    std::vector<RunRecord> runs;  // ordered by (variant, replicate)
};

PlanResult execute_plan(const ExperimentPlan& plan);

// Writes metrics/v<V>_r<R>.csv, snapshots/v<V>_r<R>_t<T>.txt and summary.csv
// under plan.output_dir. Throws IoError.
void write_outputs(const ExperimentPlan& plan, const PlanResult& result);

void run_plan(const ExperimentPlan& plan);

struct SummaryStat {
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, 0 for a single value
    int n = 0;
};
SummaryStat summarize(const std::vector<double>& values);

// summary.csv body; columns: variant_id, one per swept key, iteration, stat, mean, sd, n.
// Run-level statistics (convergence) use iteration -1.
std::string render_summary(const ExperimentPlan& plan, const PlanResult& result);

// Landscape as CSV: action_index,p0,...,p5,fitness.
std::string render_landscape_csv(const Landscape& landscape);

// Text grid with one glyph per distinct action plus a legend.
std::string render_snapshot_glyphs(const std::string& snapshot_text);

}  // namespace evoc

#endif
