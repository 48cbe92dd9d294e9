#include "evoc/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace evoc {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

template <typename T>
T parse_number(const Setting& s, const std::string& key) {
    T v{};
    const char* first = s.value.data();
    const char* last = first + s.value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError(s.line, key + ": expected a number, got '" + s.value + "'");
    return v;
}

int parse_int(const Setting& s, const std::string& key) { return parse_number<int>(s, key); }

double parse_real(const Setting& s, const std::string& key) {
    const double v = parse_number<double>(s, key);
    if (!std::isfinite(v)) throw ConfigError(s.line, key + ": value must be finite");
    return v;
}

double parse_probability(const Setting& s, const std::string& key) {
    const double v = parse_real(s, key);
    if (v < 0.0 || v > 1.0) throw ConfigError(s.line, key + ": value must lie in [0, 1]");
    return v;
}

bool parse_bool(const Setting& s, const std::string& key) {
    const std::string v = lower(s.value);
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError(s.line, key + ": expected true or false, got '" + s.value + "'");
}

// "a:b" invention to imitation ratio.
double parse_ratio(const Setting& s, const std::string& key) {
    const auto colon = s.value.find(':');
    if (colon == std::string::npos)
        throw ConfigError(s.line, key + ": expected a ratio like 2:1, got '" + s.value + "'");
    const double a = parse_real({trim(s.value.substr(0, colon)), s.line}, key);
    const double b = parse_real({trim(s.value.substr(colon + 1)), s.line}, key);
    try {
        return ratio_to_probability(a, b);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(s.line, key + ": " + e.what());
    }
}

std::vector<int> parse_int_list(const Setting& s, const std::string& key) {
    std::vector<int> out;
    for (const auto& item : split(s.value, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_int({item, s.line}, key));
    }
    return out;
}

// "lo-hi" or a single index, inclusive.
std::pair<int, int> parse_range(const Setting& s, const std::string& key) {
    const auto dash = s.value.find('-', 1);
    if (dash == std::string::npos) {
        const int v = parse_int(s, key);
        return {v, v};
    }
    return {parse_int({trim(s.value.substr(0, dash)), s.line}, key),
            parse_int({trim(s.value.substr(dash + 1)), s.line}, key)};
}

template <typename Enum>
Enum parse_choice(const Setting& s, const std::string& key,
                  std::initializer_list<std::pair<const char*, Enum>> choices) {
    const std::string v = lower(s.value);
    std::string allowed;
    for (const auto& [name, value] : choices) {
        if (v == lower(name)) return value;
        allowed += allowed.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(s.line, key + ": unknown value '" + s.value + "' (expected one of " +
                                  allowed + ")");
}

// Splits "barriers.3.permeability" into index 3 and field "permeability".
std::optional<std::pair<int, std::string>> indexed_key(const std::string& key,
                                                      const std::string& prefix) {
    if (key.rfind(prefix, 0) != 0) return std::nullopt;
    const std::string rest = key.substr(prefix.size());
    const auto dot = rest.find('.');
    if (dot == std::string::npos || dot == 0) return std::nullopt;
    int index = -1;
    const auto res = std::from_chars(rest.data(), rest.data() + dot, index);
    if (res.ec != std::errc{} || res.ptr != rest.data() + dot || index < 0) return std::nullopt;
    return std::make_pair(index, rest.substr(dot + 1));
}

struct BarrierDraft {
    std::optional<int> left_col;
    double permeability = 0.0;
    std::optional<int> erosion_start;
    std::optional<int> erosion_duration;
    int line = 0;
};

struct RegionDraft {
    std::optional<std::pair<int, int>> rows, cols;
    std::optional<double> invention_prob;
    int line = 0;
};

// Keys that set the same underlying value; a variant override of one removes the others.
std::vector<std::string> aliases_of(const std::string& key) {
    const auto swap_suffix = [&](const std::string& from, const std::string& to)
        -> std::optional<std::string> {
        if (key.size() >= from.size() && key.compare(key.size() - from.size(), from.size(), from) == 0)
            return key.substr(0, key.size() - from.size()) + to;
        return std::nullopt;
    };
    if (auto k = swap_suffix("invention_prob", "invention_ratio")) return {*k};
    if (auto k = swap_suffix("invention_ratio", "invention_prob")) return {*k};
    if (key == "rate_of_change") return {"rate"};
    if (key == "rate") return {"rate_of_change"};
    return {};
}

void build(const std::map<std::string, Setting>& settings, ExperimentPlan& plan) {
    SimConfig cfg;
    std::map<int, BarrierDraft> barriers;
    std::map<int, RegionDraft> regions;
    std::optional<std::string> placement;
    std::optional<double> density;
    std::vector<Cell> cells;
    int placement_line = 0;

    for (const auto& [key, s] : settings) {
        for (const auto& alias : aliases_of(key))
            if (settings.count(alias))
                throw ConfigError(s.line, key + " conflicts with " + alias);

        if (key == "world.rows") {
            cfg.world.rows = parse_int(s, key);
        } else if (key == "world.cols") {
            cfg.world.cols = parse_int(s, key);
        } else if (key == "world.topology") {
            cfg.world.topology = parse_choice<Topology>(
                s, key, {{"torus", Topology::Torus}, {"bounded", Topology::Bounded}});
        } else if (key == "world.placement") {
            placement = parse_choice<std::string>(
                s, key, {{"full", "full"}, {"random", "random"}, {"explicit", "explicit"}});
            placement_line = s.line;
        } else if (key == "world.density") {
            density = parse_real(s, key);
            if (*density <= 0.0 || *density > 1.0)
                throw ConfigError(s.line, key + ": density must lie in (0, 1]");
        } else if (key == "world.cells") {
            for (const auto& item : split(s.value, ';')) {
                if (item.empty()) continue;
                const auto rc = split(item, ',');
                if (rc.size() != 2)
                    throw ConfigError(s.line, key + ": expected 'row,col' entries, got '" + item + "'");
                cells.push_back({parse_int({rc[0], s.line}, key), parse_int({rc[1], s.line}, key)});
            }
        } else if (key == "fitness") {
            cfg.fitness.kind = parse_choice<FitnessKind>(
                s, key,
                {{"F1", FitnessKind::F1}, {"F2", FitnessKind::F2}, {"weighted", FitnessKind::Weighted}});
        } else if (key == "fitness.weight_f1") {
            cfg.fitness.weight_f1 = parse_real(s, key);
        } else if (key == "fitness.weight_f2") {
            cfg.fitness.weight_f2 = parse_real(s, key);
        } else if (key == "iterations") {
            cfg.iterations = parse_int(s, key);
        } else if (key == "invention_prob") {
            cfg.invention_prob = parse_probability(s, key);
        } else if (key == "invention_ratio") {
            cfg.invention_prob = parse_ratio(s, key);
        } else if (key == "rate_of_change" || key == "rate") {
            cfg.rate_of_change = parse_probability(s, key);
        } else if (key == "broadcast.count") {
            cfg.broadcast.count = parse_int(s, key);
        } else if (key == "broadcast.selection") {
            cfg.broadcast.selection = parse_choice<BroadcastSelection>(
                s, key,
                {{"fixed", BroadcastSelection::FixedIds},
                 {"random", BroadcastSelection::RandomEachIteration},
                 {"fittest", BroadcastSelection::Fittest}});
        } else if (key == "broadcast.ids") {
            cfg.broadcast.ids = parse_int_list(s, key);
        } else if (key == "broadcast.period") {
            cfg.broadcast.period = parse_int(s, key);
        } else if (key == "mental_simulation") {
            cfg.mental_simulation = parse_bool(s, key);
        } else if (key == "seed") {
            cfg.seed = parse_number<std::uint64_t>(s, key);
        } else if (key == "update_mode") {
            cfg.update_mode = parse_choice<UpdateMode>(
                s, key,
                {{"synchronous", UpdateMode::Synchronous}, {"sequential", UpdateMode::Sequential}});
        } else if (key == "replicates") {
            plan.replicates = parse_int(s, key);
            if (plan.replicates < 1) throw ConfigError(s.line, key + ": must be at least 1");
        } else if (key == "snapshots") {
            plan.snapshot_iterations = parse_int_list(s, key);
        } else if (key == "output.dir") {
            plan.output_dir = s.value;
        } else if (auto b = indexed_key(key, "barriers.")) {
            auto& d = barriers[b->first];
            d.line = std::max(d.line, s.line);
            const std::string& field = b->second;
            if (field == "between_cols") {
                const auto cols = parse_int_list(s, key);
                if (cols.empty() || cols.size() > 2 || (cols.size() == 2 && cols[1] != cols[0] + 1))
                    throw ConfigError(s.line, key + ": expected 'c, c+1' or 'c'");
                d.left_col = cols[0];
            } else if (field == "permeability") {
                d.permeability = parse_probability(s, key);
            } else if (field == "erosion_start") {
                d.erosion_start = parse_int(s, key);
            } else if (field == "erosion_duration") {
                d.erosion_duration = parse_int(s, key);
            } else {
                throw ConfigError(s.line, "unknown key '" + key + "'");
            }
        } else if (auto r = indexed_key(key, "regions.")) {
            auto& d = regions[r->first];
            d.line = std::max(d.line, s.line);
            const std::string& field = r->second;
            if (field == "rows") {
                d.rows = parse_range(s, key);
            } else if (field == "cols") {
                d.cols = parse_range(s, key);
            } else if (field == "invention_prob") {
                d.invention_prob = parse_probability(s, key);
            } else if (field == "invention_ratio") {
                d.invention_prob = parse_ratio(s, key);
            } else {
                throw ConfigError(s.line, "unknown key '" + key + "'");
            }
        } else {
            throw ConfigError(s.line, "unknown key '" + key + "'");
        }
    }

    if (!placement) placement = !cells.empty() ? "explicit" : density ? "random" : "full";
    if (*placement == "full") {
        if (density || !cells.empty())
            throw ConfigError(placement_line, "full placement takes no density or cell list");
        cfg.world.placement = FullPlacement{};
    } else if (*placement == "random") {
        if (!density) throw ConfigError(placement_line, "random placement needs world.density");
        cfg.world.placement = RandomDensityPlacement{*density};
    } else {
        if (cells.empty()) throw ConfigError(placement_line, "explicit placement needs world.cells");
        cfg.world.placement = ExplicitPlacement{cells};
    }

    for (const auto& [index, d] : barriers) {
        if (index != static_cast<int>(cfg.world.barriers.size()))
            throw ConfigError(d.line, "barrier indices must be consecutive from 0");
        if (!d.left_col)
            throw ConfigError(d.line, "barriers." + std::to_string(index) + ".between_cols is required");
        cfg.world.barriers.push_back({*d.left_col, d.permeability, d.erosion_start, d.erosion_duration});
    }
    for (const auto& [index, d] : regions) {
        if (!d.rows || !d.cols)
            throw ConfigError(d.line, "regions." + std::to_string(index) + " needs rows and cols");
        cfg.world.region_overrides.push_back(
            {Rect{d.rows->first, d.rows->second, d.cols->first, d.cols->second}, d.invention_prob});
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    plan.base = std::move(cfg);
}

}  // namespace

ExperimentPlan parse_config(const std::string& text) {
    ExperimentPlan plan;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::set<std::string> swept;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "malformed line, expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "missing key");
        if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");

        if (key.rfind("sweep.", 0) == 0) {
            Sweep sw{key.substr(6), split_ws(value), line_no};
            if (sw.key.empty() || sw.key.rfind("sweep.", 0) == 0)
                throw ConfigError(line_no, "malformed sweep key");
            if (!swept.insert(sw.key).second)
                throw ConfigError(line_no, "parameter '" + sw.key + "' is swept twice");
            plan.sweeps.push_back(std::move(sw));
            continue;
        }
        if (!plan.settings.emplace(key, Setting{value, line_no}).second)
            throw ConfigError(line_no, "duplicate key '" + key + "'");
    }
    build(plan.settings, plan);
    // Building every variant up front reports bad sweep values at load time.
    expand_variants(plan);
    return plan;
}

ExperimentPlan load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<Variant> expand_variants(const ExperimentPlan& plan) {
    std::vector<Variant> variants;
    std::vector<std::pair<std::string, std::string>> assignment;
    std::function<void(std::size_t)> recurse = [&](std::size_t depth) {
        if (depth == plan.sweeps.size()) {
            auto settings = plan.settings;
            for (std::size_t i = 0; i < assignment.size(); ++i) {
                const auto& [key, value] = assignment[i];
                for (const auto& alias : aliases_of(key)) settings.erase(alias);
                settings[key] = Setting{value, plan.sweeps[i].line};
            }
            ExperimentPlan scratch;
            build(settings, scratch);
            variants.push_back({static_cast<int>(variants.size()), assignment, scratch.base});
            return;
        }
        for (const auto& v : plan.sweeps[depth].values) {
            assignment.emplace_back(plan.sweeps[depth].key, v);
            recurse(depth + 1);
            assignment.pop_back();
        }
    };
    recurse(0);
    return variants;
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint32_t variant,
                             std::uint32_t replicate) noexcept {
    // A fixed base makes this a bijection of the packed (variant, replicate) key.
    const std::uint64_t key = (static_cast<std::uint64_t>(variant) << 32) | replicate;
    return mix64(derive_seed(base_seed, {static_cast<std::uint64_t>(Stream::Replicate)}) ^ key);
}

PlanResult execute_plan(const ExperimentPlan& plan) {
    PlanResult out;
    out.variants = expand_variants(plan);
    RunOptions options;
    options.snapshot_iterations = plan.snapshot_iterations;
    for (const auto& v : out.variants) {
        for (int k = 0; k < plan.replicates; ++k) {
            SimConfig cfg = v.config;
            cfg.seed = replicate_seed(plan.base.seed, static_cast<std::uint32_t>(v.id),
                                      static_cast<std::uint32_t>(k));
            try {
                out.runs.push_back({v.id, k, cfg.seed, run(cfg, options)});
            } catch (const std::invalid_argument& e) {
                throw ConfigError(0, "variant " + std::to_string(v.id) + ": " + e.what());
            }
        }
    }
    return out;
}

SummaryStat summarize(const std::vector<double>& values) {
    SummaryStat s;
    s.n = static_cast<int>(values.size());
    if (values.empty()) return s;
    double sum = 0.0;
    for (const double v : values) sum += v;
    s.mean = sum / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

std::string render_summary(const ExperimentPlan& plan, const PlanResult& result) {
    std::ostringstream out;
    out << "variant_id";
    for (const auto& sw : plan.sweeps) out << ',' << sw.key;
    out << ",iteration,stat,mean,sd,n\n";

    const auto emit = [&](const Variant& v, int iteration, const char* stat, const SummaryStat& s) {
        out << v.id;
        for (const auto& kv : v.assignment) out << ',' << kv.second;
        out << ',' << iteration << ',' << stat << ',' << format_double(s.mean) << ','
            << format_double(s.sd) << ',' << s.n << '\n';
    };

    for (const auto& v : result.variants) {
        std::vector<const RunResult*> runs;
        for (const auto& r : result.runs)
            if (r.variant == v.id) runs.push_back(&r.result);
        if (runs.empty()) continue;
        const std::size_t rows = runs.front()->metrics.size();
        for (std::size_t t = 0; t < rows; ++t) {
            std::vector<double> fit, div, top;
            for (const auto* r : runs) {
                fit.push_back(r->metrics[t].mean_fitness);
                div.push_back(r->metrics[t].diversity);
                top.push_back(r->metrics[t].top_fraction);
            }
            const int iteration = runs.front()->metrics[t].iteration;
            emit(v, iteration, "mean_fitness", summarize(fit));
            emit(v, iteration, "diversity", summarize(div));
            emit(v, iteration, "top_fraction", summarize(top));
        }
        std::vector<double> conv, flags;
        for (const auto* r : runs) {
            flags.push_back(r->convergence_iteration >= 0 ? 1.0 : 0.0);
            if (r->convergence_iteration >= 0) conv.push_back(r->convergence_iteration);
        }
        emit(v, -1, "converged", summarize(flags));
        emit(v, -1, "convergence_iteration", summarize(conv));
    }
    return out.str();
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void make_dirs(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create directory '" + dir.string() + "'");
}

}  // namespace

void write_outputs(const ExperimentPlan& plan, const PlanResult& result) {
    const fs::path metrics_dir = plan.output_dir / "metrics";
    make_dirs(metrics_dir);
    std::vector<std::vector<int>> optima;
    for (const auto& v : result.variants) optima.push_back(FitnessTable(v.config.fitness).optima());
    for (const auto& r : result.runs) {
        const std::string stem = "v" + std::to_string(r.variant) + "_r" + std::to_string(r.replicate);
        std::ostringstream csv;
        write_metrics_header(csv, optima[static_cast<std::size_t>(r.variant)]);
        for (const auto& row : r.result.metrics) write_metrics_row(csv, row);
        write_file(metrics_dir / (stem + ".csv"), csv.str());
        if (!r.result.snapshots.empty()) {
            const fs::path snap_dir = plan.output_dir / "snapshots";
            make_dirs(snap_dir);
            for (const auto& s : r.result.snapshots)
                write_file(snap_dir / (stem + "_t" + std::to_string(s.iteration) + ".txt"), s.text);
        }
    }
    write_file(plan.output_dir / "summary.csv", render_summary(plan, result));
}

void run_plan(const ExperimentPlan& plan) { write_outputs(plan, execute_plan(plan)); }

std::string render_landscape_csv(const Landscape& landscape) {
    std::ostringstream out;
    out << "action_index,p0,p1,p2,p3,p4,p5,fitness\n";
    for (const auto& row : landscape.rows) {
        out << row.index;
        for (std::size_t i = 0; i < kBodyParts; ++i) out << ',' << static_cast<int>(row.action[i]);
        out << ',' << format_double(row.fitness) << '\n';
    }
    return out.str();
}

std::string render_snapshot_glyphs(const std::string& snapshot_text) {
    static constexpr std::string_view kGlyphs =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
    const auto grid = parse_snapshot(snapshot_text);
    std::map<int, int> counts;
    for (const auto& row : grid)
        for (const auto& cell : row)
            if (cell) ++counts[*cell];

    // Glyphs go to actions in ascending index order; '?' once they run out.
    std::map<int, char> glyph;
    std::size_t next = 0;
    for (const auto& kv : counts)
        glyph[kv.first] = next < kGlyphs.size() ? kGlyphs[next++] : '?';

    std::ostringstream out;
    for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ' ';
            out << (row[c] ? glyph[*row[c]] : '.');
        }
        out << '\n';
    }
    out << '\n';
    for (const auto& [index, n] : counts)
        out << glyph[index] << "  " << index << "  " << to_string(action_from_index(index))
            << "  x" << n << '\n';
    return out.str();
}

}  // namespace evoc
