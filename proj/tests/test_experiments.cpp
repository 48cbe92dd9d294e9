#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "evoc/experiments.hpp"

using namespace evoc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("evoc_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("empty config yields the default plan") {
    const ExperimentPlan plan = parse_config("");
    const SimConfig& c = plan.base;
    CHECK(c.world.rows == 10);
    CHECK(c.world.cols == 10);
    CHECK(c.world.topology == Topology::Torus);
    CHECK(std::holds_alternative<FullPlacement>(c.world.placement));
    CHECK(c.world.barriers.empty());
    CHECK(c.fitness.kind == FitnessKind::F1);
    CHECK(c.iterations == 100);
    CHECK(c.invention_prob == 0.5);
    CHECK(c.rate_of_change == doctest::Approx(1.0 / 6.0));
    CHECK(c.broadcast.count == 0);
    CHECK(c.mental_simulation);
    CHECK(c.update_mode == UpdateMode::Synchronous);
    CHECK(plan.replicates == 1);
    CHECK(plan.sweeps.empty());
}

TEST_CASE("config values") {
    const ExperimentPlan plan = parse_config(R"(
# eroding barrier
world.rows = 8
world.cols = 8
world.topology = bounded
barriers.0.between_cols = 3, 4
barriers.0.permeability = 0
barriers.0.erosion_start = 10
barriers.0.erosion_duration = 40
regions.0.rows = 0-7
regions.0.cols = 4-7
regions.0.invention_ratio = 2:1
invention_ratio = 2:1   # trailing comment
broadcast.count = 2
broadcast.selection = fixed
broadcast.ids = 5, 9
broadcast.period = 3
fitness = weighted
fitness.weight_f1 = 0.25
fitness.weight_f2 = 0.75
mental_simulation = false
update_mode = sequential
seed = 123456789012
replicates = 3
snapshots = 0, 4, 20
)");
    const SimConfig& c = plan.base;
    CHECK(c.world.topology == Topology::Bounded);
    REQUIRE(c.world.barriers.size() == 1);
    CHECK(c.world.barriers[0].left_col == 3);
    CHECK(c.world.barriers[0].erosion_start == 10);
    CHECK(c.world.barriers[0].erosion_duration == 40);
    REQUIRE(c.world.region_overrides.size() == 1);
    CHECK(c.world.region_overrides[0].area.col_min == 4);
    CHECK(*c.world.region_overrides[0].invention_prob == doctest::Approx(2.0 / 3.0));
    CHECK(c.invention_prob == doctest::Approx(2.0 / 3.0));
    CHECK(c.broadcast.ids == std::vector<int>{5, 9});
    CHECK(c.broadcast.selection == BroadcastSelection::FixedIds);
    CHECK(c.broadcast.period == 3);
    CHECK(c.fitness.kind == FitnessKind::Weighted);
    CHECK_FALSE(c.mental_simulation);
    CHECK(c.update_mode == UpdateMode::Sequential);
    CHECK(c.seed == 123456789012ULL);
    CHECK(plan.replicates == 3);
    CHECK(plan.snapshot_iterations == std::vector<int>{0, 4, 20});

    const auto random = parse_config("world.density = 0.25\n").base;
    REQUIRE(std::holds_alternative<RandomDensityPlacement>(random.world.placement));
    const auto expl = parse_config("world.cells = 0,0; 1,1; 2,2\n").base;
    CHECK(std::get<ExplicitPlacement>(expl.world.placement).cells.size() == 3);
}

TEST_CASE("config errors carry line numbers") {
    CHECK(error_line("world.topology = hexagonal\n") == 1);
    CHECK(error_line("\n\nbogus.key = 3\n") == 3);
    CHECK(error_line("iterations = 10\nthis line has no equals sign\n") == 2);
    CHECK(error_line("invention_prob = 1.5\n") == 1);
    CHECK(error_line("rate_of_change = -0.1\n") == 1);
    CHECK(error_line("iterations = ten\n") == 1);
    CHECK(error_line("iterations = 5\niterations = 6\n") == 2);
    CHECK(error_line("invention_prob = 0.5\ninvention_ratio = 2:1\n") > 0);
    CHECK(error_line("barriers.0.between_cols = 3, 5\n") == 1);
    CHECK(error_line("barriers.1.between_cols = 3\n") == 1);
    CHECK(error_line("sweep.invention_ratio = 1:1 banana\n") == 1);
    CHECK(error_line("sweep.no_such_key = 1 2\n") == 1);
    CHECK(error_line("world.placement = random\n") == 1);
    CHECK(error_line("mental_simulation = maybe\n") == 1);
    // Errors only visible after assembly have no single line.
    CHECK(error_line("world.rows = 0\n") == 0);
    CHECK_THROWS_AS(load_config("/nonexistent/evoc.cfg"), ConfigError);
}

TEST_CASE("sweeps expand into a grid") {
    const ExperimentPlan plan = parse_config(
        "invention_prob = 0.3\n"
        "sweep.invention_ratio = 1:4 1:1 2:1 4:1\n"
        "sweep.world.topology = torus bounded\n");
    const auto variants = expand_variants(plan);
    REQUIRE(variants.size() == 8);
    CHECK(variants[0].config.invention_prob == doctest::Approx(0.2));
    CHECK(variants[0].config.world.topology == Topology::Torus);
    CHECK(variants[1].config.world.topology == Topology::Bounded);
    CHECK(variants[7].config.invention_prob == doctest::Approx(0.8));
    CHECK(variants[5].assignment[0].second == "2:1");
    // Sweeping the ratio replaces the base probability rather than conflicting.
    CHECK(plan.base.invention_prob == 0.3);
}

TEST_CASE("replicate seeds are distinct over the (variant, replicate) grid") {
    std::set<std::uint64_t> seeds;
    for (std::uint32_t v = 0; v < 100; ++v)
        for (std::uint32_t k = 0; k < 100; ++k) seeds.insert(replicate_seed(7, v, k));
    CHECK(seeds.size() == 10000);
    CHECK(replicate_seed(7, 1, 2) == replicate_seed(7, 1, 2));
    CHECK(replicate_seed(7, 1, 2) != replicate_seed(8, 1, 2));
}

TEST_CASE("run_plan writes per-run metrics and a summary") {
    ExperimentPlan plan = parse_config("iterations = 20\nreplicates = 2\nsnapshots = 0, 20\n");
    plan.output_dir = scratch_dir("plan");
    run_plan(plan);
    CHECK(fs::exists(plan.output_dir / "metrics" / "v0_r0.csv"));
    CHECK(fs::exists(plan.output_dir / "metrics" / "v0_r1.csv"));
    CHECK(std::distance(fs::directory_iterator(plan.output_dir / "metrics"), fs::directory_iterator{}) == 2);
    CHECK(fs::exists(plan.output_dir / "summary.csv"));
    CHECK(fs::exists(plan.output_dir / "snapshots" / "v0_r1_t20.txt"));
    CHECK(slurp(plan.output_dir / "snapshots" / "v0_r0_t0.txt").substr(0, 8) == "364 364 ");

    const auto m = read_csv(plan.output_dir / "metrics" / "v0_r0.csv");
    CHECK(m.size() == 22);
    CHECK(m[0][0] == "iteration");
    CHECK(m[0].size() == 14);
}

TEST_CASE("identical plans give byte-identical outputs") {
    const std::string text = "iterations = 15\nreplicates = 2\nsweep.world.density = 1 0.5\nsnapshots = 15\n";
    ExperimentPlan a = parse_config(text), b = parse_config(text);
    a.output_dir = scratch_dir("det_a");
    b.output_dir = scratch_dir("det_b");
    run_plan(a);
    run_plan(b);
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a.output_dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path rel = fs::relative(entry.path(), a.output_dir);
        CHECK(slurp(entry.path()) == slurp(b.output_dir / rel));
        ++compared;
    }
    CHECK(compared == 4 + 4 + 1);
}

TEST_CASE("summary statistics match a recomputation from the metrics files") {
    ExperimentPlan plan = parse_config(
        "iterations = 25\nreplicates = 3\nsweep.invention_ratio = 1:4 1:1 2:1 4:1\n");
    plan.output_dir = scratch_dir("summary");
    run_plan(plan);

    const auto summary = read_csv(plan.output_dir / "summary.csv");
    REQUIRE(!summary.empty());
    CHECK(summary[0] == std::vector<std::string>{"variant_id", "invention_ratio", "iteration", "stat",
                                                 "mean", "sd", "n"});
    std::set<std::string> variant_ids;
    std::size_t checked = 0;
    for (std::size_t i = 1; i < summary.size(); ++i) {
        const auto& row = summary[i];
        variant_ids.insert(row[0]);
        if (row[2] == "-1") continue;
        const int t = std::stoi(row[2]);
        const std::string& stat = row[3];
        const std::size_t column = stat == "mean_fitness" ? 1 : stat == "diversity" ? 2 : 4;
        std::vector<double> values;
        for (int k = 0; k < plan.replicates; ++k) {
            const auto m = read_csv(plan.output_dir / "metrics" / ("v" + row[0] + "_r" + std::to_string(k) + ".csv"));
            values.push_back(std::stod(m[static_cast<std::size_t>(t) + 1][column]));
        }
        const SummaryStat s = summarize(values);
        CHECK(format_double(s.mean) == row[4]);
        CHECK(format_double(s.sd) == row[5]);
        CHECK(std::to_string(s.n) == row[6]);
        ++checked;
    }
    CHECK(variant_ids.size() == 4);
    CHECK(checked == 4 * 26 * 3);

    // Convergence recomputed from the optimum share columns.
    for (int v = 0; v < 4; ++v) {
        std::vector<double> conv;
        for (int k = 0; k < plan.replicates; ++k) {
            const auto m = read_csv(plan.output_dir / "metrics" /
                                    ("v" + std::to_string(v) + "_r" + std::to_string(k) + ".csv"));
            for (std::size_t r = 1; r < m.size(); ++r) {
                double share = 0.0;
                for (std::size_t c = 6; c < m[r].size(); ++c) share += std::stod(m[r][c]);
                if (share >= 0.9 - 1e-9) {
                    conv.push_back(std::stod(m[r][0]));
                    break;
                }
            }
        }
        const SummaryStat s = summarize(conv);
        bool found = false;
        for (const auto& row : summary)
            if (row[0] == std::to_string(v) && row[3] == "convergence_iteration") {
                CHECK(row[4] == format_double(s.mean));
                CHECK(row[6] == std::to_string(s.n));
                found = true;
            }
        CHECK(found);
    }
}

TEST_CASE("unwritable output directory is an I/O error") {
    const fs::path blocker = scratch_dir("blocker");
    std::ofstream(blocker) << "not a directory";
    ExperimentPlan plan = parse_config("iterations = 2\n");
    plan.output_dir = blocker / "sub";
    CHECK_THROWS_AS(run_plan(plan), IoError);
}

TEST_CASE("golden files: landscape, snapshot rendering and a tiny run") {
    const std::string golden = EVOC_GOLDEN_DIR;
    CHECK(render_landscape_csv(enumerate_landscape({FitnessKind::F1})) == slurp(golden + "/oracle_f1.csv"));

    const std::string snapshot = slurp(golden + "/snapshot_small.txt");
    CHECK(render_snapshot_glyphs(snapshot) == slurp(golden + "/snapshot_small_rendered.txt"));

    ExperimentPlan plan = load_config(golden + "/tiny.cfg");
    plan.output_dir = scratch_dir("golden");
    run_plan(plan);
    CHECK(slurp(plan.output_dir / "metrics" / "v0_r0.csv") == slurp(golden + "/tiny_metrics.csv"));
    CHECK(slurp(plan.output_dir / "snapshots" / "v0_r0_t6.txt") == slurp(golden + "/tiny_t6.txt"));
}
