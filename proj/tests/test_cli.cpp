#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int evoc(const std::string& args) {
    const std::string cmd = std::string(EVOC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("evoc_cli_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("cli: oracle emits the landscape") {
    const fs::path out = fresh("oracle.csv");
    REQUIRE(evoc("oracle --fitness F1 --out " + out.string()) == 0);
    std::istringstream in(slurp(out));
    std::string line;
    std::getline(in, line);
    CHECK(line == "action_index,p0,p1,p2,p3,p4,p5,fitness");
    int rows = 0, maxima = 0;
    while (std::getline(in, line)) {
        ++rows;
        maxima += line.substr(line.rfind(',') + 1) == "13";
    }
    CHECK(rows == 729);
    CHECK(maxima == 8);

    CHECK(evoc("oracle --fitness F2 --out " + out.string()) == 0);
    CHECK(evoc("oracle --fitness F3") == 1);
}

TEST_CASE("cli: exit codes") {
    CHECK(evoc("run /nonexistent/missing.cfg") == 1);
    const fs::path bad = fresh("bad.cfg");
    std::ofstream(bad) << "world.topology = hexagonal\n";
    CHECK(evoc("run " + bad.string()) == 1);
    CHECK(evoc("") == 1);

    const fs::path cfg = fresh("ok.cfg");
    std::ofstream(cfg) << "iterations = 3\n";
    const fs::path blocker = fresh("blocker");
    std::ofstream(blocker) << "file";
    CHECK(evoc("run " + cfg.string() + " --out " + (blocker / "x").string()) == 2);
}

TEST_CASE("cli: run twice with the same seed gives identical trees") {
    const fs::path cfg = fresh("default.cfg");
    std::ofstream(cfg) << "iterations = 30\nreplicates = 2\nsnapshots = 10\n";
    const fs::path a = fresh("run_a"), b = fresh("run_b");
    REQUIRE(evoc("run " + cfg.string() + " --seed 7 --out " + a.string()) == 0);
    REQUIRE(evoc("run " + cfg.string() + " --seed 7 --out " + b.string()) == 0);
    int files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        CHECK(slurp(e.path()) == slurp(b / fs::relative(e.path(), a)));
        ++files;
    }
    CHECK(files == 2 + 2 + 1);
}

TEST_CASE("cli: sweep and snapshot-render") {
    const fs::path cfg = fresh("sweep.cfg");
    std::ofstream(cfg) << "iterations = 10\nsweep.invention_ratio = 1:1 2:1\nsnapshots = 4\n";
    const fs::path out = fresh("sweep_out");
    REQUIRE(evoc("sweep " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "metrics" / "v1_r0.csv"));
    CHECK(evoc("snapshot-render " + (out / "snapshots" / "v1_r0_t4.txt").string()) == 0);
    CHECK(evoc("snapshot-render /nonexistent/snap.txt") == 2);
}
