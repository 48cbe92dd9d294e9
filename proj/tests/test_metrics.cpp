#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "evoc/metrics.hpp"
#include "evoc/random.hpp"

using namespace evoc;

namespace {

const FitnessSpec kF1{FitnessKind::F1};
const Action kOpt = action_from_index(101);
const Action kOpt2 = action_from_index(627);
const Action kFive = Action::of(Posture::Left, Posture::Right, Posture::Stationary, Posture::Stationary,
                                Posture::Stationary, Posture::Stationary);

}  // namespace

TEST_CASE("diversity") {
    CHECK(diversity(std::vector<Action>(100, kOpt)) == 1);
    CHECK(diversity(std::vector<Action>{kOpt, kOpt, kFive}) == 2);
    std::vector<Action> distinct;
    for (int i = 0; i < 100; ++i) distinct.push_back(action_from_index(i * 7));
    CHECK(diversity(distinct) == 100);
    CHECK_THROWS_AS(diversity(std::vector<Action>{}), std::invalid_argument);
}

TEST_CASE("mean fitness") {
    CHECK(mean_fitness(std::vector<Action>(10, Action::stationary()), kF1) == 0.0);
    CHECK(mean_fitness(std::vector<Action>(10, kOpt), kF1) == 13.0);
    std::vector<Action> half(50, kOpt);
    half.insert(half.end(), 50, kFive);
    CHECK(mean_fitness(half, kF1) == 9.0);
    CHECK_THROWS_AS(mean_fitness(std::vector<Action>{}, kF1), std::invalid_argument);
}

TEST_CASE("top fraction") {
    const auto [idx, frac] = top_fraction(std::vector<Action>{kFive, kFive, kOpt});
    CHECK(idx == action_index(kFive));
    CHECK(frac == doctest::Approx(2.0 / 3.0));
    CHECK(top_fraction(std::vector<Action>(5, kOpt)).second == 1.0);
    // Tie: lower action index wins.
    CHECK(top_fraction(std::vector<Action>{kOpt2, kOpt, kOpt2, kOpt}).first == 101);
    CHECK_THROWS_AS(top_fraction(std::vector<Action>{}), std::invalid_argument);
}

TEST_CASE("optimum shares") {
    auto shares = optimum_shares(std::vector<Action>(20, kOpt), kF1);
    REQUIRE(shares.size() == 8);
    for (const auto& [opt, s] : shares) CHECK(s == (opt == 101 ? 1.0 : 0.0));

    shares = optimum_shares(std::vector<Action>(20, Action::stationary()), kF1);
    for (const auto& kv : shares) CHECK(kv.second == 0.0);

    std::vector<Action> split(10, kOpt);
    split.insert(split.end(), 10, kOpt2);
    shares = optimum_shares(split, kF1);
    CHECK(shares[101] == 0.5);
    CHECK(shares[627] == 0.5);
}

TEST_CASE("metric invariants over random populations") {
    const FitnessTable table(kF1);
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(120);
        std::vector<Action> pop;
        for (std::size_t i = 0; i < n; ++i) {
            // Bias toward optima so shares are exercised.
            const int idx = rng.bernoulli(0.3)
                                ? table.optima()[rng.below(table.optima().size())]
                                : static_cast<int>(rng.below(kActionCount));
            pop.push_back(action_from_index(idx));
        }
        const MetricsRow row = compute_metrics(0, pop, table);
        CHECK(row.diversity >= 1);
        CHECK(row.diversity <= std::min<int>(static_cast<int>(n), kActionCount));
        CHECK(row.top_fraction >= 1.0 / static_cast<double>(n));

        const auto tally = std::count(pop.begin(), pop.end(), action_from_index(row.top_action_index));
        CHECK(row.top_fraction * static_cast<double>(n) == doctest::Approx(static_cast<double>(tally)));

        double total = 0.0;
        for (const auto& kv : row.optimum_shares) total += kv.second;
        const int at_opt = count_at_optimum(pop, table);
        CHECK(total <= 1.0 + 1e-12);
        if (at_opt == static_cast<int>(n)) CHECK(total == doctest::Approx(1.0));
        else CHECK(total < 1.0);

        std::vector<Action> shuffled = pop;
        rng.shuffle(shuffled);
        CHECK(diversity(shuffled) == row.diversity);
        CHECK(mean_fitness(shuffled, table) == doctest::Approx(row.mean_fitness));
    }
}

TEST_CASE("metrics CSV rows") {
    const FitnessTable table(kF1);
    std::ostringstream out;
    write_metrics_header(out, table.optima());
    write_metrics_row(out, compute_metrics(0, std::vector<Action>(4, Action::stationary()), table));
    CHECK(out.str() ==
          "iteration,mean_fitness,diversity,top_action_index,top_fraction,entropy,"
          "opt_101,opt_105,opt_137,opt_141,opt_587,opt_591,opt_623,opt_627\n"
          "0,0,1,364,1,0,0,0,0,0,0,0,0,0\n");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}
