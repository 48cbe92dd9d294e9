#ifndef EVOC_ENGINE_HPP
#define EVOC_ENGINE_HPP

// The iteration loop: invent-or-imitate, staged commits, broadcasting.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evoc/agent.hpp"
#include "evoc/metrics.hpp"
#include "evoc/model.hpp"
#include "evoc/random.hpp"
#include "evoc/world.hpp"

namespace evoc {

enum class BroadcastSelection { FixedIds, RandomEachIteration, Fittest };

struct BroadcastPolicy {
    int count = 0;  // 0 disables broadcasting
    BroadcastSelection selection = BroadcastSelection::RandomEachIteration;
    std::vector<int> ids;  // FixedIds only
    int period = 1;        // active on iterations that are multiples of period
};

enum class UpdateMode { Synchronous, Sequential };

struct SimConfig {
    WorldSpec world;
    FitnessSpec fitness;
    int iterations = 100;
    double invention_prob = 0.5;
    double rate_of_change = 1.0 / 6.0;
    BroadcastPolicy broadcast;
    bool mental_simulation = true;
    std::uint64_t seed = 0;
    UpdateMode update_mode = UpdateMode::Synchronous;

    // Checks everything that does not depend on the realized population.
    // Throws std::invalid_argument.
    void validate() const;
};

// Invention probability for an invention:imitation ratio a:b, i.e. a / (a + b).
double ratio_to_probability(double inventions, double imitations);

// Ids of this iteration's broadcasters. Empty when broadcasting is off or the
// iteration is not a multiple of the period. Throws std::invalid_argument when
// count exceeds the population or a fixed id does not exist.
std::vector<int> select_broadcasters(const BroadcastPolicy& policy,
                                     std::span<const AgentState> agents, int iteration, Rng& rng);

// The broadcaster whose action is nearest in Hamming distance to the agent's,
// lowest id on ties. The agent never selects itself.
std::optional<Candidate> choose_broadcaster_for(const AgentState& agent,
                                                std::span<const int> broadcasters,
                                                std::span<const Action> actions);

enum class Choice : std::uint8_t { Invent, Imitate };
enum class ProcessingOrder { Ascending, Descending };

struct StepRecord {
    int iteration = 0;
    std::vector<Choice> choices;  // by agent id
    std::vector<bool> adopted;    // by agent id
    std::vector<int> broadcasters;
};

class Simulation {
public:
    explicit Simulation(SimConfig config);

    const SimConfig& config() const noexcept { return config_; }
    const World& world() const noexcept { return world_; }
    const FitnessTable& fitness_table() const noexcept { return table_; }
    std::span<const AgentState> agents() const noexcept { return agents_; }
    std::span<const Action> actions() const noexcept { return actions_; }
    int iteration() const noexcept { return iteration_; }
    std::size_t population() const noexcept { return agents_.size(); }

    // Advances one iteration. Each agent draws from its own stream keyed by
    // (seed, iteration, id), so in synchronous mode the processing order does
    // not affect the outcome.
    StepRecord step(ProcessingOrder order = ProcessingOrder::Ascending);

    MetricsRow metrics() const { return compute_metrics(iteration_, actions_, table_); }
    std::string snapshot() const { return render_snapshot(world_, actions_); }

private:
    void commit(const AgentState& next);

    SimConfig config_;
    FitnessTable table_;
    World world_;
    std::vector<AgentState> agents_;
    std::vector<Action> actions_;  // committed, mirrors agents_[i].current_action
    int iteration_ = 0;
};

struct RunOptions {
    std::vector<int> snapshot_iterations;
    bool record_history = false;
};

struct Snapshot {
    int iteration = 0;
    std::string text;
};

// Per-iteration record of a run, index 0 being the initial state.
struct RunHistory {
    std::vector<std::vector<Action>> actions;  // [t][agent]
    std::vector<std::vector<Choice>> choices;  // [t][agent]; choices[0] is empty
};

struct RunResult {
    std::vector<MetricsRow> metrics;  // t = 0 .. iterations
    std::vector<Snapshot> snapshots;
    int convergence_iteration = -1;   // first t with >= 90% of agents at a global optimum
    std::size_t population = 0;
    std::optional<RunHistory> history;
};

// At least 90% of the population at a global optimum.
bool converged(int at_optimum, std::size_t population) noexcept;

RunResult run(const SimConfig& config, const RunOptions& options = {});

}  // namespace evoc

#endif
