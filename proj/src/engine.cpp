#include "evoc/engine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace evoc {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

bool in_unit_interval(double v) noexcept { return v >= 0.0 && v <= 1.0; }

}  // namespace

void SimConfig::validate() const {
    world.validate();
    fitness.validate();
    require(iterations >= 1, "iterations must be at least 1");
    require(in_unit_interval(invention_prob), "invention probability must lie in [0, 1]");
    require(in_unit_interval(rate_of_change), "rate of conceptual change must lie in [0, 1]");
    require(broadcast.count >= 0, "broadcaster count must be non-negative");
    require(broadcast.period >= 1, "broadcast period must be at least 1");
    if (broadcast.selection == BroadcastSelection::FixedIds && broadcast.count > 0)
        require(broadcast.ids.size() == static_cast<std::size_t>(broadcast.count),
                "fixed broadcaster list must hold exactly broadcast.count ids");
}

double ratio_to_probability(double inventions, double imitations) {
    require(inventions >= 0.0 && imitations >= 0.0 && inventions + imitations > 0.0,
            "invention:imitation ratio needs non-negative parts with a positive sum");
    return inventions / (inventions + imitations);
}

std::vector<int> select_broadcasters(const BroadcastPolicy& policy,
                                     std::span<const AgentState> agents, int iteration, Rng& rng) {
    const auto population = static_cast<int>(agents.size());
    require(policy.count <= population, "more broadcasters than agents");
    if (policy.count == 0 || iteration % policy.period != 0) return {};

    switch (policy.selection) {
    case BroadcastSelection::FixedIds:
        for (const int id : policy.ids)
            require(id >= 0 && id < population, "broadcaster id " + std::to_string(id) +
                                                    " does not name an agent");
        return policy.ids;
    case BroadcastSelection::RandomEachIteration: {
        std::vector<int> ids(agents.size());
        std::iota(ids.begin(), ids.end(), 0);
        // Partial Fisher-Yates: the first `count` slots are a uniform sample.
        for (int i = 0; i < policy.count; ++i) {
            const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(population - i)));
            std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
        }
        ids.resize(static_cast<std::size_t>(policy.count));
        return ids;
    }
    case BroadcastSelection::Fittest: {
        std::vector<int> ids(agents.size());
        std::iota(ids.begin(), ids.end(), 0);
        std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
            return agents[static_cast<std::size_t>(a)].current_fitness >
                   agents[static_cast<std::size_t>(b)].current_fitness;
        });
        ids.resize(static_cast<std::size_t>(policy.count));
        return ids;
    }
    }
    return {};
}

std::optional<Candidate> choose_broadcaster_for(const AgentState& agent,
                                                std::span<const int> broadcasters,
                                                std::span<const Action> actions) {
    std::optional<Candidate> best;
    int best_distance = 0;
    for (const int id : broadcasters) {
        if (id == agent.id) continue;
        const Action& a = actions[static_cast<std::size_t>(id)];
        const int d = hamming_distance(a, agent.current_action);
        if (!best || d < best_distance || (d == best_distance && id < best->source_id)) {
            best = Candidate{id, a};
            best_distance = d;
        }
    }
    return best;
}

Simulation::Simulation(SimConfig config)
    : config_((config.validate(), std::move(config))),
      table_(config_.fitness),
      world_(config_.world, place_agents(config_.world, config_.seed)) {
    const auto cells = world_.cells();
    agents_.reserve(cells.size());
    for (std::size_t id = 0; id < cells.size(); ++id) {
        const double p = invention_prob_at(cells[id], config_.world, config_.invention_prob);
        agents_.push_back(make_agent(static_cast<int>(id), cells[id], p, config_.fitness));
    }
    actions_.assign(agents_.size(), Action::stationary());

    const auto& b = config_.broadcast;
    require(b.count <= static_cast<int>(agents_.size()), "more broadcasters than agents");
    if (b.selection == BroadcastSelection::FixedIds)
        for (const int id : b.ids)
            require(id >= 0 && id < static_cast<int>(agents_.size()),
                    "broadcaster id " + std::to_string(id) + " does not name an agent");
}

void Simulation::commit(const AgentState& next) {
    agents_[static_cast<std::size_t>(next.id)] = next;
    actions_[static_cast<std::size_t>(next.id)] = next.current_action;
}

StepRecord Simulation::step(ProcessingOrder order) {
    const int t = iteration_ + 1;
    const std::size_t n = agents_.size();
    const bool sequential = config_.update_mode == UpdateMode::Sequential;

    StepRecord record;
    record.iteration = t;
    record.choices.assign(n, Choice::Invent);
    record.adopted.assign(n, false);

    Rng broadcast_rng = Rng::for_stream(config_.seed, Stream::Broadcast,
                                        {static_cast<std::uint64_t>(t)});
    record.broadcasters = select_broadcasters(config_.broadcast, agents_, t, broadcast_rng);

    // Synchronous mode reads only from this frozen copy of the committed state.
    const std::vector<Action> frozen = sequential ? std::vector<Action>{} : actions_;
    std::vector<std::optional<AgentState>> staged(n);

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order == ProcessingOrder::Ascending ? k : n - 1 - k;
        const AgentState& agent = agents_[i];
        const std::span<const Action> visible = sequential ? std::span<const Action>(actions_)
                                                           : std::span<const Action>(frozen);
        Rng rng = Rng::for_stream(config_.seed, Stream::AgentDecision,
                                  {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)});

        std::optional<Action> chosen;
        if (rng.uniform() < agent.invention_prob) {
            record.choices[i] = Choice::Invent;
            const Action idea = invent(agent.current_action, agent.kbo, config_.rate_of_change, rng);
            if (!config_.mental_simulation || consider_adopt(idea, agent, table_)) chosen = idea;
        } else {
            record.choices[i] = Choice::Imitate;
            const auto broadcaster = choose_broadcaster_for(agent, record.broadcasters, visible);
            const auto candidates = imitation_candidates(agent, world_, visible, t, rng, broadcaster);
            if (config_.mental_simulation)
                chosen = imitate_scan(agent, candidates, table_);
            else if (!candidates.empty())
                chosen = candidates.front().action;
        }
        if (!chosen) continue;

        AgentState next = config_.mental_simulation
                              ? learn_and_implement(agent, *chosen, config_.fitness)
                              : implement_unchecked(agent, *chosen, config_.fitness);
        record.adopted[i] = true;
        if (sequential)
            commit(next);
        else
            staged[i] = std::move(next);
    }

    for (const auto& s : staged)
        if (s) commit(*s);
    iteration_ = t;
    return record;
}

bool converged(int at_optimum, std::size_t population) noexcept {
    return population > 0 && 10 * static_cast<std::size_t>(at_optimum) >= 9 * population;
}

RunResult run(const SimConfig& config, const RunOptions& options) {
    Simulation sim(config);
    RunResult result;
    result.population = sim.population();
    if (options.record_history) result.history.emplace();

    const auto wants_snapshot = [&](int t) {
        return std::find(options.snapshot_iterations.begin(), options.snapshot_iterations.end(),
                         t) != options.snapshot_iterations.end();
    };
    const auto observe = [&](const StepRecord* record) {
        const int t = sim.iteration();
        result.metrics.push_back(sim.metrics());
        if (result.convergence_iteration < 0 &&
            converged(count_at_optimum(sim.actions(), sim.fitness_table()), sim.population()))
            result.convergence_iteration = t;
        if (wants_snapshot(t)) result.snapshots.push_back({t, sim.snapshot()});
        if (result.history) {
            result.history->actions.emplace_back(sim.actions().begin(), sim.actions().end());
            result.history->choices.push_back(record ? record->choices : std::vector<Choice>{});
        }
    };

    observe(nullptr);
    for (int t = 1; t <= config.iterations; ++t) {
        const StepRecord record = sim.step();
        observe(&record);
    }
    return result;
}

}  // namespace evoc
