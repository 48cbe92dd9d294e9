#ifndef EVOC_AGENT_HPP
#define EVOC_AGENT_HPP

#include <array>
#include <optional>
#include <span>

#include "evoc/model.hpp"
#include "evoc/random.hpp"

namespace evoc {

// Knowledge-based operators: learned biases that steer invention.
struct KboState {
    static constexpr double kStep = 0.1;

    // Per part: when a moving part mutates, probability that it keeps moving.
    std::array<double, kBodyParts> p_im{0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    // Probability that a newly chosen limb direction opposes its moving counterpart.
    double p_sym = 0.5;

    double p_dm(std::size_t part) const noexcept { return 1.0 - p_im[part]; }

    friend bool operator==(const KboState&, const KboState&) = default;
};

struct Cell {
    int row = 0;
    int col = 0;
    friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

struct AgentState {
    int id = 0;
    Cell position;
    Action current_action;  // all-Stationary at start
    double current_fitness = 0.0;
    KboState kbo;
    double invention_prob = 0.5;
};

// Step both biases by +-0.1 toward the trend shown by a newly learned action.
// Values stay on the 0.1 lattice and inside [0, 1].
KboState update_kbo(const KboState& kbo, const TrendActivations& old_trend,
                    const TrendActivations& new_trend) noexcept;

// Per-part mutation with probability `rate`, biased by the operators. Each
// mutation yields a posture different from the original. Throws
// std::invalid_argument when rate is outside [0, 1].
Action invent(const Action& action, const KboState& kbo, double rate, Rng& rng);

// Mental simulation: strictly fitter than what the agent implements now.
bool consider_adopt(const Action& candidate, const AgentState& agent, const FitnessSpec& spec);
bool consider_adopt(const Action& candidate, const AgentState& agent, const FitnessTable& table);

struct Candidate {
    int source_id = 0;
    Action action;
};

// First candidate, in the given order, that is strictly fitter than the agent.
std::optional<Action> imitate_scan(const AgentState& agent, std::span<const Candidate> candidates,
                                   const FitnessTable& table);
std::optional<Action> imitate_scan(const AgentState& agent, std::span<const Candidate> candidates,
                                   const FitnessSpec& spec);

// Learns a strictly fitter action. Throws std::invalid_argument otherwise.
AgentState learn_and_implement(const AgentState& agent, const Action& new_action,
                               const FitnessSpec& spec);

// Unconditional variant used when mental simulation is switched off.
AgentState implement_unchecked(const AgentState& agent, const Action& new_action,
                               const FitnessSpec& spec);

// Fresh agent: immobile, unbiased operators, fitness of the still posture.
AgentState make_agent(int id, Cell position, double invention_prob, const FitnessSpec& spec);

}  // namespace evoc

#endif
