#include "evoc/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evoc {

namespace {

// Moves p one step along the 0.1 lattice and clamps to [0, 1]. Rounding keeps
// repeated updates from accumulating binary error.
double nudge(double p, int direction) noexcept {
    const double next = std::round((p + direction * KboState::kStep) * 10.0) / 10.0;
    return std::clamp(next, 0.0, 1.0);
}

int trend(double before, double after) noexcept {
    return after > before ? 1 : after < before ? -1 : 0;
}

Posture random_direction(Rng& rng) noexcept {
    return rng.bernoulli(0.5) ? Posture::Left : Posture::Right;
}

}  // namespace

KboState update_kbo(const KboState& kbo, const TrendActivations& old_trend,
                    const TrendActivations& new_trend) noexcept {
    KboState next = kbo;
    if (const int d = trend(old_trend.movement, new_trend.movement); d != 0)
        for (auto& p : next.p_im) p = nudge(p, d);
    if (const int d = trend(old_trend.symmetry, new_trend.symmetry); d != 0)
        next.p_sym = nudge(next.p_sym, d);
    return next;
}

Action invent(const Action& action, const KboState& kbo, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw std::invalid_argument("rate of conceptual change must lie in [0, 1]");
    Action out = action;
    for (std::size_t part = 0; part < kBodyParts; ++part) {
        if (!rng.bernoulli(rate)) continue;
        const Posture current = action[part];
        if (!moving(current)) {
            // Stationary parts always start moving; limbs lean toward opposing
            // a moving counterpart with probability p_sym.
            const Posture partner = action[counterpart(part)];
            if (is_limb(part) && moving(partner))
                out[part] = rng.bernoulli(kbo.p_sym) ? opposite(partner) : partner;
            else
                out[part] = random_direction(rng);
        } else if (rng.bernoulli(kbo.p_im[part])) {
            // Movement retained; the only different moving posture is the reverse.
            out[part] = opposite(current);
        } else {
            out[part] = Posture::Stationary;
        }
    }
    return out;
}

bool consider_adopt(const Action& candidate, const AgentState& agent, const FitnessSpec& spec) {
    return fitness(candidate, spec) > agent.current_fitness;
}

bool consider_adopt(const Action& candidate, const AgentState& agent, const FitnessTable& table) {
    return table(candidate) > agent.current_fitness;
}

std::optional<Action> imitate_scan(const AgentState& agent, std::span<const Candidate> candidates,
                                   const FitnessTable& table) {
    for (const auto& c : candidates)
        if (consider_adopt(c.action, agent, table)) return c.action;
    return std::nullopt;
}

std::optional<Action> imitate_scan(const AgentState& agent, std::span<const Candidate> candidates,
                                   const FitnessSpec& spec) {
    for (const auto& c : candidates)
        if (consider_adopt(c.action, agent, spec)) return c.action;
    return std::nullopt;
}

AgentState learn_and_implement(const AgentState& agent, const Action& new_action,
                               const FitnessSpec& spec) {
    if (!consider_adopt(new_action, agent, spec))
        throw std::invalid_argument("learn_and_implement: action " + to_string(new_action) +
                                    " is not fitter than the current action");
    return implement_unchecked(agent, new_action, spec);
}

AgentState implement_unchecked(const AgentState& agent, const Action& new_action,
                               const FitnessSpec& spec) {
    AgentState next = agent;
    next.kbo = update_kbo(agent.kbo, trend_activations(agent.current_action),
                          trend_activations(new_action));
    next.current_action = new_action;
    next.current_fitness = fitness(new_action, spec);
    return next;
}

AgentState make_agent(int id, Cell position, double invention_prob, const FitnessSpec& spec) {
    AgentState a;
    a.id = id;
    a.position = position;
    a.invention_prob = invention_prob;
    a.current_fitness = fitness(a.current_action, spec);
    return a;
}

}  // namespace evoc
