#ifndef EVOC_METRICS_HPP
#define EVOC_METRICS_HPP

// Population statistics over implemented actions.

#include <map>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "evoc/model.hpp"

namespace evoc {

struct MetricsRow {
    int iteration = 0;
    double mean_fitness = 0.0;
    int diversity = 0;
    int top_action_index = 0;
    double top_fraction = 0.0;
    double entropy = 0.0;                   // Shannon, natural log; auxiliary
    std::map<int, double> optimum_shares;   // one entry per global optimum
};

// All of these throw std::invalid_argument on an empty population.
int diversity(std::span<const Action> actions);
double mean_fitness(std::span<const Action> actions, const FitnessSpec& spec);
double mean_fitness(std::span<const Action> actions, const FitnessTable& table);
// Modal action and its share; ties go to the lowest action index.
std::pair<int, double> top_fraction(std::span<const Action> actions);
double action_entropy(std::span<const Action> actions);

std::map<int, double> optimum_shares(std::span<const Action> actions, const FitnessSpec& spec);
std::map<int, double> optimum_shares(std::span<const Action> actions, const FitnessTable& table);

// Agents implementing any global optimum, as an exact count.
int count_at_optimum(std::span<const Action> actions, const FitnessTable& table);

MetricsRow compute_metrics(int iteration, std::span<const Action> actions,
                           const FitnessTable& table);

// Doubles are written in shortest round-trip form.
std::string format_double(double v);

void write_metrics_header(std::ostream& out, const std::vector<int>& optima);
void write_metrics_row(std::ostream& out, const MetricsRow& row);

}  // namespace evoc

#endif
