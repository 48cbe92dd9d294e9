#include "evoc/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace evoc {

namespace {

std::array<int, kActionCount> tally(std::span<const Action> actions) {
    if (actions.empty()) throw std::invalid_argument("population is empty");
    std::array<int, kActionCount> counts{};
    for (const auto& a : actions) ++counts[static_cast<std::size_t>(action_index(a))];
    return counts;
}

}  // namespace

int diversity(std::span<const Action> actions) {
    const auto counts = tally(actions);
    int distinct = 0;
    for (const int n : counts) distinct += n > 0 ? 1 : 0;
    return distinct;
}

double mean_fitness(std::span<const Action> actions, const FitnessTable& table) {
    if (actions.empty()) throw std::invalid_argument("population is empty");
    double sum = 0.0;
    for (const auto& a : actions) sum += table(a);
    return sum / static_cast<double>(actions.size());
}

double mean_fitness(std::span<const Action> actions, const FitnessSpec& spec) {
    return mean_fitness(actions, FitnessTable(spec));
}

std::pair<int, double> top_fraction(std::span<const Action> actions) {
    const auto counts = tally(actions);
    int best = 0;
    for (int i = 1; i < kActionCount; ++i)
        if (counts[static_cast<std::size_t>(i)] > counts[static_cast<std::size_t>(best)]) best = i;
    return {best, static_cast<double>(counts[static_cast<std::size_t>(best)]) /
                      static_cast<double>(actions.size())};
}

double action_entropy(std::span<const Action> actions) {
    const auto counts = tally(actions);
    const auto n = static_cast<double>(actions.size());
    double h = 0.0;
    for (const int c : counts) {
        if (c == 0) continue;
        const double p = c / n;
        h -= p * std::log(p);
    }
    return h;
}

std::map<int, double> optimum_shares(std::span<const Action> actions, const FitnessTable& table) {
    std::map<int, double> shares;
    for (const int opt : table.optima()) shares[opt] = 0.0;
    if (actions.empty()) return shares;
    std::array<int, kActionCount> counts{};
    for (const auto& a : actions) ++counts[static_cast<std::size_t>(action_index(a))];
    for (auto& [opt, share] : shares)
        share = static_cast<double>(counts[static_cast<std::size_t>(opt)]) /
                static_cast<double>(actions.size());
    return shares;
}

std::map<int, double> optimum_shares(std::span<const Action> actions, const FitnessSpec& spec) {
    return optimum_shares(actions, FitnessTable(spec));
}

int count_at_optimum(std::span<const Action> actions, const FitnessTable& table) {
    int n = 0;
    for (const auto& a : actions) n += table.is_optimal(a) ? 1 : 0;
    return n;
}

MetricsRow compute_metrics(int iteration, std::span<const Action> actions,
                           const FitnessTable& table) {
    MetricsRow row;
    row.iteration = iteration;
    row.mean_fitness = mean_fitness(actions, table);
    row.diversity = diversity(actions);
    std::tie(row.top_action_index, row.top_fraction) = top_fraction(actions);
    row.entropy = action_entropy(actions);
    row.optimum_shares = optimum_shares(actions, table);
    return row;
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_metrics_header(std::ostream& out, const std::vector<int>& optima) {
    out << "iteration,mean_fitness,diversity,top_action_index,top_fraction,entropy";
    for (const int opt : optima) out << ",opt_" << opt;
    out << '\n';
}

void write_metrics_row(std::ostream& out, const MetricsRow& row) {
    out << row.iteration << ',' << format_double(row.mean_fitness) << ',' << row.diversity << ','
        << row.top_action_index << ',' << format_double(row.top_fraction) << ','
        << format_double(row.entropy);
    for (const auto& [opt, share] : row.optimum_shares) out << ',' << format_double(share);
    out << '\n';
}

}  // namespace evoc
