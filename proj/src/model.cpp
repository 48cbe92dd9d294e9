#include "evoc/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace evoc {

namespace {

constexpr int kDigitWeights[kBodyParts] = {1, 3, 9, 27, 81, 243};

int count_moving(const Action& a, std::size_t first, std::size_t last) noexcept {
    int n = 0;
    for (std::size_t i = first; i < last; ++i) n += moving(a[i]) ? 1 : 0;
    return n;
}

bool opposed(Posture x, Posture y) noexcept { return moving(x) && y == opposite(x); }

}  // namespace

int action_index(const Action& a) noexcept {
    int index = 0;
    for (std::size_t i = 0; i < kBodyParts; ++i)
        index += (static_cast<int>(a[i]) + 1) * kDigitWeights[i];
    return index;
}

Action action_from_index(int index) {
    if (index < 0 || index >= kActionCount)
        throw std::out_of_range("action index " + std::to_string(index) + " outside [0, 728]");
    Action a;
    for (std::size_t i = 0; i < kBodyParts; ++i) {
        a[i] = static_cast<Posture>(index % 3 - 1);
        index /= 3;
    }
    return a;
}

int hamming_distance(const Action& a, const Action& b) noexcept {
    int d = 0;
    for (std::size_t i = 0; i < kBodyParts; ++i) d += a[i] != b[i] ? 1 : 0;
    return d;
}

Action mirrored(const Action& a) noexcept {
    Action m;
    for (std::size_t i = 0; i < kBodyParts; ++i) m[i] = opposite(a[i]);
    return m;
}

std::string to_string(const Action& a) {
    std::string s;
    for (std::size_t i = 0; i < kBodyParts; ++i) {
        if (i) s += ' ';
        s += a[i] == Posture::Left ? 'L' : a[i] == Posture::Right ? 'R' : 'S';
    }
    return s;
}

TrendActivations trend_activations(const Action& a) noexcept {
    const int pairs = (opposed(a[0], a[1]) ? 1 : 0) + (opposed(a[2], a[3]) ? 1 : 0);
    return {count_moving(a, 0, kBodyParts) / 6.0, pairs / 2.0};
}

double fitness_f1(const Action& a) noexcept {
    const int movement = count_moving(a, 0, kBodyParts);
    const int arms = opposed(a[BodyPart::LeftArm], a[BodyPart::RightArm]) ? 3 : 0;
    const int legs = opposed(a[BodyPart::LeftLeg], a[BodyPart::RightLeg]) ? 3 : 0;
    // Hip movement only pays while the head is still.
    const int epistatic =
        (!moving(a[BodyPart::Head]) && moving(a[BodyPart::Hips])) ? 2 : 0;
    return movement + arms + legs + epistatic;
}

double fitness_f2(const Action& a) noexcept {
    const Posture left = a[BodyPart::LeftArm];
    const Posture right = a[BodyPart::RightArm];
    const bool together = moving(left) && left == right;
    const int arms = count_moving(a, 0, 2);
    const int aligned = together ? 3 : 0;
    const int legs_still = (!moving(a[BodyPart::LeftLeg]) && !moving(a[BodyPart::RightLeg])) ? 2 : 0;
    const int head_still = moving(a[BodyPart::Head]) ? 0 : 1;
    const int hips = (together && a[BodyPart::Hips] == left) ? 2 : 0;
    return arms + aligned + legs_still + head_still + hips;
}

void FitnessSpec::validate() const {
    if (kind != FitnessKind::Weighted) return;
    if (!(weight_f1 >= 0.0) || !(weight_f2 >= 0.0))
        throw std::invalid_argument("fitness weights must be non-negative");
    if (weight_f1 + weight_f2 <= 0.0)
        throw std::invalid_argument("weighted fitness needs a positive weight");
}

double fitness(const Action& a, const FitnessSpec& spec) {
    switch (spec.kind) {
    case FitnessKind::F1:
        return fitness_f1(a);
    case FitnessKind::F2:
        return fitness_f2(a);
    case FitnessKind::Weighted:
        spec.validate();
        return (spec.weight_f1 * fitness_f1(a) + spec.weight_f2 * fitness_f2(a)) /
               (spec.weight_f1 + spec.weight_f2);
    }
    return 0.0;
}

std::string_view to_string(FitnessKind kind) noexcept {
    switch (kind) {
    case FitnessKind::F1: return "F1";
    case FitnessKind::F2: return "F2";
    case FitnessKind::Weighted: return "weighted";
    }
    return "?";
}

Landscape enumerate_landscape(const FitnessSpec& spec) {
    spec.validate();
    Landscape land;
    land.rows.reserve(kActionCount);
    for (int i = 0; i < kActionCount; ++i) {
        const Action a = action_from_index(i);
        land.rows.push_back({a, i, fitness(a, spec)});
    }
    const auto [lo, hi] = std::minmax_element(
        land.rows.begin(), land.rows.end(),
        [](const LandscapeRow& x, const LandscapeRow& y) { return x.fitness < y.fitness; });
    land.min_fitness = lo->fitness;
    land.max_fitness = hi->fitness;
    for (const auto& row : land.rows) {
        if (row.fitness == land.max_fitness) land.maximizers.push_back(row.index);
        if (row.fitness == land.min_fitness) land.minimizers.push_back(row.index);
    }
    return land;
}

FitnessTable::FitnessTable(const FitnessSpec& spec) : spec_(spec) {
    const Landscape land = enumerate_landscape(spec);
    for (const auto& row : land.rows) values_[static_cast<std::size_t>(row.index)] = row.fitness;
    max_ = land.max_fitness;
    optima_ = land.maximizers;
}

}  // namespace evoc
