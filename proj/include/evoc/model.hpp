#ifndef EVOC_MODEL_HPP
#define EVOC_MODEL_HPP

// Actions, their canonical encoding, trend detection and fitness functions.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace evoc {

enum class Posture : std::int8_t { Left = -1, Stationary = 0, Right = 1 };

enum class BodyPart : std::size_t { LeftArm = 0, RightArm, LeftLeg, RightLeg, Head, Hips };

inline constexpr std::size_t kBodyParts = 6;
inline constexpr int kActionCount = 729;

constexpr Posture opposite(Posture p) noexcept {
    return static_cast<Posture>(-static_cast<int>(p));
}
constexpr bool moving(Posture p) noexcept { return p != Posture::Stationary; }

// Pair counterpart for limbs, or the part itself for Head/Hips.
constexpr std::size_t counterpart(std::size_t part) noexcept {
    return part < 4 ? (part ^ 1u) : part;
}
constexpr bool is_limb(std::size_t part) noexcept { return part < 4; }

struct Action {
    std::array<Posture, kBodyParts> parts{};  // value-initialized: all Stationary

    constexpr Posture operator[](std::size_t i) const noexcept { return parts[i]; }
    constexpr Posture& operator[](std::size_t i) noexcept { return parts[i]; }
    constexpr Posture operator[](BodyPart p) const noexcept {
        return parts[static_cast<std::size_t>(p)];
    }

    friend constexpr bool operator==(const Action&, const Action&) = default;

    static constexpr Action stationary() noexcept { return {}; }
    static constexpr Action of(Posture la, Posture ra, Posture ll, Posture rl, Posture head,
                               Posture hips) noexcept {
        return Action{{la, ra, ll, rl, head, hips}};
    }
};

// Little-endian base 3, digit = posture + 1. All-Stationary is 364.
int action_index(const Action& a) noexcept;

// Throws std::out_of_range outside [0, 728].
Action action_from_index(int index);

// Count of parts in which the two actions differ (0..6).
int hamming_distance(const Action& a, const Action& b) noexcept;

// Reflect every posture Left <-> Right.
Action mirrored(const Action& a) noexcept;

// e.g. "L R S S S R"
std::string to_string(const Action& a);

struct TrendActivations {
    double movement = 0.0;  // moving parts / 6
    double symmetry = 0.0;  // opposite-direction limb pairs / 2
};

TrendActivations trend_activations(const Action& a) noexcept;

// Mating display. Range [0, 13]; 8 maximizers.
double fitness_f1(const Action& a) noexcept;

// Tool making. Range [0, 10]; 2 maximizers.
double fitness_f2(const Action& a) noexcept;

enum class FitnessKind { F1, F2, Weighted };

struct FitnessSpec {
    FitnessKind kind = FitnessKind::F1;
    double weight_f1 = 1.0;
    double weight_f2 = 0.0;

    // Throws std::invalid_argument for negative weights or an all-zero Weighted spec.
    void validate() const;
};

double fitness(const Action& a, const FitnessSpec& spec);

std::string_view to_string(FitnessKind kind) noexcept;

struct LandscapeRow {
    Action action;
    int index = 0;
    double fitness = 0.0;
};

struct Landscape {
    std::vector<LandscapeRow> rows;  // sorted by action index, one per action
    double max_fitness = 0.0;
    double min_fitness = 0.0;
    std::vector<int> maximizers;  // ascending action indices
    std::vector<int> minimizers;
};

// Brute force over all 729 actions.
Landscape enumerate_landscape(const FitnessSpec& spec);

// Precomputed fitness for every action index; cheap repeated lookups.
class FitnessTable {
public:
    explicit FitnessTable(const FitnessSpec& spec);

    double operator()(const Action& a) const noexcept { return values_[action_index(a)]; }
    double at(int index) const { return values_.at(static_cast<std::size_t>(index)); }
    const FitnessSpec& spec() const noexcept { return spec_; }
    double max() const noexcept { return max_; }
    const std::vector<int>& optima() const noexcept { return optima_; }
    bool is_optimal(const Action& a) const noexcept { return (*this)(a) == max_; }

private:
    FitnessSpec spec_;
    std::array<double, kActionCount> values_{};
    double max_ = 0.0;
    std::vector<int> optima_;
};

}  // namespace evoc

#endif
