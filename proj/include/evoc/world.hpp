#ifndef EVOC_WORLD_HPP
#define EVOC_WORLD_HPP

// Grid topology, placement, Moore neighborhoods and column barriers.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "evoc/agent.hpp"
#include "evoc/random.hpp"

namespace evoc {

enum class Topology { Torus, Bounded };

struct FullPlacement {};
// Occupies round(density * rows * cols) cells (at least one), chosen uniformly.
struct RandomDensityPlacement {
    double density = 1.0;
};
struct ExplicitPlacement {
    std::vector<Cell> cells;
};
using Placement = std::variant<FullPlacement, RandomDensityPlacement, ExplicitPlacement>;

// Vertical interface between column `left_col` and `left_col + 1`, all rows.
struct Barrier {
    int left_col = 0;
    double base_permeability = 0.0;
    std::optional<int> erosion_start;
    std::optional<int> erosion_duration;
};

struct Rect {
    int row_min = 0, row_max = 0, col_min = 0, col_max = 0;  // inclusive
    bool contains(Cell c) const noexcept {
        return c.row >= row_min && c.row <= row_max && c.col >= col_min && c.col <= col_max;
    }
};

struct RegionOverride {
    Rect area;
    std::optional<double> invention_prob;
};

struct WorldSpec {
    int rows = 10;
    int cols = 10;
    Topology topology = Topology::Torus;
    Placement placement = FullPlacement{};
    std::vector<Barrier> barriers;
    std::vector<RegionOverride> region_overrides;

    // Throws std::invalid_argument on any inconsistency.
    void validate() const;
    bool in_bounds(Cell c) const noexcept {
        return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols;
    }
};

// Moore neighborhood. Wrapped under Torus, clipped under Bounded; never
// contains the cell itself or duplicates (relevant for grids narrower than 3).
// Throws std::out_of_range for a cell outside the grid.
std::vector<Cell> neighbors(Cell cell, const WorldSpec& spec);

// Linear erosion from base_permeability to 1 over [start, start + duration).
double permeability(const Barrier& barrier, int iteration) noexcept;

// Column-interval test; callers must not pass torus-seam links.
bool crosses_barrier(Cell a, Cell b, const Barrier& barrier) noexcept;

// True for neighbor links that wrap around the torus horizontally.
bool is_seam_link(Cell a, Cell b, const WorldSpec& spec) noexcept;

// Effective invention probability at a cell; the last matching override wins.
double invention_prob_at(Cell cell, const WorldSpec& spec, double global_prob) noexcept;

// Occupied cells in row-major order. Deterministic for a given seed.
std::vector<Cell> place_agents(const WorldSpec& spec, std::uint64_t seed);

class World {
public:
    static constexpr int kEmpty = -1;

    World(WorldSpec spec, std::span<const Cell> occupied);

    const WorldSpec& spec() const noexcept { return spec_; }
    int occupant(Cell c) const noexcept {
        return occupancy_[static_cast<std::size_t>(c.row * spec_.cols + c.col)];
    }
    // Occupied neighbor ids, cached at construction, in neighbors() order.
    std::span<const int> neighbor_ids(int agent_id) const noexcept {
        return neighbor_ids_[static_cast<std::size_t>(agent_id)];
    }
    std::span<const Cell> cells() const noexcept { return cells_; }
    std::size_t population() const noexcept { return cells_.size(); }

private:
    WorldSpec spec_;
    std::vector<int> occupancy_;
    std::vector<Cell> cells_;
    std::vector<std::vector<int>> neighbor_ids_;
};

// Occupied neighbors that survive this iteration's barrier draws, plus the
// broadcaster when given (unless already present or the agent itself), in a
// uniformly random order. `actions` is indexed by agent id.
std::vector<Candidate> imitation_candidates(const AgentState& agent, const World& world,
                                            std::span<const Action> actions, int iteration,
                                            Rng& rng,
                                            const std::optional<Candidate>& broadcaster = {});

// One line per row, cells separated by a single space, "." for empty cells.
std::string render_snapshot(const World& world, std::span<const Action> actions);

// Inverse of render_snapshot; empty cells are nullopt. Throws std::invalid_argument.
std::vector<std::vector<std::optional<int>>> parse_snapshot(const std::string& text);

}  // namespace evoc

#endif
