#include "evoc/world.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace evoc {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

int wrap(int v, int n) noexcept { return ((v % n) + n) % n; }

}  // namespace

void WorldSpec::validate() const {
    require(rows >= 1 && cols >= 1, "world must have at least one row and one column");
    if (const auto* rd = std::get_if<RandomDensityPlacement>(&placement))
        require(rd->density > 0.0 && rd->density <= 1.0, "density must lie in (0, 1]");
    if (const auto* ex = std::get_if<ExplicitPlacement>(&placement)) {
        require(!ex->cells.empty(), "explicit placement needs at least one cell");
        std::vector<Cell> sorted = ex->cells;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& c : sorted)
            require(in_bounds(c), "placed cell (" + std::to_string(c.row) + "," +
                                      std::to_string(c.col) + ") is out of bounds");
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                "explicit placement lists a cell twice");
    }
    for (const auto& b : barriers) {
        require(b.left_col >= 0 && b.left_col + 1 < cols,
                "barrier interface must lie between two existing columns");
        require(b.base_permeability >= 0.0 && b.base_permeability <= 1.0,
                "barrier permeability must lie in [0, 1]");
        require(b.erosion_start.has_value() == b.erosion_duration.has_value(),
                "erosion needs both a start and a duration");
        if (b.erosion_start) {
            require(*b.erosion_start >= 0, "erosion start must be non-negative");
            require(*b.erosion_duration >= 1, "erosion duration must be at least 1");
        }
    }
    for (const auto& r : region_overrides) {
        require(r.area.row_min <= r.area.row_max && r.area.col_min <= r.area.col_max,
                "region rectangle is empty");
        if (r.invention_prob)
            require(*r.invention_prob >= 0.0 && *r.invention_prob <= 1.0,
                    "region invention probability must lie in [0, 1]");
    }
}

std::vector<Cell> neighbors(Cell cell, const WorldSpec& spec) {
    if (!spec.in_bounds(cell)) throw std::out_of_range("cell outside the world");
    std::vector<Cell> out;
    out.reserve(8);
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            Cell n{cell.row + dr, cell.col + dc};
            if (spec.topology == Topology::Torus) {
                n = {wrap(n.row, spec.rows), wrap(n.col, spec.cols)};
            } else if (!spec.in_bounds(n)) {
                continue;
            }
            if (n == cell || std::find(out.begin(), out.end(), n) != out.end()) continue;
            out.push_back(n);
        }
    }
    return out;
}

double permeability(const Barrier& barrier, int iteration) noexcept {
    const double base = barrier.base_permeability;
    if (!barrier.erosion_start || !barrier.erosion_duration) return base;
    const int start = *barrier.erosion_start;
    const int duration = *barrier.erosion_duration;
    if (iteration < start) return base;
    if (iteration >= start + duration) return 1.0;
    return base + (1.0 - base) * static_cast<double>(iteration - start) / duration;
}

bool crosses_barrier(Cell a, Cell b, const Barrier& barrier) noexcept {
    const int c = barrier.left_col;
    return (a.col <= c && b.col >= c + 1) || (b.col <= c && a.col >= c + 1);
}

bool is_seam_link(Cell a, Cell b, const WorldSpec& spec) noexcept {
    return spec.topology == Topology::Torus && std::abs(a.col - b.col) > 1;
}

double invention_prob_at(Cell cell, const WorldSpec& spec, double global_prob) noexcept {
    double p = global_prob;
    for (const auto& r : spec.region_overrides)
        if (r.invention_prob && r.area.contains(cell)) p = *r.invention_prob;
    return p;
}

std::vector<Cell> place_agents(const WorldSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::vector<Cell> cells;
    const auto all_cells = [&] {
        std::vector<Cell> v;
        v.reserve(static_cast<std::size_t>(spec.rows * spec.cols));
        for (int r = 0; r < spec.rows; ++r)
            for (int c = 0; c < spec.cols; ++c) v.push_back({r, c});
        return v;
    };
    if (std::holds_alternative<FullPlacement>(spec.placement)) {
        cells = all_cells();
    } else if (const auto* rd = std::get_if<RandomDensityPlacement>(&spec.placement)) {
        std::vector<Cell> pool = all_cells();
        const auto total = static_cast<double>(pool.size());
        const auto wanted = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(rd->density * total)), 1, pool.size());
        Rng rng = Rng::for_stream(seed, Stream::Placement);
        rng.shuffle(pool);
        cells.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(wanted));
        std::sort(cells.begin(), cells.end());
    } else {
        cells = std::get<ExplicitPlacement>(spec.placement).cells;
        std::sort(cells.begin(), cells.end());
    }
    return cells;
}

World::World(WorldSpec spec, std::span<const Cell> occupied)
    : spec_(std::move(spec)),
      occupancy_(static_cast<std::size_t>(spec_.rows * spec_.cols), kEmpty),
      cells_(occupied.begin(), occupied.end()) {
    spec_.validate();
    for (std::size_t id = 0; id < cells_.size(); ++id) {
        const Cell c = cells_[id];
        if (!spec_.in_bounds(c)) throw std::invalid_argument("agent placed outside the world");
        int& slot = occupancy_[static_cast<std::size_t>(c.row * spec_.cols + c.col)];
        if (slot != kEmpty) throw std::invalid_argument("two agents placed in one cell");
        slot = static_cast<int>(id);
    }
    neighbor_ids_.resize(cells_.size());
    for (std::size_t id = 0; id < cells_.size(); ++id)
        for (const Cell n : neighbors(cells_[id], spec_))
            if (const int other = occupant(n); other != kEmpty) neighbor_ids_[id].push_back(other);
}

std::vector<Candidate> imitation_candidates(const AgentState& agent, const World& world,
                                            std::span<const Action> actions, int iteration,
                                            Rng& rng, const std::optional<Candidate>& broadcaster) {
    const auto& spec = world.spec();
    std::vector<Candidate> out;
    for (const int id : world.neighbor_ids(agent.id)) {
        const Cell other = world.cells()[static_cast<std::size_t>(id)];
        bool visible = true;
        if (!is_seam_link(agent.position, other, spec)) {
            for (const auto& b : spec.barriers) {
                if (!crosses_barrier(agent.position, other, b)) continue;
                // One draw per barrier crossed; all must let the neighbor through.
                if (!rng.bernoulli(permeability(b, iteration))) visible = false;
            }
        }
        if (visible) out.push_back({id, actions[static_cast<std::size_t>(id)]});
    }
    if (broadcaster && broadcaster->source_id != agent.id &&
        std::none_of(out.begin(), out.end(),
                     [&](const Candidate& c) { return c.source_id == broadcaster->source_id; }))
        out.push_back(*broadcaster);
    rng.shuffle(out);
    return out;
}

std::string render_snapshot(const World& world, std::span<const Action> actions) {
    const auto& spec = world.spec();
    std::string out;
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            if (c) out += ' ';
            const int id = world.occupant({r, c});
            out += id == World::kEmpty
                       ? std::string(".")
                       : std::to_string(action_index(actions[static_cast<std::size_t>(id)]));
        }
        out += '\n';
    }
    return out;
}

std::vector<std::vector<std::optional<int>>> parse_snapshot(const std::string& text) {
    std::vector<std::vector<std::optional<int>>> grid;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::optional<int>> row;
        std::istringstream cells(line);
        std::string tok;
        while (cells >> tok) {
            if (tok == ".") {
                row.emplace_back();
                continue;
            }
            std::size_t used = 0;
            int v = -1;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size() || v < 0 || v >= kActionCount)
                throw std::invalid_argument("snapshot line " + std::to_string(line_no) +
                                            ": bad cell '" + tok + "'");
            row.emplace_back(v);
        }
        if (!grid.empty() && row.size() != grid.front().size())
            throw std::invalid_argument("snapshot line " + std::to_string(line_no) +
                                        ": ragged row");
        grid.push_back(std::move(row));
    }
    if (grid.empty()) throw std::invalid_argument("snapshot is empty");
    return grid;
}

}  // namespace evoc
