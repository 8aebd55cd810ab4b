#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace gltlab {

// Finite surrogate for a limsup along an index ladder: the raw per-index
// values plus the max over a trailing window. The full ladder is kept so the
// tail estimate stays auditable.
struct LadderReport {
    std::vector<int> index_grid;  // strictly increasing
    std::vector<double> values;   // one per grid index
    int tail_window = 0;
    double tail_estimate = 0.0;
};

inline void require_grid(const std::vector<int>& grid, const char* where) {
    if (grid.empty()) throw std::invalid_argument(std::string(where) + ": grid must be non-empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument(std::string(where) + ": grid must be strictly increasing");
}

inline LadderReport make_ladder(std::vector<int> grid, std::vector<double> values, int tail_window) {
    if (grid.size() != values.size()) throw std::invalid_argument("make_ladder: grid/value length mismatch");
    require_grid(grid, "make_ladder");
    if (tail_window < 1 || static_cast<std::size_t>(tail_window) > grid.size())
        throw std::invalid_argument("make_ladder: tail_window must be in [1, grid size]");
    LadderReport r;
    r.index_grid = std::move(grid);
    r.values = std::move(values);
    r.tail_window = tail_window;
    r.tail_estimate = *std::max_element(r.values.end() - tail_window, r.values.end());
    return r;
}

// True when the trailing values never increase (within slack).
inline bool tail_non_increasing(const LadderReport& r, double slack = 1e-12) {
    for (std::size_t i = 1; i < r.values.size(); ++i)
        if (r.values[i] > r.values[i - 1] + slack) return false;
    return true;
}

}  // namespace gltlab
