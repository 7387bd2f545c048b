#pragma once

#include <string>
#include <vector>

#include "moel/level.hpp"

namespace moel {

struct TracePoint {
    double x; // column
    double y; // row, 0 at the top
    bool operator==(const TracePoint&) const = default;
};

using Playtrace = std::vector<TracePoint>;

struct SimResult {
    bool completed = false;
    Playtrace trace;
    std::size_t progress = 0;
    bool operator==(const SimResult&) const = default;
};

/// One unit displacement in a move template.
struct Step {
    int drow;
    int dcol;
};

/// A move is a fixed sequence of unit steps followed by a straight vertical
/// descent until the agent is supported. Every swept cell must be passable and
/// hazard-free; descending past the bottom row is death.
struct MoveTemplate {
    std::vector<Step> steps;
};

/// Walks and walk-offs with carry 0..2, jumps of height 1..4 with horizontal
/// carry 1..4, in both directions.
const std::vector<MoveTemplate>& move_templates();

inline constexpr int kMaxJumpHeight = 4;
inline constexpr int kMaxJumpCarry = 4;
inline constexpr int kMaxDropCarry = 2;
/// Consecutive trace points are at most this far apart (Chebyshev, tiles).
inline constexpr double kMaxTraceStep = 5.0;

/// Static view of a level as the agent sees it.
class TileMap {
public:
    TileMap(const Level& level, const TileVocabulary& vocab);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }

    bool inside(int row, int col) const noexcept
    {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }
    /// In-bounds, not blocking and not a hazard.
    bool passable(int row, int col) const noexcept;
    /// Cell directly below is support. The bottom row has nothing below.
    bool supported(int row, int col) const noexcept;
    bool standable(int row, int col) const noexcept { return passable(row, col) && supported(row, col); }

private:
    int height_;
    int width_;
    std::vector<TileCategory> cats_;
    TileCategory cat(int row, int col) const noexcept { return cats_[row * width_ + col]; }
};

/// Swept cells for `move` from (row, col), landing cell last. Empty if the move
/// is illegal.
std::vector<std::pair<int, int>> apply_move(const TileMap& map, int row, int col, const MoveTemplate& move);

/// Lowest standable cell in column 0, or -1.
int spawn_row(const TileMap& map);

/// Deterministic A* agent over standing states. Heuristic is the number of
/// remaining columns; cost is the number of unit cells swept.
SimResult simulate(const Level& level, const TileVocabulary& vocab);

bool is_playable(const Level& level, const TileVocabulary& vocab);

/// `step,x,y` rows with a header.
std::string trace_csv(const Playtrace& trace);

/// Level text with visited cells overwritten by 'x'.
std::string render_trace(const Level& level, const TileVocabulary& vocab, const Playtrace& trace);

} // namespace moel
