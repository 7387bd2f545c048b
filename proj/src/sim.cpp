#include "moel/sim.hpp"

#include <limits>
#include <queue>
#include <sstream>
#include <tuple>

namespace moel {

const std::vector<MoveTemplate>& move_templates()
{
    static const std::vector<MoveTemplate> templates = [] {
        std::vector<MoveTemplate> out;
        for (int dir : {1, -1}) {
            // Walk, or walk off an edge; carry adds diagonal steps before the
            // straight descent.
            for (int carry = 0; carry <= kMaxDropCarry; ++carry) {
                MoveTemplate m;
                m.steps.push_back({0, dir});
                for (int i = 0; i < carry; ++i) m.steps.push_back({1, dir});
                out.push_back(std::move(m));
            }
            for (int h = 1; h <= kMaxJumpHeight; ++h) {
                for (int d = 1; d <= kMaxJumpCarry; ++d) {
                    MoveTemplate m;
                    for (int i = 0; i < h; ++i) m.steps.push_back({-1, 0});
                    for (int i = 0; i < d; ++i) m.steps.push_back({0, dir});
                    out.push_back(std::move(m));
                }
            }
        }
        return out;
    }();
    return templates;
}

TileMap::TileMap(const Level& level, const TileVocabulary& vocab)
    : height_(static_cast<int>(level.height())), width_(static_cast<int>(level.width()))
{
    cats_.reserve(level.cells().size());
    for (auto idx : level.cells()) cats_.push_back(vocab.category(idx));
}

bool TileMap::passable(int row, int col) const noexcept
{
    if (!inside(row, col)) return false;
    auto c = cat(row, col);
    return !is_blocking(c) && c != TileCategory::Hazard;
}

bool TileMap::supported(int row, int col) const noexcept
{
    if (row + 1 >= height_ || col < 0 || col >= width_) return false;
    return is_support(cat(row + 1, col));
}

std::vector<std::pair<int, int>> apply_move(const TileMap& map, int row, int col, const MoveTemplate& move)
{
    std::vector<std::pair<int, int>> swept;
    for (auto [dr, dc] : move.steps) {
        row += dr;
        col += dc;
        if (!map.passable(row, col)) return {};
        swept.emplace_back(row, col);
    }
    while (!map.supported(row, col)) {
        ++row;
        if (!map.passable(row, col)) return {};
        swept.emplace_back(row, col);
    }
    return swept;
}

int spawn_row(const TileMap& map)
{
    for (int r = map.height() - 1; r >= 0; --r)
        if (map.standable(r, 0)) return r;
    return -1;
}

namespace {

struct Node {
    int row;
    int col;
    long cost = std::numeric_limits<long>::max();
    int parent = -1;
    int move = -1;
    bool closed = false;
};

Playtrace degenerate_trace(const TileMap& map)
{
    int row = 0;
    for (int r = map.height() - 1; r >= 0; --r) {
        if (map.passable(r, 0)) {
            row = r;
            break;
        }
    }
    return {{0.0, static_cast<double>(row)}};
}

} // namespace

SimResult simulate(const Level& level, const TileVocabulary& vocab)
{
    TileMap map(level, vocab);
    SimResult result;
    if (map.width() == 0 || map.height() == 0) return result;

    const int spawn = spawn_row(map);
    if (spawn < 0) {
        result.trace = degenerate_trace(map);
        return result;
    }

    const int w = map.width();
    const auto& moves = move_templates();
    std::vector<int> node_of(static_cast<std::size_t>(map.height() * w), -1);
    std::vector<Node> nodes;

    // (f, row, insertion order, node)
    using Key = std::tuple<long, int, long, int>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> open;
    long order = 0;

    auto heuristic = [&](int col) { return static_cast<long>(w - 1 - col); };

    nodes.push_back({spawn, 0, 0, -1, -1, false});
    node_of[spawn * w] = 0;
    open.emplace(heuristic(0), spawn, order++, 0);

    int goal = -1;
    while (!open.empty()) {
        auto [f, row, ord, id] = open.top();
        open.pop();
        if (nodes[id].closed || f != nodes[id].cost + heuristic(nodes[id].col)) continue;
        nodes[id].closed = true;
        if (nodes[id].col == w - 1) {
            goal = id;
            break;
        }
        for (std::size_t m = 0; m < moves.size(); ++m) {
            auto swept = apply_move(map, nodes[id].row, nodes[id].col, moves[m]);
            if (swept.empty()) continue;
            auto [lr, lc] = swept.back();
            long cost = nodes[id].cost + static_cast<long>(swept.size());
            int& slot = node_of[lr * w + lc];
            if (slot < 0) {
                slot = static_cast<int>(nodes.size());
                nodes.push_back({lr, lc});
            }
            Node& next = nodes[slot];
            if (next.closed || cost >= next.cost) continue;
            next.cost = cost;
            next.parent = id;
            next.move = static_cast<int>(m);
            open.emplace(cost + heuristic(lc), lr, order++, slot);
        }
    }

    int target = goal;
    if (target < 0) {
        // Furthest column reached, then shortest path, then smaller row.
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Node& n = nodes[i];
            if (!n.closed) continue;
            if (target < 0) {
                target = static_cast<int>(i);
                continue;
            }
            const Node& t = nodes[target];
            if (std::tie(t.col, n.cost, n.row) < std::tie(n.col, t.cost, t.row)) target = static_cast<int>(i);
        }
    }

    std::vector<int> chain;
    for (int id = target; id >= 0; id = nodes[id].parent) chain.push_back(id);

    result.trace.push_back({0.0, static_cast<double>(spawn)});
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const Node& n = nodes[*it];
        if (n.parent < 0) continue;
        const Node& p = nodes[n.parent];
        for (auto [r, c] : apply_move(map, p.row, p.col, moves[n.move]))
            result.trace.push_back({static_cast<double>(c), static_cast<double>(r)});
    }
    result.completed = goal >= 0;
    result.progress = static_cast<std::size_t>(nodes[target].col);
    return result;
}

bool is_playable(const Level& level, const TileVocabulary& vocab)
{
    return simulate(level, vocab).completed;
}

std::string trace_csv(const Playtrace& trace)
{
    std::ostringstream out;
    out << "step,x,y\n";
    for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << trace[i].x << ',' << trace[i].y << '\n';
    return out.str();
}

std::string render_trace(const Level& level, const TileVocabulary& vocab, const Playtrace& trace)
{
    std::string text = serialize_level(level, vocab);
    const std::size_t stride = level.width() + 1;
    for (const auto& p : trace) {
        auto r = static_cast<std::size_t>(p.y);
        auto c = static_cast<std::size_t>(p.x);
        if (r < level.height() && c < level.width()) text[r * stride + c] = 'x';
    }
    return text;
}

} // namespace moel
