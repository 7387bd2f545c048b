#include <doctest.h>

#include <queue>
#include <random>
#include <set>

#include "moel/sim.hpp"
#include "test_util.hpp"

using namespace moel;
using test::kEmpty;
using test::kHazard;
using test::kSolid;

namespace {

const TileVocabulary kVocab = TileVocabulary::standard();

// Independent reachability oracle: breadth-first search over standing cells
// with the move rules written out directly.
struct Oracle {
    const Level& level;

    TileCategory cat(int r, int c) const { return kVocab.category(level.at(r, c)); }
    bool inside(int r, int c) const
    {
        return r >= 0 && c >= 0 && r < static_cast<int>(level.height()) && c < static_cast<int>(level.width());
    }
    bool open(int r, int c) const
    {
        if (!inside(r, c)) return false;
        auto k = cat(r, c);
        return k == TileCategory::Empty || k == TileCategory::Coin || k == TileCategory::Platform;
    }
    bool floor_below(int r, int c) const
    {
        if (r + 1 >= static_cast<int>(level.height())) return false;
        auto k = cat(r + 1, c);
        return k == TileCategory::Solid || k == TileCategory::Breakable || k == TileCategory::QuestionBox ||
               k == TileCategory::PipeBody || k == TileCategory::Platform;
    }
    // Follows fixed steps then drops; returns landing or (-1,-1).
    std::pair<int, int> land(int r, int c, const std::vector<std::pair<int, int>>& steps) const
    {
        for (auto [dr, dc] : steps) {
            r += dr;
            c += dc;
            if (!open(r, c)) return {-1, -1};
        }
        while (!floor_below(r, c)) {
            ++r;
            if (!open(r, c)) return {-1, -1};
        }
        return {r, c};
    }
    std::set<std::pair<int, int>> reachable() const
    {
        std::set<std::pair<int, int>> seen;
        int spawn = -1;
        for (int r = static_cast<int>(level.height()) - 1; r >= 0 && spawn < 0; --r)
            if (open(r, 0) && floor_below(r, 0)) spawn = r;
        if (spawn < 0) return seen;
        std::vector<std::vector<std::pair<int, int>>> moves;
        for (int s : {1, -1}) {
            moves.push_back({{0, s}});
            moves.push_back({{0, s}, {1, s}});
            moves.push_back({{0, s}, {1, s}, {1, s}});
            for (int h = 1; h <= 4; ++h)
                for (int d = 1; d <= 4; ++d) {
                    std::vector<std::pair<int, int>> m(h, {-1, 0});
                    m.insert(m.end(), d, {0, s});
                    moves.push_back(m);
                }
        }
        std::queue<std::pair<int, int>> q;
        q.push({spawn, 0});
        seen.insert({spawn, 0});
        while (!q.empty()) {
            auto [r, c] = q.front();
            q.pop();
            for (const auto& m : moves) {
                auto next = land(r, c, m);
                if (next.first < 0 || seen.count(next)) continue;
                seen.insert(next);
                q.push(next);
            }
        }
        return seen;
    }
    bool completable() const
    {
        for (auto [r, c] : reachable())
            if (c == static_cast<int>(level.width()) - 1) return true;
        return false;
    }
    int furthest() const
    {
        int best = 0;
        for (auto [r, c] : reachable()) best = std::max(best, c);
        return best;
    }
};

// Ground with random gaps, blocks and hazards; roughly half are completable.
Level structured_level(std::mt19937_64& rng)
{
    Level l = test::flat_ground();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> col(2, 25), row(4, 12), width(1, 6);
    for (int g = 0; g < 3; ++g) {
        if (u(rng) < 0.6) {
            int c = col(rng), w = width(rng);
            for (int k = 0; k < w && c + k < 27; ++k) l.at(13, c + k) = kEmpty;
        }
    }
    for (int b = 0; b < 6; ++b) l.at(row(rng), col(rng)) = u(rng) < 0.5 ? kSolid : TileIndex{2};
    if (u(rng) < 0.4) {
        int c = col(rng), h = 2 + static_cast<int>(u(rng) * 8);
        for (int r = 12; r > 12 - h && r >= 0; --r) l.at(r, c) = kSolid;
    }
    for (int e = 0; e < 2; ++e) l.at(12, col(rng)) = kHazard;
    return l;
}

} // namespace

TEST_CASE("move templates")
{
    const auto& t = move_templates();
    CHECK(t.size() == 2 * (3 + 16));
    for (const auto& m : t) {
        int rise = 0, carry = 0;
        for (auto s : m.steps) {
            rise += s.drow < 0 ? 1 : 0;
            carry += std::abs(s.dcol);
        }
        CHECK(rise <= kMaxJumpHeight);
        CHECK(carry <= kMaxJumpCarry);
    }
}

TEST_CASE("flat ground is completed walking right")
{
    auto l = test::flat_ground();
    auto res = simulate(l, kVocab);
    CHECK(res.completed);
    CHECK(res.progress == 27);
    REQUIRE(res.trace.size() == 28);
    CHECK(res.trace.front() == TracePoint{0, 12});
    for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i].x > res.trace[i - 1].x);
    CHECK(res.trace.back().x == 27);
    CHECK(Oracle{l}.completable());
    CHECK(is_playable(l, kVocab));
}

TEST_CASE("full-height wall blocks progress")
{
    auto l = test::flat_ground();
    for (std::size_t r = 0; r < 14; ++r) l.at(r, 5) = kSolid;
    auto res = simulate(l, kVocab);
    CHECK_FALSE(res.completed);
    CHECK(res.progress <= 5);
    CHECK(res.progress == 4);
    CHECK_FALSE(Oracle{l}.completable());
}

TEST_CASE("a seven-wide gap cannot be crossed")
{
    auto l = test::flat_ground();
    for (std::size_t c = 10; c < 17; ++c) l.at(13, c) = kEmpty;
    CHECK_FALSE(simulate(l, kVocab).completed);
    CHECK_FALSE(Oracle{l}.completable());

    // Three columns of gap are within a single jump.
    auto narrow = test::flat_ground();
    for (std::size_t c = 10; c < 13; ++c) narrow.at(13, c) = kEmpty;
    CHECK(simulate(narrow, kVocab).completed);
    CHECK(Oracle{narrow}.completable());
}

TEST_CASE("degenerate levels")
{
    Level solid(14, 28, kSolid);
    auto res = simulate(solid, kVocab);
    CHECK_FALSE(res.completed);
    CHECK(res.progress == 0);
    CHECK(res.trace.size() == 1);
    CHECK_FALSE(is_playable(solid, kVocab));

    Level empty(14, 28, kEmpty);
    auto e = simulate(empty, kVocab);
    CHECK_FALSE(e.completed);
    CHECK(e.progress == 0);
    REQUIRE(e.trace.size() == 1);
    CHECK(e.trace[0] == TracePoint{0, 13});
    CHECK_FALSE(Oracle{empty}.completable());

    // Column 0 blocked by a hazard on the only support.
    auto hazard = test::flat_ground();
    hazard.at(12, 0) = kHazard;
    auto h = simulate(hazard, kVocab);
    CHECK_FALSE(h.completed);
    CHECK(h.trace.size() == 1);
}

TEST_CASE("simulate agrees with the reachability oracle")
{
    std::mt19937_64 rng(42);
    int completed = 0;
    for (int i = 0; i < 200; ++i) {
        auto l = structured_level(rng);
        auto res = simulate(l, kVocab);
        Oracle o{l};
        CHECK(res.completed == o.completable());
        if (res.completed) {
            ++completed;
            CHECK(res.progress == 27);
            CHECK(res.trace.back().x == 27);
        } else {
            CHECK(static_cast<int>(res.progress) == o.furthest());
        }
        for (std::size_t k = 1; k < res.trace.size(); ++k) {
            double cheb = std::max(std::abs(res.trace[k].x - res.trace[k - 1].x),
                                   std::abs(res.trace[k].y - res.trace[k - 1].y));
            CHECK(cheb <= kMaxTraceStep);
        }
    }
    CHECK(completed > 20);
    CHECK(completed < 180);
}

TEST_CASE("simulate is deterministic")
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 10; ++i) {
        auto l = structured_level(rng);
        auto first = simulate(l, kVocab);
        for (int k = 0; k < 10; ++k) CHECK(simulate(l, kVocab) == first);
    }
}

TEST_CASE("adding a hazard never makes a level completable")
{
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> r(0, 13), c(0, 27);
    for (int i = 0; i < 200; ++i) {
        auto l = structured_level(rng);
        auto with = l;
        with.at(r(rng), c(rng)) = kHazard;
        bool before = simulate(l, kVocab).completed;
        bool after = simulate(with, kVocab).completed;
        CHECK_FALSE((!before && after));
    }
}

TEST_CASE("trace csv and render")
{
    auto l = test::flat_ground(3, 4);
    auto res = simulate(l, kVocab);
    CHECK(trace_csv(res.trace) == "step,x,y\n0,0,1\n1,1,1\n2,2,1\n3,3,1\n");
    CHECK(render_trace(l, kVocab, res.trace) == "----\nxxxx\nXXXX");
}
