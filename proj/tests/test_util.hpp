#pragma once

#include <cstdlib>
#include <random>
#include <string>

#include "moel/level.hpp"

namespace moel::test {

inline std::string data_dir()
{
    const char* d = std::getenv("MOEL_DATA_DIR");
    return d ? d : "data";
}

inline Level random_level(std::size_t h, std::size_t w, std::size_t v, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> pick(0, static_cast<int>(v) - 1);
    Level l(h, w);
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c) l.at(r, c) = static_cast<TileIndex>(pick(rng));
    return l;
}

// Standard vocabulary indices.
inline constexpr TileIndex kEmpty = 0;
inline constexpr TileIndex kSolid = 1;
inline constexpr TileIndex kHazard = 5;
inline constexpr TileIndex kPlatform = 7;

inline Level flat_ground(std::size_t h = 14, std::size_t w = 28)
{
    Level l(h, w, kEmpty);
    for (std::size_t c = 0; c < w; ++c) l.at(h - 1, c) = kSolid;
    return l;
}

} // namespace moel::test
