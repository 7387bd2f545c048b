#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moel {

enum class TileCategory : std::uint8_t {
    Empty,
    Solid,
    Breakable,
    QuestionBox,
    Coin,
    Hazard,
    PipeBody,
    Platform,
};

std::string_view category_name(TileCategory c) noexcept;
TileCategory parse_category(std::string_view name);

// Blocks movement through the cell.
bool is_blocking(TileCategory c) noexcept;
// Something the agent can stand on.
bool is_support(TileCategory c) noexcept;

struct TileEntry {
    char symbol;
    TileCategory category;
};

/// Ordered tile alphabet. An entry's position is its channel index in
/// one-hot encodings and its value in Level cells.
class TileVocabulary {
public:
    explicit TileVocabulary(std::vector<TileEntry> entries);

    /// Eight-entry vocabulary, one symbol per category:
    /// `-` Empty, `X` Solid, `S` Breakable, `?` QuestionBox, `o` Coin,
    /// `E` Hazard, `|` PipeBody, `%` Platform.
    static TileVocabulary standard();

    /// Reads `<char> <category>` lines; blank lines and `#` comments skipped.
    static TileVocabulary parse(std::string_view text);
    static TileVocabulary load(const std::string& path);

    std::size_t size() const noexcept { return entries_.size(); }
    const TileEntry& operator[](std::size_t i) const { return entries_.at(i); }
    const std::vector<TileEntry>& entries() const noexcept { return entries_; }

    /// Index of `symbol`, or -1 if absent.
    int index_of(char symbol) const noexcept;
    /// First entry with the given category, or -1.
    int first_of(TileCategory c) const noexcept;
    TileCategory category(std::size_t index) const { return entries_.at(index).category; }

private:
    std::vector<TileEntry> entries_;
    int lookup_[256];
};

using TileIndex = std::uint8_t;

/// H x W grid of vocabulary indices, row 0 at the top.
class Level {
public:
    Level() = default;
    Level(std::size_t height, std::size_t width, TileIndex fill = 0)
        : height_(height), width_(width), cells_(height * width, fill) {}
    Level(std::size_t height, std::size_t width, std::vector<TileIndex> cells);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }

    TileIndex at(std::size_t row, std::size_t col) const { return cells_[row * width_ + col]; }
    TileIndex& at(std::size_t row, std::size_t col) { return cells_[row * width_ + col]; }

    std::span<const TileIndex> cells() const noexcept { return cells_; }

    bool operator==(const Level&) const = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<TileIndex> cells_;
};

Level parse_level(std::string_view text, const TileVocabulary& vocab);
std::string serialize_level(const Level& level, const TileVocabulary& vocab);

/// Reads a corpus file; levels are separated by one or more blank lines.
std::vector<Level> parse_corpus(std::string_view text, const TileVocabulary& vocab);
std::vector<Level> load_corpus(const std::string& path, const TileVocabulary& vocab);

/// H*W*V values laid out cell-major: out[(r*W + c)*V + v].
std::vector<double> one_hot(const Level& level, std::size_t vocab_size);
void one_hot_into(const Level& level, std::size_t vocab_size, std::span<double> out);

/// Per-cell argmax over channels, ties to the lowest index.
Level decode_logits(std::span<const double> logits, std::size_t height, std::size_t width,
                    std::size_t vocab_size);

/// Frequency of every k x k window (stride 1) of a level.
struct PatternDistribution {
    std::size_t k = 0;
    std::map<std::vector<TileIndex>, std::size_t> counts;
    std::size_t total = 0;

    double probability(const std::vector<TileIndex>& pattern) const;
};

PatternDistribution extract_patterns(const Level& level, std::size_t k);

/// Pools the windows of many levels into one distribution.
PatternDistribution pooled_patterns(std::span<const Level> levels, std::size_t k);

std::size_t hamming(const Level& a, const Level& b);

} // namespace moel
