#include "moel/level.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "moel/error.hpp"

namespace moel {

namespace {

constexpr std::pair<TileCategory, std::string_view> kCategoryNames[] = {
    {TileCategory::Empty, "Empty"},
    {TileCategory::Solid, "Solid"},
    {TileCategory::Breakable, "Breakable"},
    {TileCategory::QuestionBox, "QuestionBox"},
    {TileCategory::Coin, "Coin"},
    {TileCategory::Hazard, "Hazard"},
    {TileCategory::PipeBody, "PipeBody"},
    {TileCategory::Platform, "Platform"},
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

} // namespace

std::string_view category_name(TileCategory c) noexcept
{
    for (auto& [cat, name] : kCategoryNames)
        if (cat == c) return name;
    return "Empty";
}

TileCategory parse_category(std::string_view name)
{
    for (auto& [cat, n] : kCategoryNames)
        if (n == name) return cat;
    throw Error(ErrorKind::InvalidConfig, "unknown tile category '" + std::string(name) + "'");
}

bool is_blocking(TileCategory c) noexcept
{
    switch (c) {
    case TileCategory::Solid:
    case TileCategory::Breakable:
    case TileCategory::QuestionBox:
    case TileCategory::PipeBody:
        return true;
    default:
        return false;
    }
}

bool is_support(TileCategory c) noexcept
{
    return is_blocking(c) || c == TileCategory::Platform;
}

TileVocabulary::TileVocabulary(std::vector<TileEntry> entries) : entries_(std::move(entries))
{
    std::fill(std::begin(lookup_), std::end(lookup_), -1);
    if (entries_.size() < 2)
        throw Error(ErrorKind::InvalidConfig, "vocabulary needs at least two entries");
    if (entries_.size() > 255)
        throw Error(ErrorKind::InvalidConfig, "vocabulary too large");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto key = static_cast<unsigned char>(entries_[i].symbol);
        if (entries_[i].symbol == '\n' || entries_[i].symbol == '\r')
            throw Error(ErrorKind::InvalidConfig, "newline cannot be a tile symbol");
        if (lookup_[key] != -1)
            throw Error(ErrorKind::InvalidConfig,
                        std::string("duplicate tile symbol '") + entries_[i].symbol + "'");
        lookup_[key] = static_cast<int>(i);
    }
    if (first_of(TileCategory::Empty) < 0 || first_of(TileCategory::Solid) < 0)
        throw Error(ErrorKind::InvalidConfig, "vocabulary must contain Empty and Solid");
}

TileVocabulary TileVocabulary::standard()
{
    return TileVocabulary({
        {'-', TileCategory::Empty},
        {'X', TileCategory::Solid},
        {'S', TileCategory::Breakable},
        {'?', TileCategory::QuestionBox},
        {'o', TileCategory::Coin},
        {'E', TileCategory::Hazard},
        {'|', TileCategory::PipeBody},
        {'%', TileCategory::Platform},
    });
}

TileVocabulary TileVocabulary::parse(std::string_view text)
{
    std::vector<TileEntry> entries;
    int lineno = 0;
    for (auto line : split_lines(text)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        if (line.size() < 3 || line[1] != ' ')
            throw Error(ErrorKind::InvalidConfig,
                        "vocabulary line " + std::to_string(lineno) + ": expected '<char> <category>'");
        auto name = line.substr(2);
        while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
        entries.push_back({line[0], parse_category(name)});
    }
    return TileVocabulary(std::move(entries));
}

TileVocabulary TileVocabulary::load(const std::string& path)
{
    return parse(read_file(path));
}

int TileVocabulary::index_of(char symbol) const noexcept
{
    return lookup_[static_cast<unsigned char>(symbol)];
}

int TileVocabulary::first_of(TileCategory c) const noexcept
{
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].category == c) return static_cast<int>(i);
    return -1;
}

Level::Level(std::size_t height, std::size_t width, std::vector<TileIndex> cells)
    : height_(height), width_(width), cells_(std::move(cells))
{
    if (cells_.size() != height_ * width_)
        throw Error(ErrorKind::ShapeMismatch, "cell count does not match height*width");
}

Level parse_level(std::string_view text, const TileVocabulary& vocab)
{
    auto lines = split_lines(text);
    // A single trailing newline is tolerated.
    if (lines.size() > 1 && lines.back().empty()) lines.pop_back();
    if (lines.empty() || (lines.size() == 1 && lines[0].empty()))
        throw Error(ErrorKind::EmptyInput, "level text is empty");

    const std::size_t width = lines[0].size();
    if (width == 0) throw Error(ErrorKind::EmptyInput, "first level row is empty");

    std::vector<TileIndex> cells;
    cells.reserve(lines.size() * width);
    for (std::size_t r = 0; r < lines.size(); ++r) {
        if (lines[r].size() != width)
            throw Error(ErrorKind::RaggedLines, "row " + std::to_string(r) + " has length " +
                                                    std::to_string(lines[r].size()) + ", expected " +
                                                    std::to_string(width));
        for (std::size_t c = 0; c < width; ++c) {
            int idx = vocab.index_of(lines[r][c]);
            if (idx < 0)
                throw Error(ErrorKind::UnknownSymbol, "(" + std::to_string(r) + "," + std::to_string(c) +
                                                          ") '" + lines[r][c] + "'");
            cells.push_back(static_cast<TileIndex>(idx));
        }
    }
    return Level(lines.size(), width, std::move(cells));
}

std::string serialize_level(const Level& level, const TileVocabulary& vocab)
{
    std::string out;
    out.reserve(level.height() * (level.width() + 1));
    for (std::size_t r = 0; r < level.height(); ++r) {
        if (r) out.push_back('\n');
        for (std::size_t c = 0; c < level.width(); ++c) out.push_back(vocab[level.at(r, c)].symbol);
    }
    return out;
}

std::vector<Level> parse_corpus(std::string_view text, const TileVocabulary& vocab)
{
    std::vector<Level> levels;
    std::string block;
    auto flush = [&] {
        if (!block.empty()) levels.push_back(parse_level(block, vocab));
        block.clear();
    };
    for (auto line : split_lines(text)) {
        if (line.empty()) {
            flush();
            continue;
        }
        if (!block.empty()) block.push_back('\n');
        block.append(line);
    }
    flush();
    return levels;
}

std::vector<Level> load_corpus(const std::string& path, const TileVocabulary& vocab)
{
    return parse_corpus(read_file(path), vocab);
}

void one_hot_into(const Level& level, std::size_t vocab_size, std::span<double> out)
{
    const std::size_t cells = level.height() * level.width();
    if (out.size() != cells * vocab_size)
        throw Error(ErrorKind::ShapeMismatch, "one-hot buffer has wrong size");
    std::fill(out.begin(), out.end(), 0.0);
    auto src = level.cells();
    for (std::size_t i = 0; i < cells; ++i) out[i * vocab_size + src[i]] = 1.0;
}

std::vector<double> one_hot(const Level& level, std::size_t vocab_size)
{
    std::vector<double> out(level.height() * level.width() * vocab_size);
    one_hot_into(level, vocab_size, out);
    return out;
}

Level decode_logits(std::span<const double> logits, std::size_t height, std::size_t width,
                    std::size_t vocab_size)
{
    if (logits.size() != height * width * vocab_size)
        throw Error(ErrorKind::ShapeMismatch, "logit grid has wrong size");
    std::vector<TileIndex> cells(height * width);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto cell = logits.subspan(i * vocab_size, vocab_size);
        std::size_t best = 0;
        for (std::size_t v = 0; v < vocab_size; ++v) {
            if (!std::isfinite(cell[v]))
                throw Error(ErrorKind::NonFiniteInput, "logit at cell " + std::to_string(i));
            if (cell[v] > cell[best]) best = v;
        }
        cells[i] = static_cast<TileIndex>(best);
    }
    return Level(height, width, std::move(cells));
}

double PatternDistribution::probability(const std::vector<TileIndex>& pattern) const
{
    auto it = counts.find(pattern);
    if (it == counts.end() || total == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total);
}

namespace {

void accumulate_windows(const Level& level, std::size_t k, PatternDistribution& dist)
{
    if (k == 0 || k > level.height() || k > level.width())
        throw Error(ErrorKind::PatternTooLarge, "pattern size " + std::to_string(k) + " does not fit a " +
                                                    std::to_string(level.height()) + "x" +
                                                    std::to_string(level.width()) + " level");
    std::vector<TileIndex> window(k * k);
    for (std::size_t r = 0; r + k <= level.height(); ++r) {
        for (std::size_t c = 0; c + k <= level.width(); ++c) {
            for (std::size_t dr = 0; dr < k; ++dr)
                for (std::size_t dc = 0; dc < k; ++dc) window[dr * k + dc] = level.at(r + dr, c + dc);
            ++dist.counts[window];
            ++dist.total;
        }
    }
}

} // namespace

PatternDistribution extract_patterns(const Level& level, std::size_t k)
{
    PatternDistribution dist;
    dist.k = k;
    accumulate_windows(level, k, dist);
    return dist;
}

PatternDistribution pooled_patterns(std::span<const Level> levels, std::size_t k)
{
    PatternDistribution dist;
    dist.k = k;
    for (const auto& level : levels) accumulate_windows(level, k, dist);
    return dist;
}

std::size_t hamming(const Level& a, const Level& b)
{
    if (a.height() != b.height() || a.width() != b.width())
        throw Error(ErrorKind::ShapeMismatch, "hamming needs equally sized levels");
    auto ca = a.cells();
    auto cb = b.cells();
    std::size_t diff = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) diff += ca[i] != cb[i];
    return diff;
}

} // namespace moel
