#include "cmpp/grid_map.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cmpp/error.hpp"

namespace cmpp {

GridMap::GridMap(int width, int height, std::vector<char> traversable)
    : width_(width), height_(height), cells_(std::move(traversable)) {
  if (width < 0 || height < 0 || cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error("grid of " + std::to_string(width) + "x" + std::to_string(height) + " given " +
                std::to_string(cells_.size()) + " cells");
  }
  for (char& c : cells_) c = c ? 1 : 0;
}

GridMap GridMap::open(int width, int height) {
  return GridMap(width, height, std::vector<char>(static_cast<std::size_t>(width * height), 1));
}

GridMap GridMap::from_rows(const std::vector<std::string>& rows) {
  const int height = static_cast<int>(rows.size());
  const int width = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  std::vector<char> cells;
  cells.reserve(static_cast<std::size_t>(width * height));
  for (const std::string& r : rows) {
    if (static_cast<int>(r.size()) != width) throw Error("ragged rows");
    for (char ch : r) cells.push_back(ch == '.' ? 1 : 0);
  }
  return GridMap(width, height, std::move(cells));
}

std::size_t GridMap::traversable_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

std::array<CellIndex, 4> GridMap::neighbors(CellIndex c) const {
  const int x = col(c), y = row(c);
  auto at = [&](int cx, int cy) { return traversable(cx, cy) ? index(cx, cy) : -1; };
  return {at(x, y - 1), at(x + 1, y), at(x, y + 1), at(x - 1, y)};
}

std::vector<int> grid_bfs(const GridMap& grid, CellIndex source) {
  std::vector<int> dist(grid.size(), -1);
  if (!grid.traversable(source)) return dist;
  std::vector<CellIndex> queue{source};
  dist[static_cast<std::size_t>(source)] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    CellIndex c = queue[head];
    for (CellIndex n : grid.neighbors(c)) {
      if (n < 0 || dist[static_cast<std::size_t>(n)] >= 0) continue;
      dist[static_cast<std::size_t>(n)] = dist[static_cast<std::size_t>(c)] + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++number_;
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

int parse_int(std::string_view s, std::size_t line, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

std::pair<std::string_view, std::string_view> split_key(std::string_view line) {
  std::size_t sp = line.find(' ');
  if (sp == std::string_view::npos) return {line, {}};
  std::string_view value = line.substr(sp + 1);
  while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
  while (!value.empty() && value.back() == ' ') value.remove_suffix(1);
  return {line.substr(0, sp), value};
}

}  // namespace

GridMap parse_map(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  int width = -1, height = -1;
  bool typed = false;
  while (true) {
    if (!reader.next(line)) throw ParseError(reader.number(), "missing 'map' line");
    if (line.empty()) continue;
    auto [key, value] = split_key(line);
    if (key == "type") {
      typed = true;
    } else if (key == "height") {
      height = parse_int(value, reader.number(), "height");
    } else if (key == "width") {
      width = parse_int(value, reader.number(), "width");
    } else if (key == "map") {
      break;
    } else {
      throw ParseError(reader.number(), "unexpected header '" + std::string(line) + "'");
    }
  }
  if (!typed) throw ParseError(reader.number(), "missing 'type' header");
  if (width <= 0 || height <= 0) throw ParseError(reader.number(), "missing or non-positive width/height");

  std::vector<char> cells;
  cells.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) {
    if (!reader.next(line)) throw ParseError(reader.number() + 1, "expected " + std::to_string(height) + " rows");
    if (static_cast<int>(line.size()) != width) {
      throw ParseError(reader.number(), "row has " + std::to_string(line.size()) + " cells, expected " +
                                            std::to_string(width));
    }
    for (char ch : line) {
      switch (ch) {
        case '.':
        case 'G': cells.push_back(1); break;
        case '@':
        case 'T':
        case 'O': cells.push_back(0); break;
        default: throw ParseError(reader.number(), std::string("unknown cell character '") + ch + "'");
      }
    }
  }
  while (reader.next(line)) {
    if (!line.empty()) throw ParseError(reader.number(), "trailing content after map rows");
  }
  return GridMap(width, height, std::move(cells));
}

GridMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open map file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_map(buffer.str());
}

std::string format_map(const GridMap& grid) {
  std::string out = "type octile\nheight " + std::to_string(grid.height()) + "\nwidth " +
                    std::to_string(grid.width()) + "\nmap\n";
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) out += grid.traversable(c, r) ? '.' : '@';
    out += '\n';
  }
  return out;
}

std::vector<ScenarioEntry> parse_scen(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(1, "empty scenario");
  auto [key, value] = split_key(line);
  if (key != "version" || (value != "1" && value != "1.0")) {
    throw ParseError(1, "expected 'version 1'");
  }
  std::vector<ScenarioEntry> out;
  while (reader.next(line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t tab = line.find('\t', pos);
      if (tab == std::string_view::npos) tab = line.size();
      fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() != 9) {
      throw ParseError(reader.number(), "expected 9 tab-separated fields, got " + std::to_string(fields.size()));
    }
    const std::size_t n = reader.number();
    ScenarioEntry e;
    e.bucket = parse_int(fields[0], n, "bucket");
    e.map_name = std::string(fields[1]);
    e.map_width = parse_int(fields[2], n, "map width");
    e.map_height = parse_int(fields[3], n, "map height");
    e.start_col = parse_int(fields[4], n, "start x");
    e.start_row = parse_int(fields[5], n, "start y");
    e.goal_col = parse_int(fields[6], n, "goal x");
    e.goal_row = parse_int(fields[7], n, "goal y");
    try {
      e.optimal_length = std::stod(std::string(fields[8]));
    } catch (const std::exception&) {
      throw ParseError(n, "bad optimal length '" + std::string(fields[8]) + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace cmpp
