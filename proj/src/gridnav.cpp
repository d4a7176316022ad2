#include "nac/gridnav.hpp"

#include <fstream>
#include <sstream>

#include "nac/errors.hpp"

namespace nac {

GridMap::GridMap(std::vector<std::string> rows) : rows_(std::move(rows)) {
  if (rows_.empty() || rows_.front().empty()) throw ConfigError("grid map is empty");
  std::size_t starts = 0;
  std::size_t goals = 0;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != rows_.front().size()) {
      throw ConfigError("grid map row " + std::to_string(r) + " has a different width");
    }
    for (std::size_t c = 0; c < rows_[r].size(); ++c) {
      switch (rows_[r][c]) {
        case 'S':
          ++starts;
          start_r_ = r;
          start_c_ = c;
          break;
        case 'H':
          ++goals;
          break;
        case '.':
        case 'W':
          break;
        default:
          throw ConfigError(std::string("grid map has unknown cell '") + rows_[r][c] + "'");
      }
    }
  }
  if (starts != 1 || goals != 1) throw ConfigError("grid map needs exactly one S and one H");
}

GridMap GridMap::default_map() { return GridMap({"S....H", ".WWWW.", "......"}); }

GridMap GridMap::parse(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  return GridMap(std::move(rows));
}

GridMap GridMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid map: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

GridNav::GridNav(GridMap map, std::size_t max_steps) : map_(std::move(map)), max_steps_(max_steps) {
  if (max_steps_ == 0) throw ConfigError("gridworld step cap must be positive");
}

Observation GridNav::reset() { return place(map_.start_row(), map_.start_col()); }

Observation GridNav::place(std::size_t r, std::size_t c) {
  if (r >= map_.rows() || c >= map_.cols()) throw InvalidArgument("cell outside the grid");
  row_ = r;
  col_ = c;
  steps_ = 0;
  done_ = false;
  return Observation::discrete(map_.index(row_, col_));
}

StepResult GridNav::step(std::size_t action) {
  if (done_) throw UsageError("gridworld step after episode end; call reset()");
  if (action >= kNumActions) throw InvalidArgument("gridworld action out of range");
  std::size_t r = row_;
  std::size_t c = col_;
  switch (static_cast<GridAction>(action)) {
    case GridAction::up:
      if (r > 0) --r;
      break;
    case GridAction::down:
      if (r + 1 < map_.rows()) ++r;
      break;
    case GridAction::left:
      if (c > 0) --c;
      break;
    case GridAction::right:
      if (c + 1 < map_.cols()) ++c;
      break;
  }
  row_ = r;
  col_ = c;
  ++steps_;
  StepResult out;
  const char cell = map_.at(r, c);
  if (cell == 'H') {
    out.reward = 1.0;
    out.done = true;
  } else if (cell == 'W') {
    out.done = true;
  }
  if (steps_ >= max_steps_) out.done = true;
  done_ = out.done;
  out.obs = Observation::discrete(map_.index(r, c));
  return out;
}

}  // namespace nac
