#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nac/environment.hpp"

namespace nac {

// Character grid over {S start, H goal, . grass, W water}.
class GridMap {
 public:
  // Throws ConfigError unless rows are equal-length, the alphabet is S/H/./W,
  // and there is exactly one S and one H.
  explicit GridMap(std::vector<std::string> rows);

  // 3 x 6 two-path layout:
  //   S....H
  //   .WWWW.
  //   ......
  static GridMap default_map();
  static GridMap parse(const std::string& text);
  static GridMap load(const std::filesystem::path& path);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return rows_.front().size(); }
  std::size_t num_cells() const noexcept { return rows() * cols(); }
  char at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
  std::size_t start_row() const noexcept { return start_r_; }
  std::size_t start_col() const noexcept { return start_c_; }
  std::size_t index(std::size_t r, std::size_t c) const noexcept { return r * cols() + c; }

 private:
  std::vector<std::string> rows_;
  std::size_t start_r_ = 0;
  std::size_t start_c_ = 0;
};

enum class GridAction : std::size_t { up = 0, down = 1, left = 2, right = 3 };

class GridNav final : public Environment {
 public:
  static constexpr std::size_t kNumActions = 4;

  explicit GridNav(GridMap map, std::size_t max_steps = 100);

  std::string_view id() const noexcept override { return "gridnav"; }
  std::size_t num_actions() const noexcept override { return kNumActions; }
  ObservationSpec observation_spec() const override {
    return {ObservationSpec::Kind::discrete, map_.num_cells()};
  }

  Observation reset() override;
  StepResult step(std::size_t action) override;
  bool done() const noexcept override { return done_; }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<GridNav>(*this); }

  const GridMap& map() const noexcept { return map_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  // Places the agent on (r, c) of a fresh episode; test and planning hook.
  Observation place(std::size_t r, std::size_t c);

 private:
  GridMap map_;
  std::size_t max_steps_;
  std::size_t row_ = 0;
  std::size_t col_ = 0;
  std::size_t steps_ = 0;
  bool done_ = true;
};

}  // namespace nac
