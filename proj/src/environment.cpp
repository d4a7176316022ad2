#include "nac/environment.hpp"

#include "nac/errors.hpp"
#include "nac/gridnav.hpp"
#include "nac/tracksim.hpp"

namespace nac {

std::unique_ptr<Environment> make_environment(const EnvConfig& config) {
  if (config.id == "gridnav") {
    GridMap map = config.map_path ? GridMap::load(*config.map_path) : GridMap::default_map();
    return std::make_unique<GridNav>(std::move(map), config.grid_max_steps);
  }
  if (config.id == "tracksim") {
    return std::make_unique<TrackSim>(TrackGeometry{}, config.reward, config.abs_sin,
                                      config.frame_stack);
  }
  throw ConfigError("unknown environment id '" + config.id + "'");
}

}  // namespace nac
