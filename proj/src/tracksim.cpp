#include "nac/tracksim.hpp"

#include <algorithm>
#include <cmath>

#include "nac/errors.hpp"

namespace nac {

double TrackGeometry::curvature(double p) const noexcept {
  const double len = length();
  p = std::fmod(p, len);
  if (p < 0.0) p += len;
  const double arc = std::numbers::pi * radius;
  if (p < straight) return 0.0;
  if (p < straight + arc) return 1.0 / radius;
  if (p < 2.0 * straight + arc) return 0.0;
  return 1.0 / radius;
}

DriveControl decode_drive_action(std::size_t action) {
  if (action >= TrackSim::kNumActions) throw InvalidArgument("drive action out of range");
  const int steer_idx = static_cast<int>(action / 3);
  const int accel_idx = static_cast<int>(action % 3);
  return {steer_idx - 1, 1 - accel_idx};
}

std::size_t encode_drive_action(DriveControl control) {
  if (control.steer < -1 || control.steer > 1 || control.accel < -1 || control.accel > 1) {
    throw InvalidArgument("drive control components must be -1, 0 or +1");
  }
  return static_cast<std::size_t>((control.steer + 1) * 3 + (1 - control.accel));
}

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta + std::numbers::pi, two_pi);
  if (theta < 0.0) theta += two_pi;
  theta -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift back through rounding.
  if (theta >= std::numbers::pi) theta -= two_pi;
  return theta;
}

double footnote_reward(const VehicleState& s, const TrackGeometry& g, bool damage, bool abs_sin) {
  if (damage) return -10.0;
  const double lateral = abs_sin ? std::abs(std::sin(s.theta)) : std::sin(s.theta);
  const double lane_ratio = std::abs(s.d) / g.half_width;
  return (std::cos(s.theta) - lateral - lane_ratio) * s.v;
}

double speed_squared_reward(const VehicleState& s, bool damage) {
  if (damage) return -10.0;
  return s.v * s.v;
}

std::vector<double> drive_frame(const VehicleState& s, const TrackGeometry& g) {
  return {std::sin(s.theta),
          std::cos(s.theta),
          s.d / g.half_width,
          s.v / g.v_max,
          30.0 * g.curvature(s.p),
          30.0 * g.curvature(s.p + 10.0),
          30.0 * g.curvature(s.p + 25.0)};
}

TrackSim::TrackSim(TrackGeometry geometry, RewardVariant reward, bool abs_sin,
                   std::size_t frame_stack)
    : geometry_(geometry), reward_(reward), abs_sin_(abs_sin), frame_stack_(frame_stack) {
  if (frame_stack_ == 0) throw ConfigError("frame_stack must be >= 1");
  if (!(geometry_.half_width > 0.0) || !(geometry_.v_max > 0.0) || !(geometry_.radius > 0.0)) {
    throw ConfigError("track geometry needs positive half width, radius and top speed");
  }
}

Observation TrackSim::reset() {
  return place(VehicleState{0.0, 0.0, 0.0, geometry_.v_init});
}

Observation TrackSim::place(const VehicleState& s) {
  state_ = s;
  // A fresh stack replicates the initial frame.
  history_.assign(frame_stack_ - 1, drive_frame(state_, geometry_));
  steps_ = 0;
  done_ = false;
  return observe();
}

Observation TrackSim::observe() const {
  const std::vector<double> current = drive_frame(state_, geometry_);
  std::vector<double> stacked;
  stacked.reserve(kFrameWidth * frame_stack_);
  for (const auto& f : history_) stacked.insert(stacked.end(), f.begin(), f.end());
  stacked.insert(stacked.end(), current.begin(), current.end());
  return Observation::features(std::move(stacked));
}

StepResult TrackSim::step(std::size_t action) {
  if (done_) throw UsageError("track simulator step after episode end; call reset()");
  const DriveControl control = decode_drive_action(action);
  const TrackGeometry& g = geometry_;

  if (frame_stack_ > 1) {
    history_.push_back(drive_frame(state_, g));
    history_.pop_front();
  }

  VehicleState& s = state_;
  const double kappa = g.curvature(s.p);
  s.v = std::clamp(s.v + control.accel * g.accel_step, 0.0, g.v_max);
  s.theta = wrap_angle(s.theta + control.steer * g.steer_rate - kappa * s.v * std::cos(s.theta) * g.dt);
  const double advance = s.v * std::cos(s.theta) * g.dt;
  s.p = std::fmod(s.p + advance, g.length());
  if (s.p < 0.0) s.p += g.length();
  s.d += s.v * std::sin(s.theta) * g.dt;
  ++steps_;

  StepResult out;
  out.damage = std::abs(s.d) > g.half_width;
  out.reward = reward_ == RewardVariant::footnote ? footnote_reward(s, g, out.damage, abs_sin_)
                                                  : speed_squared_reward(s, out.damage);
  out.done = out.damage || steps_ >= g.max_steps;
  out.progress = advance;
  done_ = out.done;
  out.obs = observe();
  return out;
}

}  // namespace nac
