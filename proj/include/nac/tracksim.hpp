#pragma once

#include <deque>
#include <numbers>
#include <vector>

#include "nac/environment.hpp"

namespace nac {

// Oval: straight, arc, straight, arc; arcs have constant curvature 1/radius.
struct TrackGeometry {
  double straight = 100.0;
  double radius = 30.0;
  double half_width = 2.0;
  double v_max = 20.0;
  double v_init = 1.0;
  double dt = 0.2;          // 5 Hz control
  double steer_rate = 0.1;  // heading change per steer step (rad)
  double accel_step = 1.0;  // speed change per accel step
  std::size_t max_steps = 500;

  double length() const noexcept { return 2.0 * straight + 2.0 * std::numbers::pi * radius; }
  // Curvature at progress p (wrapped into [0, length)).
  double curvature(double p) const noexcept;
};

struct VehicleState {
  double p = 0.0;      // progress along the centerline, [0, L)
  double d = 0.0;      // signed lateral offset from the lane center
  double theta = 0.0;  // heading relative to the road direction, [-pi, pi)
  double v = 0.0;      // speed, [0, v_max]
};

struct DriveControl {
  int steer = 0;  // -1, 0, +1
  int accel = 0;  // -1, 0, +1
};

// Action index = steer_idx * 3 + accel_idx with steer {left, no-op, right}
// and accel {up, no-op, down}; index 4 is the full no-op.
DriveControl decode_drive_action(std::size_t action);
std::size_t encode_drive_action(DriveControl control);

double wrap_angle(double theta);

// (1 - damage) (cos theta - sin theta - |d| / w_half) v + damage * (-10);
// abs_sin substitutes |sin theta|.
double footnote_reward(const VehicleState& s, const TrackGeometry& g, bool damage, bool abs_sin);
// v^2, or -10 on damage.
double speed_squared_reward(const VehicleState& s, bool damage);

// One 7-wide frame: sin theta, cos theta, d / w_half, v / v_max, and 30x the
// curvature at p, p + 10, p + 25.
std::vector<double> drive_frame(const VehicleState& s, const TrackGeometry& g);

class TrackSim final : public Environment {
 public:
  static constexpr std::size_t kNumActions = 9;
  static constexpr std::size_t kFrameWidth = 7;

  explicit TrackSim(TrackGeometry geometry = {}, RewardVariant reward = RewardVariant::footnote,
                    bool abs_sin = false, std::size_t frame_stack = 4);

  std::string_view id() const noexcept override { return "tracksim"; }
  std::size_t num_actions() const noexcept override { return kNumActions; }
  ObservationSpec observation_spec() const override {
    return {ObservationSpec::Kind::features, kFrameWidth * frame_stack_};
  }

  Observation reset() override;
  StepResult step(std::size_t action) override;
  bool done() const noexcept override { return done_; }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<TrackSim>(*this); }

  const VehicleState& state() const noexcept { return state_; }
  const TrackGeometry& geometry() const noexcept { return geometry_; }
  std::size_t steps() const noexcept { return steps_; }
  // Starts a fresh episode from an arbitrary vehicle state (tests, probes).
  Observation place(const VehicleState& s);

 private:
  Observation observe() const;

  TrackGeometry geometry_;
  RewardVariant reward_;
  bool abs_sin_;
  std::size_t frame_stack_;
  VehicleState state_;
  std::deque<std::vector<double>> history_;  // frame_stack - 1 prior frames, oldest first
  std::size_t steps_ = 0;
  bool done_ = true;
};

}  // namespace nac
