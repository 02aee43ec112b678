#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vvsim {

// Which buses update at which steps, materialized for a whole run. Bus
// indices are 1..n (bus 0 never updates).
class Schedule {
 public:
  Schedule() = default;
  Schedule(int n, std::int64_t horizon);

  int num_buses() const noexcept { return n_; }
  std::int64_t horizon() const noexcept { return horizon_; }

  bool is_active(std::int64_t step, int bus) const {
    return mask_[index(step, bus)] != 0;
  }
  int active_count(std::int64_t step) const;
  std::vector<std::int64_t> activation_steps(int bus) const;

  void set_active(std::int64_t step, int bus) { mask_[index(step, bus)] = 1; }

  struct DelayReport {
    bool ok = false;
    std::int64_t worst_gap = 0;  // largest distance between consecutive updates
    int offending_bus = 0;
    std::int64_t offending_step = 0;
    std::string detail;
  };
  // Independent scan verifying every bus updates at least once in every
  // window of K consecutive steps.
  DelayReport validate_bounded_delay(int K) const;

 private:
  std::size_t index(std::int64_t step, int bus) const {
    return static_cast<std::size_t>(step) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(bus - 1);
  }
  int n_ = 0;
  std::int64_t horizon_ = 0;
  std::vector<std::uint8_t> mask_;
};

// Every bus active at every step.
Schedule all_active_schedule(int n, std::int64_t horizon);

// No bus ever updates (uncontrolled baseline). Fails bounded-delay checks by
// construction.
Schedule no_control_schedule(int n, std::int64_t horizon);

// Random duty-cycled participation: time is cut into cycles of K/2 steps and
// each bus independently draws ceil(eta * K/2) active slots per cycle without
// replacement. K must be even and >= 2; eta in (0, 1]. The worst possible
// inter-update gap is K - 1, so the schedule satisfies delay bound K.
Schedule duty_cycle_schedule(int n, std::int64_t horizon, int K, double eta,
                             std::uint64_t seed);

// Deterministic worst-case staggering: bus j updates exactly at steps
// congruent to j mod K, achieving the delay bound K with equality.
Schedule adversarial_schedule(int n, std::int64_t horizon, int K);

// Load a schedule from a text file: one line per step, space-separated
// active bus indices (empty line = nobody). Needs at least `horizon` lines.
Schedule schedule_from_file(const std::filesystem::path& path, int n,
                            std::int64_t horizon);

// ceil(eta * K/2) * n: expected (and exact) updates per cycle for a
// duty-cycle schedule.
std::int64_t expected_updates_per_cycle(int n, int K, double eta);

}  // namespace vvsim
