#include "vvsim/scheduler.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vvsim/rng.hpp"

namespace vvsim {

namespace {

void check_shape(int n, std::int64_t horizon) {
  if (n < 1) throw std::invalid_argument("schedule: need n >= 1 buses");
  if (horizon < 1) throw std::invalid_argument("schedule: need horizon >= 1");
}

int slots_per_cycle(int K) {
  if (K < 2 || K % 2 != 0)
    throw std::invalid_argument("schedule: K must be even and >= 2, got " +
                                std::to_string(K));
  return K / 2;
}

int active_slots(int L, double eta) {
  if (!(eta > 0.0) || eta > 1.0)
    throw std::invalid_argument("schedule: eta must lie in (0, 1], got " +
                                std::to_string(eta));
  // ceil(eta * L), guarded so that an exactly-integer product does not get
  // bumped up by floating-point dust.
  const int m = static_cast<int>(std::ceil(eta * static_cast<double>(L) - 1e-9));
  return std::min(L, std::max(1, m));
}

}  // namespace

Schedule::Schedule(int n, std::int64_t horizon) : n_(n), horizon_(horizon) {
  check_shape(n, horizon);
  mask_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(horizon),
               0);
}

int Schedule::active_count(std::int64_t step) const {
  const auto begin = mask_.begin() + static_cast<std::ptrdiff_t>(index(step, 1));
  return static_cast<int>(std::accumulate(begin, begin + n_, 0));
}

std::vector<std::int64_t> Schedule::activation_steps(int bus) const {
  std::vector<std::int64_t> steps;
  for (std::int64_t k = 0; k < horizon_; ++k)
    if (is_active(k, bus)) steps.push_back(k);
  return steps;
}

Schedule::DelayReport Schedule::validate_bounded_delay(int K) const {
  if (K < 1) throw std::invalid_argument("schedule: delay bound must be >= 1");
  DelayReport rep;
  rep.ok = true;
  for (int bus = 1; bus <= n_; ++bus) {
    std::int64_t last = -1;  // step before the window
    for (std::int64_t k = 0; k < horizon_; ++k) {
      if (!is_active(k, bus)) continue;
      const std::int64_t gap = k - last;
      if (gap > rep.worst_gap) rep.worst_gap = gap;
      if (gap > K && rep.ok) {
        rep.ok = false;
        rep.offending_bus = bus;
        rep.offending_step = k;
        rep.detail = "bus " + std::to_string(bus) + " idle for " +
                     std::to_string(gap) + " steps ending at step " +
                     std::to_string(k);
      }
      last = k;
    }
    const std::int64_t tail = horizon_ - last;
    if (tail > rep.worst_gap) rep.worst_gap = tail;
    if (tail > K && rep.ok) {
      rep.ok = false;
      rep.offending_bus = bus;
      rep.offending_step = horizon_ - 1;
      rep.detail = last < 0 ? "bus " + std::to_string(bus) + " never updates"
                            : "bus " + std::to_string(bus) + " idle for the last " +
                                  std::to_string(tail) + " steps";
    }
  }
  return rep;
}

Schedule all_active_schedule(int n, std::int64_t horizon) {
  Schedule s(n, horizon);
  for (std::int64_t k = 0; k < horizon; ++k)
    for (int j = 1; j <= n; ++j) s.set_active(k, j);
  return s;
}

Schedule no_control_schedule(int n, std::int64_t horizon) {
  return Schedule(n, horizon);
}

Schedule duty_cycle_schedule(int n, std::int64_t horizon, int K, double eta,
                             std::uint64_t seed) {
  check_shape(n, horizon);
  const int L = slots_per_cycle(K);
  const int m = active_slots(L, eta);
  Schedule s(n, horizon);
  const std::int64_t cycles = (horizon + L - 1) / L;
  std::vector<int> slots(static_cast<std::size_t>(L));
  for (std::int64_t c = 0; c < cycles; ++c) {
    for (int bus = 1; bus <= n; ++bus) {
      // Partial Fisher-Yates over the cycle's slots, keyed by (seed, c, bus).
      rng::Stream gen(rng::mix64(rng::derive(seed, static_cast<std::uint64_t>(c)) ^
                                 rng::mix64(static_cast<std::uint64_t>(bus))));
      std::iota(slots.begin(), slots.end(), 0);
      for (int t = 0; t < m; ++t) {
        const int j = t + static_cast<int>(gen.below(static_cast<std::uint32_t>(L - t)));
        std::swap(slots[t], slots[j]);
        const std::int64_t step = c * L + slots[t];
        if (step < horizon) s.set_active(step, bus);
      }
    }
  }
  return s;
}

Schedule adversarial_schedule(int n, std::int64_t horizon, int K) {
  check_shape(n, horizon);
  if (K < 1) throw std::invalid_argument("schedule: K must be >= 1");
  Schedule s(n, horizon);
  for (std::int64_t k = 0; k < horizon; ++k)
    for (int j = 1; j <= n; ++j)
      if (k % K == static_cast<std::int64_t>(j % K)) s.set_active(k, j);
  return s;
}

Schedule schedule_from_file(const std::filesystem::path& path, int n,
                            std::int64_t horizon) {
  check_shape(n, horizon);
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("schedule: cannot open " + path.string());
  Schedule s(n, horizon);
  std::string line;
  std::int64_t k = 0;
  while (k < horizon && std::getline(in, line)) {
    std::istringstream row(line);
    int bus;
    while (row >> bus) {
      if (bus < 1 || bus > n)
        throw std::runtime_error("schedule: bus " + std::to_string(bus) +
                                 " out of range 1.." + std::to_string(n) +
                                 " on line " + std::to_string(k + 1));
      s.set_active(k, bus);
    }
    if (row.fail() && !row.eof())
      throw std::runtime_error("schedule: unparsable token on line " +
                               std::to_string(k + 1));
    ++k;
  }
  if (k < horizon)
    throw std::runtime_error("schedule: file ends at line " +
                             std::to_string(k) + " but the run needs " +
                             std::to_string(horizon));
  return s;
}

std::int64_t expected_updates_per_cycle(int n, int K, double eta) {
  if (n < 1) throw std::invalid_argument("schedule: need n >= 1 buses");
  const int L = slots_per_cycle(K);
  return static_cast<std::int64_t>(active_slots(L, eta)) * n;
}

}  // namespace vvsim
