#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairtt/evaluator.hpp"
#include "fairtt/fairness.hpp"
#include "fairtt/instance.hpp"
#include "fairtt/neighborhood.hpp"

namespace fairtt {

struct SAParams {
  double theta_max = 5.0;
  double theta_min = 0.01;
  double timeout = 192.0;  // seconds
  EnergyKind energy{};
  std::uint64_t seed = 1;
  int neighbor_attempts = kDefaultNeighborAttempts;
  /// When set, elapsed time advances by this many seconds per iteration
  /// instead of following the wall clock, which makes runs bit-reproducible.
  std::optional<double> virtual_seconds_per_iteration;

  /// Throws InvalidArgument unless 0 < theta_min < theta_max, timeout > 0, delta > 0.
  void validate() const;
};

/// Geometric cooling: alpha^t * theta_max with alpha = (theta_min/theta_max)^(1/timeout).
double temperature_at(const SAParams& p, double elapsed);

/// 1 when the candidate is at least as good under max-min fairness,
/// otherwise exp(-dE(x_cur, y_next) / theta).
double acceptance_probability(std::span<const int> x_cur, std::span<const int> y_next, double theta,
                              const EnergyKind& energy);

/// Elapsed-time source for an annealing run.
class RunClock {
 public:
  explicit RunClock(std::optional<double> virtual_step)
      : step_(virtual_step), start_(std::chrono::steady_clock::now()) {}

  double elapsed() const {
    if (step_) return static_cast<double>(ticks_) * *step_;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  void tick() noexcept { ++ticks_; }
  std::uint64_t ticks() const noexcept { return ticks_; }

 private:
  std::optional<double> step_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t ticks_ = 0;
};

struct TraceRecord {
  double elapsed = 0.0;
  PenaltyAllocation best;  // curriculum order
  int total_penalty = 0;

  bool operator==(const TraceRecord&) const = default;
};

/// Best-so-far snapshots: the start, every strict improvement, and the end.
struct RunTrace {
  std::vector<TraceRecord> records;
  std::uint64_t iterations = 0;
  std::uint64_t accepted = 0;

  bool operator==(const RunTrace&) const = default;
};

/// CSV with header "elapsed_s,best_alloc,total_penalty"; allocations in
/// exponent notation.
std::string trace_csv(const RunTrace& trace);

struct MmfResult {
  Timetable best;
  PenaltyAllocation best_allocation;
  int best_total = 0;
  RunTrace trace;
};

struct SolveHooks {
  /// Called after every iteration with the current state and temperature.
  std::function<void(const EvaluationState&, double theta)> on_step;
};

/// Max-min-fair simulated annealing over the Kempe neighborhood until the
/// timeout. Throws InfeasibleStart, or NoNeighborFound on locked instances.
MmfResult solve_mmf(const Instance& inst, const Timetable& start, const SAParams& p, const SolveHooks& hooks = {});

}  // namespace fairtt
