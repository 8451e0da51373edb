#include "fairtt/mmf_solver.hpp"

#include <cmath>
#include <sstream>

#include "fairtt/error.hpp"
#include "fairtt/harness.hpp"
#include "fairtt/rng.hpp"

namespace fairtt {

void SAParams::validate() const {
  if (!(theta_min > 0.0) || !(theta_max > theta_min)) {
    throw Error(ErrorCode::InvalidArgument, "temperatures must satisfy 0 < theta_min < theta_max");
  }
  if (!(timeout > 0.0)) throw Error(ErrorCode::InvalidArgument, "timeout must be positive");
  if (!(energy.delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (neighbor_attempts < 1) throw Error(ErrorCode::InvalidArgument, "neighbor attempts must be positive");
  if (virtual_seconds_per_iteration && !(*virtual_seconds_per_iteration > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "virtual clock step must be positive");
  }
}

double temperature_at(const SAParams& p, double elapsed) {
  const double alpha = std::pow(p.theta_min / p.theta_max, 1.0 / p.timeout);
  return std::pow(alpha, elapsed) * p.theta_max;
}

double acceptance_probability(std::span<const int> x_cur, std::span<const int> y_next, double theta,
                              const EnergyKind& energy) {
  if (mm_compare(y_next, x_cur) != MMOrder::Worse) return 1.0;
  return std::exp(-energy_difference(x_cur, y_next, energy) / theta);
}

std::string trace_csv(const RunTrace& trace) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << "elapsed_s,best_alloc,total_penalty\n";
  for (const auto& r : trace.records) {
    out << r.elapsed << ",\"" << format_allocation(r.best) << "\"," << r.total_penalty << '\n';
  }
  return out.str();
}

MmfResult solve_mmf(const Instance& inst, const Timetable& start, const SAParams& p, const SolveHooks& hooks) {
  p.validate();
  validate_shape(inst, start);
  if (!is_feasible(inst, start)) throw Error(ErrorCode::InfeasibleStart, "start timetable is infeasible");

  EvaluationState cur(inst, start);
  Rng rng(p.seed);
  RunClock clock(p.virtual_seconds_per_iteration);

  MmfResult result;
  std::vector<int> cur_sorted = sorted_descending(cur.allocation());
  std::vector<int> best_sorted = cur_sorted;
  result.best_allocation = cur.allocation();
  result.best_total = cur.total();
  // s_best is tracked lazily: while `best_is_current` holds, s_best is the
  // current timetable and is only copied out when the walk leaves it.
  bool best_is_current = true;
  result.trace.records.push_back({0.0, result.best_allocation, result.best_total});

  std::vector<int> next_sorted;
  for (double t = clock.elapsed(); t < p.timeout; t = clock.elapsed()) {
    const double theta = temperature_at(p, t);
    const KempeMove move = random_move(cur, rng, p.neighbor_attempts);
    const auto relocations = to_relocations(cur, move);
    const auto undo = cur.apply(relocations);
    next_sorted = sorted_descending(cur.allocation());

    bool accept = mm_compare_sorted(next_sorted, cur_sorted) != MMOrder::Worse;
    if (!accept) {
      const double dE = energy_difference(cur_sorted, next_sorted, p.energy);
      accept = std::exp(-dE / theta) >= rng.uniform01();
    }

    if (!accept) {
      cur.apply(undo);
    } else {
      ++result.trace.accepted;
      const MMOrder vs_best = mm_compare_sorted(next_sorted, best_sorted);
      if (vs_best == MMOrder::Worse) {
        if (best_is_current) {
          cur.apply(undo);
          result.best = cur.timetable();
          cur.apply(relocations);
          best_is_current = false;
        }
      } else {
        // Non-strict: an equally fair timetable replaces s_best as well.
        best_is_current = true;
        result.best_allocation = cur.allocation();
        result.best_total = cur.total();
        if (vs_best == MMOrder::Better) {
          best_sorted = next_sorted;
          result.trace.records.push_back({t, result.best_allocation, result.best_total});
        }
      }
      cur_sorted.swap(next_sorted);
    }

    clock.tick();
    if (hooks.on_step) hooks.on_step(cur, theta);
  }

  if (best_is_current) result.best = cur.timetable();
  result.trace.iterations = clock.ticks();
  result.trace.records.push_back({clock.elapsed(), result.best_allocation, result.best_total});
  return result;
}

}  // namespace fairtt
