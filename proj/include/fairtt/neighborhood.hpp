#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fairtt/error.hpp"
#include "fairtt/evaluator.hpp"
#include "fairtt/instance.hpp"
#include "fairtt/rng.hpp"

namespace fairtt {

/// A lecture taking part in a Kempe exchange, identified by its course and
/// the period it leaves. H1 makes (course, period) unique in a feasible timetable.
struct ChainLecture {
  int course = 0;
  Period from;

  auto operator<=>(const ChainLecture&) const = default;
};

/// Exchange of a conflict-closed chain of lectures between two periods.
/// `room_plan[i]` is the destination room of `chain[i]`; it is empty until
/// the move has been planned (see plan_rooms).
struct KempeMove {
  Period period_a;
  Period period_b;
  int seed_course = 0;
  std::vector<ChainLecture> chain;
  std::vector<int> room_plan;
};

inline constexpr int kDefaultNeighborAttempts = 100;
inline constexpr int kDefaultConstructionRestarts = 200;

/// Saturation-degree greedy construction with randomized tie-breaks and
/// restarts. Soft constraints are ignored. Throws ConstructionFailed.
Timetable build_initial(const Instance& inst, std::uint64_t seed,
                        int max_restarts = kDefaultConstructionRestarts);

/// Connected component of `seed_course` in the conflict graph on the
/// lectures of the two periods. Throws NoLectureInPeriod.
KempeMove kempe_chain(const Instance& inst, const Timetable& t, Period period_a, Period period_b, int seed_course);
KempeMove kempe_chain(const EvaluationState& state, int period_a, int period_b, int seed_course);

/// Fills `move.room_plan`. Lectures that stay keep their rooms; incoming
/// lectures are matched by descending student count against descending
/// capacity of the free rooms, preferring the previous room among rooms of
/// equal capacity.
/// Returns the reason the move is not feasibility-preserving, if any.
std::optional<ErrorCode> try_plan_rooms(const EvaluationState& state, KempeMove& move);

/// Throwing wrapper around try_plan_rooms (RoomOverflow, UnavailabilityViolated).
void plan_rooms(const EvaluationState& state, KempeMove& move);

/// The lecture relocations realizing a planned move.
std::vector<Relocation> to_relocations(const EvaluationState& state, const KempeMove& move);

/// Applies the move to a copy of `t`, planning rooms if the move carries no plan.
Timetable apply_move(const Instance& inst, const Timetable& t, KempeMove move);

/// Samples (seed lecture, other period) uniformly until a move passes room
/// planning. Throws NoNeighborFound after `attempts` rejections.
KempeMove random_move(const EvaluationState& state, Rng& rng, int attempts = kDefaultNeighborAttempts);

Timetable random_neighbor(const Instance& inst, const Timetable& t, Rng& rng,
                          int attempts = kDefaultNeighborAttempts);

}  // namespace fairtt
