#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairtt/instance.hpp"

namespace fairtt {

/// Standard track-3 soft-constraint weights.
namespace weights {
inline constexpr int kRoomCapacity = 1;    // per excess student
inline constexpr int kMinWorkingDays = 5;  // per missing working day
inline constexpr int kIsolated = 2;        // per isolated curriculum lecture
inline constexpr int kRoomStability = 1;   // per extra room
}  // namespace weights

enum class HardKind { H1, H2, H3, H4 };

std::string_view to_string(HardKind kind);

struct HardViolation {
  HardKind kind;
  std::string detail;
};

struct PenaltyBreakdown {
  int room_capacity = 0;
  int min_working_days = 0;
  int isolated_lectures = 0;
  int room_stability = 0;

  int total() const noexcept {
    return room_capacity + min_working_days + isolated_lectures + room_stability;
  }
};

/// Per-curriculum penalties in instance curriculum order. Entries are raw
/// nonnegative penalties (larger is worse).
using PenaltyAllocation = std::vector<int>;

/// H1 same course twice in a period, H2 two lectures in one (period, room),
/// H3 curriculum/teacher clash, H4 unavailable period. One entry per
/// offending pair (H1-H3) or lecture (H4).
std::vector<HardViolation> check_hard(const Instance& inst, const Timetable& t);
bool is_feasible(const Instance& inst, const Timetable& t);

PenaltyBreakdown course_soft_penalties(const Instance& inst, const Timetable& t, int course);
PenaltyBreakdown course_soft_penalties(const Instance& inst, const Timetable& t, std::string_view course_id);

int curriculum_compactness_penalty(const Instance& inst, const Timetable& t, int curriculum);
int curriculum_compactness_penalty(const Instance& inst, const Timetable& t, std::string_view curriculum_id);

/// Objective f: every course counted once plus one S3 term per curriculum.
/// Throws Infeasible on hard violations.
int total_penalty(const Instance& inst, const Timetable& t);

/// f_c: S1+S2+S4 of each member course charged in full, plus the
/// curriculum's own S3 term.
int curriculum_penalty(const Instance& inst, const Timetable& t, int curriculum);
int curriculum_penalty(const Instance& inst, const Timetable& t, std::string_view curriculum_id);

PenaltyAllocation penalty_allocation(const Instance& inst, const Timetable& t);

/// (f_max - a_1, ..., f_max - a_k).
std::vector<int> shifted_allocation(std::span<const int> a);

/// Moves lecture `lecture` of `course` to `to`.
struct Relocation {
  int course = 0;
  int lecture = 0;
  Placement to;
};

/// Incremental evaluation of a feasible timetable. Keeps the per-period room
/// occupancy and per-course/per-curriculum counters so that relocating a
/// handful of lectures only touches the entities involved.
///
/// Owned by one solver run at a time; movable, never shared mutably.
class EvaluationState {
 public:
  /// Throws Infeasible when `t` violates a hard constraint.
  EvaluationState(const Instance& inst, Timetable t);

  const Instance& instance() const noexcept { return *inst_; }
  const Timetable& timetable() const noexcept { return timetable_; }
  const PenaltyAllocation& allocation() const noexcept { return allocation_; }
  int total() const noexcept { return total_; }

  /// Course occupying (period, room), or -1.
  int occupant(int period, int room) const noexcept {
    return occupancy_[static_cast<std::size_t>(period * inst_->room_count() + room)];
  }
  int lectures_in(int period) const noexcept { return period_load_[static_cast<std::size_t>(period)]; }
  /// Index into timetable().placements[course] of the lecture held at `period`, or -1.
  int lecture_at(int course, int period) const noexcept;

  /// Applies all relocations simultaneously and returns the relocations that
  /// undo them. Feasibility of the result is the caller's responsibility.
  std::vector<Relocation> apply(std::span<const Relocation> moves);

 private:
  void remove_lecture(int course, const Placement& p);
  void add_lecture(int course, const Placement& p);
  int course_penalty(int course) const;
  int day_isolation(int curriculum, int day) const;

  const Instance* inst_;
  Timetable timetable_;
  std::vector<int> occupancy_;
  std::vector<int> period_load_;
  std::vector<int> course_day_count_;
  std::vector<int> course_room_count_;
  std::vector<int> course_days_used_;
  std::vector<int> course_rooms_used_;
  std::vector<int> course_excess_;
  std::vector<int> course_penalty_;
  std::vector<int> curriculum_period_count_;
  std::vector<int> curriculum_day_s3_;
  PenaltyAllocation allocation_;
  int total_ = 0;
};

}  // namespace fairtt
