#include "fairtt/evaluator.hpp"

#include <algorithm>

#include "fairtt/error.hpp"

namespace fairtt {

namespace {

int excess(const Instance& inst, int course, int room) {
  return std::max(0, inst.courses()[course].students - inst.rooms()[room].capacity);
}

int require_course(const Instance& inst, std::string_view id) {
  auto c = inst.course_index(id);
  if (!c) throw Error(ErrorCode::UnknownCourse, std::string(id));
  return *c;
}

int require_curriculum(const Instance& inst, std::string_view id) {
  auto q = inst.curriculum_index(id);
  if (!q) throw Error(ErrorCode::UnknownCurriculum, std::string(id));
  return *q;
}

// Isolated-lecture count for one day given per-timeslot lecture counts.
int isolated_on_day(const int* slots, int periods_per_day) {
  int isolated = 0;
  for (int s = 0; s < periods_per_day; ++s) {
    if (slots[s] == 0) continue;
    const bool before = s > 0 && slots[s - 1] > 0;
    const bool after = s + 1 < periods_per_day && slots[s + 1] > 0;
    if (!before && !after) isolated += slots[s];
  }
  return isolated;
}

std::string describe(const Instance& inst, int course, Period p) {
  return inst.courses()[course].id + " @ (" + std::to_string(p.day) + "," + std::to_string(p.timeslot) + ")";
}

}  // namespace

std::string_view to_string(HardKind kind) {
  switch (kind) {
    case HardKind::H1: return "H1";
    case HardKind::H2: return "H2";
    case HardKind::H3: return "H3";
    case HardKind::H4: return "H4";
  }
  return "?";
}

std::vector<HardViolation> check_hard(const Instance& inst, const Timetable& t) {
  validate_shape(inst, t);
  std::vector<HardViolation> out;

  struct Booked {
    int course;
    int room;
  };
  std::vector<std::vector<Booked>> by_period(static_cast<std::size_t>(inst.period_count()));
  for (int c = 0; c < inst.course_count(); ++c) {
    for (const auto& p : t.placements[c]) {
      const int pi = inst.period_index(p.period);
      if (!inst.available(c, pi)) {
        out.push_back({HardKind::H4, describe(inst, c, p.period)});
      }
      by_period[pi].push_back({c, p.room});
    }
  }

  for (int pi = 0; pi < inst.period_count(); ++pi) {
    const auto& here = by_period[pi];
    const Period p = inst.period_at(pi);
    for (std::size_t i = 0; i < here.size(); ++i) {
      for (std::size_t j = i + 1; j < here.size(); ++j) {
        const int a = here[i].course;
        const int b = here[j].course;
        if (here[i].room == here[j].room) {
          out.push_back({HardKind::H2, describe(inst, a, p) + " and " + inst.courses()[b].id + " in room " +
                                           inst.rooms()[here[i].room].id});
        }
        if (a == b) {
          out.push_back({HardKind::H1, describe(inst, a, p)});
        } else if (inst.conflict(a, b)) {
          out.push_back({HardKind::H3, describe(inst, a, p) + " and " + inst.courses()[b].id});
        }
      }
    }
  }
  return out;
}

bool is_feasible(const Instance& inst, const Timetable& t) { return check_hard(inst, t).empty(); }

PenaltyBreakdown course_soft_penalties(const Instance& inst, const Timetable& t, int course) {
  if (course < 0 || course >= inst.course_count()) {
    throw Error(ErrorCode::UnknownCourse, "index " + std::to_string(course));
  }
  const auto& placements = t.placements.at(static_cast<std::size_t>(course));
  PenaltyBreakdown b;
  std::vector<char> days(static_cast<std::size_t>(inst.days()), 0);
  std::vector<char> rooms(static_cast<std::size_t>(inst.room_count()), 0);
  for (const auto& p : placements) {
    b.room_capacity += excess(inst, course, p.room) * weights::kRoomCapacity;
    days[p.period.day] = 1;
    rooms[p.room] = 1;
  }
  const int days_used = static_cast<int>(std::count(days.begin(), days.end(), 1));
  const int rooms_used = static_cast<int>(std::count(rooms.begin(), rooms.end(), 1));
  b.min_working_days =
      std::max(0, inst.courses()[course].min_working_days - days_used) * weights::kMinWorkingDays;
  b.room_stability = std::max(0, rooms_used - 1) * weights::kRoomStability;
  return b;
}

PenaltyBreakdown course_soft_penalties(const Instance& inst, const Timetable& t, std::string_view course_id) {
  return course_soft_penalties(inst, t, require_course(inst, course_id));
}

int curriculum_compactness_penalty(const Instance& inst, const Timetable& t, int curriculum) {
  if (curriculum < 0 || curriculum >= inst.curriculum_count()) {
    throw Error(ErrorCode::UnknownCurriculum, "index " + std::to_string(curriculum));
  }
  std::vector<int> count(static_cast<std::size_t>(inst.period_count()), 0);
  for (int c : inst.curricula()[curriculum].courses) {
    for (const auto& p : t.placements[c]) ++count[inst.period_index(p.period)];
  }
  int isolated = 0;
  for (int d = 0; d < inst.days(); ++d) {
    isolated += isolated_on_day(count.data() + d * inst.periods_per_day(), inst.periods_per_day());
  }
  return isolated * weights::kIsolated;
}

int curriculum_compactness_penalty(const Instance& inst, const Timetable& t, std::string_view curriculum_id) {
  return curriculum_compactness_penalty(inst, t, require_curriculum(inst, curriculum_id));
}

int total_penalty(const Instance& inst, const Timetable& t) {
  if (!is_feasible(inst, t)) throw Error(ErrorCode::Infeasible, "timetable violates hard constraints");
  int total = 0;
  for (int c = 0; c < inst.course_count(); ++c) total += course_soft_penalties(inst, t, c).total();
  for (int q = 0; q < inst.curriculum_count(); ++q) total += curriculum_compactness_penalty(inst, t, q);
  return total;
}

int curriculum_penalty(const Instance& inst, const Timetable& t, int curriculum) {
  int sum = curriculum_compactness_penalty(inst, t, curriculum);
  for (int c : inst.curricula()[curriculum].courses) sum += course_soft_penalties(inst, t, c).total();
  return sum;
}

int curriculum_penalty(const Instance& inst, const Timetable& t, std::string_view curriculum_id) {
  return curriculum_penalty(inst, t, require_curriculum(inst, curriculum_id));
}

PenaltyAllocation penalty_allocation(const Instance& inst, const Timetable& t) {
  if (!is_feasible(inst, t)) throw Error(ErrorCode::Infeasible, "timetable violates hard constraints");
  std::vector<int> course_total(static_cast<std::size_t>(inst.course_count()));
  for (int c = 0; c < inst.course_count(); ++c) course_total[c] = course_soft_penalties(inst, t, c).total();
  PenaltyAllocation a(static_cast<std::size_t>(inst.curriculum_count()));
  for (int q = 0; q < inst.curriculum_count(); ++q) {
    a[q] = curriculum_compactness_penalty(inst, t, q);
    for (int c : inst.curricula()[q].courses) a[q] += course_total[c];
  }
  return a;
}

std::vector<int> shifted_allocation(std::span<const int> a) {
  if (a.empty()) return {};
  const int f_max = *std::max_element(a.begin(), a.end());
  std::vector<int> out(a.size());
  std::transform(a.begin(), a.end(), out.begin(), [f_max](int v) { return f_max - v; });
  return out;
}

// ---------------------------------------------------------------------------

EvaluationState::EvaluationState(const Instance& inst, Timetable t) : inst_(&inst), timetable_(std::move(t)) {
  if (!is_feasible(inst, timetable_)) {
    throw Error(ErrorCode::Infeasible, "incremental evaluation requires a feasible timetable");
  }
  const auto n_courses = static_cast<std::size_t>(inst.course_count());
  const auto periods = static_cast<std::size_t>(inst.period_count());
  occupancy_.assign(periods * static_cast<std::size_t>(inst.room_count()), -1);
  period_load_.assign(periods, 0);
  course_day_count_.assign(n_courses * static_cast<std::size_t>(inst.days()), 0);
  course_room_count_.assign(n_courses * static_cast<std::size_t>(inst.room_count()), 0);
  course_days_used_.assign(n_courses, 0);
  course_rooms_used_.assign(n_courses, 0);
  course_excess_.assign(n_courses, 0);
  curriculum_period_count_.assign(static_cast<std::size_t>(inst.curriculum_count()) * periods, 0);

  for (int c = 0; c < inst.course_count(); ++c) {
    for (const auto& p : timetable_.placements[c]) add_lecture(c, p);
  }

  course_penalty_.resize(n_courses);
  allocation_.assign(static_cast<std::size_t>(inst.curriculum_count()), 0);
  curriculum_day_s3_.assign(static_cast<std::size_t>(inst.curriculum_count() * inst.days()), 0);
  total_ = 0;
  for (int c = 0; c < inst.course_count(); ++c) {
    course_penalty_[c] = course_penalty(c);
    total_ += course_penalty_[c];
    for (int q : inst.curricula_of(c)) allocation_[q] += course_penalty_[c];
  }
  for (int q = 0; q < inst.curriculum_count(); ++q) {
    for (int d = 0; d < inst.days(); ++d) {
      const int s3 = day_isolation(q, d);
      curriculum_day_s3_[q * inst.days() + d] = s3;
      allocation_[q] += s3;
      total_ += s3;
    }
  }
}

int EvaluationState::lecture_at(int course, int period) const noexcept {
  const auto& ps = timetable_.placements[course];
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (inst_->period_index(ps[i].period) == period) return static_cast<int>(i);
  }
  return -1;
}

void EvaluationState::remove_lecture(int course, const Placement& p) {
  const int rooms = inst_->room_count();
  const int pi = inst_->period_index(p.period);
  occupancy_[pi * rooms + p.room] = -1;
  --period_load_[pi];
  if (--course_day_count_[course * inst_->days() + p.period.day] == 0) --course_days_used_[course];
  if (--course_room_count_[course * rooms + p.room] == 0) --course_rooms_used_[course];
  course_excess_[course] -= excess(*inst_, course, p.room);
  for (int q : inst_->curricula_of(course)) --curriculum_period_count_[q * inst_->period_count() + pi];
}

void EvaluationState::add_lecture(int course, const Placement& p) {
  const int rooms = inst_->room_count();
  const int pi = inst_->period_index(p.period);
  occupancy_[pi * rooms + p.room] = course;
  ++period_load_[pi];
  if (course_day_count_[course * inst_->days() + p.period.day]++ == 0) ++course_days_used_[course];
  if (course_room_count_[course * rooms + p.room]++ == 0) ++course_rooms_used_[course];
  course_excess_[course] += excess(*inst_, course, p.room);
  for (int q : inst_->curricula_of(course)) ++curriculum_period_count_[q * inst_->period_count() + pi];
}

int EvaluationState::course_penalty(int course) const {
  const auto& info = inst_->courses()[course];
  return course_excess_[course] * weights::kRoomCapacity +
         std::max(0, info.min_working_days - course_days_used_[course]) * weights::kMinWorkingDays +
         std::max(0, course_rooms_used_[course] - 1) * weights::kRoomStability;
}

int EvaluationState::day_isolation(int curriculum, int day) const {
  const int ppd = inst_->periods_per_day();
  const int* slots = curriculum_period_count_.data() + curriculum * inst_->period_count() + day * ppd;
  return isolated_on_day(slots, ppd) * weights::kIsolated;
}

std::vector<Relocation> EvaluationState::apply(std::span<const Relocation> moves) {
  std::vector<Relocation> undo;
  undo.reserve(moves.size());
  std::vector<int> courses;
  std::vector<std::pair<int, int>> curriculum_days;

  for (const auto& m : moves) {
    const Placement& from = timetable_.placements[m.course][m.lecture];
    undo.push_back({m.course, m.lecture, from});
    courses.push_back(m.course);
    for (int q : inst_->curricula_of(m.course)) {
      curriculum_days.emplace_back(q, from.period.day);
      curriculum_days.emplace_back(q, m.to.period.day);
    }
  }
  std::sort(courses.begin(), courses.end());
  courses.erase(std::unique(courses.begin(), courses.end()), courses.end());
  std::sort(curriculum_days.begin(), curriculum_days.end());
  curriculum_days.erase(std::unique(curriculum_days.begin(), curriculum_days.end()), curriculum_days.end());

  for (const auto& u : undo) remove_lecture(u.course, u.to);
  for (const auto& m : moves) {
    add_lecture(m.course, m.to);
    timetable_.placements[m.course][m.lecture] = m.to;
  }

  for (int c : courses) {
    const int updated = course_penalty(c);
    const int diff = updated - course_penalty_[c];
    if (diff == 0) continue;
    course_penalty_[c] = updated;
    total_ += diff;
    for (int q : inst_->curricula_of(c)) allocation_[q] += diff;
  }
  for (auto [q, d] : curriculum_days) {
    int& cached = curriculum_day_s3_[q * inst_->days() + d];
    const int updated = day_isolation(q, d);
    allocation_[q] += updated - cached;
    total_ += updated - cached;
    cached = updated;
  }
  std::reverse(undo.begin(), undo.end());
  return undo;
}

}  // namespace fairtt
