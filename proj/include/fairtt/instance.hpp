#pragma once

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fairtt {

/// A (day, timeslot) pair. Resources are periods combined with rooms.
struct Period {
  int day = 0;
  int timeslot = 0;

  auto operator<=>(const Period&) const = default;
};

struct Course {
  std::string id;
  std::string teacher;
  int lectures = 1;
  int min_working_days = 1;
  int students = 0;
};

struct Room {
  std::string id;
  int capacity = 0;
};

/// Courses whose lectures may never share a period. Members are indices into
/// Instance::courses(), kept in file order.
struct Curriculum {
  std::string id;
  std::vector<int> courses;
};

struct Unavailability {
  int course = 0;
  Period period;
};

/// Immutable CB-CTT problem description. The constructor enforces every
/// structural invariant and precomputes the conflict and availability tables
/// that the evaluator and the move generator consult in their inner loops.
class Instance {
 public:
  Instance(std::string name, int days, int periods_per_day, std::vector<Course> courses,
           std::vector<Room> rooms, std::vector<Curriculum> curricula,
           std::vector<Unavailability> unavailability);

  const std::string& name() const noexcept { return name_; }
  int days() const noexcept { return days_; }
  int periods_per_day() const noexcept { return periods_per_day_; }
  int period_count() const noexcept { return days_ * periods_per_day_; }

  const std::vector<Course>& courses() const noexcept { return courses_; }
  const std::vector<Room>& rooms() const noexcept { return rooms_; }
  const std::vector<Curriculum>& curricula() const noexcept { return curricula_; }
  const std::vector<Unavailability>& unavailability() const noexcept { return unavailability_; }

  int course_count() const noexcept { return static_cast<int>(courses_.size()); }
  int room_count() const noexcept { return static_cast<int>(rooms_.size()); }
  int curriculum_count() const noexcept { return static_cast<int>(curricula_.size()); }
  int total_lectures() const noexcept { return total_lectures_; }

  std::optional<int> course_index(std::string_view id) const;
  std::optional<int> room_index(std::string_view id) const;
  std::optional<int> curriculum_index(std::string_view id) const;

  bool valid(Period p) const noexcept {
    return p.day >= 0 && p.day < days_ && p.timeslot >= 0 && p.timeslot < periods_per_day_;
  }
  int period_index(Period p) const noexcept { return p.day * periods_per_day_ + p.timeslot; }
  Period period_at(int index) const noexcept {
    return {index / periods_per_day_, index % periods_per_day_};
  }

  bool available(int course, int period) const noexcept {
    return !unavailable_[static_cast<std::size_t>(course * period_count() + period)];
  }
  /// True when two lectures of these courses may not share a period: same
  /// course, same teacher, or a common curriculum.
  bool conflict(int a, int b) const noexcept {
    return conflict_[static_cast<std::size_t>(a * course_count() + b)] != 0;
  }
  bool same_teacher(int a, int b) const noexcept { return teacher_of_[a] == teacher_of_[b]; }
  const std::vector<int>& curricula_of(int course) const { return curricula_of_[course]; }
  int teacher_of(int course) const { return teacher_of_[course]; }
  int teacher_count() const noexcept { return teacher_count_; }

  /// Maps a flat lecture number in [0, total_lectures()) to (course, ordinal).
  std::pair<int, int> lecture(int flat) const {
    const int c = lecture_course_[static_cast<std::size_t>(flat)];
    return {c, flat - first_lecture_[static_cast<std::size_t>(c)]};
  }

 private:
  std::string name_;
  int days_;
  int periods_per_day_;
  std::vector<Course> courses_;
  std::vector<Room> rooms_;
  std::vector<Curriculum> curricula_;
  std::vector<Unavailability> unavailability_;

  std::unordered_map<std::string, int> course_ids_;
  std::unordered_map<std::string, int> room_ids_;
  std::unordered_map<std::string, int> curriculum_ids_;
  std::vector<char> unavailable_;
  std::vector<char> conflict_;
  std::vector<std::vector<int>> curricula_of_;
  std::vector<int> teacher_of_;
  std::vector<int> lecture_course_;
  std::vector<int> first_lecture_;
  int teacher_count_ = 0;
  int total_lectures_ = 0;
};

struct Placement {
  Period period;
  int room = 0;

  auto operator<=>(const Placement&) const = default;
};

/// One placement per lecture, grouped by course index. Hard constraints are
/// not implied; see check_hard.
struct Timetable {
  std::vector<std::vector<Placement>> placements;

  /// Equality up to the order of placements within a course.
  friend bool same_assignment(const Timetable& a, const Timetable& b);
  bool operator==(const Timetable&) const = default;
};

/// Throws LectureCountMismatch / InvalidPeriod / UnknownRoom / UnknownCourse
/// when the timetable does not fit the instance's shape.
void validate_shape(const Instance& inst, const Timetable& t);

Instance parse_instance(std::istream& in);
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);
std::string serialize_instance(const Instance& inst);

Timetable parse_solution(std::istream& in, const Instance& inst);
Timetable parse_solution(std::string_view text, const Instance& inst);
Timetable load_solution(const std::filesystem::path& path, const Instance& inst);

/// Lines "course room day timeslot"; courses in instance order, each course's
/// placements sorted by (day, timeslot, room).
std::string serialize_solution(const Instance& inst, const Timetable& t);

}  // namespace fairtt
