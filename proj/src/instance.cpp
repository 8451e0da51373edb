#include "fairtt/instance.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fairtt/error.hpp"

namespace fairtt {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Line {
  int number;
  std::vector<std::string_view> fields;
};

// Nonblank lines with their 1-based line numbers. Views point into `text`.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto fields = split_fields(text.substr(pos, end - pos));
    if (!fields.empty()) lines.push_back({number, std::move(fields)});
    pos = end + 1;
  }
  return lines;
}

std::string where(const Line& line) { return "line " + std::to_string(line.number); }

int parse_int(std::string_view field, const Line& line, ErrorCode code = ErrorCode::MalformedEntry) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(code, where(line) + ": expected integer, got '" + std::string(field) + "'");
  }
  return value;
}

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* const kHeaderKeys[] = {"Name:",     "Courses:",   "Rooms:",      "Days:",
                                   "Periods_per_day:", "Curricula:", "Constraints:"};

}  // namespace

Instance::Instance(std::string name, int days, int periods_per_day, std::vector<Course> courses,
                   std::vector<Room> rooms, std::vector<Curriculum> curricula,
                   std::vector<Unavailability> unavailability)
    : name_(std::move(name)),
      days_(days),
      periods_per_day_(periods_per_day),
      courses_(std::move(courses)),
      rooms_(std::move(rooms)),
      curricula_(std::move(curricula)),
      unavailability_(std::move(unavailability)) {
  if (days_ <= 0 || periods_per_day_ <= 0) {
    throw Error(ErrorCode::MalformedHeader, "days and periods per day must be positive");
  }

  std::map<std::string, int> teachers;
  for (int c = 0; c < course_count(); ++c) {
    const Course& course = courses_[c];
    if (course.lectures < 1 || course.min_working_days < 1 || course.students < 0) {
      throw Error(ErrorCode::MalformedEntry, "course " + course.id + " has out-of-range counts");
    }
    if (!course_ids_.emplace(course.id, c).second) {
      throw Error(ErrorCode::DuplicateIdentifier, "course " + course.id);
    }
    auto [it, inserted] = teachers.emplace(course.teacher, static_cast<int>(teachers.size()));
    teacher_of_.push_back(it->second);
    first_lecture_.push_back(total_lectures_);
    lecture_course_.insert(lecture_course_.end(), static_cast<std::size_t>(course.lectures), c);
    total_lectures_ += course.lectures;
  }
  teacher_count_ = static_cast<int>(teachers.size());

  for (int r = 0; r < room_count(); ++r) {
    if (rooms_[r].capacity < 0) {
      throw Error(ErrorCode::MalformedEntry, "room " + rooms_[r].id + " has negative capacity");
    }
    if (!room_ids_.emplace(rooms_[r].id, r).second) {
      throw Error(ErrorCode::DuplicateIdentifier, "room " + rooms_[r].id);
    }
  }

  if (static_cast<long long>(total_lectures_) >
      static_cast<long long>(room_count()) * period_count()) {
    throw Error(ErrorCode::Overcapacity, std::to_string(total_lectures_) + " lectures exceed " +
                                             std::to_string(room_count() * period_count()) +
                                             " resources");
  }

  curricula_of_.assign(courses_.size(), {});
  const auto n = static_cast<std::size_t>(course_count());
  conflict_.assign(n * n, 0);
  for (int q = 0; q < curriculum_count(); ++q) {
    const Curriculum& cur = curricula_[q];
    if (cur.courses.empty()) {
      throw Error(ErrorCode::MalformedEntry, "curriculum " + cur.id + " is empty");
    }
    if (!curriculum_ids_.emplace(cur.id, q).second) {
      throw Error(ErrorCode::DuplicateIdentifier, "curriculum " + cur.id);
    }
    for (int c : cur.courses) {
      if (c < 0 || c >= course_count()) {
        throw Error(ErrorCode::DanglingReference, "curriculum " + cur.id);
      }
      auto& mine = curricula_of_[c];
      if (std::find(mine.begin(), mine.end(), q) != mine.end()) {
        throw Error(ErrorCode::DuplicateIdentifier,
                    "course " + courses_[c].id + " listed twice in curriculum " + cur.id);
      }
      mine.push_back(q);
    }
    for (int a : cur.courses)
      for (int b : cur.courses) conflict_[a * n + b] = 1;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (teacher_of_[a] == teacher_of_[b]) conflict_[a * n + b] = 1;

  unavailable_.assign(n * static_cast<std::size_t>(period_count()), 0);
  for (const auto& u : unavailability_) {
    if (u.course < 0 || u.course >= course_count()) {
      throw Error(ErrorCode::DanglingReference, "unavailability constraint names unknown course");
    }
    if (!valid(u.period)) {
      throw Error(ErrorCode::InvalidPeriod, "unavailability for course " + courses_[u.course].id);
    }
    unavailable_[u.course * period_count() + period_index(u.period)] = 1;
  }
}

std::optional<int> Instance::course_index(std::string_view id) const {
  auto it = course_ids_.find(std::string(id));
  if (it == course_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Instance::room_index(std::string_view id) const {
  auto it = room_ids_.find(std::string(id));
  if (it == room_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Instance::curriculum_index(std::string_view id) const {
  auto it = curriculum_ids_.find(std::string(id));
  if (it == curriculum_ids_.end()) return std::nullopt;
  return it->second;
}

bool same_assignment(const Timetable& a, const Timetable& b) {
  if (a.placements.size() != b.placements.size()) return false;
  for (std::size_t c = 0; c < a.placements.size(); ++c) {
    auto x = a.placements[c];
    auto y = b.placements[c];
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return false;
  }
  return true;
}

void validate_shape(const Instance& inst, const Timetable& t) {
  if (static_cast<int>(t.placements.size()) != inst.course_count()) {
    throw Error(ErrorCode::UnknownCourse, "timetable covers " +
                                              std::to_string(t.placements.size()) + " courses, instance has " +
                                              std::to_string(inst.course_count()));
  }
  for (int c = 0; c < inst.course_count(); ++c) {
    const auto& course = inst.courses()[c];
    if (static_cast<int>(t.placements[c].size()) != course.lectures) {
      throw Error(ErrorCode::LectureCountMismatch,
                  "course " + course.id + " has " + std::to_string(t.placements[c].size()) +
                      " placements, expected " + std::to_string(course.lectures));
    }
    for (const auto& p : t.placements[c]) {
      if (!inst.valid(p.period)) throw Error(ErrorCode::InvalidPeriod, "course " + course.id);
      if (p.room < 0 || p.room >= inst.room_count()) {
        throw Error(ErrorCode::UnknownRoom, "course " + course.id);
      }
    }
  }
}

Instance parse_instance(std::string_view text) {
  const auto lines = tokenize(text);
  std::size_t i = 0;

  std::map<std::string, std::string_view> header;
  const Line* last_header = nullptr;
  while (i < lines.size() && lines[i].fields[0] != "COURSES:") {
    const Line& line = lines[i];
    const auto key = line.fields[0];
    bool known = std::any_of(std::begin(kHeaderKeys), std::end(kHeaderKeys),
                             [&](const char* k) { return key == k; });
    if (!known || line.fields.size() != 2) {
      throw Error(ErrorCode::MalformedHeader, where(line) + ": unexpected '" + std::string(key) + "'");
    }
    if (!header.emplace(std::string(key), line.fields[1]).second) {
      throw Error(ErrorCode::MalformedHeader, where(line) + ": duplicate key " + std::string(key));
    }
    last_header = &line;
    ++i;
  }
  for (const char* k : kHeaderKeys) {
    if (!header.count(k)) throw Error(ErrorCode::MalformedHeader, std::string("missing key ") + k);
  }
  const Line& hl = last_header ? *last_header : lines.front();
  auto header_int = [&](const char* key) {
    return parse_int(header.at(key), hl, ErrorCode::MalformedHeader);
  };
  const int n_courses = header_int("Courses:");
  const int n_rooms = header_int("Rooms:");
  const int days = header_int("Days:");
  const int ppd = header_int("Periods_per_day:");
  const int n_curricula = header_int("Curricula:");
  const int n_constraints = header_int("Constraints:");
  if (n_courses < 0 || n_rooms < 0 || days <= 0 || ppd <= 0 || n_curricula < 0 || n_constraints < 0) {
    throw Error(ErrorCode::MalformedHeader, "header counts out of range");
  }

  // Collects the entries of one section, stopping at the next keyword.
  auto section = [&](std::string_view keyword, std::string_view next, int declared) {
    if (i >= lines.size() || lines[i].fields.size() != 1 || lines[i].fields[0] != keyword) {
      throw Error(ErrorCode::MalformedEntry, "expected section " + std::string(keyword));
    }
    ++i;
    std::vector<const Line*> entries;
    while (i < lines.size() && lines[i].fields[0] != next) entries.push_back(&lines[i++]);
    if (static_cast<int>(entries.size()) != declared) {
      throw Error(ErrorCode::CountMismatch, std::string(keyword) + " declares " + std::to_string(declared) +
                                                " entries, found " + std::to_string(entries.size()));
    }
    return entries;
  };

  std::vector<Course> courses;
  std::map<std::string_view, int> course_ids;
  for (const Line* line : section("COURSES:", "ROOMS:", n_courses)) {
    if (line->fields.size() != 5) throw Error(ErrorCode::MalformedEntry, where(*line) + ": course needs 5 fields");
    Course c;
    c.id = std::string(line->fields[0]);
    c.teacher = std::string(line->fields[1]);
    c.lectures = parse_int(line->fields[2], *line);
    c.min_working_days = parse_int(line->fields[3], *line);
    c.students = parse_int(line->fields[4], *line);
    course_ids.emplace(line->fields[0], static_cast<int>(courses.size()));
    courses.push_back(std::move(c));
  }

  std::vector<Room> rooms;
  for (const Line* line : section("ROOMS:", "CURRICULA:", n_rooms)) {
    if (line->fields.size() != 2) throw Error(ErrorCode::MalformedEntry, where(*line) + ": room needs 2 fields");
    rooms.push_back({std::string(line->fields[0]), parse_int(line->fields[1], *line)});
  }

  auto lookup_course = [&](std::string_view id, const Line& line) {
    auto it = course_ids.find(id);
    if (it == course_ids.end()) {
      throw Error(ErrorCode::DanglingReference, where(line) + ": unknown course '" + std::string(id) + "'");
    }
    return it->second;
  };

  std::vector<Curriculum> curricula;
  for (const Line* line : section("CURRICULA:", "UNAVAILABILITY_CONSTRAINTS:", n_curricula)) {
    if (line->fields.size() < 2) throw Error(ErrorCode::MalformedEntry, where(*line) + ": curriculum too short");
    const int members = parse_int(line->fields[1], *line);
    if (members != static_cast<int>(line->fields.size()) - 2) {
      throw Error(ErrorCode::CountMismatch, where(*line) + ": curriculum member count");
    }
    Curriculum q{std::string(line->fields[0]), {}};
    for (std::size_t f = 2; f < line->fields.size(); ++f) q.courses.push_back(lookup_course(line->fields[f], *line));
    curricula.push_back(std::move(q));
  }

  std::vector<Unavailability> unavailability;
  for (const Line* line : section("UNAVAILABILITY_CONSTRAINTS:", "END.", n_constraints)) {
    if (line->fields.size() != 3) throw Error(ErrorCode::MalformedEntry, where(*line) + ": constraint needs 3 fields");
    Unavailability u;
    u.course = lookup_course(line->fields[0], *line);
    u.period = {parse_int(line->fields[1], *line), parse_int(line->fields[2], *line)};
    if (u.period.day < 0 || u.period.day >= days || u.period.timeslot < 0 || u.period.timeslot >= ppd) {
      throw Error(ErrorCode::InvalidPeriod, where(*line));
    }
    unavailability.push_back(u);
  }

  if (i >= lines.size() || lines[i].fields.size() != 1 || lines[i].fields[0] != "END.") {
    throw Error(ErrorCode::MalformedEntry, "missing END. terminator");
  }
  if (i + 1 != lines.size()) throw Error(ErrorCode::MalformedEntry, where(lines[i + 1]) + ": content after END.");

  return Instance(std::string(header.at("Name:")), days, ppd, std::move(courses), std::move(rooms),
                  std::move(curricula), std::move(unavailability));
}

Instance parse_instance(std::istream& in) { return parse_instance(std::string_view(read_all(in))); }

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  return parse_instance(in);
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "Name: " << inst.name() << '\n'
      << "Courses: " << inst.course_count() << '\n'
      << "Rooms: " << inst.room_count() << '\n'
      << "Days: " << inst.days() << '\n'
      << "Periods_per_day: " << inst.periods_per_day() << '\n'
      << "Curricula: " << inst.curriculum_count() << '\n'
      << "Constraints: " << inst.unavailability().size() << "\n\nCOURSES:\n";
  for (const auto& c : inst.courses()) {
    out << c.id << ' ' << c.teacher << ' ' << c.lectures << ' ' << c.min_working_days << ' ' << c.students << '\n';
  }
  out << "\nROOMS:\n";
  for (const auto& r : inst.rooms()) out << r.id << '\t' << r.capacity << '\n';
  out << "\nCURRICULA:\n";
  for (const auto& q : inst.curricula()) {
    out << q.id << "  " << q.courses.size();
    for (int c : q.courses) out << ' ' << inst.courses()[c].id;
    out << '\n';
  }
  out << "\nUNAVAILABILITY_CONSTRAINTS:\n";
  for (const auto& u : inst.unavailability()) {
    out << inst.courses()[u.course].id << ' ' << u.period.day << ' ' << u.period.timeslot << '\n';
  }
  out << "\nEND.\n";
  return out.str();
}

Timetable parse_solution(std::string_view text, const Instance& inst) {
  Timetable t;
  t.placements.assign(inst.courses().size(), {});
  for (const Line& line : tokenize(text)) {
    if (line.fields.size() != 4) throw Error(ErrorCode::MalformedEntry, where(line) + ": expected 4 fields");
    auto course = inst.course_index(line.fields[0]);
    if (!course) throw Error(ErrorCode::UnknownCourse, where(line) + ": " + std::string(line.fields[0]));
    auto room = inst.room_index(line.fields[1]);
    if (!room) throw Error(ErrorCode::UnknownRoom, where(line) + ": " + std::string(line.fields[1]));
    Period p{parse_int(line.fields[2], line, ErrorCode::InvalidPeriod),
             parse_int(line.fields[3], line, ErrorCode::InvalidPeriod)};
    if (!inst.valid(p)) throw Error(ErrorCode::InvalidPeriod, where(line));
    t.placements[*course].push_back({p, *room});
  }
  validate_shape(inst, t);
  return t;
}

Timetable parse_solution(std::istream& in, const Instance& inst) {
  return parse_solution(std::string_view(read_all(in)), inst);
}

Timetable load_solution(const std::filesystem::path& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  return parse_solution(in, inst);
}

std::string serialize_solution(const Instance& inst, const Timetable& t) {
  std::string out;
  for (std::size_t c = 0; c < t.placements.size(); ++c) {
    auto sorted = t.placements[c];
    std::sort(sorted.begin(), sorted.end());
    for (const auto& p : sorted) {
      out += inst.courses()[c].id;
      out += ' ';
      out += inst.rooms()[p.room].id;
      out += ' ';
      out += std::to_string(p.period.day);
      out += ' ';
      out += std::to_string(p.period.timeslot);
      out += '\n';
    }
  }
  return out;
}

}  // namespace fairtt
