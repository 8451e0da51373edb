#include "fairtt/neighborhood.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace fairtt {

namespace {

struct Occupant {
  int course;
  int room;
};

std::vector<Occupant> occupants(const EvaluationState& state, int period) {
  std::vector<Occupant> out;
  for (int r = 0; r < state.instance().room_count(); ++r) {
    const int c = state.occupant(period, r);
    if (c >= 0) out.push_back({c, r});
  }
  return out;
}

}  // namespace

KempeMove kempe_chain(const EvaluationState& state, int period_a, int period_b, int seed_course) {
  const Instance& inst = state.instance();
  if (period_a == period_b) throw Error(ErrorCode::InvalidArgument, "Kempe chain needs two distinct periods");
  const auto side_a = occupants(state, period_a);
  const auto side_b = occupants(state, period_b);

  auto seed = std::find_if(side_a.begin(), side_a.end(), [&](const Occupant& o) { return o.course == seed_course; });
  if (seed == side_a.end()) {
    throw Error(ErrorCode::NoLectureInPeriod, "course index " + std::to_string(seed_course) +
                                                  " has no lecture in period " + std::to_string(period_a));
  }

  std::vector<char> in_a(side_a.size(), 0);
  std::vector<char> in_b(side_b.size(), 0);
  // Frontier entries: (side, index), side 0 = period_a.
  std::vector<std::pair<int, std::size_t>> frontier{{0, static_cast<std::size_t>(seed - side_a.begin())}};
  in_a[frontier.front().second] = 1;
  while (!frontier.empty()) {
    auto [side, idx] = frontier.back();
    frontier.pop_back();
    const int course = side == 0 ? side_a[idx].course : side_b[idx].course;
    const auto& other = side == 0 ? side_b : side_a;
    auto& marks = side == 0 ? in_b : in_a;
    for (std::size_t j = 0; j < other.size(); ++j) {
      if (!marks[j] && inst.conflict(course, other[j].course)) {
        marks[j] = 1;
        frontier.emplace_back(1 - side, j);
      }
    }
  }

  KempeMove move;
  move.period_a = inst.period_at(period_a);
  move.period_b = inst.period_at(period_b);
  move.seed_course = seed_course;
  for (std::size_t i = 0; i < side_a.size(); ++i)
    if (in_a[i]) move.chain.push_back({side_a[i].course, move.period_a});
  for (std::size_t j = 0; j < side_b.size(); ++j)
    if (in_b[j]) move.chain.push_back({side_b[j].course, move.period_b});
  std::sort(move.chain.begin(), move.chain.end());
  return move;
}

KempeMove kempe_chain(const Instance& inst, const Timetable& t, Period period_a, Period period_b, int seed_course) {
  if (!inst.valid(period_a) || !inst.valid(period_b)) throw Error(ErrorCode::InvalidPeriod, "Kempe chain period");
  EvaluationState state(inst, t);
  return kempe_chain(state, inst.period_index(period_a), inst.period_index(period_b), seed_course);
}

std::optional<ErrorCode> try_plan_rooms(const EvaluationState& state, KempeMove& move) {
  const Instance& inst = state.instance();
  const int pa = inst.period_index(move.period_a);
  const int pb = inst.period_index(move.period_b);
  const int rooms = inst.room_count();

  int leaving_a = 0;
  int leaving_b = 0;
  for (const auto& lec : move.chain) {
    const bool from_a = lec.from == move.period_a;
    (from_a ? leaving_a : leaving_b) += 1;
    if (!inst.available(lec.course, from_a ? pb : pa)) return ErrorCode::UnavailabilityViolated;
  }
  if (state.lectures_in(pa) - leaving_a + leaving_b > rooms ||
      state.lectures_in(pb) - leaving_b + leaving_a > rooms) {
    return ErrorCode::RoomOverflow;
  }

  move.room_plan.assign(move.chain.size(), -1);
  std::vector<char> taken(static_cast<std::size_t>(rooms));
  std::vector<std::size_t> incoming;
  std::vector<int> free_rooms;

  for (const int dest : {pb, pa}) {
    const Period source = dest == pb ? move.period_a : move.period_b;
    const Period dest_period = inst.period_at(dest);

    // Rooms held by lectures that stay put.
    for (int r = 0; r < rooms; ++r) {
      const int c = state.occupant(dest, r);
      taken[r] = c >= 0 && !std::binary_search(move.chain.begin(), move.chain.end(), ChainLecture{c, dest_period});
    }

    incoming.clear();
    for (std::size_t i = 0; i < move.chain.size(); ++i)
      if (move.chain[i].from == source) incoming.push_back(i);
    std::sort(incoming.begin(), incoming.end(), [&](std::size_t x, std::size_t y) {
      const int sx = inst.courses()[move.chain[x].course].students;
      const int sy = inst.courses()[move.chain[y].course].students;
      return sx != sy ? sx > sy : move.chain[x].course < move.chain[y].course;
    });

    free_rooms.clear();
    for (int r = 0; r < rooms; ++r)
      if (!taken[r]) free_rooms.push_back(r);
    std::sort(free_rooms.begin(), free_rooms.end(), [&](int x, int y) {
      const int cx = inst.rooms()[x].capacity;
      const int cy = inst.rooms()[y].capacity;
      return cx != cy ? cx > cy : x < y;
    });

    // Largest lecture takes the largest free room; among rooms of that same
    // capacity the lecture's previous room wins.
    const int src = inst.period_index(source);
    auto next_room = free_rooms.begin();
    for (std::size_t i : incoming) {
      const int course = move.chain[i].course;
      const int prev = state.timetable().placements[course][state.lecture_at(course, src)].room;
      const int cap = inst.rooms()[*next_room].capacity;
      auto pick = next_room;
      for (auto it = next_room; it != free_rooms.end() && inst.rooms()[*it].capacity == cap; ++it) {
        if (*it == prev) pick = it;
      }
      std::iter_swap(next_room, pick);
      move.room_plan[i] = *next_room++;
    }
  }
  return std::nullopt;
}

void plan_rooms(const EvaluationState& state, KempeMove& move) {
  if (auto failure = try_plan_rooms(state, move)) {
    move.room_plan.clear();
    throw Error(*failure, *failure == ErrorCode::RoomOverflow
                              ? "destination period would exceed the number of rooms"
                              : "a chain lecture would land in an unavailable period");
  }
}

std::vector<Relocation> to_relocations(const EvaluationState& state, const KempeMove& move) {
  const Instance& inst = state.instance();
  std::vector<Relocation> out;
  out.reserve(move.chain.size());
  for (std::size_t i = 0; i < move.chain.size(); ++i) {
    const auto& lec = move.chain[i];
    const Period to = lec.from == move.period_a ? move.period_b : move.period_a;
    out.push_back({lec.course, state.lecture_at(lec.course, inst.period_index(lec.from)), {to, move.room_plan[i]}});
  }
  return out;
}

Timetable apply_move(const Instance& inst, const Timetable& t, KempeMove move) {
  EvaluationState state(inst, t);
  if (move.room_plan.size() != move.chain.size()) plan_rooms(state, move);
  state.apply(to_relocations(state, move));
  return state.timetable();
}

KempeMove random_move(const EvaluationState& state, Rng& rng, int attempts) {
  const Instance& inst = state.instance();
  const int periods = inst.period_count();
  if (periods >= 2 && inst.total_lectures() > 0) {
    for (int attempt = 0; attempt < attempts; ++attempt) {
      const auto [course, ordinal] = inst.lecture(rng.uniform_int(inst.total_lectures()));
      const int pa = inst.period_index(state.timetable().placements[course][ordinal].period);
      int pb = rng.uniform_int(periods - 1);
      if (pb >= pa) ++pb;
      KempeMove move = kempe_chain(state, pa, pb, course);
      if (!try_plan_rooms(state, move)) return move;
    }
  }
  throw Error(ErrorCode::NoNeighborFound, "no feasible Kempe move after " + std::to_string(attempts) + " attempts");
}

Timetable random_neighbor(const Instance& inst, const Timetable& t, Rng& rng, int attempts) {
  EvaluationState state(inst, t);
  const KempeMove move = random_move(state, rng, attempts);
  state.apply(to_relocations(state, move));
  return state.timetable();
}

Timetable build_initial(const Instance& inst, std::uint64_t seed, int max_restarts) {
  Rng rng(seed);
  const int courses = inst.course_count();
  const int periods = inst.period_count();
  const int rooms = inst.room_count();

  std::vector<int> degree(static_cast<std::size_t>(courses), 0);
  for (int c = 0; c < courses; ++c) {
    for (int d = 0; d < courses; ++d) {
      if (d != c && inst.conflict(c, d)) degree[c] += inst.courses()[d].lectures;
    }
  }

  std::vector<int> remaining(static_cast<std::size_t>(courses));
  std::vector<int> blocked(static_cast<std::size_t>(courses * periods));
  std::vector<int> load(static_cast<std::size_t>(periods));
  std::vector<char> room_used(static_cast<std::size_t>(periods * rooms));
  std::vector<std::uint64_t> tiebreak(static_cast<std::size_t>(courses));

  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    for (auto& k : tiebreak) k = rng.next();
    for (int c = 0; c < courses; ++c) remaining[c] = inst.courses()[c].lectures;
    std::fill(blocked.begin(), blocked.end(), 0);
    std::fill(load.begin(), load.end(), 0);
    std::fill(room_used.begin(), room_used.end(), 0);
    Timetable t;
    t.placements.assign(static_cast<std::size_t>(courses), {});

    auto open = [&](int c, int p) {
      return remaining[c] > 0 && inst.available(c, p) && blocked[c * periods + p] == 0 && load[p] < rooms;
    };

    bool dead_end = false;
    for (int placed = 0; placed < inst.total_lectures(); ++placed) {
      int pick = -1;
      int pick_open = std::numeric_limits<int>::max();
      for (int c = 0; c < courses; ++c) {
        if (remaining[c] == 0) continue;
        int n_open = 0;
        for (int p = 0; p < periods; ++p) n_open += open(c, p);
        const bool better = pick < 0 || n_open < pick_open ||
                            (n_open == pick_open && (degree[c] > degree[pick] ||
                                                     (degree[c] == degree[pick] && tiebreak[c] < tiebreak[pick])));
        if (better) {
          pick = c;
          pick_open = n_open;
        }
      }
      if (pick_open == 0) {
        dead_end = true;
        break;
      }

      // Least-constraining open period: closes the fewest options of other
      // unplaced conflicting courses. Ties broken uniformly.
      int period = -1;
      int least = std::numeric_limits<int>::max();
      int ties = 0;
      for (int p = 0; p < periods; ++p) {
        if (!open(pick, p)) continue;
        int closes = 0;
        for (int d = 0; d < courses; ++d) {
          if (d != pick && inst.conflict(pick, d) && open(d, p)) closes += 1;
        }
        if (load[p] + 1 == rooms) {
          for (int d = 0; d < courses; ++d) closes += d != pick && open(d, p) && !inst.conflict(pick, d);
        }
        if (closes < least) {
          least = closes;
          period = p;
          ties = 1;
        } else if (closes == least && rng.uniform_int(++ties) == 0) {
          period = p;
        }
      }

      const int students = inst.courses()[pick].students;
      int room = -1;
      for (int r = 0; r < rooms; ++r) {
        if (room_used[period * rooms + r]) continue;
        const int cap = inst.rooms()[r].capacity;
        if (room < 0) {
          room = r;
          continue;
        }
        const int best = inst.rooms()[room].capacity;
        const bool fits = cap >= students;
        const bool best_fits = best >= students;
        if ((fits && (!best_fits || cap < best)) || (!fits && !best_fits && cap > best)) room = r;
      }

      t.placements[pick].push_back({inst.period_at(period), room});
      room_used[period * rooms + room] = 1;
      ++load[period];
      --remaining[pick];
      for (int d = 0; d < courses; ++d)
        if (inst.conflict(pick, d)) ++blocked[d * periods + period];
    }
    if (!dead_end) return t;
  }
  throw Error(ErrorCode::ConstructionFailed,
              "no feasible timetable after " + std::to_string(max_restarts) + " randomized restarts");
}

}  // namespace fairtt
