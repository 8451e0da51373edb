#include "fairtt/jfi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairtt/error.hpp"
#include "fairtt/fairness.hpp"
#include "fairtt/rng.hpp"

namespace fairtt {

namespace {

constexpr double kPenaltyRangeFloor = 1.0;
constexpr double kUnfairnessRangeFloor = 1e-6;

struct Ranges {
  double penalty = kPenaltyRangeFloor;
  double unfairness = kUnfairnessRangeFloor;
};

template <class Points>
Ranges observed_ranges(const Points& points) {
  if (points.empty()) return {};
  auto [pmin, pmax] = std::minmax_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.penalty < b.penalty;
  });
  auto [umin, umax] = std::minmax_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.unfairness < b.unfairness;
  });
  return {std::max(kPenaltyRangeFloor, static_cast<double>(pmax->penalty - pmin->penalty)),
          std::max(kUnfairnessRangeFloor, umax->unfairness - umin->unfairness)};
}

double distance(const ObjectivePair& a, const ObjectivePair& b, const Ranges& r) {
  const double dp = (a.penalty - b.penalty) / r.penalty;
  const double du = (a.unfairness - b.unfairness) / r.unfairness;
  return std::hypot(dp, du);
}

// Amount of domination: product of normalized differences over the
// objectives in which the points differ.
double domination_amount(const ObjectivePair& a, const ObjectivePair& b, const Ranges& r) {
  double amount = 1.0;
  if (a.penalty != b.penalty) amount *= std::abs(a.penalty - b.penalty) / r.penalty;
  if (a.unfairness != b.unfairness) amount *= std::abs(a.unfairness - b.unfairness) / r.unfairness;
  return amount;
}

}  // namespace

ObjectivePair objective_from(int total_penalty, std::span<const int> allocation) {
  ObjectivePair obj{total_penalty, 0.0};
  try {
    obj.unfairness = 1.0 - jain_index(std::span<const int>(shifted_allocation(allocation)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AllZero) throw;
  }
  return obj;
}

ObjectivePair objective(const Instance& inst, const Timetable& t) {
  return objective_from(total_penalty(inst, t), penalty_allocation(inst, t));
}

bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
  return a.penalty <= b.penalty && a.unfairness <= b.unfairness &&
         (a.penalty < b.penalty || a.unfairness < b.unfairness);
}

ParetoArchive::ParetoArchive(std::size_t soft_limit, std::size_t hard_limit)
    : soft_limit_(soft_limit), hard_limit_(hard_limit) {
  if (soft_limit_ == 0 || hard_limit_ < soft_limit_) {
    throw Error(ErrorCode::InvalidArgument, "archive limits need 0 < soft <= hard");
  }
}

bool ParetoArchive::admits(const ObjectivePair& obj) const {
  return std::none_of(entries_.begin(), entries_.end(), [&](const ArchiveEntry& e) {
    return e.objective == obj || dominates(e.objective, obj);
  });
}

bool ParetoArchive::insert(Timetable t, const ObjectivePair& obj, bool pinned) {
  if (!admits(obj)) return false;
  std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(obj, e.objective); });
  entries_.push_back({std::move(t), obj, pinned});
  if (entries_.size() > soft_limit_) cluster();
  return true;
}

void ParetoArchive::cluster() {
  const std::size_t n = entries_.size();
  std::vector<ObjectivePair> points;
  points.reserve(n);
  for (const auto& e : entries_) points.push_back(e.objective);
  const Ranges ranges = observed_ranges(points);

  // Single linkage == Kruskal on the complete graph, stopped at soft_limit components.
  struct Edge {
    double d;
    std::size_t a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({distance(points[i], points[j], ranges), i, j});
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.d < y.d; });

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t clusters = n;
  for (const Edge& e : edges) {
    if (clusters <= soft_limit_) break;
    const auto ra = find(e.a);
    const auto rb = find(e.b);
    if (ra == rb) continue;
    parent[std::max(ra, rb)] = std::min(ra, rb);
    --clusters;
  }

  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[find(i)].push_back(i);

  std::vector<ArchiveEntry> kept;
  kept.reserve(soft_limit_);
  for (const auto& group : members) {
    if (group.empty()) continue;
    std::size_t keep = group.front();
    auto pinned = std::find_if(group.begin(), group.end(), [&](std::size_t i) { return entries_[i].pinned; });
    if (pinned != group.end()) {
      keep = *pinned;
    } else {
      double best = INFINITY;
      for (std::size_t i : group) {
        double sum = 0.0;
        for (std::size_t j : group) sum += distance(points[i], points[j], ranges);
        if (sum < best) {
          best = sum;
          keep = i;
        }
      }
    }
    kept.push_back(std::move(entries_[keep]));
  }
  entries_ = std::move(kept);
}

ParetoArchive ParetoArchive::merge(std::span<const ParetoArchive> archives) {
  ParetoArchive merged = archives.empty() ? ParetoArchive()
                                          : ParetoArchive(archives.front().soft_limit_, archives.front().hard_limit_);
  for (const auto& arch : archives)
    for (const auto& e : arch.entries_) merged.insert(e.timetable, e.objective, e.pinned);
  return merged;
}

ParetoArchive archive_insert(ParetoArchive arch, Timetable t, const ObjectivePair& obj) {
  arch.insert(std::move(t), obj);
  return arch;
}

JfiResult solve_jfi(const Instance& inst, const Timetable& start, const SAParams& p, const JfiHooks& hooks) {
  p.validate();
  validate_shape(inst, start);
  if (!is_feasible(inst, start)) throw Error(ErrorCode::InfeasibleStart, "start timetable is infeasible");

  EvaluationState cur(inst, start);
  Rng rng(p.seed);
  RunClock clock(p.virtual_seconds_per_iteration);

  JfiResult result;
  result.seed = objective_from(cur.total(), cur.allocation());
  result.archive.insert(start, result.seed, /*pinned=*/true);
  if (hooks.on_insert) hooks.on_insert(result.archive);
  ObjectivePair cur_obj = result.seed;

  std::vector<ObjectivePair> scope;
  for (double t = clock.elapsed(); t < p.timeout; t = clock.elapsed()) {
    const double theta = temperature_at(p, t);
    const KempeMove move = random_move(cur, rng, p.neighbor_attempts);
    const auto undo = cur.apply(to_relocations(cur, move));
    const ObjectivePair next = objective_from(cur.total(), cur.allocation());

    scope.clear();
    for (const auto& e : result.archive.entries()) scope.push_back(e.objective);
    scope.push_back(cur_obj);
    scope.push_back(next);
    const Ranges ranges = observed_ranges(scope);

    // Points whose domination of the candidate drives the acceptance odds.
    double amount = 0.0;
    int dominators = 0;
    if (!dominates(next, cur_obj)) {
      if (dominates(cur_obj, next)) {
        amount += domination_amount(cur_obj, next, ranges);
        ++dominators;
      }
      for (const auto& e : result.archive.entries()) {
        if (dominates(e.objective, next)) {
          amount += domination_amount(e.objective, next, ranges);
          ++dominators;
        }
      }
    }

    bool accept = dominators == 0;
    if (!accept) {
      const double mean = amount / dominators;
      accept = 1.0 / (1.0 + std::exp(mean / theta)) >= rng.uniform01();
    }

    if (accept) {
      cur_obj = next;
      if (result.archive.admits(next)) {
        result.archive.insert(cur.timetable(), next);
        if (hooks.on_insert) hooks.on_insert(result.archive);
      }
    } else {
      cur.apply(undo);
    }
    clock.tick();
  }
  result.iterations = clock.ticks();
  return result;
}

}  // namespace fairtt
