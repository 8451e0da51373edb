#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fairtt/evaluator.hpp"
#include "fairtt/instance.hpp"
#include "fairtt/mmf_solver.hpp"

namespace fairtt {

/// F(t) = (total penalty, 1 - J(A'(t))), both minimized.
struct ObjectivePair {
  int penalty = 0;
  double unfairness = 0.0;

  bool operator==(const ObjectivePair&) const = default;
};

/// Uses the AllZero convention: a uniform shifted allocation has unfairness 0.
ObjectivePair objective(const Instance& inst, const Timetable& t);
ObjectivePair objective_from(int total_penalty, std::span<const int> allocation);

bool dominates(const ObjectivePair& a, const ObjectivePair& b);

struct ArchiveEntry {
  Timetable timetable;
  ObjectivePair objective;
  bool pinned = false;  // warm-start seed; survives clustering
};

inline constexpr std::size_t kArchiveSoftLimit = 50;
inline constexpr std::size_t kArchiveHardLimit = 100;

/// Mutually non-dominated set of timetables. Objective-identical duplicates
/// are not stored twice.
class ParetoArchive {
 public:
  explicit ParetoArchive(std::size_t soft_limit = kArchiveSoftLimit, std::size_t hard_limit = kArchiveHardLimit);

  /// Drops `obj` when an entry dominates or equals it; otherwise inserts it,
  /// evicts the entries it dominates and clusters back to the soft limit.
  /// Returns whether the entry was stored.
  bool insert(Timetable t, const ObjectivePair& obj, bool pinned = false);

  /// True when insert() would store `obj`.
  bool admits(const ObjectivePair& obj) const;

  const std::vector<ArchiveEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t soft_limit() const noexcept { return soft_limit_; }
  std::size_t hard_limit() const noexcept { return hard_limit_; }

  /// Union of archives, re-filtered for domination.
  static ParetoArchive merge(std::span<const ParetoArchive> archives);

 private:
  void cluster();

  std::vector<ArchiveEntry> entries_;
  std::size_t soft_limit_;
  std::size_t hard_limit_;
};

/// Functional form of ParetoArchive::insert.
ParetoArchive archive_insert(ParetoArchive arch, Timetable t, const ObjectivePair& obj);

struct JfiHooks {
  /// Called after every archive insertion.
  std::function<void(const ParetoArchive&)> on_insert;
};

struct JfiResult {
  ParetoArchive archive;
  ObjectivePair seed;
  std::uint64_t iterations = 0;
};

/// Archive-based multi-objective annealing warm-started from `start`.
/// Throws InfeasibleStart.
JfiResult solve_jfi(const Instance& inst, const Timetable& start, const SAParams& p, const JfiHooks& hooks = {});

}  // namespace fairtt
