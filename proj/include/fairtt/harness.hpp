#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairtt/evaluator.hpp"
#include "fairtt/instance.hpp"
#include "fairtt/jfi_solver.hpp"
#include "fairtt/mmf_solver.hpp"

namespace fairtt {

/// Sorted descending and run-length encoded: (5,5,0,0,0) -> "5^2,0^3".
std::string format_allocation(std::span<const int> a);

/// Inverse of format_allocation; returns the descending-sorted vector.
/// Throws MalformedEntry.
std::vector<int> parse_allocation(std::string_view text);

enum class Direction { ABetter, BBetter };

struct RankSumReport {
  double statistic = 0.0;  // rank sum of sample A, midranks for ties
  double p_value = 1.0;    // one-sided: A stochastically lower than B
  Direction direction = Direction::ABetter;
  bool exact = false;
};

inline constexpr std::size_t kExactRankSumLimit = 12;

/// One-sided Wilcoxon rank-sum test. Exact null distribution when
/// m + n <= 12, otherwise normal approximation with tie and continuity
/// corrections. Throws DegenerateSample when every value is identical.
RankSumReport wilcoxon_one_sided(std::span<const double> a, std::span<const double> b);

enum class BatchMode { Mmf, Jfi };

std::string_view to_string(BatchMode mode);

struct RunRecord {
  std::uint64_t seed = 0;
  PenaltyAllocation best;
  int total_penalty = 0;
  double wall_seconds = 0.0;
  std::string error;  // empty when the run succeeded

  bool ok() const noexcept { return error.empty(); }
};

struct BatchResult {
  std::string instance;
  BatchMode mode = BatchMode::Mmf;
  SAParams params;
  std::vector<RunRecord> runs;  // ordered by seed
};

/// `runs` independent solver runs from `start` with seeds params.seed,
/// params.seed + 1, ...; up to `jobs` run concurrently. Jfi runs report the
/// lowest-penalty archive entry. Per-run errors are recorded, not thrown.
BatchResult run_batch(const Instance& inst, const Timetable& start, const SAParams& params, int runs,
                      BatchMode mode, int jobs = 1);

/// Columns: seed,total_penalty,worst_curriculum,allocation,wall_s,error,
/// preceded by '#' metadata lines.
std::string batch_csv(const BatchResult& batch);

/// Reads one numeric column from a batch CSV; failed runs are skipped.
std::vector<double> read_batch_column(std::istream& in, std::string_view column);

/// The tradeoff line through the seed has equal relative slopes: a 1%
/// fairness gain costs 1% more penalty, i.e. penalty = seed_penalty * J / seed_J.
bool below_tradeoff_line(double jain, double penalty, double seed_jain, double seed_penalty);

struct ParetoPoint {
  double jain_index = 0.0;
  int penalty = 0;
};

ParetoPoint to_pareto_point(const ObjectivePair& obj);

/// CSV "jain_index,penalty,below_tradeoff_line" sorted by jain_index ascending.
std::string pareto_report(std::span<const ParetoPoint> points, const ParetoPoint& seed);
std::string pareto_report(const ParetoArchive& arch, const ObjectivePair& seed);

/// Writes archive.csv (jain_index,total_penalty,solution_file_path) and one
/// solution file per entry into `dir`. Returns the CSV path.
std::filesystem::path write_archive(const Instance& inst, const ParetoArchive& arch,
                                    const std::filesystem::path& dir);

std::vector<ParetoPoint> read_archive_points(std::istream& in);

}  // namespace fairtt
