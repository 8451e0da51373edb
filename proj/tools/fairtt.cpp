// fairtt: command-line front end for fair course timetabling.
//
// Exit codes: 0 success, 1 infeasible input or validation failure,
// 2 usage error, 3 runtime error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fairtt/error.hpp"
#include "fairtt/evaluator.hpp"
#include "fairtt/fairness.hpp"
#include "fairtt/harness.hpp"
#include "fairtt/instance.hpp"
#include "fairtt/jfi_solver.hpp"
#include "fairtt/mmf_solver.hpp"
#include "fairtt/neighborhood.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct SolverFlags {
  std::optional<double> theta_max;
  double theta_min = 0.01;
  double timeout_s = 192.0;
  double delta = 1e-3;
  std::string energy = "cw";
  std::uint64_t seed = 1;
  std::optional<double> virtual_clock;
  std::string start;

  void attach(CLI::App* cmd) {
    cmd->add_option("--theta-max", theta_max, "Initial temperature (default 5 for mmf, 20 for jfi)");
    cmd->add_option("--theta-min", theta_min, "Final temperature")->capture_default_str();
    cmd->add_option("--timeout-s", timeout_s, "Wall-clock budget per run in seconds")->capture_default_str();
    cmd->add_option("--delta", delta, "Energy-difference offset")->capture_default_str();
    cmd->add_option("--energy", energy, "Energy difference: lex, cw or ps")
        ->check(CLI::IsMember({"lex", "cw", "ps"}))
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Random seed (batch runs use seed, seed+1, ...)")->capture_default_str();
    cmd->add_option("--virtual-clock", virtual_clock,
                    "Advance time by this many seconds per iteration instead of the wall clock (reproducible runs)");
    cmd->add_option("--start", start, "Start from this solution file instead of the greedy construction");
  }

  fairtt::SAParams params(double default_theta_max) const {
    fairtt::SAParams p;
    p.theta_max = theta_max.value_or(default_theta_max);
    p.theta_min = theta_min;
    p.timeout = timeout_s;
    p.energy = {fairtt::parse_energy_measure(energy), delta};
    p.seed = seed;
    p.virtual_seconds_per_iteration = virtual_clock;
    p.validate();
    return p;
  }

  fairtt::Timetable start_timetable(const fairtt::Instance& inst) const {
    if (!start.empty()) return fairtt::load_solution(start, inst);
    return fairtt::build_initial(inst, seed);
  }
};

int exit_code_for(fairtt::ErrorCode code) {
  using fairtt::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return kExitUsage;
    case ErrorCode::NoNeighborFound:
    case ErrorCode::ConstructionFailed:
    case ErrorCode::DegenerateSample:
    case ErrorCode::NotWorse:
    case ErrorCode::LengthMismatch:
    case ErrorCode::NoLectureInPeriod:
    case ErrorCode::RoomOverflow:
    case ErrorCode::UnavailabilityViolated:
    case ErrorCode::AllZero: return kExitRuntime;
    default: return kExitInvalid;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  if (!out) throw fairtt::Error(fairtt::ErrorCode::InvalidArgument, "cannot write " + path);
}

std::string jain_text(const fairtt::PenaltyAllocation& a) {
  try {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << fairtt::jain_index(std::span<const int>(fairtt::shifted_allocation(a)));
    return s.str();
  } catch (const fairtt::Error& e) {
    if (e.code() == fairtt::ErrorCode::AllZero) return "-";
    throw;
  }
}

int print_violations(const std::vector<fairtt::HardViolation>& violations) {
  for (const auto& v : violations) std::cout << fairtt::to_string(v.kind) << ' ' << v.detail << '\n';
  std::cout << "infeasible: " << violations.size() << " hard-constraint violation(s)\n";
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair curriculum-based course timetabling"};
  app.require_subcommand(1);

  std::string instance_path, solution_path, out_path, trace_path, out_dir, batch_a, batch_b, column, archive_path,
      mode = "mmf", seed_point;
  int runs = 50;
  int jobs = 0;
  double alpha = 0.01;

  auto* validate = app.add_subcommand("validate", "Parse an instance and optionally check a solution's hard constraints");
  validate->add_option("instance", instance_path)->required();
  validate->add_option("solution", solution_path);

  auto* evaluate = app.add_subcommand("evaluate", "Print f, the per-curriculum allocation and J(A')");
  evaluate->add_option("instance", instance_path)->required();
  evaluate->add_option("solution", solution_path)->required();

  SolverFlags flags;
  auto* solve_mmf = app.add_subcommand("solve-mmf", "Max-min-fair simulated annealing");
  solve_mmf->add_option("instance", instance_path)->required();
  solve_mmf->add_option("--out", out_path, "Write the best timetable here");
  solve_mmf->add_option("--trace", trace_path, "Write the best-so-far trace CSV here");
  flags.attach(solve_mmf);

  auto* solve_jfi = app.add_subcommand("solve-jfi", "Bi-objective penalty/Jain-index annealing with a Pareto archive");
  solve_jfi->add_option("instance", instance_path)->required();
  solve_jfi->add_option("--out-dir", out_dir, "Directory for archive.csv and solution files")->required();
  flags.attach(solve_jfi);

  auto* batch = app.add_subcommand("batch", "Independent seeded runs of one solver");
  batch->add_option("instance", instance_path)->required();
  batch->add_option("--mode", mode)->check(CLI::IsMember({"mmf", "jfi"}))->capture_default_str();
  batch->add_option("--runs", runs)->check(CLI::PositiveNumber)->capture_default_str();
  batch->add_option("--jobs", jobs, "Concurrent runs (falls back to FAIRTT_JOBS, then 1)");
  batch->add_option("--out", out_path, "Batch CSV path (stdout when omitted)");
  flags.attach(batch);

  auto* compare = app.add_subcommand("compare", "One-sided Wilcoxon rank-sum test: is batch A lower than batch B?");
  compare->add_option("batch_a", batch_a)->required();
  compare->add_option("batch_b", batch_b)->required();
  column = "worst_curriculum";
  compare->add_option("--column", column, "Numeric batch column to compare")->capture_default_str();
  compare->add_option("--alpha", alpha, "Significance level")->capture_default_str();

  auto* pareto = app.add_subcommand("pareto", "Tradeoff report for an exported archive");
  pareto->add_option("archive", archive_path)->required();
  pareto->add_option("--seed-point", seed_point, "Seed as 'jain,penalty' (default: lowest-penalty row)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) {
      const auto inst = fairtt::load_instance(instance_path);
      std::cout << "instance " << inst.name() << ": " << inst.course_count() << " courses, " << inst.total_lectures()
                << " lectures, " << inst.room_count() << " rooms, " << inst.period_count() << " periods, "
                << inst.curriculum_count() << " curricula\n";
      if (!solution_path.empty()) {
        const auto t = fairtt::load_solution(solution_path, inst);
        const auto violations = fairtt::check_hard(inst, t);
        if (!violations.empty()) return print_violations(violations);
        std::cout << "solution feasible\n";
      }
      return kExitOk;
    }

    if (*evaluate) {
      const auto inst = fairtt::load_instance(instance_path);
      const auto t = fairtt::load_solution(solution_path, inst);
      const auto violations = fairtt::check_hard(inst, t);
      if (!violations.empty()) return print_violations(violations);
      const auto a = fairtt::penalty_allocation(inst, t);
      std::cout << "instance: " << inst.name() << '\n'
                << "curricula: " << inst.curriculum_count() << '\n'
                << "f: " << fairtt::total_penalty(inst, t) << '\n'
                << "jain_shifted: " << jain_text(a) << '\n'
                << "allocation: " << fairtt::format_allocation(a) << '\n';
      return kExitOk;
    }

    if (*solve_mmf) {
      const auto inst = fairtt::load_instance(instance_path);
      const auto p = flags.params(5.0);
      const auto start = flags.start_timetable(inst);
      const auto result = fairtt::solve_mmf(inst, start, p);
      if (!out_path.empty()) write_file(out_path, fairtt::serialize_solution(inst, result.best));
      if (!trace_path.empty()) write_file(trace_path, fairtt::trace_csv(result.trace));
      std::cout << "start: " << fairtt::format_allocation(fairtt::penalty_allocation(inst, start)) << '\n'
                << "best: " << fairtt::format_allocation(result.best_allocation) << '\n'
                << "f: " << result.best_total << '\n'
                << "iterations: " << result.trace.iterations << '\n';
      return kExitOk;
    }

    if (*solve_jfi) {
      const auto inst = fairtt::load_instance(instance_path);
      const auto p = flags.params(20.0);
      const auto start = flags.start_timetable(inst);
      const auto result = fairtt::solve_jfi(inst, start, p);
      const auto csv = fairtt::write_archive(inst, result.archive, out_dir);
      std::cout << "archive: " << csv.string() << " (" << result.archive.size() << " points, "
                << result.iterations << " iterations)\n"
                << fairtt::pareto_report(result.archive, result.seed);
      return kExitOk;
    }

    if (*batch) {
      const auto inst = fairtt::load_instance(instance_path);
      const auto batch_mode = mode == "mmf" ? fairtt::BatchMode::Mmf : fairtt::BatchMode::Jfi;
      const auto p = flags.params(batch_mode == fairtt::BatchMode::Mmf ? 5.0 : 20.0);
      if (jobs <= 0) {
        const char* env = std::getenv("FAIRTT_JOBS");
        jobs = env ? std::atoi(env) : 1;
        if (jobs <= 0) jobs = 1;
      }
      const auto start = flags.start_timetable(inst);
      const auto result = fairtt::run_batch(inst, start, p, runs, batch_mode, jobs);
      const auto csv = fairtt::batch_csv(result);
      if (out_path.empty()) {
        std::cout << csv;
      } else {
        write_file(out_path, csv);
      }
      return kExitOk;
    }

    if (*compare) {
      auto read = [&](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw fairtt::Error(fairtt::ErrorCode::InvalidArgument, "cannot open " + path);
        return fairtt::read_batch_column(in, column);
      };
      const auto a = read(batch_a);
      const auto b = read(batch_b);
      const auto report = fairtt::wilcoxon_one_sided(a, b);
      std::cout << "column: " << column << '\n'
                << "n_a: " << a.size() << ", n_b: " << b.size() << '\n'
                << "rank_sum_a: " << report.statistic << '\n'
                << "p_value: " << report.p_value << (report.exact ? " (exact)" : " (normal approx.)") << '\n'
                << "direction: " << (report.direction == fairtt::Direction::ABetter ? "A_better" : "B_better") << '\n'
                << "verdict: "
                << (report.p_value < alpha ? "A significantly lower than B" : "no significant difference")
                << " at alpha=" << alpha << '\n';
      return kExitOk;
    }

    if (*pareto) {
      std::ifstream in(archive_path);
      if (!in) throw fairtt::Error(fairtt::ErrorCode::InvalidArgument, "cannot open " + archive_path);
      const auto points = fairtt::read_archive_points(in);
      if (points.empty()) throw fairtt::Error(fairtt::ErrorCode::MalformedEntry, "archive is empty");
      fairtt::ParetoPoint seed = points.front();
      for (const auto& pt : points)
        if (pt.penalty < seed.penalty) seed = pt;
      if (!seed_point.empty()) {
        const auto comma = seed_point.find(',');
        if (comma == std::string::npos) {
          throw fairtt::Error(fairtt::ErrorCode::InvalidArgument, "--seed-point expects 'jain,penalty'");
        }
        seed = {std::stod(seed_point.substr(0, comma)), std::stoi(seed_point.substr(comma + 1))};
      }
      std::cout << fairtt::pareto_report(points, seed);
      return kExitOk;
    }
  } catch (const fairtt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
