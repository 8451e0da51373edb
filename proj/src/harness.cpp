#include "fairtt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <tuple>
#include <iomanip>
#include <sstream>
#include <thread>

#include "fairtt/error.hpp"
#include "fairtt/fairness.hpp"

namespace fairtt {

namespace {

int to_int(std::string_view s, std::string_view context) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedEntry, std::string(context) + ": bad integer '" + std::string(s) + "'");
  }
  return value;
}

double to_double(const std::string& s, std::string_view context) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error(ErrorCode::MalformedEntry, std::string(context) + ": bad number '" + s + "'");
  }
  return value;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV line; double quotes group fields containing commas.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(trim(field));
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

std::string format_allocation(std::span<const int> a) {
  const auto sorted = sorted_descending(a);
  std::string out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(sorted[i]);
    if (j - i > 1) out += '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::vector<int> parse_allocation(std::string_view text) {
  std::vector<int> out;
  const std::string cleaned = trim(text);
  if (cleaned.empty()) return out;
  std::string_view rest = cleaned;
  while (true) {
    const auto comma = rest.find(',');
    const auto token = rest.substr(0, comma);
    const auto caret = token.find('^');
    const int value = to_int(token.substr(0, caret), "allocation value");
    const int count = caret == std::string_view::npos ? 1 : to_int(token.substr(caret + 1), "allocation exponent");
    if (count < 1) throw Error(ErrorCode::MalformedEntry, "allocation exponent must be positive");
    out.insert(out.end(), static_cast<std::size_t>(count), value);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

RankSumReport wilcoxon_one_sided(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "rank-sum test needs two nonempty samples");
  const std::size_t m = a.size();
  const std::size_t n_total = a.size() + b.size();

  struct Obs {
    double value;
    bool from_a;
  };
  std::vector<Obs> pooled;
  pooled.reserve(n_total);
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(), [](const Obs& x, const Obs& y) { return x.value < y.value; });
  if (pooled.front().value == pooled.back().value) {
    throw Error(ErrorCode::DegenerateSample, "all observations are identical");
  }

  // Doubled midranks keep every rank integral.
  std::vector<int> rank2(n_total);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n_total;) {
    std::size_t j = i;
    while (j < n_total && pooled[j].value == pooled[i].value) ++j;
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) rank2[k] = static_cast<int>(i + 1 + j);  // 2 * (i+1 + j)/2
    i = j;
  }
  int w2 = 0;
  for (std::size_t i = 0; i < n_total; ++i)
    if (pooled[i].from_a) w2 += rank2[i];

  RankSumReport report;
  report.statistic = w2 / 2.0;
  const double mean = static_cast<double>(m) * static_cast<double>(n_total + 1) / 2.0;
  report.direction = report.statistic <= mean ? Direction::ABetter : Direction::BBetter;

  if (n_total <= kExactRankSumLimit) {
    // ways[j][s]: subsets of size j with doubled rank sum s.
    const int max_sum = std::accumulate(rank2.begin(), rank2.end(), 0);
    std::vector<std::vector<double>> ways(m + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t i = 0; i < n_total; ++i) {
      for (std::size_t j = std::min(m, i + 1); j >= 1; --j) {
        for (int s = max_sum; s >= rank2[i]; --s) ways[j][s] += ways[j - 1][s - rank2[i]];
      }
    }
    double below = 0.0;
    double all = 0.0;
    for (int s = 0; s <= max_sum; ++s) {
      all += ways[m][s];
      if (s <= w2) below += ways[m][s];
    }
    report.p_value = below / all;
    report.exact = true;
  } else {
    const auto nm = static_cast<double>(m);
    const auto nn = static_cast<double>(b.size());
    const auto N = static_cast<double>(n_total);
    const double variance = nm * nn / 12.0 * ((N + 1.0) - tie_term / (N * (N - 1.0)));
    const double z = (report.statistic - mean + 0.5) / std::sqrt(variance);
    report.p_value = std::clamp(normal_cdf(z), std::numeric_limits<double>::min(), 1.0);
  }
  return report;
}

std::string_view to_string(BatchMode mode) { return mode == BatchMode::Mmf ? "mmf" : "jfi"; }

BatchResult run_batch(const Instance& inst, const Timetable& start, const SAParams& params, int runs,
                      BatchMode mode, int jobs) {
  if (runs < 1) throw Error(ErrorCode::InvalidArgument, "runs must be positive");
  params.validate();
  BatchResult batch;
  batch.instance = inst.name();
  batch.mode = mode;
  batch.params = params;
  batch.runs.resize(static_cast<std::size_t>(runs));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < runs; i = next++) {
      RunRecord& rec = batch.runs[static_cast<std::size_t>(i)];
      SAParams p = params;
      p.seed = params.seed + static_cast<std::uint64_t>(i);
      rec.seed = p.seed;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        if (mode == BatchMode::Mmf) {
          const MmfResult r = solve_mmf(inst, start, p);
          rec.best = r.best_allocation;
          rec.total_penalty = r.best_total;
        } else {
          const JfiResult r = solve_jfi(inst, start, p);
          const auto& entries = r.archive.entries();
          const auto pick = std::min_element(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
            return std::tie(x.objective.penalty, x.objective.unfairness) <
                   std::tie(y.objective.penalty, y.objective.unfairness);
          });
          rec.best = penalty_allocation(inst, pick->timetable);
          rec.total_penalty = pick->objective.penalty;
        }
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  const int workers = std::clamp(jobs, 1, runs);
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  return batch;
}

std::string batch_csv(const BatchResult& batch) {
  std::ostringstream out;
  const SAParams& p = batch.params;
  out << "# instance=" << batch.instance << " mode=" << to_string(batch.mode) << " theta_max=" << p.theta_max
      << " theta_min=" << p.theta_min << " timeout_s=" << p.timeout << " delta=" << p.energy.delta
      << " energy=" << to_string(p.energy.measure) << " base_seed=" << p.seed << '\n';
  out << "seed,total_penalty,worst_curriculum,allocation,wall_s,error\n";
  for (const auto& r : batch.runs) {
    out << r.seed << ',';
    if (r.ok()) {
      const int worst = r.best.empty() ? 0 : *std::max_element(r.best.begin(), r.best.end());
      out << r.total_penalty << ',' << worst << ",\"" << format_allocation(r.best) << "\",";
    } else {
      out << ",,,";
    }
    out << std::fixed << std::setprecision(3) << r.wall_seconds << std::defaultfloat << ",\"";
    for (char ch : r.error) out << (ch == '"' ? '\'' : ch);
    out << "\"\n";
  }
  return out.str();
}

std::vector<double> read_batch_column(std::istream& in, std::string_view column) {
  std::string line;
  std::vector<std::string> header;
  std::size_t col = 0;
  std::size_t error_col = std::string::npos;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv(line);
    if (header.empty()) {
      header = fields;
      auto it = std::find(header.begin(), header.end(), column);
      if (it == header.end()) throw Error(ErrorCode::InvalidArgument, "no column '" + std::string(column) + "'");
      col = static_cast<std::size_t>(it - header.begin());
      auto err = std::find(header.begin(), header.end(), "error");
      if (err != header.end()) error_col = static_cast<std::size_t>(err - header.begin());
      continue;
    }
    if (error_col < fields.size() && !fields[error_col].empty()) continue;
    if (col >= fields.size() || fields[col].empty()) continue;
    values.push_back(to_double(fields[col], column));
  }
  if (header.empty()) throw Error(ErrorCode::MalformedEntry, "batch file has no header");
  return values;
}

bool below_tradeoff_line(double jain, double penalty, double seed_jain, double seed_penalty) {
  const double line = seed_penalty * jain / seed_jain;
  return penalty < line - 1e-12 * std::max(1.0, std::abs(line));
}

ParetoPoint to_pareto_point(const ObjectivePair& obj) { return {1.0 - obj.unfairness, obj.penalty}; }

std::string pareto_report(std::span<const ParetoPoint> points, const ParetoPoint& seed) {
  std::vector<ParetoPoint> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    return a.jain_index < b.jain_index;
  });
  std::ostringstream out;
  out << "jain_index,penalty,below_tradeoff_line\n" << std::setprecision(10);
  for (const auto& pt : sorted) {
    out << pt.jain_index << ',' << pt.penalty << ','
        << (below_tradeoff_line(pt.jain_index, pt.penalty, seed.jain_index, seed.penalty) ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string pareto_report(const ParetoArchive& arch, const ObjectivePair& seed) {
  std::vector<ParetoPoint> points;
  for (const auto& e : arch.entries()) points.push_back(to_pareto_point(e.objective));
  return pareto_report(points, to_pareto_point(seed));
}

std::filesystem::path write_archive(const Instance& inst, const ParetoArchive& arch,
                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto entries = arch.entries();
  std::sort(entries.begin(), entries.end(), [](const ArchiveEntry& a, const ArchiveEntry& b) {
    return a.objective.penalty < b.objective.penalty;
  });
  const auto csv_path = dir / "archive.csv";
  std::ofstream csv(csv_path);
  csv << "jain_index,total_penalty,solution_file_path\n" << std::setprecision(10);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::ostringstream name;
    name << "solution_" << std::setw(3) << std::setfill('0') << i << ".sol";
    std::ofstream(dir / name.str()) << serialize_solution(inst, entries[i].timetable);
    csv << 1.0 - entries[i].objective.unfairness << ',' << entries[i].objective.penalty << ',' << name.str() << '\n';
  }
  if (!csv) throw Error(ErrorCode::InvalidArgument, "cannot write " + csv_path.string());
  return csv_path;
}

std::vector<ParetoPoint> read_archive_points(std::istream& in) {
  std::string line;
  std::vector<ParetoPoint> points;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    auto fields = split_csv(line);
    if (fields.size() < 2) throw Error(ErrorCode::MalformedEntry, "archive row needs jain_index,total_penalty");
    points.push_back({to_double(fields[0], "jain_index"), to_int(fields[1], "total_penalty")});
  }
  return points;
}

}  // namespace fairtt
