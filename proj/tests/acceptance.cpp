// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "fairtt/evaluator.hpp"
#include "fairtt/fairness.hpp"
#include "fairtt/harness.hpp"
#include "fairtt/jfi_solver.hpp"
#include "fairtt/mmf_solver.hpp"
#include "fairtt/neighborhood.hpp"
#include "fairtt/rng.hpp"
#include "oracles.hpp"

using namespace fairtt;
using V = std::vector<int>;

namespace {

// Tolerances and budgets.
constexpr double kJainTol = 5e-5;
constexpr double kCoolingTol = 1e-9;
constexpr double kOracleTol = 1e-10;
constexpr double kDelta = 1e-3;
constexpr int kPropertyPairs = 40000;
constexpr int kIncrementalMoves = 1000;
constexpr int kSolverRuns = 20;
constexpr double kSolverTimeout = 10.0;
constexpr double kRequiredSuccess = 0.8;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string fixture(const std::string& name) { return std::string(FAIRTT_FIXTURES) + "/" + name; }

// Pads a truncated vector with `fill` up to k entries.
V padded(const std::string& text, std::size_t k, int fill) {
  V v = parse_allocation(text);
  while (v.size() < k) v.push_back(fill);
  return sorted_descending(v);
}

void reference_jain() {
  struct Row {
    const char* name;
    double jain;
    const char* alloc;
  };
  const Row rows[] = {
      {"comp01", 0.8571, "5^2,0^12"},
      {"comp02", 0.9515, "4,2^10,0^59"},
      {"comp03", 0.9114, "13,10^3,9,7^2,6^4,5^13,4,2^6,0^37"},
      {"comp04", 0.8964, "7,6^3,5^4,4^2,2,0^46"},
      {"comp06", 0.9657, "12,7^2,5^4,2^3,0^60"},
      {"comp07", 0.9870, "6,0^76"},
      {"comp08", 0.9020, "7,6^3,5^4,4^2,2^2,0^49"},
      {"comp09", 0.8047, "10^5,9,7^10,6^6,5^10,4,2,0^41"},
      {"comp10", 0.9701, "2^2,0^65"},
      {"comp13", 0.8830, "8,7,6^5,5^7,4^2,2^3,0^47"},
      {"comp14", 0.9023, "8^4,7,5^2,2^6,0^47"},
      {"comp15", 0.8495, "10^3,9^3,7,6^4,5^13,4,2^7,0^36"},
      {"comp16", 0.9176, "7^2,5^7,4,0^61"},
      {"comp17", 0.9248, "10^2,6^3,5^9,2^4,0^52"},
      {"comp18", 0.9009, "17,15,14,13,11,10,9^2,5^19,2^2,0^23"},
      {"comp19", 0.9612, "13,7,6^4,5^2,4,2^7,0^50"},
      {"comp20", 0.9744, "2^2,0^76"},
      {"comp21", 0.8838, "12,11,10^4,9,7^4,6^4,5^12,4,2^3,1^2,0^45"},
  };
  bool ok = true;
  double worst = 0.0;
  std::string bad;
  for (const auto& r : rows) {
    const double j = jain_index(std::span<const int>(shifted_allocation(parse_allocation(r.alloc))));
    worst = std::max(worst, std::abs(j - r.jain));
    if (std::abs(j - r.jain) > kJainTol) {
      ok = false;
      bad += std::string(" ") + r.name;
    }
  }
  bool all_zero = false;
  try {
    jain_index(std::span<const int>(shifted_allocation(parse_allocation("0^13"))));
  } catch (const Error& e) {
    all_zero = e.code() == ErrorCode::AllZero;
  }
  report(ok, "reference_jain_values", fmt("18 rows, max |error| %.2e, tol %.0e", worst, kJainTol) + bad);
  report(all_zero, "reference_comp11_all_zero", all_zero ? "AllZero raised" : "AllZero not raised");
}

void reference_orderings() {
  struct Row {
    const char* name;
    V known;
    V mmf;
    MMOrder expected;
  };
  const Row rows[] = {
      {"comp01", parse_allocation("5^2,0^12"), parse_allocation("5^2,0^12"), MMOrder::Equal},
      {"comp02", parse_allocation("4,2^10,0^59"), parse_allocation("4^2,2^31,1^7,0^30"), MMOrder::Worse},
      {"comp03", parse_allocation("13,10^3,9,7^2,6^4,5^13,4,2^6,0^37"), parse_allocation("6^4,4^11,2^22,1^3,0^28"),
       MMOrder::Better},
      {"comp04", parse_allocation("7,6^3,5^4,4^2,2,0^46"), parse_allocation("6^4,4^2,2^4,1,0^46"), MMOrder::Better},
      {"comp05", padded("41^2,36^7,35^5,32^5,31^6,30^9,28,2,0^3", 139, 2),
       padded("19^2,18^3,17^3,16^5,15^2,14^15,13^5,4^8,3^3,2", 139, 4), MMOrder::Better},
      {"comp06", parse_allocation("12,7^2,5^4,2^3,0^60"), parse_allocation("12,4^2,2^30,1^13,0^24"), MMOrder::Better},
      {"comp07", parse_allocation("6,0^76"), parse_allocation("6,2^23,1^24,0^29"), MMOrder::Worse},
      {"comp08", parse_allocation("7,6^3,5^4,4^2,2^2,0^49"), parse_allocation("6^4,4^2,2^7,1^5,0^43"), MMOrder::Better},
      {"comp09", parse_allocation("10^5,9,7^10,6^6,5^10,4,2,0^41"), parse_allocation("6^9,4^14,2^17,0^35"),
       MMOrder::Better},
      {"comp10", parse_allocation("2^2,0^65"), parse_allocation("2^19,1^6,0^42"), MMOrder::Worse},
      {"comp11", parse_allocation("0^13"), parse_allocation("0^13"), MMOrder::Equal},
      {"comp12", padded("45,30^14,28,27^2,26^5,25^19,22^4,2^2,0^3", 150, 2),
       parse_allocation("10^3,9^6,8^31,7^7,6^43,5^2,4^36,3^2,2^16,1,0^3"), MMOrder::Better},
      {"comp13", parse_allocation("8,7,6^5,5^7,4^2,2^3,0^47"), parse_allocation("6^6,4^4,2^13,1^6,0^37"),
       MMOrder::Better},
      {"comp14", parse_allocation("8^4,7,5^2,2^6,0^47"), parse_allocation("8^4,4^2,3,2^18,0^35"), MMOrder::Better},
      {"comp15", parse_allocation("10^3,9^3,7,6^4,5^13,4,2^7,0^36"), parse_allocation("6^4,4^11,2^23,1^2,0^28"),
       MMOrder::Better},
      {"comp16", parse_allocation("7^2,5^7,4,0^61"), parse_allocation("4^5,2^16,1^4,0^46"), MMOrder::Better},
      {"comp17", parse_allocation("10^2,6^3,5^9,2^4,0^52"), parse_allocation("10^2,6^2,4^7,3,2^25,1^7,0^26"),
       MMOrder::Better},
      {"comp18", parse_allocation("17,15,14,13,11,10,9^2,5^19,2^2,0^23"), parse_allocation("4^20,2^11,1^5,0^16"),
       MMOrder::Better},
      {"comp19", parse_allocation("13,7,6^4,5^2,4,2^7,0^50"), parse_allocation("6^4,4^6,2^15,1^14,0^27"),
       MMOrder::Better},
      {"comp20", parse_allocation("2^2,0^76"), parse_allocation("4^5,3^3,2^31,1^7,0^32"), MMOrder::Worse},
      {"comp21", parse_allocation("12,11,10^4,9,7^4,6^4,5^12,4,2^3,1^2,0^45"),
       parse_allocation("10,6^4,5,4^15,3,2^36,1^3,0^17"), MMOrder::Better},
  };
  bool ok = true;
  std::string bad;
  for (const auto& r : rows) {
    bool row_ok = r.known.size() == r.mmf.size();
    if (row_ok) row_ok = mm_compare(r.mmf, r.known) == r.expected;
    if (!row_ok) {
      ok = false;
      bad += std::string(" ") + r.name;
    }
  }
  report(ok, "reference_mmf_orderings", "21 rows (15 Better, 4 Worse, 2 Equal)" + bad);
}

V random_vector(std::mt19937& gen, std::size_t n) {
  std::uniform_int_distribution<int> value(0, 20);
  V v(n);
  for (auto& x : v) x = value(gen);
  return v;
}

V shuffled(V v, std::mt19937& gen) {
  std::shuffle(v.begin(), v.end(), gen);
  return v;
}

void fairness_properties() {
  std::mt19937 gen(7);
  std::uniform_int_distribution<std::size_t> length(1, 8);
  int perm = 0, anti = 0, pareto = 0, positive = 0, lex_range = 0, scale = 0, oracle_bad = 0;
  int worse_pairs = 0, jain_pairs = 0;
  for (int trial = 0; trial < kPropertyPairs; ++trial) {
    const std::size_t n = length(gen);
    const V x = random_vector(gen, n);
    const V y = random_vector(gen, n);
    const MMOrder o = mm_compare(x, y);
    if (static_cast<int>(o) - 1 != oracle::mm(x, y)) ++oracle_bad;
    if (mm_compare(shuffled(x, gen), shuffled(y, gen)) != o) ++perm;
    const MMOrder flipped = o == MMOrder::Better ? MMOrder::Worse : o == MMOrder::Worse ? MMOrder::Better : o;
    if (mm_compare(y, x) != flipped) ++anti;
    V raised = x;
    raised[std::uniform_int_distribution<std::size_t>(0, n - 1)(gen)] += 1;
    if (mm_compare(x, raised) != MMOrder::Better) ++pareto;

    if (o == MMOrder::Better) {
      ++worse_pairs;
      const double cw = delta_e_cw(x, y, kDelta);
      const double ps = delta_e_ps(x, y, kDelta);
      const double lex = delta_e_lex(x, y);
      if (!(cw > 0.0) || !(ps > 0.0)) ++positive;
      const double steps = lex * static_cast<double>(n);
      if (std::abs(steps - std::round(steps)) > 1e-9 || steps < 0.5 || steps > n + 0.5) ++lex_range;
      if (std::abs(lex - oracle::delta_lex(x, y)) > kOracleTol ||
          std::abs(cw - oracle::delta_cw(x, y, kDelta)) > kOracleTol * std::max(1.0, cw) ||
          std::abs(ps - oracle::delta_ps(x, y, kDelta)) > kOracleTol * std::max(1.0, ps))
        ++oracle_bad;
    }
    if (std::any_of(x.begin(), x.end(), [](int v) { return v != 0; })) {
      ++jain_pairs;
      const double j = jain_index(std::span<const int>(x));
      std::vector<double> scaled;
      const double c = std::uniform_real_distribution<double>(0.01, 100.0)(gen);
      for (int v : x) scaled.push_back(c * v);
      if (std::abs(jain_index(scaled) - j) > 1e-12) ++scale;
      if (std::abs(j - oracle::jain(std::vector<double>(x.begin(), x.end()))) > kOracleTol) ++oracle_bad;
    }
  }
  const std::string pairs = std::to_string(kPropertyPairs) + " pairs";
  report(perm == 0, "fairness_permutation_invariance", pairs + ", violations " + std::to_string(perm));
  report(anti == 0, "fairness_antisymmetry", pairs + ", violations " + std::to_string(anti));
  report(pareto == 0, "fairness_pareto_consistency", pairs + ", violations " + std::to_string(pareto));
  report(positive == 0 && worse_pairs >= 10000, "fairness_energy_positive",
         std::to_string(worse_pairs) + " strictly worse pairs, violations " + std::to_string(positive));
  report(lex_range == 0 && worse_pairs >= 10000, "fairness_lex_range",
         std::to_string(worse_pairs) + " strictly worse pairs, violations " + std::to_string(lex_range));
  report(scale == 0 && jain_pairs >= 10000, "fairness_jain_scale_invariance",
         std::to_string(jain_pairs) + " vectors, violations " + std::to_string(scale));
  report(oracle_bad == 0, "fairness_oracle_agreement", "mismatches " + std::to_string(oracle_bad));

  struct Worked {
    V x, y;
    int measure;  // 0 cw, 1 ps, 2 lex
    double expected;
  };
  const Worked worked[] = {
      {{0, 5}, {0, 7}, 0, 7.001 / 5.001 - 1.0},
      {{0, 5}, {2, 5}, 0, 2000.0},
      {{5, 3}, {5, 4}, 0, 1000.0},
      {{5, 0}, {7, 0}, 1, 7.001 / 5.001 - 1.0},
      {{5, 3}, {5, 4}, 1, 3.002 / 2.002 - 1.0},
      {{5, 2, 0}, {5, 3, 0}, 1, 8.002 / 7.002 - 1.0},
      {{5, 0}, {7, 0}, 2, 1.0},
      {{5, 3, 0, 0}, {5, 4, 0, 0}, 2, 0.75},
      {{5, 0}, {5, 2}, 2, 0.5},
  };
  bool ok = true;
  for (const auto& w : worked) {
    const double got = w.measure == 0 ? delta_e_cw(w.x, w.y, kDelta)
                       : w.measure == 1 ? delta_e_ps(w.x, w.y, kDelta)
                                        : delta_e_lex(w.x, w.y);
    const double ref = w.measure == 0 ? oracle::delta_cw(w.x, w.y, kDelta)
                       : w.measure == 1 ? oracle::delta_ps(w.x, w.y, kDelta)
                                        : oracle::delta_lex(w.x, w.y);
    if (std::abs(got - ref) > kOracleTol * std::max(1.0, ref) ||
        std::abs(got - w.expected) > kOracleTol * std::max(1.0, w.expected))
      ok = false;
  }
  report(ok, "fairness_worked_values", "9 energy differences against the brute-force evaluator");
}

void cooling() {
  SAParams p;
  const double t0 = temperature_at(p, 0.0);
  const double t1 = temperature_at(p, p.timeout);
  const double mid = temperature_at(p, p.timeout / 2);
  const double e0 = std::abs(t0 - p.theta_max) / p.theta_max;
  const double e1 = std::abs(t1 - p.theta_min) / p.theta_min;
  const double em = std::abs(mid - std::sqrt(p.theta_max * p.theta_min)) / std::sqrt(p.theta_max * p.theta_min);
  report(e0 <= kCoolingTol && e1 <= kCoolingTol && em <= kCoolingTol, "cooling_contract",
         fmt("relative errors %.1e %.1e %.1e", e0, e1, em));
}

void evaluator_equivalence() {
  const Instance inst = load_instance(fixture("toy.ctt"));
  int count = 0, mismatches = 0;
  oracle::enumerate_feasible(inst, [&](const Timetable& t) {
    ++count;
    if (total_penalty(inst, t) != oracle::total(inst, t) || penalty_allocation(inst, t) != oracle::allocation(inst, t))
      ++mismatches;
  });
  report(mismatches == 0 && count > 0, "evaluator_exhaustive",
         std::to_string(count) + " feasible timetables, mismatches " + std::to_string(mismatches));

  EvaluationState state(inst, build_initial(inst, 1));
  Rng rng(99);
  int bad = 0;
  for (int i = 0; i < kIncrementalMoves; ++i) {
    state.apply(to_relocations(state, random_move(state, rng)));
    const Timetable& t = state.timetable();
    if (!oracle::feasible(inst, t) || state.total() != oracle::total(inst, t) ||
        state.allocation() != oracle::allocation(inst, t))
      ++bad;
  }
  report(bad == 0, "evaluator_incremental",
         std::to_string(kIncrementalMoves) + " Kempe moves, mismatches " + std::to_string(bad));
}

template <class F>
auto parallel_runs(F&& run) {
  using R = decltype(run(std::uint64_t{1}));
  std::vector<std::optional<R>> out(kSolverRuns);
  const unsigned workers = std::max(1u, std::min<unsigned>(kSolverRuns, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  std::atomic<int> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < kSolverRuns; i = next++) out[i] = run(static_cast<std::uint64_t>(i + 1));
    });
  }
  pool.clear();
  return out;
}

void mmf_solver() {
  const Instance inst = load_instance(fixture("toy.ctt"));
  std::optional<V> best;
  oracle::enumerate_feasible(inst, [&](const Timetable& t) {
    V a = oracle::allocation(inst, t);
    std::sort(a.begin(), a.end(), std::greater<>());
    if (!best || oracle::mm(a, *best) < 0) best = a;
  });
  struct Outcome {
    bool optimal = false;
    bool monotone = true;
    std::string error;
  };
  const auto outcomes = parallel_runs([&](std::uint64_t seed) {
    Outcome o;
    try {
      SAParams p;
      p.seed = seed;
      p.timeout = kSolverTimeout;
      p.energy = {EnergyMeasure::Cw, kDelta};
      const MmfResult r = solve_mmf(inst, build_initial(inst, seed), p);
      o.optimal = sorted_descending(r.best_allocation) == *best && oracle::feasible(inst, r.best);
      const auto& rec = r.trace.records;
      for (std::size_t i = 1; i < rec.size(); ++i)
        if (mm_compare(rec[i].best, rec[i - 1].best) == MMOrder::Worse) o.monotone = false;
    } catch (const Error& e) {
      o.error = e.what();
      o.monotone = false;
    }
    return o;
  });
  int optimal = 0, monotone = 0;
  for (const auto& o : outcomes) {
    optimal += o->optimal;
    monotone += o->monotone;
  }
  report(optimal >= kRequiredSuccess * kSolverRuns, "mmf_oracle_optimum",
         std::to_string(optimal) + "/" + std::to_string(kSolverRuns) + " runs reached " + format_allocation(*best) +
             fmt(", required %.0f%%", kRequiredSuccess * 100));
  report(monotone == kSolverRuns, "mmf_trace_monotone",
         std::to_string(monotone) + "/" + std::to_string(kSolverRuns) + " traces monotone");
}

void jfi_solver() {
  const Instance inst = load_instance(fixture("toy.ctt"));
  std::vector<ObjectivePair> all;
  oracle::enumerate_feasible(inst, [&](const Timetable& t) {
    const V a = oracle::allocation(inst, t);
    const int fmax = *std::max_element(a.begin(), a.end());
    std::vector<double> shifted;
    for (int v : a) shifted.push_back(fmax - v);
    const bool zero = std::all_of(shifted.begin(), shifted.end(), [](double v) { return v == 0.0; });
    all.push_back({oracle::total(inst, t), zero ? 0.0 : 1.0 - oracle::jain(shifted)});
  });
  auto dom = [](const ObjectivePair& a, const ObjectivePair& b) {
    return a.penalty <= b.penalty && a.unfairness <= b.unfairness + 1e-12 &&
           (a.penalty < b.penalty || a.unfairness < b.unfairness - 1e-12);
  };
  std::vector<ObjectivePair> front;
  for (const auto& x : all) {
    if (std::any_of(all.begin(), all.end(), [&](const ObjectivePair& y) { return dom(y, x); })) continue;
    if (std::none_of(front.begin(), front.end(), [&](const ObjectivePair& f) {
          return f.penalty == x.penalty && std::abs(f.unfairness - x.unfairness) < 1e-12;
        }))
      front.push_back(x);
  }

  struct Outcome {
    bool full = false;
    bool nondominated = true;
  };
  const auto outcomes = parallel_runs([&](std::uint64_t seed) {
    Outcome o;
    try {
      SAParams p;
      p.seed = seed;
      p.timeout = kSolverTimeout;
      p.theta_max = 20.0;
      JfiHooks hooks;
      hooks.on_insert = [&](const ParetoArchive& a) {
        for (const auto& x : a.entries())
          for (const auto& y : a.entries())
            if (dominates(x.objective, y.objective)) o.nondominated = false;
      };
      const JfiResult r = solve_jfi(inst, build_initial(inst, seed), p, hooks);
      o.full = r.archive.size() == front.size();
      for (const auto& f : front) {
        o.full = o.full && std::any_of(r.archive.entries().begin(), r.archive.entries().end(), [&](const auto& e) {
                   return e.objective.penalty == f.penalty && std::abs(e.objective.unfairness - f.unfairness) < 1e-9;
                 });
      }
    } catch (const Error&) {
      o.nondominated = false;
    }
    return o;
  });
  int full = 0, clean = 0;
  for (const auto& o : outcomes) {
    full += o->full;
    clean += o->nondominated;
  }
  std::string pts;
  for (const auto& f : front) pts += fmt(" (%.0f, %.4f)", f.penalty, f.unfairness);
  report(full >= kRequiredSuccess * kSolverRuns, "jfi_full_front",
         std::to_string(full) + "/" + std::to_string(kSolverRuns) + " runs recovered" + pts +
             fmt(", required %.0f%%", kRequiredSuccess * 100));
  report(clean == kSolverRuns, "jfi_archive_nondominated",
         std::to_string(clean) + "/" + std::to_string(kSolverRuns) + " runs clean after every insertion");
}

void wilcoxon() {
  std::mt19937 gen(12);
  int cases = 0, bad = 0;
  for (std::size_t m = 1; m < 10; ++m) {
    for (std::size_t n = 1; m + n <= 10; ++n) {
      for (int rep = 0; rep < 40; ++rep) {
        std::uniform_int_distribution<int> value(0, rep % 2 == 0 ? 3 : 50);
        std::vector<double> a(m), b(n);
        for (auto& x : a) x = value(gen);
        for (auto& x : b) x = value(gen);
        std::vector<double> all = a;
        all.insert(all.end(), b.begin(), b.end());
        if (std::all_of(all.begin(), all.end(), [&](double v) { return v == all[0]; })) continue;
        ++cases;
        if (std::abs(wilcoxon_one_sided(a, b).p_value - oracle::rank_sum_p(a, b)) > 1e-12) ++bad;
      }
    }
  }
  report(bad == 0, "wilcoxon_exact_oracle", std::to_string(cases) + " cases with m+n <= 10, mismatches " +
                                                std::to_string(bad));
  const double p = wilcoxon_one_sided(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}).p_value;
  report(p == 0.05, "wilcoxon_1_2_3_vs_4_5_6", fmt("p = %.17g", p));
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)()> sections[] = {
      {"reference_jain", reference_jain}, {"reference_orderings", reference_orderings},         {"fairness", fairness_properties},
      {"cooling", cooling},       {"evaluator", evaluator_equivalence},
      {"mmf", mmf_solver},        {"jfi", jfi_solver},        {"wilcoxon", wilcoxon},
  };
  for (const auto& [name, run] : sections) {
    try {
      run();
    } catch (const std::exception& e) {
      report(false, name, std::string("unexpected exception: ") + e.what());
    }
  }
  std::printf("%s  %d failure(s)\n", failures == 0 ? "ALL PASS" : "SOME FAILED", failures);
  return failures == 0 ? 0 : 1;
}
