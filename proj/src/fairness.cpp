#include "fairtt/fairness.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "fairtt/error.hpp"

namespace fairtt {

namespace {

void require_same_length(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorCode::LengthMismatch,
                "allocations of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
}

void require_worse(std::span<const int> x_desc, std::span<const int> y_desc) {
  if (mm_compare_sorted(x_desc, y_desc) != MMOrder::Better) {
    throw Error(ErrorCode::NotWorse, "energy difference requested for a candidate that is not worse");
  }
}

}  // namespace

std::string_view to_string(MMOrder order) {
  switch (order) {
    case MMOrder::Better: return "Better";
    case MMOrder::Equal: return "Equal";
    case MMOrder::Worse: return "Worse";
  }
  return "?";
}

std::string_view to_string(EnergyMeasure measure) {
  switch (measure) {
    case EnergyMeasure::Lex: return "lex";
    case EnergyMeasure::Cw: return "cw";
    case EnergyMeasure::Ps: return "ps";
  }
  return "?";
}

EnergyMeasure parse_energy_measure(std::string_view name) {
  if (name == "lex") return EnergyMeasure::Lex;
  if (name == "cw") return EnergyMeasure::Cw;
  if (name == "ps") return EnergyMeasure::Ps;
  throw Error(ErrorCode::InvalidArgument, "unknown energy measure '" + std::string(name) + "'");
}

std::vector<int> sorted_descending(std::span<const int> v) {
  std::vector<int> out(v.begin(), v.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

MMOrder mm_compare_sorted(std::span<const int> x, std::span<const int> y) {
  require_same_length(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < y[i]) return MMOrder::Better;
    if (x[i] > y[i]) return MMOrder::Worse;
  }
  return MMOrder::Equal;
}

MMOrder mm_compare(std::span<const int> x, std::span<const int> y) {
  require_same_length(x, y);
  return mm_compare_sorted(sorted_descending(x), sorted_descending(y));
}

double jain_index(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::LengthMismatch, "Jain index of an empty vector");
  double sum = 0.0;
  double squares = 0.0;
  for (double x : v) {
    sum += x;
    squares += x * x;
  }
  if (squares == 0.0) throw Error(ErrorCode::AllZero, "Jain index undefined for the zero vector");
  return sum * sum / (static_cast<double>(v.size()) * squares);
}

double jain_index(std::span<const int> v) {
  std::vector<double> d(v.begin(), v.end());
  return jain_index(std::span<const double>(d));
}

double delta_e_lex(std::span<const int> x, std::span<const int> y) {
  require_same_length(x, y);
  const auto xs = sorted_descending(x);
  const auto ys = sorted_descending(y);
  require_worse(xs, ys);
  const auto n = static_cast<double>(xs.size());
  std::size_t first = 0;
  while (ys[first] <= xs[first]) ++first;  // terminates: y is worse
  return 1.0 - static_cast<double>(first) / n;
}

double delta_e_cw(std::span<const int> x, std::span<const int> y, double delta) {
  require_same_length(x, y);
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  auto xs = sorted_descending(x);
  auto ys = sorted_descending(y);
  require_worse(xs, ys);
  const int m = std::min(xs.back(), ys.back());
  const double offset = delta - static_cast<double>(m);
  // Descending order reversed is the ascending order the ratio pairs up.
  double worst = 0.0;
  for (std::size_t i = xs.size(); i-- > 0;) {
    worst = std::max(worst, (offset + ys[i]) / (offset + xs[i]));
  }
  return worst - 1.0;
}

double delta_e_ps(std::span<const int> x, std::span<const int> y, double delta) {
  require_same_length(x, y);
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  const auto xs = sorted_descending(x);
  const auto ys = sorted_descending(y);
  require_worse(xs, ys);
  const int m = std::min(xs.back(), ys.back());
  const double offset = delta - static_cast<double>(m);
  double sum_x = 0.0;
  double sum_y = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum_x += xs[i];
    sum_y += ys[i];
    const double shift = static_cast<double>(i + 1) * offset;
    worst = std::max(worst, (shift + sum_y) / (shift + sum_x));
  }
  return worst - 1.0;
}

double energy_difference(std::span<const int> x, std::span<const int> y, const EnergyKind& kind) {
  switch (kind.measure) {
    case EnergyMeasure::Lex: return delta_e_lex(x, y);
    case EnergyMeasure::Cw: return delta_e_cw(x, y, kind.delta);
    case EnergyMeasure::Ps: return delta_e_ps(x, y, kind.delta);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown energy measure");
}

}  // namespace fairtt
