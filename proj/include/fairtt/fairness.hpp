#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace fairtt {

/// Result of comparing X against Y under max-min fairness.
enum class MMOrder { Better, Equal, Worse };

std::string_view to_string(MMOrder order);

enum class EnergyMeasure { Lex, Cw, Ps };

std::string_view to_string(EnergyMeasure measure);
EnergyMeasure parse_energy_measure(std::string_view name);

/// Energy-difference measure plus its offset. The offset is ignored by Lex.
struct EnergyKind {
  EnergyMeasure measure = EnergyMeasure::Cw;
  double delta = 1e-3;
};

/// Sorts a copy of the allocation by penalty, largest first.
std::vector<int> sorted_descending(std::span<const int> v);

/// X is Better than Y when its descending-sorted penalties are
/// lexicographically smaller: the worst-off stakeholder is served first.
MMOrder mm_compare(std::span<const int> x, std::span<const int> y);

/// Same as mm_compare for vectors already sorted descending.
MMOrder mm_compare_sorted(std::span<const int> x, std::span<const int> y);

/// Jain's index (sum v)^2 / (n * sum v^2). Throws AllZero for the zero vector.
double jain_index(std::span<const double> v);
double jain_index(std::span<const int> v);

// The three energy differences take X (the incumbent) and Y (the candidate)
// and require mm_compare(x, y) == Better; otherwise they throw NotWorse.

/// 1 - (i* - 1) / n where i* is the first descending rank at which Y exceeds X.
double delta_e_lex(std::span<const int> x, std::span<const int> y);

/// Largest ratio of offset entries, both vectors sorted ascending, minus one.
double delta_e_cw(std::span<const int> x, std::span<const int> y, double delta);

/// Largest ratio of offset prefix sums, both vectors sorted descending, minus one.
double delta_e_ps(std::span<const int> x, std::span<const int> y, double delta);

double energy_difference(std::span<const int> x, std::span<const int> y, const EnergyKind& kind);

}  // namespace fairtt
