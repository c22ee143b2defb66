#pragma once

// Accuracy gauges for coefficient and free-energy tables: decay ordering and
// tail sums, the |Y|-weighted norm, dihedral symmetry breaking, finite-volume
// change, and convergence in the boundary cutoff.

#include <map>
#include <vector>

#include "lgrg/interaction.hpp"
#include "lgrg/lattice.hpp"

namespace lgrg {

using ClassValues = std::map<SiteSet, double>;

struct DecayEntry {
  SiteSet set;
  double magnitude = 0.0;
};

struct DecayReport {
  std::vector<DecayEntry> ordered;  // non-increasing magnitude, ties by set
  std::vector<double> tails;        // tails[n] = tails[n+1] + ordered[n].magnitude
};

/// In dihedral mode each dihedral class contributes one entry, the average
/// over the members of its orbit that the table holds, keyed by the
/// dihedral canonical form.
DecayReport decay_report(const ClassValues& values, Symmetry mode);
DecayReport decay_report(const Interaction& c, Symmetry mode);

/// Number of entries with magnitude strictly above each threshold.
std::vector<std::size_t> threshold_counts(const DecayReport& report, const std::vector<double>& thresholds);

/// sum over classes of |c(Y)| |Y|.
double norm_tail(const Interaction& c);

/// Orbit average v-bar for every key whose whole dihedral orbit is present.
/// Keys with incomplete orbits are left out and counted in `skipped`.
ClassValues dihedral_average(const ClassValues& values, std::size_t* skipped = nullptr);

struct DihedralError {
  double value = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

/// Mean of |v(Y) - v-bar(Y)| over keys with complete orbits.
DihedralError dihedral_error(const ClassValues& values);
DihedralError dihedral_error(const FreeEnergyTable& f);
DihedralError dihedral_error(const Interaction& c);

/// Mean |f_a(Y) - f_b(Y)| over the common keys. Throws std::runtime_error
/// when there are none.
double finite_volume_error(const FreeEnergyTable& a, const FreeEnergyTable& b);

struct ConvergenceRow {
  double cutoff = 0.0;
  double f = 0.0;      // mean |f - f_ref|
  double f_bar = 0.0;  // mean |f-bar - f-bar_ref|
  double c = 0.0;      // mean |c - c_ref|
  double c_bar = 0.0;  // mean |c-bar - c-bar_ref|
};

/// One row per table, compared against tables.at(reference) over the keys
/// common to all tables. Throws std::out_of_range if the reference is absent.
std::vector<ConvergenceRow> convergence_metrics(const std::map<double, FreeEnergyTable>& tables, double reference);

}  // namespace lgrg
