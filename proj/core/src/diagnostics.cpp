#include "lgrg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

namespace lgrg {

namespace {

ClassValues values_of(const FreeEnergyTable& f) { return {f.entries().begin(), f.entries().end()}; }

ClassValues values_of(const Interaction& c) {
  if (c.scope() != Scope::per_translation_class) throw std::invalid_argument("expected a per-class table");
  ClassValues out;
  for (const auto& [y, v] : c.terms())
    if (!y.empty()) out.emplace(y, v);
  return out;
}

double mean_abs_difference(const ClassValues& a, const ClassValues& b, const std::set<SiteSet>& keys) {
  if (keys.empty()) return 0.0;
  double sum = 0.0;
  for (const SiteSet& k : keys) sum += std::abs(a.at(k) - b.at(k));
  return sum / static_cast<double>(keys.size());
}

}  // namespace

DecayReport decay_report(const ClassValues& values, Symmetry mode) {
  DecayReport r;
  if (mode == Symmetry::translation) {
    for (const auto& [y, v] : values) r.ordered.push_back({y, std::abs(v)});
  } else {
    std::map<SiteSet, std::pair<double, std::size_t>> by_class;
    for (const auto& [y, v] : values) {
      auto& slot = by_class[canonical_dihedral(y)];
      slot.first += v;
      ++slot.second;
    }
    for (const auto& [rep, acc] : by_class) {
      r.ordered.push_back({rep, std::abs(acc.first / static_cast<double>(acc.second))});
    }
  }
  std::sort(r.ordered.begin(), r.ordered.end(), [](const DecayEntry& a, const DecayEntry& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return a.set < b.set;
  });
  r.tails.assign(r.ordered.size(), 0.0);
  double tail = 0.0;
  for (std::size_t n = r.ordered.size(); n-- > 0;) {
    tail = tail + r.ordered[n].magnitude;
    r.tails[n] = tail;
  }
  return r;
}

DecayReport decay_report(const Interaction& c, Symmetry mode) { return decay_report(values_of(c), mode); }

std::vector<std::size_t> threshold_counts(const DecayReport& report, const std::vector<double>& thresholds) {
  std::vector<std::size_t> out;
  for (double t : thresholds) {
    std::size_t n = 0;
    for (const DecayEntry& e : report.ordered)
      if (e.magnitude > t) ++n;
    out.push_back(n);
  }
  return out;
}

double norm_tail(const Interaction& c) {
  if (c.scope() != Scope::per_translation_class) throw std::invalid_argument("norm_tail expects a per-class table");
  double sum = 0.0;
  for (const auto& [y, v] : c.terms()) sum += std::abs(v) * static_cast<double>(y.size());
  return sum;
}

ClassValues dihedral_average(const ClassValues& values, std::size_t* skipped) {
  ClassValues out;
  std::size_t missing = 0;
  for (const auto& [y, v] : values) {
    const std::vector<SiteSet> orbit = dihedral_orbit(y);
    double sum = 0.0;
    bool complete = true;
    for (const SiteSet& member : orbit) {
      auto it = values.find(member);
      if (it == values.end()) {
        complete = false;
        break;
      }
      sum += it->second;
    }
    if (complete) {
      out.emplace(y, sum / static_cast<double>(orbit.size()));
    } else {
      ++missing;
    }
  }
  if (skipped) *skipped = missing;
  return out;
}

DihedralError dihedral_error(const ClassValues& values) {
  DihedralError e;
  const ClassValues avg = dihedral_average(values, &e.skipped);
  if (e.skipped > 0) spdlog::warn("dihedral error: skipped {} entries with incomplete orbits", e.skipped);
  double sum = 0.0;
  for (const auto& [y, vbar] : avg) sum += std::abs(values.at(y) - vbar);
  e.used = avg.size();
  e.value = e.used == 0 ? 0.0 : sum / static_cast<double>(e.used);
  return e;
}

DihedralError dihedral_error(const FreeEnergyTable& f) { return dihedral_error(values_of(f)); }
DihedralError dihedral_error(const Interaction& c) { return dihedral_error(values_of(c)); }

double finite_volume_error(const FreeEnergyTable& a, const FreeEnergyTable& b) {
  const ClassValues va = values_of(a), vb = values_of(b);
  std::set<SiteSet> common;
  for (const auto& [y, v] : va)
    if (vb.count(y)) common.insert(y);
  if (common.empty()) throw std::runtime_error("finite-volume error: tables share no keys");
  if (common.size() != va.size() || common.size() != vb.size()) {
    spdlog::info("finite-volume error: using {} common keys ({} vs {} entries)", common.size(), va.size(), vb.size());
  }
  return mean_abs_difference(va, vb, common);
}

std::vector<ConvergenceRow> convergence_metrics(const std::map<double, FreeEnergyTable>& tables, double reference) {
  const FreeEnergyTable& ref = tables.at(reference);
  std::set<SiteSet> common;
  for (const auto& [y, v] : ref.entries()) common.insert(y);
  for (const auto& [cb, t] : tables) {
    for (auto it = common.begin(); it != common.end();) {
      it = t.entries().count(*it) ? std::next(it) : common.erase(it);
    }
  }
  if (common.empty()) throw std::runtime_error("convergence metrics: tables share no keys");

  struct Derived {
    ClassValues f, f_bar, c, c_bar;
  };
  auto derive = [&](const FreeEnergyTable& t) {
    Derived d;
    FreeEnergyTable restricted(t.meta());
    for (const SiteSet& y : common) {
      d.f.emplace(y, *t.lookup(y));
      restricted.set(y, *t.lookup(y));
    }
    std::size_t no_coefficient = 0;
    for (const SiteSet& y : common) {
      try {
        d.c.emplace(y, mobius_invert(restricted, y));
      } catch (const MissingDependency&) {
        ++no_coefficient;
      }
    }
    if (no_coefficient > 0) spdlog::warn("convergence metrics: {} keys lack subsets; c skipped for them", no_coefficient);
    d.f_bar = dihedral_average(d.f);
    d.c_bar = dihedral_average(d.c);
    return d;
  };
  auto keys_of = [](const ClassValues& a, const ClassValues& b) {
    std::set<SiteSet> k;
    for (const auto& [y, v] : a)
      if (b.count(y)) k.insert(y);
    return k;
  };

  const Derived r = derive(ref);
  std::vector<ConvergenceRow> rows;
  for (const auto& [cb, t] : tables) {
    const Derived d = derive(t);
    ConvergenceRow row;
    row.cutoff = cb;
    row.f = mean_abs_difference(d.f, r.f, keys_of(d.f, r.f));
    row.f_bar = mean_abs_difference(d.f_bar, r.f_bar, keys_of(d.f_bar, r.f_bar));
    row.c = mean_abs_difference(d.c, r.c, keys_of(d.c, r.c));
    row.c_bar = mean_abs_difference(d.c_bar, r.c_bar, keys_of(d.c_bar, r.c_bar));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lgrg
