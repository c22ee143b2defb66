#pragma once

// Multilinear interactions over finite site sets in the lattice-gas basis
// n(Y) = prod n_i or the spin basis sigma(Y) = prod sigma_i, plus the free
// energy table f(X) and the subset-lattice transforms linking them.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "lgrg/lattice.hpp"

namespace lgrg {

enum class Basis { gas, spin };
enum class Scope { absolute, per_translation_class };

std::string to_string(Basis b);
std::string to_string(Scope s);
Basis parse_basis(const std::string& s);
Scope parse_scope(const std::string& s);

/// Thrown when a computation needs a value the caller did not supply.
class MissingDependency : public std::runtime_error {
 public:
  explicit MissingDependency(SiteSet missing);
  const SiteSet& missing() const noexcept { return missing_; }

 private:
  SiteSet missing_;
};

/// Coefficient table over site sets. Absent keys are zero; a coefficient that
/// becomes exactly 0 is erased. Keys of a per-translation-class table are
/// canonical translates, and every accessor canonicalizes its argument.
class Interaction {
 public:
  using Terms = std::map<SiteSet, double>;

  Interaction(Basis basis, Scope scope) : basis_(basis), scope_(scope) {}

  Basis basis() const noexcept { return basis_; }
  Scope scope() const noexcept { return scope_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  double coefficient(const SiteSet& y) const;
  void add(const SiteSet& y, double value);
  void set(const SiteSet& y, double value);

  /// Throws std::invalid_argument when basis or scope differ.
  Interaction& operator+=(const Interaction& other);

 private:
  SiteSet key(const SiteSet& y) const;

  Basis basis_;
  Scope scope_;
  Terms terms_;
};

Interaction operator+(Interaction a, const Interaction& b);

/// Free-form provenance attached to every table (L, C_B, beta, ...).
using Metadata = std::map<std::string, std::string>;

std::optional<double> meta_double(const Metadata& m, const std::string& key);
std::optional<long> meta_int(const Metadata& m, const std::string& key);

/// f(X) = Hbar(n^X) - Hbar(n^empty), keyed by canonical translate.
/// f(empty) is identically zero and never stored.
class FreeEnergyTable {
 public:
  using Entries = std::map<SiteSet, double>;

  FreeEnergyTable() = default;
  explicit FreeEnergyTable(Metadata meta) : meta_(std::move(meta)) {}

  /// Throws std::domain_error for the empty set.
  void set(const SiteSet& x, double f);
  /// Canonicalizes by translation before lookup. The empty set yields 0.
  std::optional<double> lookup(const SiteSet& x) const;
  bool contains(const SiteSet& x) const { return lookup(x).has_value(); }

  const Entries& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  Metadata& meta() noexcept { return meta_; }
  const Metadata& meta() const noexcept { return meta_; }

  /// Sorted-key merge. A key present in both with values differing by more
  /// than `tolerance` throws std::runtime_error.
  void merge(const FreeEnergyTable& other, double tolerance = 1e-9);

 private:
  Metadata meta_;
  Entries entries_;
};

using ValueLookup = std::function<std::optional<double>(const SiteSet&)>;

/// Largest set handled by the bitmask subset loops.
inline constexpr std::size_t kMaxSubsetSites = 30;

/// sum_Y c(Y) [Y subset of config] in the gas basis, or
/// sum_Y d(Y) prod_{i in Y} (1 - 2 [i in config]) in the spin basis.
/// Requires absolute scope.
double evaluate(const Interaction& h, const SiteSet& config);

/// c(X) = sum over nonempty Y subset of X of (-1)^{|X|-|Y|} f(Y).
/// Throws MissingDependency naming the first absent f(Y).
double mobius_invert(const ValueLookup& f, const SiteSet& x);
double mobius_invert(const FreeEnergyTable& f, const SiteSet& x);

/// f(X) = sum over nonempty Y subset of X of c(Y). Per-class tables are
/// looked up by canonical translate.
double mobius_forward(const Interaction& c, const SiteSet& x);

/// Exact change of basis via n = (1 - sigma)/2; absolute scope only.
Interaction gas_to_spin(const Interaction& h);
/// Exact change of basis via sigma = 1 - 2n; absolute scope only.
Interaction spin_to_gas(const Interaction& h);

/// Per-class gas coefficients c(X) for every key of the table.
Interaction gas_coefficients(const FreeEnergyTable& f);

}  // namespace lgrg
