#pragma once

// Geometry of the square lattice: finite site sets, translation and dihedral
// canonical forms, the centroid size measure, and enumeration of symmetry
// classes below a size cutoff.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lgrg {

struct Site {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr auto operator<=>(const Site&, const Site&) = default;
};

/// Finite set of lattice sites, stored sorted (x first, then y) without
/// duplicates. The empty set is a valid value.
class SiteSet {
 public:
  using const_iterator = std::vector<Site>::const_iterator;

  SiteSet() = default;
  SiteSet(std::initializer_list<Site> sites);
  /// Sorts the input. Throws std::invalid_argument on duplicate sites.
  explicit SiteSet(std::vector<Site> sites);

  const std::vector<Site>& sites() const noexcept { return sites_; }
  std::size_t size() const noexcept { return sites_.size(); }
  bool empty() const noexcept { return sites_.empty(); }
  const Site& operator[](std::size_t i) const { return sites_[i]; }
  const_iterator begin() const noexcept { return sites_.begin(); }
  const_iterator end() const noexcept { return sites_.end(); }

  bool contains(Site s) const;
  bool is_subset_of(const SiteSet& other) const;
  SiteSet translated(std::int32_t dx, std::int32_t dy) const;
  /// Subset selected by the bits of `mask` (bit k picks sites()[k]).
  SiteSet subset(std::uint64_t mask) const;
  SiteSet with(Site s) const;

  friend auto operator<=>(const SiteSet&, const SiteSet&) = default;
  friend bool operator==(const SiteSet&, const SiteSet&) = default;

 private:
  std::vector<Site> sites_;
};

struct SiteSetHash {
  std::size_t operator()(const SiteSet& s) const noexcept;
};

/// `{(x1,y1),(x2,y2),...}` in canonical order, no whitespace.
std::string to_string(const SiteSet& s);
/// Inverse of to_string. Accepts optional whitespace; throws
/// std::invalid_argument on malformed input.
SiteSet parse_site_set(std::string_view text);

/// Exact value of the size measure as the fraction num/den, den = |Y|.
struct ExactSize {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator<(const ExactSize& a, const ExactSize& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator==(const ExactSize& a, const ExactSize& b) { return a.num * b.den == b.num * a.den; }
};

/// Sum of squared distances of the sites to their centroid.
/// Throws std::domain_error for the empty set.
double size_measure(const SiteSet& y);
ExactSize exact_size_measure(const SiteSet& y);

/// Slack absorbed when comparing a size against a real cutoff, so that a
/// cutoff typed as a decimal (4/3 as 1.3333333333333333) keeps boundary sets.
inline constexpr double kCutoffSlack = 1e-9;
inline bool within_cutoff(double size, double cutoff) { return size <= cutoff + kCutoffSlack; }

/// Translate with minimum x and minimum y both at 0. Empty set maps to itself.
SiteSet canonical_translate(const SiteSet& y);

/// Image of `s` under element `g` (0..7) of the dihedral group of the square.
Site dihedral_image(Site s, int g);
SiteSet dihedral_image(const SiteSet& y, int g);

/// Canonical translate of the 8 dihedral images that comes first in reading
/// order (sites compared row by row: y first, then x).
SiteSet canonical_dihedral(const SiteSet& y);

/// Distinct canonical translates of the 8 dihedral images, sorted.
std::vector<SiteSet> dihedral_orbit(const SiteSet& y);

enum class Symmetry { translation, dihedral };

struct SymmetryClass {
  SiteSet representative;
  int orbit_size = 1;
};

/// Deterministic ordering used for every class listing and table dump:
/// by size measure, then cardinality, then site sequence in reading order.
bool class_order_less(const SiteSet& a, const SiteSet& b);

class EnumerationLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One representative per symmetry class among nonempty sets with size
/// measure <= cutoff, sorted by class_order_less. `max_classes` of 0 means
/// unlimited; otherwise EnumerationLimitExceeded is thrown when passed.
std::vector<SymmetryClass> enumerate_classes(double cutoff, Symmetry mode, std::size_t max_classes = 0);

/// Streams canonical translation-class representatives, grouped by
/// cardinality. Returning false from `visit` stops the enumeration.
void for_each_translation_class(double cutoff, const std::function<bool(const SiteSet&)>& visit);

}  // namespace lgrg
