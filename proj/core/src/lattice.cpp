#include "lgrg/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

namespace lgrg {

SiteSet::SiteSet(std::initializer_list<Site> sites) : SiteSet(std::vector<Site>(sites)) {}

SiteSet::SiteSet(std::vector<Site> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end()) {
    throw std::invalid_argument("SiteSet: duplicate site");
  }
}

bool SiteSet::contains(Site s) const { return std::binary_search(sites_.begin(), sites_.end(), s); }

bool SiteSet::is_subset_of(const SiteSet& other) const {
  return std::includes(other.sites_.begin(), other.sites_.end(), sites_.begin(), sites_.end());
}

SiteSet SiteSet::translated(std::int32_t dx, std::int32_t dy) const {
  SiteSet out;
  out.sites_.reserve(sites_.size());
  for (const Site& s : sites_) out.sites_.push_back({s.x + dx, s.y + dy});
  return out;  // translation preserves order
}

SiteSet SiteSet::subset(std::uint64_t mask) const {
  SiteSet out;
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    if (mask & (std::uint64_t{1} << k)) out.sites_.push_back(sites_[k]);
  }
  return out;
}

SiteSet SiteSet::with(Site s) const {
  SiteSet out = *this;
  auto it = std::lower_bound(out.sites_.begin(), out.sites_.end(), s);
  if (it != out.sites_.end() && *it == s) return out;
  out.sites_.insert(it, s);
  return out;
}

std::size_t SiteSetHash::operator()(const SiteSet& s) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (const Site& site : s) {
    const auto packed = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(site.x)) << 32) |
                        static_cast<std::uint32_t>(site.y);
    h ^= packed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string to_string(const SiteSet& s) {
  std::string out = "{";
  bool first = true;
  for (const Site& site : s) {
    if (!first) out += ',';
    first = false;
    out += '(';
    out += std::to_string(site.x);
    out += ',';
    out += std::to_string(site.y);
    out += ')';
  }
  out += '}';
  return out;
}

namespace {

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::int32_t integer() {
    skip_space();
    std::int32_t v = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{}) fail("expected integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }
  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse_site_set: " + what + " at offset " + std::to_string(pos_) + " in '" +
                                std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

SiteSet parse_site_set(std::string_view text) {
  Scanner in(text);
  in.expect('{');
  std::vector<Site> sites;
  if (!in.peek('}')) {
    do {
      in.expect('(');
      Site s;
      s.x = in.integer();
      in.expect(',');
      s.y = in.integer();
      in.expect(')');
      sites.push_back(s);
      if (!in.peek(',')) break;
      in.expect(',');
    } while (true);
  }
  in.expect('}');
  if (!in.at_end()) in.fail("trailing characters");
  return SiteSet(std::move(sites));
}

ExactSize exact_size_measure(const SiteSet& y) {
  if (y.empty()) throw std::domain_error("size measure of the empty set");
  std::int64_t sx = 0, sy = 0, sq = 0;
  for (const Site& s : y) {
    sx += s.x;
    sy += s.y;
    sq += std::int64_t{s.x} * s.x + std::int64_t{s.y} * s.y;
  }
  const auto n = static_cast<std::int64_t>(y.size());
  return {n * sq - sx * sx - sy * sy, n};
}

double size_measure(const SiteSet& y) { return exact_size_measure(y).value(); }

SiteSet canonical_translate(const SiteSet& y) {
  if (y.empty()) return y;
  std::int32_t mx = std::numeric_limits<std::int32_t>::max();
  std::int32_t my = mx;
  for (const Site& s : y) {
    mx = std::min(mx, s.x);
    my = std::min(my, s.y);
  }
  return y.translated(-mx, -my);
}

Site dihedral_image(Site s, int g) {
  switch (g) {
    case 0: return {s.x, s.y};
    case 1: return {-s.y, s.x};
    case 2: return {-s.x, -s.y};
    case 3: return {s.y, -s.x};
    case 4: return {-s.x, s.y};
    case 5: return {s.x, -s.y};
    case 6: return {s.y, s.x};
    case 7: return {-s.y, -s.x};
    default: throw std::out_of_range("dihedral group element must be in 0..7");
  }
}

SiteSet dihedral_image(const SiteSet& y, int g) {
  std::vector<Site> out;
  out.reserve(y.size());
  for (const Site& s : y) out.push_back(dihedral_image(s, g));
  return SiteSet(std::move(out));
}

namespace {

// Reading order: rows by increasing y, sites by increasing x within a row.
std::vector<std::pair<std::int32_t, std::int32_t>> reading_key(const SiteSet& s) {
  std::vector<std::pair<std::int32_t, std::int32_t>> key;
  key.reserve(s.size());
  for (const Site& p : s) key.emplace_back(p.y, p.x);
  std::sort(key.begin(), key.end());
  return key;
}

bool reading_less(const SiteSet& a, const SiteSet& b) { return reading_key(a) < reading_key(b); }

}  // namespace

SiteSet canonical_dihedral(const SiteSet& y) {
  if (y.empty()) throw std::domain_error("canonical_dihedral of the empty set");
  SiteSet best = canonical_translate(y);
  for (int g = 1; g < 8; ++g) {
    SiteSet img = canonical_translate(dihedral_image(y, g));
    if (reading_less(img, best)) best = std::move(img);
  }
  return best;
}

std::vector<SiteSet> dihedral_orbit(const SiteSet& y) {
  if (y.empty()) throw std::domain_error("dihedral_orbit of the empty set");
  std::vector<SiteSet> orbit;
  for (int g = 0; g < 8; ++g) orbit.push_back(canonical_translate(dihedral_image(y, g)));
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return orbit;
}

bool class_order_less(const SiteSet& a, const SiteSet& b) {
  const ExactSize sa = exact_size_measure(a);
  const ExactSize sb = exact_size_measure(b);
  if (sa < sb) return true;
  if (sb < sa) return false;
  if (a.size() != b.size()) return a.size() < b.size();
  return reading_less(a, b);
}

void for_each_translation_class(double cutoff, const std::function<bool(const SiteSet&)>& visit) {
  if (!(cutoff >= 0.0)) throw std::domain_error("enumeration cutoff must be nonnegative");
  std::vector<SiteSet> level{SiteSet{{0, 0}}};
  while (!level.empty()) {
    for (const SiteSet& rep : level) {
      if (!visit(rep)) return;
    }
    // Adding q to a set of n sites with centroid c raises the size by
    // n/(n+1) * |q - c|^2, which bounds how far the new site can be.
    std::set<SiteSet> next;
    for (const SiteSet& rep : level) {
      const double n = static_cast<double>(rep.size());
      double cx = 0.0, cy = 0.0;
      for (const Site& s : rep) {
        cx += s.x;
        cy += s.y;
      }
      cx /= n;
      cy /= n;
      const double room = cutoff + kCutoffSlack - size_measure(rep);
      if (room < 0.0) continue;
      const double reach2 = room * (n + 1.0) / n;
      const auto reach = static_cast<std::int32_t>(std::ceil(std::sqrt(reach2)));
      const auto x0 = static_cast<std::int32_t>(std::floor(cx));
      const auto y0 = static_cast<std::int32_t>(std::floor(cy));
      for (std::int32_t qx = x0 - reach; qx <= x0 + reach + 1; ++qx) {
        for (std::int32_t qy = y0 - reach; qy <= y0 + reach + 1; ++qy) {
          const double dx = qx - cx, dy = qy - cy;
          if (dx * dx + dy * dy > reach2) continue;
          const Site q{qx, qy};
          if (rep.contains(q)) continue;
          SiteSet grown = rep.with(q);
          if (!within_cutoff(size_measure(grown), cutoff)) continue;
          next.insert(canonical_translate(grown));
        }
      }
    }
    level.assign(next.begin(), next.end());
  }
}

std::vector<SymmetryClass> enumerate_classes(double cutoff, Symmetry mode, std::size_t max_classes) {
  std::vector<SiteSet> reps;
  for_each_translation_class(cutoff, [&](const SiteSet& rep) {
    reps.push_back(rep);
    if (max_classes != 0 && mode == Symmetry::translation && reps.size() > max_classes) {
      throw EnumerationLimitExceeded("more than " + std::to_string(max_classes) + " classes below cutoff " +
                                     std::to_string(cutoff));
    }
    return true;
  });

  std::vector<SymmetryClass> out;
  if (mode == Symmetry::translation) {
    out.reserve(reps.size());
    for (SiteSet& r : reps) out.push_back({std::move(r), 1});
  } else {
    std::set<SiteSet> seen;
    for (const SiteSet& r : reps) {
      SiteSet canon = canonical_dihedral(r);
      if (seen.insert(canon).second) {
        const int orbit = static_cast<int>(dihedral_orbit(canon).size());
        out.push_back({std::move(canon), orbit});
      }
    }
    if (max_classes != 0 && out.size() > max_classes) {
      throw EnumerationLimitExceeded("more than " + std::to_string(max_classes) + " dihedral classes");
    }
  }
  std::sort(out.begin(), out.end(), [](const SymmetryClass& a, const SymmetryClass& b) {
    return class_order_less(a.representative, b.representative);
  });
  return out;
}

}  // namespace lgrg
