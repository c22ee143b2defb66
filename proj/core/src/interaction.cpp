#include "lgrg/interaction.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace lgrg {

std::string to_string(Basis b) { return b == Basis::gas ? "gas" : "spin"; }
std::string to_string(Scope s) { return s == Scope::absolute ? "absolute" : "per_translation_class"; }

Basis parse_basis(const std::string& s) {
  if (s == "gas") return Basis::gas;
  if (s == "spin") return Basis::spin;
  throw std::invalid_argument("unknown basis '" + s + "'");
}

Scope parse_scope(const std::string& s) {
  if (s == "absolute") return Scope::absolute;
  if (s == "per_translation_class") return Scope::per_translation_class;
  throw std::invalid_argument("unknown scope '" + s + "'");
}

MissingDependency::MissingDependency(SiteSet missing)
    : std::runtime_error("missing required value for " + to_string(missing)), missing_(std::move(missing)) {}

SiteSet Interaction::key(const SiteSet& y) const {
  return scope_ == Scope::per_translation_class ? canonical_translate(y) : y;
}

double Interaction::coefficient(const SiteSet& y) const {
  auto it = terms_.find(key(y));
  return it == terms_.end() ? 0.0 : it->second;
}

void Interaction::add(const SiteSet& y, double value) {
  if (value == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(key(y), value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Interaction::set(const SiteSet& y, double value) {
  if (value == 0.0) {
    terms_.erase(key(y));
  } else {
    terms_[key(y)] = value;
  }
}

Interaction& Interaction::operator+=(const Interaction& other) {
  if (other.basis_ != basis_) throw std::invalid_argument("mixed-basis interaction arithmetic");
  if (other.scope_ != scope_) throw std::invalid_argument("mixed-scope interaction arithmetic");
  for (const auto& [y, v] : other.terms_) add(y, v);
  return *this;
}

Interaction operator+(Interaction a, const Interaction& b) {
  a += b;
  return a;
}

std::optional<double> meta_double(const Metadata& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return std::stod(it->second);
}

std::optional<long> meta_int(const Metadata& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return std::stol(it->second);
}

void FreeEnergyTable::set(const SiteSet& x, double f) {
  if (x.empty()) throw std::domain_error("f(empty) is identically zero and is not stored");
  entries_[canonical_translate(x)] = f;
}

std::optional<double> FreeEnergyTable::lookup(const SiteSet& x) const {
  if (x.empty()) return 0.0;
  auto it = entries_.find(canonical_translate(x));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void FreeEnergyTable::merge(const FreeEnergyTable& other, double tolerance) {
  for (const auto& [x, f] : other.entries_) {
    auto [it, inserted] = entries_.try_emplace(x, f);
    if (!inserted && std::abs(it->second - f) > tolerance) {
      throw std::runtime_error("conflicting free energies for " + to_string(x));
    }
  }
}

namespace {

void require_subset_loop(const SiteSet& x) {
  if (x.size() > kMaxSubsetSites) {
    throw std::domain_error("subset enumeration limited to " + std::to_string(kMaxSubsetSites) + " sites");
  }
}

std::uint64_t membership_mask(const SiteSet& x, const SiteSet& config) {
  std::uint64_t mask = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (config.contains(x[k])) mask |= std::uint64_t{1} << k;
  }
  return mask;
}

}  // namespace

double evaluate(const Interaction& h, const SiteSet& config) {
  if (h.scope() != Scope::absolute) throw std::invalid_argument("evaluate requires an absolute-scope interaction");
  double total = 0.0;
  for (const auto& [y, v] : h.terms()) {
    if (h.basis() == Basis::gas) {
      if (y.is_subset_of(config)) total += v;
    } else {
      const int flipped = std::popcount(membership_mask(y, config));
      total += (flipped % 2 == 0) ? v : -v;
    }
  }
  return total;
}

double mobius_invert(const ValueLookup& f, const SiteSet& x) {
  if (x.empty()) throw std::domain_error("mobius_invert of the empty set");
  require_subset_loop(x);
  const std::uint64_t full = (std::uint64_t{1} << x.size()) - 1;
  double c = 0.0;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    const SiteSet y = x.subset(mask);
    const std::optional<double> fy = f(y);
    if (!fy) throw MissingDependency(canonical_translate(y));
    const int gap = static_cast<int>(x.size()) - std::popcount(mask);
    c += (gap % 2 == 0) ? *fy : -*fy;
  }
  return c;
}

double mobius_invert(const FreeEnergyTable& f, const SiteSet& x) {
  return mobius_invert([&f](const SiteSet& y) { return f.lookup(y); }, x);
}

double mobius_forward(const Interaction& c, const SiteSet& x) {
  require_subset_loop(x);
  const std::uint64_t full = x.empty() ? 0 : (std::uint64_t{1} << x.size()) - 1;
  double f = 0.0;
  for (std::uint64_t mask = 1; mask <= full; ++mask) f += c.coefficient(x.subset(mask));
  return f;
}

Interaction gas_to_spin(const Interaction& h) {
  if (h.basis() != Basis::gas) throw std::invalid_argument("gas_to_spin expects a gas-basis interaction");
  if (h.scope() != Scope::absolute) throw std::invalid_argument("gas_to_spin expects absolute scope");
  // n(X) = 2^{-|X|} prod (1 - sigma_i) = 2^{-|X|} sum_{Y subset X} (-1)^{|Y|} sigma(Y)
  Interaction out(Basis::spin, Scope::absolute);
  for (const auto& [x, c] : h.terms()) {
    require_subset_loop(x);
    const double scaled = std::ldexp(c, -static_cast<int>(x.size()));
    const std::uint64_t full = x.empty() ? 0 : (std::uint64_t{1} << x.size()) - 1;
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
      out.add(x.subset(mask), std::popcount(mask) % 2 == 0 ? scaled : -scaled);
    }
  }
  return out;
}

Interaction spin_to_gas(const Interaction& h) {
  if (h.basis() != Basis::spin) throw std::invalid_argument("spin_to_gas expects a spin-basis interaction");
  if (h.scope() != Scope::absolute) throw std::invalid_argument("spin_to_gas expects absolute scope");
  // sigma(Y) = prod (1 - 2 n_i) = sum_{X subset Y} (-2)^{|X|} n(X)
  Interaction out(Basis::gas, Scope::absolute);
  for (const auto& [y, d] : h.terms()) {
    require_subset_loop(y);
    const std::uint64_t full = y.empty() ? 0 : (std::uint64_t{1} << y.size()) - 1;
    for (std::uint64_t mask = 0; mask <= full; ++mask) {
      const int k = std::popcount(mask);
      const double scaled = std::ldexp(d, k);
      out.add(y.subset(mask), k % 2 == 0 ? scaled : -scaled);
    }
  }
  return out;
}

Interaction gas_coefficients(const FreeEnergyTable& f) {
  Interaction c(Basis::gas, Scope::per_translation_class);
  for (const auto& [x, value] : f.entries()) c.set(x, mobius_invert(f, x));
  return c;
}

}  // namespace lgrg
