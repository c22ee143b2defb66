#include "lgrg/commands.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "lgrg/diagnostics.hpp"
#include "lgrg/spinfit.hpp"
#include "lgrg/table_io.hpp"

namespace lgrg::cli {

OutputLock::OutputLock(const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path lock = dir / ".lgrg.lock";
  fd_ = ::open(lock.c_str(), O_CREAT | O_RDWR, 0644);
  if (fd_ < 0) throw std::runtime_error("cannot open lock file " + lock.string());
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    throw std::runtime_error("cannot lock " + lock.string());
  }
}

OutputLock::~OutputLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

bool write_if_changed(const fs::path& path, const std::string& text) {
  if (fs::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    const std::string current((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (current == text) return false;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
  return true;
}

const std::vector<std::pair<std::string, SiteSet>>& reported_couplings() {
  static const std::vector<std::pair<std::string, SiteSet>> list{
      {"d_nn", SiteSet{Site{0, 0}, Site{1, 0}}},
      {"d_nnn", SiteSet{Site{0, 0}, Site{1, 1}}},
      {"d_plaquette", SiteSet{Site{0, 0}, Site{0, 1}, Site{1, 0}, Site{1, 1}}},
  };
  return list;
}

namespace {

fs::path lock_dir_for(const fs::path& output) {
  return output.has_parent_path() ? output.parent_path() : fs::path(".");
}

std::string render(const SetTable& t) {
  std::ostringstream out;
  write_set_table(out, t);
  return out.str();
}

std::string render(const ColumnTable& t) {
  std::ostringstream out;
  write_column_table(out, t);
  return out.str();
}

void report_write(const fs::path& path, bool written) {
  if (written) {
    spdlog::info("wrote {}", path.string());
  } else {
    spdlog::info("{} is up to date", path.string());
  }
}

FreeEnergyTable read_free_energies(const fs::path& path) { return free_energies_from(read_set_table_file(path)); }

std::vector<SiteSet> classes_upto(double cutoff) {
  std::vector<SiteSet> out;
  for (const SymmetryClass& c : enumerate_classes(cutoff, Symmetry::translation)) out.push_back(c.representative);
  return out;
}

double meta_number(const FreeEnergyTable& t, const std::string& key, const fs::path& source) {
  const auto v = meta_double(t.meta(), key);
  if (!v) throw ConfigError(source.string() + " has no '" + key + "' metadata");
  return *v;
}

const std::vector<std::string> kResultKeys{"L", "C_B", "max_cardinality", "beta", "sweep", "engine"};

}  // namespace

int cmd_free_energies(const RunConfig& cfg, const fs::path& output) {
  cfg.validate();
  OutputLock lock(lock_dir_for(output));

  Metadata meta = cfg.metadata();
  meta["kind"] = "free_energies";
  FreeEnergyTable table(meta);
  double table_c = cfg.C;
  if (fs::exists(output)) {
    FreeEnergyTable existing = read_free_energies(output);
    for (const std::string& key : kResultKeys) {
      const auto a = existing.meta().find(key);
      const auto b = meta.find(key);
      const bool same = (a == existing.meta().end()) == (b == meta.end()) &&
                        (a == existing.meta().end() || a->second == b->second);
      if (!same) {
        throw ConfigError(output.string() + " was computed with a different '" + key +
                          "'; choose another output or remove it");
      }
    }
    table.merge(existing);
    if (auto c = meta_double(existing.meta(), "C")) table_c = std::max(table_c, *c);
    spdlog::info("resuming: {} entries already in {}", existing.size(), output.string());
  }

  std::vector<SymmetryClass> todo;
  const std::vector<SymmetryClass> classes = enumerate_classes(cfg.C, Symmetry::translation);
  for (const SymmetryClass& c : classes)
    if (!table.contains(c.representative)) todo.push_back(c);
  if (todo.empty() && fs::exists(output)) {
    spdlog::info("all {} classes present; nothing to do", classes.size());
    return kExitOk;
  }

  const Volume volume = Volume::square(cfg.L, cfg.sweep);
  const FreeEnergyTable fresh = free_energy_batch(todo, volume, cfg.policy(), Coupling(cfg.beta), cfg.jobs);
  table.merge(fresh);
  table.meta()["C"] = format_double(table_c);
  report_write(output, write_if_changed(output, render(to_set_table(table))));
  if (fresh.size() != todo.size()) {
    spdlog::error("{} of {} free energies failed", todo.size() - fresh.size(), todo.size());
    return kExitComputation;
  }
  return kExitOk;
}

int cmd_gas_coeffs(const fs::path& input, const fs::path& output) {
  const FreeEnergyTable f = read_free_energies(input);
  OutputLock lock(lock_dir_for(output));
  const Interaction c = gas_coefficients(f);
  Metadata meta = f.meta();
  meta["kind"] = "gas_coefficients";
  report_write(output, write_if_changed(output, render(to_set_table(c, meta))));
  return kExitOk;
}

int cmd_spin_coeffs(RunConfig cfg, const fs::path& input, const std::string& method, const fs::path& output) {
  const FreeEnergyTable f = read_free_energies(input);
  if (auto c = meta_double(f.meta(), "C")) cfg.C = *c;
  cfg.validate();
  if (method != "partial" && method != "uniform") throw ConfigError("method must be 'partial' or 'uniform'");
  OutputLock lock(lock_dir_for(output));

  const std::vector<SiteSet> ys = classes_upto(cfg.fit_hbar());
  const std::vector<SiteSet> xs = classes_upto(cfg.fit_f());
  Metadata meta = f.meta();
  meta["kind"] = "spin_coefficients";
  meta["method"] = method;
  meta["C_Hbar"] = format_double(cfg.fit_hbar());
  meta["C_f"] = format_double(cfg.fit_f());

  Interaction d(Basis::spin, Scope::per_translation_class);
  double epsilon = 0.0;
  if (method == "partial") {
    d = partially_exact(f, ys);
    epsilon = fit_error(d, xs, f);
  } else {
    const FitResult fit = uniformly_close({ys, xs, f}, {}, cfg.jobs);
    d = fit.d;
    epsilon = fit.epsilon;
    spdlog::info("simplex: {} iterations over {} distinct rows", fit.iterations, fit.distinct_rows);
  }
  meta["epsilon"] = format_double(epsilon);
  spdlog::info("{} fit: {} coefficients, epsilon = {}", method, d.size(), format_double(epsilon));
  report_write(output, write_if_changed(output, render(to_set_table(d, meta))));
  return kExitOk;
}

int cmd_spin_sweep(const RunConfig& cfg, const fs::path& input, const std::vector<std::string>& methods,
                   const std::vector<double>& c_hbar, const std::vector<double>& c_f, const fs::path& output) {
  const FreeEnergyTable f = read_free_energies(input);
  const double c_table = meta_number(f, "C", input);
  for (const auto& m : methods)
    if (m != "partial" && m != "uniform") throw ConfigError("unknown method '" + m + "'");
  for (double v : c_f)
    if (v > c_table) throw ConfigError("C_f " + format_double(v) + " exceeds the table's C " + format_double(c_table));
  OutputLock lock(lock_dir_for(output));

  ColumnTable out;
  out.meta = f.meta();
  out.meta["kind"] = "spin_sweep";
  out.header = {"method", "C_Hbar", "C_f", "epsilon"};
  for (const auto& [name, set] : reported_couplings()) out.header.push_back(name);

  for (const std::string& method : methods) {
    for (double ch : c_hbar) {
      const std::vector<SiteSet> ys = classes_upto(ch);
      for (double cf : c_f) {
        if (ch > cf) continue;
        const std::vector<SiteSet> xs = classes_upto(cf);
        Interaction d(Basis::spin, Scope::per_translation_class);
        double epsilon = 0.0;
        if (method == "partial") {
          d = partially_exact(f, ys);
          epsilon = fit_error(d, xs, f);
        } else {
          const FitResult fit = uniformly_close({ys, xs, f}, {}, cfg.jobs);
          d = fit.d;
          epsilon = fit.epsilon;
        }
        std::vector<std::string> row{method, format_double(ch), format_double(cf), format_double(epsilon)};
        for (const auto& [name, set] : reported_couplings()) row.push_back(format_double(d.coefficient(set)));
        out.rows.push_back(std::move(row));
        spdlog::info("{} C_Hbar={} C_f={}: epsilon={}", method, ch, cf, format_double(epsilon));
      }
    }
  }
  report_write(output, write_if_changed(output, render(out)));
  return kExitOk;
}

int cmd_decay(const fs::path& input, bool dihedral, const std::vector<double>& thresholds, const fs::path& output) {
  const SetTable t = read_set_table_file(input);
  const Interaction c = interaction_from(t);
  if (c.empty()) throw ConfigError(input.string() + " holds no coefficients");
  OutputLock lock(lock_dir_for(output));
  const DecayReport r = decay_report(c, dihedral ? Symmetry::dihedral : Symmetry::translation);

  ColumnTable out;
  out.meta = t.meta;
  out.meta["kind"] = "decay";
  out.meta["mode"] = dihedral ? "dihedral" : "translation";
  out.meta["tie_break"] = "lexicographic";
  out.meta["norm_tail"] = format_double(norm_tail(c));
  const auto counts = threshold_counts(r, thresholds);
  for (std::size_t i = 0; i < thresholds.size(); ++i) out.meta["count_above_" + format_double(thresholds[i])] = std::to_string(counts[i]);
  out.header = {"n", "magnitude", "tail", "set"};
  for (std::size_t n = 0; n < r.ordered.size(); ++n) {
    out.rows.push_back({std::to_string(n + 1), format_double(r.ordered[n].magnitude), format_double(r.tails[n]),
                        to_string(r.ordered[n].set)});
  }
  report_write(output, write_if_changed(output, render(out)));
  return kExitOk;
}

int cmd_dihedral(const std::vector<fs::path>& inputs, const fs::path& output) {
  std::vector<std::pair<double, double>> rows;
  for (const fs::path& p : inputs) {
    const FreeEnergyTable f = read_free_energies(p);
    rows.emplace_back(meta_number(f, "C_B", p), dihedral_error(f).value);
  }
  std::sort(rows.begin(), rows.end());
  OutputLock lock(lock_dir_for(output));
  ColumnTable out;
  out.meta["kind"] = "dihedral_error";
  out.header = {"C_B", "value"};
  for (const auto& [cb, v] : rows) out.rows.push_back({format_double(cb), format_double(v)});
  report_write(output, write_if_changed(output, render(out)));
  return kExitOk;
}

int cmd_fve(const std::vector<fs::path>& inputs, const fs::path& output) {
  std::map<long, FreeEnergyTable> by_l;
  for (const fs::path& p : inputs) {
    FreeEnergyTable f = read_free_energies(p);
    const auto l = meta_int(f.meta(), "L");
    if (!l) throw ConfigError(p.string() + " has no 'L' metadata");
    if (!by_l.emplace(*l, std::move(f)).second) throw ConfigError("two inputs share L=" + std::to_string(*l));
  }
  if (by_l.size() < 2) throw ConfigError("fve needs tables for at least two values of L");
  OutputLock lock(lock_dir_for(output));
  ColumnTable out;
  out.meta["kind"] = "finite_volume_error";
  out.header = {"L", "value"};
  for (auto it = std::next(by_l.begin()); it != by_l.end(); ++it) {
    out.rows.push_back({std::to_string(it->first), format_double(finite_volume_error(it->second, std::prev(it)->second))});
  }
  report_write(output, write_if_changed(output, render(out)));
  return kExitOk;
}

int cmd_convergence(const std::vector<fs::path>& inputs, std::optional<double> reference, const fs::path& output) {
  std::map<double, FreeEnergyTable> tables;
  for (const fs::path& p : inputs) {
    FreeEnergyTable f = read_free_energies(p);
    const double cb = meta_number(f, "C_B", p);
    if (!tables.emplace(cb, std::move(f)).second) throw ConfigError("two inputs share C_B=" + format_double(cb));
  }
  if (tables.empty()) throw ConfigError("convergence needs at least one table");
  const double ref = reference.value_or(tables.rbegin()->first);
  if (!tables.count(ref)) throw ConfigError("no input has the reference C_B " + format_double(ref));
  OutputLock lock(lock_dir_for(output));
  ColumnTable out;
  out.meta["kind"] = "convergence";
  out.meta["reference_C_B"] = format_double(ref);
  out.header = {"C_B", "f", "f_bar", "c", "c_bar"};
  for (const ConvergenceRow& r : convergence_metrics(tables, ref)) {
    out.rows.push_back({format_double(r.cutoff), format_double(r.f), format_double(r.f_bar), format_double(r.c),
                        format_double(r.c_bar)});
  }
  report_write(output, write_if_changed(output, render(out)));
  return kExitOk;
}

int cmd_oracle_exact(const RunConfig& cfg, int nx, int ny, const fs::path& output) {
  cfg.validate();
  if (nx <= 0 || ny <= 0) throw ConfigError("oracle volume needs nx, ny >= 1");
  const Volume volume = Volume::rectangle(nx, ny);
  if (volume.sites().size() > kMaxOracleSpins) {
    throw ConfigError("oracle volume has " + std::to_string(volume.sites().size()) + " spins; the limit is " +
                      std::to_string(kMaxOracleSpins));
  }
  OutputLock lock(lock_dir_for(output));
  const Coupling coupling(cfg.beta);
  Metadata meta;
  meta["kind"] = "free_energies";
  meta["source"] = "oracle";
  meta["nx"] = std::to_string(nx);
  meta["ny"] = std::to_string(ny);
  meta["beta"] = format_double(cfg.beta);
  meta["C"] = format_double(cfg.C);
  FreeEnergyTable table(meta);
  const double h0 = exact_hbar({}, volume, coupling, cfg.jobs);
  for (const SiteSet& rep : classes_upto(cfg.C)) {
    bool fits = true;
    for (const Site& s : rep) fits = fits && s.x < nx && s.y < ny;
    if (!fits) {
      spdlog::info("class {} does not fit the {}x{} oracle volume; skipped", to_string(rep), nx, ny);
      continue;
    }
    table.set(rep, exact_hbar(rep, volume, coupling, cfg.jobs) - h0);
  }
  report_write(output, write_if_changed(output, render(to_set_table(table))));
  return kExitOk;
}

int cmd_oracle_mc(const RunConfig& cfg, int nx, int ny, const SiteSet& x, const McOptions& mc, const fs::path& output) {
  cfg.validate();
  if (x.empty()) throw ConfigError("--set must name at least one block");
  const Volume volume = Volume::rectangle(nx, ny);
  std::vector<Block> window;
  for (const Site& s : x) {
    if (!volume.sweep_index(Block{s.x, s.y})) throw ConfigError("block " + to_string(SiteSet{s}) + " is outside the volume");
    window.push_back(Block{s.x, s.y});
  }
  OutputLock lock(lock_dir_for(output));
  const McResult r = metropolis_f(window, volume, Coupling(cfg.beta), mc);

  SetTable out;
  out.meta["kind"] = "free_energies";
  out.meta["source"] = "oracle_mc";
  out.meta["nx"] = std::to_string(nx);
  out.meta["ny"] = std::to_string(ny);
  out.meta["beta"] = format_double(cfg.beta);
  out.meta["samples"] = std::to_string(r.sweeps);
  out.meta["seed"] = std::to_string(mc.seed);
  out.meta["chains"] = std::to_string(mc.chains);
  out.meta["acceptance"] = format_double(r.acceptance);
  bool complete = true;
  for (const McEstimate& e : r.estimates) {
    if (!e.f) {
      complete = false;
      continue;
    }
    out.rows.emplace_back(e.y, *e.f);
    out.meta["std_error" + to_string(e.y)] = format_double(e.std_error);
  }
  report_write(output, write_if_changed(output, render(out)));
  return complete ? kExitOk : kExitComputation;
}

}  // namespace lgrg::cli
