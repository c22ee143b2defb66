#include "lgrg/table_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

namespace lgrg {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_set_table(std::ostream& out, const SetTable& table) {
  for (const auto& [k, v] : table.meta) out << "# " << k << '=' << v << '\n';
  out << "set,value\n";
  for (const auto& [set, value] : table.rows) out << '"' << to_string(set) << "\"," << format_double(value) << '\n';
}

void write_column_table(std::ostream& out, const ColumnTable& table) {
  auto cell = [&out](const std::string& text) {
    if (text.find(',') != std::string::npos) {
      out << '"' << text << '"';
    } else {
      out << text;
    }
  };
  for (const auto& [k, v] : table.meta) out << "# " << k << '=' << v << '\n';
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out << ',';
    cell(table.header[c]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      cell(row[c]);
    }
    out << '\n';
  }
}

namespace {

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("table line " + std::to_string(line_no) + ": " + what);
}

double parse_value(const std::string& text, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) bad_line(line_no, "bad value '" + text + "'");
  return v;
}

}  // namespace

SetTable read_set_table(std::istream& in) {
  SetTable t;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto start = line.find_first_not_of("# ");
      if (start == std::string::npos) continue;
      const std::string body = line.substr(start);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      t.meta[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      if (line != "set,value") bad_line(line_no, "expected header 'set,value'");
      header_seen = true;
      continue;
    }
    std::string set_text, value_text;
    if (line[0] == '"') {
      const auto close = line.find('"', 1);
      if (close == std::string::npos || close + 1 >= line.size() || line[close + 1] != ',') {
        bad_line(line_no, "unterminated quoted set");
      }
      set_text = line.substr(1, close - 1);
      value_text = line.substr(close + 2);
    } else {
      const auto comma = line.rfind(',');
      if (comma == std::string::npos) bad_line(line_no, "missing value column");
      set_text = line.substr(0, comma);
      value_text = line.substr(comma + 1);
    }
    try {
      t.rows.emplace_back(parse_site_set(set_text), parse_value(value_text, line_no));
    } catch (const std::invalid_argument& e) {
      bad_line(line_no, e.what());
    }
  }
  if (!header_seen) throw std::runtime_error("table has no 'set,value' header");
  return t;
}

SetTable read_set_table_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_set_table(in);
}

void write_set_table_file(const std::filesystem::path& path, const SetTable& table) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    write_set_table(out, table);
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::pair<SiteSet, double>> ordered_rows(const std::map<SiteSet, double>& entries) {
  std::vector<std::pair<SiteSet, double>> rows(entries.begin(), entries.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first.empty() || b.first.empty()) return a.first.empty() && !b.first.empty();
    return class_order_less(a.first, b.first);
  });
  return rows;
}

SetTable to_set_table(const FreeEnergyTable& f) { return {f.meta(), ordered_rows(f.entries())}; }

FreeEnergyTable free_energies_from(const SetTable& t) {
  FreeEnergyTable f(t.meta);
  for (const auto& [x, v] : t.rows) f.set(x, v);
  return f;
}

SetTable to_set_table(const Interaction& h, Metadata meta) {
  meta["basis"] = to_string(h.basis());
  meta["scope"] = to_string(h.scope());
  return {std::move(meta), ordered_rows(h.terms())};
}

Interaction interaction_from(const SetTable& t) {
  auto basis_it = t.meta.find("basis");
  auto scope_it = t.meta.find("scope");
  const Basis basis = basis_it == t.meta.end() ? Basis::gas : parse_basis(basis_it->second);
  const Scope scope = scope_it == t.meta.end() ? Scope::per_translation_class : parse_scope(scope_it->second);
  Interaction h(basis, scope);
  for (const auto& [y, v] : t.rows) h.set(y, v);
  return h;
}

}  // namespace lgrg
