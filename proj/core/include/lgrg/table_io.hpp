#pragma once

// CSV tables keyed by site set:
//
//   # key=value            metadata lines, any number, before the header
//   set,value
//   "{(0,0),(1,0)}",-0.12345678901234567
//
// Values are written with 17 significant digits so a write/read cycle is
// bit-exact.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lgrg/interaction.hpp"

namespace lgrg {

struct SetTable {
  Metadata meta;
  std::vector<std::pair<SiteSet, double>> rows;
};

/// `%.17g` rendering.
std::string format_double(double v);

/// Rows are written in the given order.
void write_set_table(std::ostream& out, const SetTable& table);
/// Throws std::runtime_error with the offending line number on malformed input.
SetTable read_set_table(std::istream& in);

SetTable read_set_table_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file, then renames over `path`.
void write_set_table_file(const std::filesystem::path& path, const SetTable& table);

/// Plot-ready CSV with arbitrary columns; cells holding commas are quoted.
struct ColumnTable {
  Metadata meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_column_table(std::ostream& out, const ColumnTable& table);

/// Rows in class order (size measure, cardinality, lexicographic), the empty
/// set first when present.
std::vector<std::pair<SiteSet, double>> ordered_rows(const std::map<SiteSet, double>& entries);

SetTable to_set_table(const FreeEnergyTable& f);
FreeEnergyTable free_energies_from(const SetTable& t);

/// Adds `basis` and `scope` to the metadata.
SetTable to_set_table(const Interaction& h, Metadata meta = {});
/// Reads basis and scope from the metadata, defaulting to gas / per class.
Interaction interaction_from(const SetTable& t);

}  // namespace lgrg
