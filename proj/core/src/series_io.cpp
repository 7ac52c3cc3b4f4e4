#include "macrospin/series_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace macrospin {

namespace {

constexpr std::array<std::string_view, kColumnCount> kNames{
    "t_tilde", "C",   "C1",  "D1",     "n1x", "n1y",  "n1z",
    "n2x",     "n2y", "n2z", "energy", "st2", "norm", "direction_valid"};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(std::string_view text, Column col, std::size_t row) {
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw SchemaError("column '" + std::string(column_name(col)) + "' row " + std::to_string(row) +
                      ": cannot parse '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::string_view column_name(Column c) noexcept { return kNames[static_cast<std::size_t>(c)]; }

std::optional<Column> parse_column(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Column>(i);
  }
  return std::nullopt;
}

std::vector<Column> all_columns() {
  std::vector<Column> out;
  for (std::size_t i = 0; i < kColumnCount; ++i) out.push_back(static_cast<Column>(i));
  return out;
}

std::string format_number(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

double column_value(const ObservableRecord& r, Column c) noexcept {
  switch (c) {
    case Column::TTilde: return r.t_tilde;
    case Column::C: return r.c;
    case Column::C1: return r.c1;
    case Column::D1: return r.d1;
    case Column::N1x: return r.n1.x();
    case Column::N1y: return r.n1.y();
    case Column::N1z: return r.n1.z();
    case Column::N2x: return r.n2.x();
    case Column::N2y: return r.n2.y();
    case Column::N2z: return r.n2.z();
    case Column::Energy: return r.energy;
    case Column::St2: return r.st2;
    case Column::Norm: return r.norm;
    case Column::DirectionValid: return r.direction_valid ? 1.0 : 0.0;
  }
  return 0.0;
}

void set_column_value(ObservableRecord& r, Column c, double v) {
  switch (c) {
    case Column::TTilde: r.t_tilde = v; break;
    case Column::C: r.c = v; break;
    case Column::C1: r.c1 = v; break;
    case Column::D1: r.d1 = v; break;
    case Column::N1x: r.n1.x() = v; break;
    case Column::N1y: r.n1.y() = v; break;
    case Column::N1z: r.n1.z() = v; break;
    case Column::N2x: r.n2.x() = v; break;
    case Column::N2y: r.n2.y() = v; break;
    case Column::N2z: r.n2.z() = v; break;
    case Column::Energy: r.energy = v; break;
    case Column::St2: r.st2 = v; break;
    case Column::Norm: r.norm = v; break;
    case Column::DirectionValid:
      if (v != 0.0 && v != 1.0) {
        throw SchemaError("column 'direction_valid': expected 0 or 1, got " + format_number(v));
      }
      r.direction_valid = v == 1.0;
      break;
  }
}

bool SeriesTable::has(Column c) const noexcept {
  for (auto x : columns) {
    if (x == c) return true;
  }
  return false;
}

void validate_columns(std::span<const Column> columns) {
  if (columns.size() < 2 || columns[0] != Column::TTilde || columns[1] != Column::C) {
    throw SchemaError("column 't_tilde' and 'C' must lead the header");
  }
  for (std::size_t i = 1; i < columns.size(); ++i) {
    if (static_cast<int>(columns[i]) <= static_cast<int>(columns[i - 1])) {
      throw SchemaError("column '" + std::string(column_name(columns[i])) +
                        "' repeated or out of order");
    }
  }
}

std::vector<Column> columns_from_names(std::span<const std::string> names) {
  std::vector<Column> out;
  for (const auto& raw : names) {
    std::string name = raw;
    while (!name.empty() && (name.back() == '\r' || name.back() == ' ')) name.pop_back();
    const auto c = parse_column(name);
    if (!c) throw SchemaError("unknown column '" + name + "'");
    out.push_back(*c);
  }
  validate_columns(out);
  return out;
}

void write_series_csv(std::ostream& os, std::span<const Column> columns,
                      const ObservableSeries& series) {
  validate_columns(columns);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << column_name(columns[i]);
  }
  os << '\n';
  for (const auto& r : series) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) os << ',';
      if (columns[i] == Column::DirectionValid) {
        os << (r.direction_valid ? '1' : '0');
      } else {
        os << format_number(column_value(r, columns[i]));
      }
    }
    os << '\n';
  }
}

SeriesTable read_series_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw SchemaError("column 't_tilde': empty file, no header");
  SeriesTable table;
  table.columns = columns_from_names(split_csv_line(line));
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != table.columns.size()) {
      const std::size_t at = std::min(fields.size(), table.columns.size() - 1);
      throw SchemaError("column '" + std::string(column_name(table.columns[at])) + "' row " +
                        std::to_string(row) + ": expected " +
                        std::to_string(table.columns.size()) + " fields, got " +
                        std::to_string(fields.size()));
    }
    ObservableRecord rec;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      set_column_value(rec, table.columns[i], parse_number(fields[i], table.columns[i], row));
    }
    table.records.push_back(rec);
    ++row;
  }
  return table;
}

void write_series_json(std::ostream& os, std::span<const Column> columns,
                       const ObservableSeries& series) {
  validate_columns(columns);
  os << "{\"columns\":[";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ',';
    os << '"' << column_name(columns[i]) << '"';
  }
  os << "],\"rows\":[";
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (k) os << ',';
    os << "\n[";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) os << ',';
      const double v = column_value(series[k], columns[i]);
      if (!std::isfinite(v)) {
        throw SchemaError("column '" + std::string(column_name(columns[i])) + "' row " +
                          std::to_string(k) + ": non-finite value");
      }
      if (columns[i] == Column::DirectionValid) {
        os << (series[k].direction_valid ? '1' : '0');
      } else {
        os << format_number(v);
      }
    }
    os << ']';
  }
  os << "\n]}\n";
}

}  // namespace macrospin
