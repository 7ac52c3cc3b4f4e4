#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "macrospin/observables.hpp"

namespace macrospin {

/// Columns of the trajectory file, in canonical order.
enum class Column {
  TTilde,
  C,
  C1,
  D1,
  N1x,
  N1y,
  N1z,
  N2x,
  N2y,
  N2z,
  Energy,
  St2,
  Norm,
  DirectionValid,
};

inline constexpr std::size_t kColumnCount = 14;

std::string_view column_name(Column c) noexcept;
std::optional<Column> parse_column(std::string_view name) noexcept;

/// Every column, canonical order.
std::vector<Column> all_columns();

/// Thrown by the readers; the message names the offending column.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, "%.17g"; round-trips every finite double.
std::string format_number(double v);

double column_value(const ObservableRecord& r, Column c) noexcept;
void set_column_value(ObservableRecord& r, Column c, double v);

struct SeriesTable {
  std::vector<Column> columns;
  ObservableSeries records;

  bool has(Column c) const noexcept;
};

/// Header line of column names, then one row per record.  Columns must
/// start with t_tilde, C and be in canonical order without repeats.
void write_series_csv(std::ostream& os, std::span<const Column> columns,
                      const ObservableSeries& series);

/// Parses a file written by write_series_csv.  Columns not present are left
/// at their ObservableRecord defaults.
SeriesTable read_series_csv(std::istream& is);

/// {"columns": [...], "rows": [[...], ...]} with the same number format.
/// Non-finite values are rejected.
void write_series_json(std::ostream& os, std::span<const Column> columns,
                       const ObservableSeries& series);

/// Throws SchemaError for unknown, repeated or out-of-order columns, or
/// when t_tilde / C is missing.
void validate_columns(std::span<const Column> columns);
std::vector<Column> columns_from_names(std::span<const std::string> names);

}  // namespace macrospin
