#include <doctest.h>

#include <cmath>
#include <limits>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "macrospin/series_io.hpp"

using namespace macrospin;

namespace {

ObservableSeries random_series(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ObservableSeries out(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto& r = out[k];
    r.t_tilde = 0.1 * static_cast<double>(k) + 1e-3 * u(rng);
    r.c = std::abs(u(rng));
    r.c1 = std::abs(u(rng));
    r.d1 = std::abs(u(rng)) * 1e-7;
    r.n1 = Vec3(u(rng), u(rng), u(rng)).normalized();
    r.n2 = Vec3(u(rng), u(rng), u(rng)).normalized();
    r.energy = 1e5 * u(rng);
    r.st2 = 1e-300 * std::abs(u(rng));
    r.norm = 1.0 + 1e-15 * u(rng);
    r.direction_valid = k % 3 != 0;
  }
  return out;
}

void check_same(const ObservableSeries& a, const ObservableSeries& b,
                const std::vector<Column>& cols) {
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (Column c : cols) {
      INFO("row " << k << " column " << column_name(c));
      CHECK(column_value(a[k], c) == column_value(b[k], c));
    }
  }
}

}  // namespace

TEST_SUITE("series_io") {

TEST_CASE("column names") {
  const auto cols = all_columns();
  REQUIRE(cols.size() == kColumnCount);
  CHECK(column_name(Column::TTilde) == "t_tilde");
  CHECK(column_name(Column::C) == "C");
  for (Column c : cols) CHECK(parse_column(column_name(c)) == c);
  CHECK_FALSE(parse_column("bogus"));
}

TEST_CASE("number format round-trips") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, 4.9e-324, 1.7976931348623157e308, -2.5e-17}) {
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    ObservableSeries one(1);
    one[0].c = v;
    const std::vector<Column> cols{Column::TTilde, Column::C};
    std::stringstream ss;
    write_series_csv(ss, cols, one);
    CHECK(read_series_csv(ss).records[0].c == v);
  }
}

TEST_CASE("CSV round trip is bit exact") {
  const auto series = random_series(57, 3);
  const auto cols = all_columns();
  std::stringstream ss;
  write_series_csv(ss, cols, series);
  const auto table = read_series_csv(ss);
  CHECK(table.columns == cols);
  check_same(series, table.records, cols);
}

TEST_CASE("CSV round trip with a column subset") {
  const auto series = random_series(10, 5);
  const std::vector<Column> cols{Column::TTilde, Column::C, Column::C1, Column::Energy};
  std::stringstream ss;
  write_series_csv(ss, cols, series);
  const auto table = read_series_csv(ss);
  CHECK(table.has(Column::C1));
  CHECK_FALSE(table.has(Column::D1));
  check_same(series, table.records, cols);
  CHECK(table.records[0].d1 == ObservableRecord{}.d1);
}

TEST_CASE("JSON layout") {
  const auto series = random_series(4, 7);
  const std::vector<Column> cols{Column::TTilde, Column::C, Column::DirectionValid};
  std::stringstream ss;
  write_series_json(ss, cols, series);
  const auto j = nlohmann::json::parse(ss.str());
  REQUIRE(j["columns"].size() == 3);
  CHECK(j["columns"][0] == "t_tilde");
  REQUIRE(j["rows"].size() == 4);
  CHECK(j["rows"][1][1].get<double>() == series[1].c);
  CHECK(j["rows"][0][2].get<double>() == 0.0);
  CHECK(j["rows"][1][2].get<double>() == 1.0);
}

TEST_CASE("JSON rejects non-finite values") {
  auto series = random_series(3, 9);
  series[1].c = std::numeric_limits<double>::quiet_NaN();
  std::stringstream ss;
  CHECK_THROWS(write_series_json(ss, all_columns(), series));
}

TEST_CASE("schema errors name the column") {
  auto message_of = [](const std::string& csv) {
    std::istringstream is(csv);
    try {
      read_series_csv(is);
    } catch (const SchemaError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_of("t_tilde,C,bogus\n0,1,2\n").find("bogus") != std::string::npos);
  CHECK(message_of("t_tilde,C,C,C1\n0,1,1,1\n").find("C") != std::string::npos);
  CHECK(message_of("t_tilde,C1,C\n0,1,1\n").find("t_tilde") != std::string::npos);
  CHECK(message_of("t_tilde,C,D1,C1\n0,1,0,1\n").find("C1") != std::string::npos);
  CHECK(message_of("C,C1\n1,1\n").find("t_tilde") != std::string::npos);
  CHECK(message_of("t_tilde,C,C1\n0,1\n") != "");
  CHECK(message_of("t_tilde,C,C1\n0,1,abc\n").find("C1") != std::string::npos);
  CHECK(message_of("t_tilde,C\n0,1\n").empty());

  const std::vector<Column> bad{Column::C, Column::TTilde};
  CHECK_THROWS_AS(validate_columns(bad), SchemaError);
  const std::vector<std::string> names{"t_tilde", "C", "unknown"};
  CHECK_THROWS_WITH_AS(columns_from_names(names), doctest::Contains("unknown"), SchemaError);
}

}  // TEST_SUITE
