#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "sladm/error.hpp"
#include "sladm/format.hpp"

using namespace sladm::realline;

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Format, JsonSortedAndNonFinite) {
  nlohmann::json j = {{"b", 1.5}, {"a", std::numeric_limits<double>::infinity()}, {"c", "x"}};
  const std::string s = dump_json(j, 0);
  EXPECT_LT(s.find("\"a\""), s.find("\"b\""));
  EXPECT_LT(s.find("\"b\""), s.find("\"c\""));
  EXPECT_NE(s.find("\"inf\""), std::string::npos);
  EXPECT_EQ(dump_json(j), dump_json(j));
}

TEST(Format, Csv) {
  CsvWriter w({"x", "y"});
  w.add_row({1.0, 0.5});
  w.add_row({2.0, std::numeric_limits<double>::infinity()});
  EXPECT_EQ(w.str(), "x,y\n1,0.5\n2,inf\n");
  EXPECT_EQ(w.rows(), 2u);
  EXPECT_THROW(w.add_row({1.0}), sladm::PreconditionError);
}
