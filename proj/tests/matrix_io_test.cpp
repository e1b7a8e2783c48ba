#include <cmath>
#include <limits>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cholparam/matrix_io.hpp"
#include "cholparam/randcorr.hpp"

using namespace cholparam;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(std::sqrt(0.75)), "0.8660254037844386");
  EXPECT_EQ(format_double(-1e-300), "-1e-300");
}

TEST(ParseCsv, Basic) {
  EXPECT_EQ(parse_csv("1,0.5\n0.5,1\n"), (Matrix{{1, 0.5}, {0.5, 1}}));
  EXPECT_EQ(parse_csv(" 1 , 2 \r\n\n3,4"), (Matrix{{1, 2}, {3, 4}}));
  EXPECT_EQ(parse_csv("-2.5e-3"), (Matrix{{-2.5e-3}}));
}

TEST(ParseCsv, Errors) {
  EXPECT_THROW(parse_csv(""), ParseError);
  EXPECT_THROW(parse_csv("\n\n"), ParseError);
  EXPECT_THROW(parse_csv("1,2\n3\n"), ParseError);
  EXPECT_THROW(parse_csv("1,,2\n"), ParseError);
  EXPECT_THROW(parse_csv("1,abc\n"), ParseError);
  EXPECT_THROW(parse_csv("1,2x\n"), ParseError);
  EXPECT_THROW(parse_csv("1,nan\n"), ParseError);
  EXPECT_THROW(parse_csv("1;2\n"), ParseError);
}

TEST(ParseCsv, ErrorNamesLine) {
  try {
    parse_csv("1,2\n3,oops\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseJson, Basic) {
  EXPECT_EQ(parse_json(R"({"n": 2, "rows": [[1, 0.5], [0.5, 1]]})"), (Matrix{{1, 0.5}, {0.5, 1}}));
  EXPECT_EQ(parse_json(R"({"rows": [[3]], "n": 1})"), (Matrix{{3}}));
}

TEST(ParseJson, Errors) {
  EXPECT_THROW(parse_json("{"), ParseError);
  EXPECT_THROW(parse_json("[[1]]"), ParseError);
  EXPECT_THROW(parse_json(R"({"rows": [[1]]})"), ParseError);
  EXPECT_THROW(parse_json(R"({"n": 2, "rows": [[1, 2], [3]]})"), ParseError);
  EXPECT_THROW(parse_json(R"({"n": 1, "rows": [["1"]]})"), ParseError);
  EXPECT_THROW(parse_json(R"({"n": 1, "rows": []})"), ParseError);
  EXPECT_THROW(parse_json(R"({"n": 1.5, "rows": [[1]]})"), ParseError);
}

TEST(ParseMatrix, DetectsFormat) {
  EXPECT_EQ(parse_matrix("  \n{\"n\": 1, \"rows\": [[2]]}"), (Matrix{{2}}));
  EXPECT_EQ(parse_matrix("2\n"), (Matrix{{2}}));
}

TEST(WriteMatrix, Csv) {
  EXPECT_EQ(to_csv(Matrix{{1, 0}, {0.5, std::sqrt(0.75)}}), "1,0\n0.5,0.8660254037844386\n");
}

TEST(WriteMatrix, JsonSchema) {
  const auto doc = nlohmann::json::parse(to_json(Matrix{{1, 2, 3}, {4, 5, 6}}));
  EXPECT_EQ(doc["n"], 3);
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["rows"][1][2], 6.0);
  EXPECT_EQ(format_matrix(Matrix{{1}}, MatrixFormat::json), to_json(Matrix{{1}}));
  EXPECT_EQ(format_matrix(Matrix{{1}}, MatrixFormat::csv), "1\n");
}

TEST(MatrixIoProperties, PrintParseIsLossless) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = generate(GeneratorConfig{1 + seed % 15, seed});
    for (const Matrix* m : {&g.matrix.matrix(), &g.factor.matrix()}) {
      EXPECT_EQ(parse_csv(to_csv(*m)), *m);
      EXPECT_EQ(parse_json(to_json(*m)), *m);
    }
  }
  const Matrix extremes{{std::numeric_limits<double>::min(), std::numeric_limits<double>::max()},
                        {-std::numeric_limits<double>::denorm_min(), 1.0 / 3.0}};
  EXPECT_EQ(parse_csv(to_csv(extremes)), extremes);
  EXPECT_EQ(parse_json(to_json(extremes)), extremes);
}
