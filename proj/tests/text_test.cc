// tests/text_test.cc

// Copyright 2026 The stereoleak Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stereoleak/text.hpp"

namespace stereoleak {
namespace {

TEST(Text, ShortestFormatRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    EXPECT_EQ(ParseDouble(FormatShortest(v)), v);
  }
  EXPECT_EQ(FormatShortest(0.1), "0.1");
  EXPECT_EQ(FormatShortest(-2.0), "-2");
}

TEST(Text, FixedFormatting) {
  EXPECT_EQ(FormatFixed(0.355, 2), "0.35");  // binary 0.35499...
  EXPECT_EQ(FormatFixed(0.36, 2), "0.36");
  EXPECT_EQ(FormatFixed(-0.001, 2), "0.00");
  EXPECT_EQ(FormatFixed(-0.25, 1), "-0.2");
}

TEST(Text, ParseDoubleIsStrict) {
  EXPECT_EQ(ParseDouble(" 12.5 "), 12.5);
  EXPECT_THROW(ParseDouble("12.5x"), std::invalid_argument);
  EXPECT_THROW(ParseDouble(""), std::invalid_argument);
  EXPECT_THROW(ParseDouble("abc"), std::invalid_argument);
}

TEST(Text, CsvRecords) {
  EXPECT_EQ(SplitCsvRecord("a,b,,c"), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(SplitCsvRecord("\"x,y\",\"say \"\"hi\"\"\""),
            (std::vector<std::string>{"x,y", "say \"hi\""}));
  for (const std::string s : {"plain", "with,comma", "with \"quote\"", ""}) {
    EXPECT_EQ(SplitCsvRecord(QuoteCsvField(s) + ",z"), (std::vector<std::string>{s, "z"}));
  }
}

TEST(Text, Lowercase) {
  EXPECT_EQ(Utf8Lower("Powerful"), "powerful");
  EXPECT_EQ(Utf8Lower("МОГУЩЕСТВЕННЫЙ Ёж"), "могущественный ёж");
  EXPECT_EQ(Utf8Lower("有权势的"), "有权势的");
}

TEST(Text, SplitLinesHandlesCrLf) {
  const auto lines = SplitLines("a\r\nb\nc");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "a");
  EXPECT_EQ(lines[2], "c");
}

}  // namespace
}  // namespace stereoleak
