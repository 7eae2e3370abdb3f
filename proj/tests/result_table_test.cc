// Copyright 2026 The coopgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coopgame/harness/result_table.h"

#include <sstream>

#include <gtest/gtest.h>

#include "coopgame/errors.h"

namespace coopgame::harness {
namespace {

TEST(ResultTableTest, EmptyTableIsHeaderOnly) {
  const ResultTable t({{"iter", ""}, {"q_1", "J/Mb"}});
  EXPECT_EQ(ToCsv(t), "iter,q_1\n,J/Mb\n");
}

TEST(ResultTableTest, CsvQuotingAndNumbers) {
  ResultTable t({{"name", ""}, {"value", "J"}, {"count", ""}});
  t.AddRow({std::string("a,b"), 0.1, 3LL});
  t.AddRow({std::string("say \"hi\""), 1e-9, -1LL});
  EXPECT_EQ(ToCsv(t),
            "name,value,count\n,J,\n\"a,b\",0.1,3\n\"say \"\"hi\"\"\",1e-09,-1\n");
  EXPECT_EQ(ToCsv(t), ToCsv(t));
}

TEST(ResultTableTest, RowWidthChecked) {
  ResultTable t({{"a", ""}, {"b", ""}});
  EXPECT_THROW(t.AddRow({1.0}), Error);
}

TEST(ResultTableTest, NumberLookup) {
  ResultTable t({{"a", ""}, {"b", ""}});
  t.AddRow({1.5, 2LL});
  EXPECT_EQ(t.Number(0, "a"), 1.5);
  EXPECT_EQ(t.Number(0, "b"), 2.0);
  EXPECT_FALSE(t.ColumnIndex("c").has_value());
  EXPECT_THROW(t.Number(0, "c"), Error);
}

TEST(ResultTableTest, TextIsAligned) {
  ResultTable t({{"iter", ""}, {"price", "J/Mb"}});
  t.AddRow({1LL, 0.25});
  std::ostringstream out;
  EmitText(t, out);
  EXPECT_EQ(out.str(), "iter   price\n      [J/Mb]\n   1    0.25\n");
}

TEST(ResultTableTest, FormatParsing) {
  EXPECT_EQ(ParseOutputFormat("csv"), OutputFormat::kCsv);
  EXPECT_EQ(ParseOutputFormat("text"), OutputFormat::kText);
  EXPECT_FALSE(ParseOutputFormat("xml").has_value());
}

TEST(ResultTableTest, UnwritableDestination) {
  const ResultTable t(std::vector<Column>{{"a", ""}});
  try {
    EmitResults(t, OutputFormat::kCsv,
                std::filesystem::path("/nonexistent/dir/out.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kIo);
  }
}

}  // namespace
}  // namespace coopgame::harness
