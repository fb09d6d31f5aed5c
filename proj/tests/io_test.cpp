#include "mdm/io.hpp"

#include <gtest/gtest.h>

#include "mdm/error.hpp"
#include "synthetic.hpp"

namespace mdm::io {
namespace {

TEST(JsonLines, SdmRoundTrip) {
  auto sdm = synthetic::MakeSdm(20, 3);
  sdm[0].pos = "n";
  sdm[1].context_unchecked = true;
  const auto text = ToJsonLines(sdm);
  std::vector<SdmEntry> back;
  for (const auto& j : ParseJsonLines(text, "mem")) back.push_back(SdmFromJson(j));
  EXPECT_EQ(back, sdm);
}

TEST(JsonLines, MdmSchema) {
  const MdmEntry e{"ban", {"c1", "c2"}, {"d1"}, false};
  EXPECT_EQ(ToJson(e).dump(), R"({"word":"ban","contexts":["c1","c2"],"definitions":["d1"],"aligned":false})");
  EXPECT_EQ(MdmFromJson(ToJson(e)), e);
}

TEST(JsonLines, ModelExampleOptionalFields) {
  ModelExample ex{"dog", "word: dog context: c", "d", "dog", std::nullopt, "canine"};
  EXPECT_EQ(ToJson(ex).dump(),
            R"({"word":"dog","source":"word: dog context: c","target":"d","aux_word":"dog","aux_hypernyms":"canine"})");
  EXPECT_EQ(ModelExampleFromJson(ToJson(ex)), ex);
}

TEST(JsonLines, ErrorsCarryLocation) {
  try {
    ParseJsonLines("{\"a\":1}\n{oops\n", "preds.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("preds.jsonl:2"), std::string::npos);
  }
  EXPECT_THROW(SdmFromJson(Json::parse(R"({"word":"x"})")), Error);
  EXPECT_THROW(ParseJsonLines("[1,2]\n", "x"), Error);
}

TEST(Report, JsonShape) {
  metrics::MetricReport r;
  r.name = "rouge1";
  r.corpus_score = 50;
  r.config = {{"n", "1"}};
  r.per_entry.push_back({0, 0.5, 0.5, 0.5, ""});
  r.per_entry.push_back({1, std::nullopt, std::nullopt, std::nullopt, "skipped"});
  const auto j = ToJson(r);
  EXPECT_EQ(j["metric"], "rouge1");
  EXPECT_EQ(j["config"]["n"], "1");
  EXPECT_EQ(j["per_entry"].size(), 2u);
  EXPECT_TRUE(j["per_entry"][1]["score"].is_null());
  EXPECT_NE(SummaryTable({r}).find("rouge1"), std::string::npos);
}

}  // namespace
}  // namespace mdm::io
