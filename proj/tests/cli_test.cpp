#include "mdm/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "mdm/io.hpp"
#include "synthetic.hpp"

namespace mdm::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(MDM_TEST_TMP) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  void Write(const std::string& name, const std::string& text) const { io::WriteFile(Path(name), text); }

  int Call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::Run(args, out_, err_);
  }

  // Corpus + inventory where every word has enough sentences.
  void WriteWorld() {
    synthetic::Spec spec;
    spec.words = 25;
    spec.min_sentences = 3;
    const auto world = synthetic::Make(spec);
    std::string corpus;
    for (const auto& d : world.documents) corpus += d + "\n";
    Write("corpus.txt", corpus);
    Write("inv.tsv", inventory::SerializeInventory(world.inventory, inventory::Format::kTsv));
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, BuildWordWikiWritesArtifacts) {
  WriteWorld();
  ASSERT_EQ(Call({"build-wordwiki", "--corpus", Path("corpus.txt"), "--inventory", Path("inv.tsv"), "--k", "2",
                  "--seed", "7", "--min-count", "1", "-o", Path("out")}),
            kExitOk)
      << err_.str();
  for (const char* f : {"mdm.jsonl", "model.jsonl", "manifest.json"}) EXPECT_TRUE(fs::exists(Path("out") + "/" + f));
  const auto manifest = io::Json::parse(io::ReadFile(Path("out/manifest.json")));
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["k"], 2);
  EXPECT_EQ(manifest["token_budget"], 480);
  EXPECT_EQ(manifest["min_count"], 1);
  EXPECT_EQ(manifest["counts"]["entries"], 25);
  const auto model = io::ReadJsonLines(Path("out/model.jsonl"));
  ASSERT_EQ(model.size(), 25u);
  EXPECT_EQ(model[0]["source"].get<std::string>().rfind("word: ", 0), 0u);
  EXPECT_EQ(model[0]["aux_hypernyms"], "thing");
}

TEST_F(CliTest, BuildWordWikiIdempotentAcrossJobs) {
  WriteWorld();
  const std::vector<std::string> base = {"build-wordwiki", "--corpus", Path("corpus.txt"), "--inventory",
                                         Path("inv.tsv"), "--k", "4", "--seed", "3", "--min-count", "2"};
  auto a = base;
  a.insert(a.end(), {"-o", Path("a"), "--jobs", "1"});
  auto b = base;
  b.insert(b.end(), {"-o", Path("b"), "--jobs", "8"});
  ASSERT_EQ(Call(a), kExitOk);
  ASSERT_EQ(Call(b), kExitOk);
  for (const char* f : {"mdm.jsonl", "model.jsonl", "manifest.json"}) {
    EXPECT_EQ(io::ReadFile(Path("a") + "/" + f), io::ReadFile(Path("b") + "/" + f)) << f;
  }
}

TEST_F(CliTest, IndexThenBuildFromIndexMatchesCorpusRun) {
  WriteWorld();
  ASSERT_EQ(Call({"index", "--corpus", Path("corpus.txt"), "--min-count", "2", "-o", Path("idx")}), kExitOk);
  ASSERT_EQ(Call({"build-wordwiki", "--index", Path("idx/index.json"), "--inventory", Path("inv.tsv"), "-o",
                  Path("from_index")}),
            kExitOk)
      << err_.str();
  ASSERT_EQ(Call({"build-wordwiki", "--corpus", Path("corpus.txt"), "--min-count", "2", "--inventory",
                  Path("inv.tsv"), "-o", Path("from_corpus")}),
            kExitOk);
  EXPECT_EQ(io::ReadFile(Path("from_index/mdm.jsonl")), io::ReadFile(Path("from_corpus/mdm.jsonl")));
}

TEST_F(CliTest, ReplayReproducesOutputs) {
  WriteWorld();
  ASSERT_EQ(Call({"build-wordwiki", "--corpus", Path("corpus.txt"), "--inventory", Path("inv.tsv"), "--k", "2",
                  "--seed", "11", "--min-count", "1", "-o", Path("orig")}),
            kExitOk);
  ASSERT_EQ(Call({"replay", "--manifest", Path("orig/manifest.json"), "-o", Path("again")}), kExitOk) << err_.str();
  for (const char* f : {"mdm.jsonl", "model.jsonl", "manifest.json"}) {
    EXPECT_EQ(io::ReadFile(Path("orig") + "/" + f), io::ReadFile(Path("again") + "/" + f)) << f;
  }
  Write("corpus.txt", "changed corpus.\n");
  EXPECT_EQ(Call({"replay", "--manifest", Path("orig/manifest.json"), "-o", Path("again2")}), kExitIo);
}

TEST_F(CliTest, EmptyOutputExitCode) {
  Write("corpus.txt", "nothing relevant here.\n");
  Write("inv.tsv", "zebra\tn\tstriped horse\n");
  EXPECT_EQ(Call({"build-wordwiki", "--corpus", Path("corpus.txt"), "--inventory", Path("inv.tsv"), "--min-count",
                  "1", "-o", Path("out")}),
            kExitEmpty);
  EXPECT_NE(err_.str().find("warning"), std::string::npos);
}

TEST_F(CliTest, ConfigAndIoErrors) {
  WriteWorld();
  EXPECT_EQ(Call({"build-wordwiki", "--inventory", Path("inv.tsv"), "-o", Path("o")}), kExitConfig);
  EXPECT_EQ(Call({"build-wordwiki", "--corpus", Path("corpus.txt"), "--inventory", Path("inv.tsv"),
                  "--token-budget", "8", "-o", Path("o")}),
            kExitConfig);
  EXPECT_EQ(Call({"build-wordwiki", "--corpus", Path("missing.txt"), "--inventory", Path("inv.tsv"), "-o",
                  Path("o")}),
            kExitConfig);
  Write("bad.tsv", "only-one-column\n");
  EXPECT_EQ(Call({"build-wordwiki", "--corpus", Path("corpus.txt"), "--inventory", Path("bad.tsv"), "-o",
                  Path("o")}),
            kExitIo);
  EXPECT_NE(err_.str().find(":1:"), std::string::npos);
  EXPECT_EQ(Call({"no-such-command"}), kExitConfig);
  EXPECT_EQ(Call({"--help"}), kExitOk);
}

TEST_F(CliTest, EasyUngroupRoundTrip) {
  const auto sdm = synthetic::MakeSdm(30, 5);
  Write("sdm.jsonl", io::ToJsonLines(sdm));
  ASSERT_EQ(Call({"build-easy", "--sdm", Path("sdm.jsonl"), "-o", Path("easy")}), kExitOk);
  ASSERT_EQ(Call({"ungroup", "--mdm", Path("easy/mdm.jsonl"), "-o", Path("back")}), kExitOk);
  auto key = [](const SdmEntry& e) { return e.word + "\t" + e.context + "\t" + e.definition; };
  std::multiset<std::string> original, back;
  for (const auto& e : sdm) original.insert(key(e));
  for (const auto& e : io::ReadSdm(Path("back/sdm.jsonl"))) back.insert(key(e));
  EXPECT_EQ(original, back);
  ASSERT_EQ(Call({"format", "--mdm", Path("easy/mdm.jsonl"), "-o", Path("fmt")}), kExitOk);
  EXPECT_EQ(io::ReadFile(Path("fmt/model.jsonl")), io::ReadFile(Path("easy/model.jsonl")));
}

TEST_F(CliTest, UngroupRejectsUnaligned) {
  Write("mdm.jsonl", R"({"word":"a","contexts":["x","y"],"definitions":["d"],"aligned":false})" "\n");
  EXPECT_EQ(Call({"ungroup", "--mdm", Path("mdm.jsonl"), "-o", Path("o")}), kExitConfig);
}

TEST_F(CliTest, BuildDelOutputs) {
  Write("sdm.jsonl", io::ToJsonLines(synthetic::MakeSdm(50, 2)));
  ASSERT_EQ(Call({"build-del", "--sdm", Path("sdm.jsonl"), "--d", "1", "--seed", "1", "-o", Path("del")}), kExitOk);
  const auto manifest = io::Json::parse(io::ReadFile(Path("del/manifest.json")));
  EXPECT_EQ(manifest["d"], 1);
  EXPECT_EQ(manifest["seed"], 1);
  EXPECT_TRUE(manifest["held_out"].is_object());
  EXPECT_FALSE(io::ReadSdm(Path("del/test.jsonl")).empty());
  EXPECT_EQ(Call({"build-del", "--sdm", Path("sdm.jsonl"), "--d", "0", "-o", Path("del0")}), kExitConfig);
}

TEST_F(CliTest, GroupPredsAndEval) {
  Write("ref.jsonl",
        R"({"word":"mope","contexts":["c0","c1"],"definitions":["low spirits","wander aimlessly"],"aligned":true})"
        "\n"
        R"({"word":"ban","contexts":["c0"],"definitions":["prohibit"],"aligned":true})"
        "\n");
  Write("preds.jsonl",
        R"({"word":"ban","context_index":0,"prediction":"prohibit"})"
        "\n"
        R"({"word":"mope","context_index":1,"prediction":"wander aimlessly"})"
        "\n"
        R"({"word":"mope","context_index":0,"prediction":"low spirits"})"
        "\n");
  ASSERT_EQ(Call({"group-preds", "--preds", Path("preds.jsonl"), "--ref", Path("ref.jsonl"), "-o", Path("g")}),
            kExitOk)
      << err_.str();
  const auto grouped = io::ReadJsonLines(Path("g/grouped.jsonl"));
  ASSERT_EQ(grouped.size(), 2u);
  EXPECT_EQ(grouped[0]["prediction"], "low spirits <sep> wander aimlessly");

  ASSERT_EQ(Call({"eval", "--metrics", "bleu,rouge1,rouge2,rougeL,distinct2", "--preds", Path("g/grouped.jsonl"),
                  "-o", Path("ev")}),
            kExitOk)
      << err_.str();
  const auto reports = io::Json::parse(io::ReadFile(Path("ev/reports.json")));
  ASSERT_EQ(reports.size(), 5u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(reports[i]["corpus_score"], 100.0) << reports[i]["metric"];
  EXPECT_NE(out_.str().find("rougeL"), std::string::npos);

  Write("short.jsonl", R"({"word":"ban","context_index":0,"prediction":"x"})" "\n");
  EXPECT_EQ(Call({"group-preds", "--preds", Path("short.jsonl"), "--ref", Path("ref.jsonl"), "-o", Path("g2")}),
            kExitAlignment);
  EXPECT_NE(err_.str().find("mope#0"), std::string::npos);
}

TEST_F(CliTest, EvalAlignmentAndConfig) {
  Write("p.jsonl", R"({"word":"a","prediction":"x y"})" "\n" R"({"word":"b","prediction":"z"})" "\n");
  Write("r.jsonl", R"({"word":"b","reference":"z"})" "\n" R"({"word":"a","reference":"x y"})" "\n");
  Write("r3.jsonl", R"({"word":"a","reference":"x y"})" "\n" R"({"word":"c","reference":"q"})" "\n");
  EXPECT_EQ(Call({"eval", "--metrics", "rouge1", "--preds", Path("p.jsonl"), "--refs", Path("r.jsonl")}),
            kExitAlignment);
  EXPECT_EQ(Call({"eval", "--metrics", "rouge1", "--preds", Path("p.jsonl"), "--refs", Path("r.jsonl"), "--align",
                  "word"}),
            kExitOk);
  EXPECT_NE(out_.str().find("100.00"), std::string::npos);
  EXPECT_EQ(Call({"eval", "--metrics", "rouge1", "--preds", Path("p.jsonl"), "--refs", Path("r3.jsonl"), "--align",
                  "word"}),
            kExitAlignment);
  EXPECT_NE(err_.str().find("no reference for b"), std::string::npos);
  EXPECT_NE(err_.str().find("no prediction for c"), std::string::npos);
  EXPECT_EQ(Call({"eval", "--metrics", "bs", "--preds", Path("p.jsonl"), "--refs", Path("r.jsonl")}), kExitConfig);
  EXPECT_EQ(Call({"eval", "--metrics", "meteor", "--preds", Path("p.jsonl"), "--refs", Path("r.jsonl")}),
            kExitConfig);

  Write("emb.tsv", "x\t1\t0\ny\t0\t1\nz\t1\t1\n");
  EXPECT_EQ(Call({"eval", "--metrics", "bs,overlap", "--embeddings", Path("emb.tsv"), "--preds", Path("p.jsonl"),
                  "--refs", Path("r.jsonl"), "--align", "word"}),
            kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("greedy_match"), std::string::npos);
}

TEST_F(CliTest, EvalStats) {
  Write("mdm.jsonl", R"({"word":"a","contexts":["w x y z"],"definitions":["d"],"aligned":false})" "\n"
                     R"({"word":"b","contexts":["p q r","s t u"],"definitions":["d"],"aligned":false})" "\n");
  ASSERT_EQ(Call({"eval", "--stats", Path("mdm.jsonl"), "-o", Path("st")}), kExitOk) << err_.str();
  const auto reports = io::Json::parse(io::ReadFile(Path("st/reports.json")));
  EXPECT_EQ(reports[0]["entries"], 2);
  EXPECT_EQ(reports[0]["mean_context_tokens"], 5.0);
}

}  // namespace
}  // namespace mdm::cli
