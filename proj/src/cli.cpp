#include "mdm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "mdm/builder.hpp"
#include "mdm/corpus.hpp"
#include "mdm/error.hpp"
#include "mdm/inventory.hpp"
#include "mdm/io.hpp"
#include "mdm/metrics.hpp"
#include "mdm/rng.hpp"
#include "mdm/splits.hpp"

namespace mdm::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

std::string Join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::string ToString(std::uint64_t v) { return std::to_string(v); }

// Every run records the exact argument list (minus output location and job
// count) together with input digests, so `replay` can rebuild the outputs.
class Manifest {
 public:
  explicit Manifest(std::string command) {
    json_["command"] = command;
    json_["tool_version"] = kToolVersion;
    argv_.push_back(std::move(command));
  }

  void Flag(const std::string& name, const std::string& value) {
    argv_.push_back(name);
    argv_.push_back(value);
  }

  void Input(const std::string& role, const std::string& path) {
    inputs_.push_back({{"role", role}, {"path", path}, {"digest", io::FileDigest(path)}});
  }

  Json& operator[](const char* key) { return json_[key]; }

  void Output(const std::string& dir, const std::string& name, const std::string& contents) {
    io::WriteFile(Join(dir, name), contents);
    outputs_[name] = io::FileDigest(Join(dir, name));
  }

  void Write(const std::string& dir, const std::string& name = "manifest.json") {
    json_["inputs"] = inputs_;
    json_["outputs"] = outputs_;
    json_["argv"] = argv_;
    io::WriteFile(Join(dir, name), json_.dump(2) + "\n");
  }

 private:
  Json json_;
  Json inputs_ = Json::array();
  Json outputs_ = Json::object();
  std::vector<std::string> argv_;
};

std::set<std::string> LoadAbbreviations(const std::string& path) {
  std::set<std::string> out;
  std::istringstream in(io::ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = metrics::SplitTokens(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    std::string a = tokens[0];
    while (!a.empty() && a.back() == '.') a.pop_back();
    for (char& c : a) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!a.empty()) out.insert(a);
  }
  return out;
}

struct CorpusFlags {
  std::vector<std::string> corpus;
  std::string doc_mode = "file";
  std::size_t min_count = 5;
  std::string abbreviations;

  void Register(CLI::App* app, bool required) {
    auto* opt = app->add_option("--corpus", corpus, "Plain-text corpus files")->check(CLI::ExistingFile);
    if (required) opt->required();
    app->add_option("--doc-mode", doc_mode, "Document unit: one per file or per blank-line block")
        ->check(CLI::IsMember({"file", "block"}));
    app->add_option("--min-count", min_count, "Drop words rarer than this")
        ->check(CLI::PositiveNumber);
    app->add_option("--abbreviations", abbreviations, "Abbreviation list, one per line")
        ->check(CLI::ExistingFile);
  }

  corpus::CorpusIndex Build(Manifest& manifest, std::size_t jobs) const {
    corpus::IndexOptions options;
    options.min_count = min_count;
    options.jobs = jobs;
    for (const auto& path : corpus) {
      manifest.Flag("--corpus", path);
      manifest.Input("corpus", path);
    }
    manifest.Flag("--doc-mode", doc_mode);
    manifest.Flag("--min-count", std::to_string(min_count));
    if (!abbreviations.empty()) {
      options.abbreviations = LoadAbbreviations(abbreviations);
      manifest.Flag("--abbreviations", abbreviations);
      manifest.Input("abbreviations", abbreviations);
    }
    manifest["doc_mode"] = doc_mode;
    const auto mode = doc_mode == "block" ? corpus::DocumentMode::kBlock : corpus::DocumentMode::kFile;
    return corpus::CorpusIndex::Build(corpus::ReadDocuments(corpus, mode), options);
  }
};

struct InventoryFlags {
  std::string path;
  std::string format = "auto";
  std::string drop_list;

  void Register(CLI::App* app, bool required) {
    auto* opt = app->add_option("--inventory", path, "Sense inventory (TSV or JSON-Lines)")
                    ->check(CLI::ExistingFile);
    if (required) opt->required();
    app->add_option("--inventory-format", format, "tsv, jsonl or auto (by extension)")
        ->check(CLI::IsMember({"auto", "tsv", "jsonl"}));
    app->add_option("--drop-list", drop_list, "Words or word<TAB>definition rows to exclude")
        ->check(CLI::ExistingFile);
  }

  std::optional<inventory::SenseInventory> Load(Manifest& manifest) const {
    if (path.empty()) return std::nullopt;
    const auto fmt = format == "auto" ? inventory::FormatFromPath(path)
                     : format == "jsonl" ? inventory::Format::kJsonl
                                         : inventory::Format::kTsv;
    manifest.Flag("--inventory", path);
    manifest.Flag("--inventory-format", fmt == inventory::Format::kJsonl ? "jsonl" : "tsv");
    manifest.Input("inventory", path);
    std::optional<inventory::DropList> drop;
    if (!drop_list.empty()) {
      drop = inventory::LoadDropList(drop_list);
      manifest.Flag("--drop-list", drop_list);
      manifest.Input("drop_list", drop_list);
    }
    return inventory::LoadInventory(path, fmt, drop ? &*drop : nullptr);
  }
};

std::string ModelFile(const std::vector<MdmEntry>& entries, const inventory::SenseInventory* inv) {
  std::string out;
  for (const auto& e : entries) out += io::ToJson(builder::FormatExample(e, inv)).dump() + '\n';
  return out;
}

// ---------------------------------------------------------------- eval input

struct EvalRecord {
  std::optional<std::string> word;
  std::string text;
};

std::optional<std::string> TextField(const Json& j, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    if (!j.contains(key) || j[key].is_null()) continue;
    if (j[key].is_array()) return builder::JoinSegments(j[key].get<std::vector<std::string>>());
    return j[key].get<std::string>();
  }
  return std::nullopt;
}

std::vector<EvalRecord> ReadEvalRecords(const std::string& path,
                                        std::initializer_list<const char*> keys) {
  std::vector<EvalRecord> out;
  std::size_t line = 0;
  for (const auto& j : io::ReadJsonLines(path)) {
    ++line;
    auto text = TextField(j, keys);
    if (!text) throw IoError(path + ": record " + std::to_string(line) + " has no text field");
    EvalRecord r;
    if (j.contains("word")) r.word = j["word"].get<std::string>();
    r.text = std::move(*text);
    out.push_back(std::move(r));
  }
  return out;
}

Error Misaligned(const std::string& what, const std::vector<std::string>& keys) {
  std::string msg = what;
  for (std::size_t i = 0; i < keys.size() && i < 20; ++i) msg += (i ? ", " : ": ") + keys[i];
  if (keys.size() > 20) msg += ", ... (" + std::to_string(keys.size()) + " total)";
  return Error(ErrorKind::kAlignment, msg);
}

struct Aligned {
  std::vector<std::string> words;
  std::vector<metrics::TextPair> pairs;
};

Aligned AlignRecords(const std::vector<EvalRecord>& preds, const std::vector<EvalRecord>& refs,
                     const std::string& mode) {
  Aligned out;
  if (mode == "line") {
    if (preds.size() != refs.size()) {
      throw Misaligned("line count mismatch: " + std::to_string(preds.size()) + " predictions vs " +
                           std::to_string(refs.size()) + " references", {});
    }
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (preds[i].word && refs[i].word && *preds[i].word != *refs[i].word) {
        bad.push_back("line " + std::to_string(i + 1) + " (" + *preds[i].word + " vs " +
                      *refs[i].word + ")");
      }
      out.words.push_back(preds[i].word.value_or(refs[i].word.value_or("")));
      out.pairs.push_back({preds[i].text, refs[i].text});
    }
    if (!bad.empty()) throw Misaligned("word mismatch", bad);
    return out;
  }
  std::map<std::string, const EvalRecord*> by_word;
  std::vector<std::string> bad;
  for (const auto& r : refs) {
    if (!r.word) throw Misaligned("reference without word key", {});
    if (!by_word.emplace(*r.word, &r).second) bad.push_back("duplicate reference " + *r.word);
  }
  std::set<std::string> seen;
  for (const auto& p : preds) {
    if (!p.word) throw Misaligned("prediction without word key", {});
    if (!seen.insert(*p.word).second) {
      bad.push_back("duplicate prediction " + *p.word);
      continue;
    }
    const auto it = by_word.find(*p.word);
    if (it == by_word.end()) {
      bad.push_back("no reference for " + *p.word);
      continue;
    }
    out.words.push_back(*p.word);
    out.pairs.push_back({p.text, it->second->text});
  }
  for (const auto& [word, _] : by_word) {
    if (!seen.count(word)) bad.push_back("no prediction for " + word);
  }
  if (!bad.empty()) throw Misaligned("alignment mismatch", bad);
  return out;
}

// ---------------------------------------------------------------- commands

struct Common {
  std::string output;
  std::size_t jobs = 1;
};

void AddCommon(CLI::App* app, Common& c, bool output_required = true) {
  auto* opt = app->add_option("-o,--output", c.output, "Output directory");
  if (output_required) opt->required();
  app->add_option("--jobs", c.jobs, "Worker threads (outputs do not depend on it)")
      ->check(CLI::PositiveNumber);
}

int CmdIndex(const CorpusFlags& corpus_flags, const Common& c, std::ostream& out) {
  Manifest manifest("index");
  const auto index = corpus_flags.Build(manifest, c.jobs);
  manifest["min_count"] = index.min_count();
  manifest.Output(c.output, "index.json", index.Serialize());
  manifest["counts"] = {{"sentences", index.sentences().size()}, {"words", index.postings().size()}};
  manifest.Write(c.output);
  out << "indexed " << index.sentences().size() << " sentences, " << index.postings().size()
      << " words\n";
  return kExitOk;
}

struct WordWikiFlags {
  CorpusFlags corpus;
  InventoryFlags inventory;
  std::string index_path;
  std::size_t k = 0;
  std::size_t token_budget = builder::kDefaultTokenBudget;
  std::uint64_t seed = 0;
};

int CmdBuildWordWiki(const WordWikiFlags& f, const Common& c, std::ostream& out,
                     std::ostream& err) {
  if (f.corpus.corpus.empty() == f.index_path.empty()) {
    throw ConfigError("build-wordwiki needs exactly one of --corpus or --index");
  }
  if (f.token_budget < builder::kMinTokenBudget) {
    throw ConfigError("--token-budget must be >= " + std::to_string(builder::kMinTokenBudget));
  }
  Manifest manifest("build-wordwiki");
  corpus::CorpusIndex index;
  if (!f.index_path.empty()) {
    manifest.Flag("--index", f.index_path);
    manifest.Input("index", f.index_path);
    index = corpus::CorpusIndex::Deserialize(io::ReadFile(f.index_path));
  } else {
    index = f.corpus.Build(manifest, c.jobs);
  }
  const auto inv = f.inventory.Load(manifest);
  manifest.Flag("--k", std::to_string(f.k));
  manifest.Flag("--token-budget", std::to_string(f.token_budget));
  manifest.Flag("--seed", ToString(f.seed));

  builder::WordWikiOptions options;
  options.k = f.k;
  options.token_budget = f.token_budget;
  options.seed = f.seed;
  options.jobs = c.jobs;
  const auto result = builder::BuildWordWiki(index, *inv, options);

  manifest["seed"] = f.seed;
  manifest["k"] = f.k;
  manifest["token_budget"] = f.token_budget;
  manifest["min_count"] = index.min_count();
  manifest["rng"] = std::string(kRngName);
  manifest["counts"] = {{"entries", result.entries.size()},
                        {"contexts", result.contexts},
                        {"inventory_words", result.inventory_words},
                        {"skipped_absent", result.skipped_absent},
                        {"truncated_entries", result.truncated_entries},
                        {"corpus_sentences", index.sentences().size()}};
  manifest.Output(c.output, "mdm.jsonl", io::ToJsonLines(result.entries));
  manifest.Output(c.output, "model.jsonl", ModelFile(result.entries, &*inv));
  manifest.Write(c.output);

  out << "built " << result.entries.size() << " entries (" << result.skipped_absent
      << " inventory words absent from corpus)\n";
  if (result.entries.empty()) {
    err << "warning: no inventory word occurs in the corpus; dataset is empty\n";
    return kExitEmpty;
  }
  return kExitOk;
}

int CmdBuildEasy(const std::string& sdm_path, const InventoryFlags& inv_flags, const Common& c,
                 std::ostream& out) {
  Manifest manifest("build-easy");
  manifest.Flag("--sdm", sdm_path);
  manifest.Input("sdm", sdm_path);
  const auto inv = inv_flags.Load(manifest);
  const auto entries = builder::BuildMdmEasy(io::ReadSdm(sdm_path));
  manifest["counts"] = {{"entries", entries.size()}};
  manifest.Output(c.output, "mdm.jsonl", io::ToJsonLines(entries));
  manifest.Output(c.output, "model.jsonl", ModelFile(entries, inv ? &*inv : nullptr));
  manifest.Write(c.output);
  out << "built " << entries.size() << " aligned entries\n";
  return entries.empty() ? kExitEmpty : kExitOk;
}

int CmdFormat(const std::string& mdm_path, const InventoryFlags& inv_flags, const Common& c,
              std::ostream& out) {
  Manifest manifest("format");
  manifest.Flag("--mdm", mdm_path);
  manifest.Input("mdm", mdm_path);
  const auto inv = inv_flags.Load(manifest);
  const auto entries = io::ReadMdm(mdm_path);
  manifest["counts"] = {{"entries", entries.size()}};
  manifest.Output(c.output, "model.jsonl", ModelFile(entries, inv ? &*inv : nullptr));
  manifest.Write(c.output);
  out << "formatted " << entries.size() << " entries\n";
  return kExitOk;
}

int CmdUngroup(const std::string& mdm_path, const Common& c, std::ostream& out) {
  Manifest manifest("ungroup");
  manifest.Flag("--mdm", mdm_path);
  manifest.Input("mdm", mdm_path);
  const auto sdm = splits::Ungroup(io::ReadMdm(mdm_path));
  manifest["counts"] = {{"entries", sdm.size()}};
  manifest.Output(c.output, "sdm.jsonl", io::ToJsonLines(sdm));
  manifest.Write(c.output);
  out << "wrote " << sdm.size() << " SDM entries\n";
  return kExitOk;
}

int CmdBuildDel(const std::string& sdm_path, std::size_t d, std::uint64_t seed, const Common& c,
                std::ostream& out, std::ostream& err) {
  Manifest manifest("build-del");
  manifest.Flag("--sdm", sdm_path);
  manifest.Flag("--d", std::to_string(d));
  manifest.Flag("--seed", ToString(seed));
  manifest.Input("sdm", sdm_path);
  const auto split = splits::BuildDel(io::ReadSdm(sdm_path), d, seed);
  manifest["d"] = d;
  manifest["seed"] = seed;
  manifest["rng"] = std::string(kRngName);
  Json held = Json::object();
  for (const auto& [word, senses] : split.held_out) held[word] = senses;
  manifest["held_out"] = held;
  manifest["counts"] = {{"train", split.train.size()},
                        {"test", split.test.size()},
                        {"test_words", split.held_out.size()}};
  manifest.Output(c.output, "train.jsonl", io::ToJsonLines(split.train));
  manifest.Output(c.output, "test.jsonl", io::ToJsonLines(split.test));
  manifest.Write(c.output);
  out << "train " << split.train.size() << ", test " << split.test.size() << " entries\n";
  if (split.test.empty()) err << "warning: no word has more than " << d << " senses; test set is empty\n";
  return kExitOk;
}

int CmdGroupPreds(const std::string& preds_path, const std::string& ref_path, const Common& c,
                  std::ostream& out) {
  Manifest manifest("group-preds");
  manifest.Flag("--preds", preds_path);
  manifest.Flag("--ref", ref_path);
  manifest.Input("preds", preds_path);
  manifest.Input("ref", ref_path);
  const auto grouped = splits::GroupPredictions(io::ReadPredictions(preds_path), io::ReadMdm(ref_path));
  manifest["counts"] = {{"entries", grouped.size()}};
  manifest.Output(c.output, "grouped.jsonl", io::ToJsonLines(grouped));
  manifest.Write(c.output);
  out << "grouped " << grouped.size() << " entries\n";
  return kExitOk;
}

struct EvalFlags {
  std::string metrics;
  std::string preds;
  std::string refs;
  std::string embeddings;
  std::string stats;
  std::string align = "line";
  std::size_t bleu_max_n = 4;
  std::string bleu_variant = "corpus";
};

int CmdEval(const EvalFlags& f, const Common& c, std::ostream& out) {
  std::vector<std::string> requested;
  {
    std::istringstream in(f.metrics);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty()) requested.push_back(item);
    }
  }
  if (requested.empty() && f.stats.empty()) throw ConfigError("eval needs --metrics and/or --stats");
  const auto is_distinct = [](const std::string& m) {
    return m.rfind("distinct", 0) == 0 && m.size() > 8 &&
           std::all_of(m.begin() + 8, m.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
  };
  for (const auto& m : requested) {
    static const std::set<std::string> kKnown = {"bleu", "rouge1", "rouge2", "rougeL", "bs", "overlap"};
    if (!kKnown.count(m) && !is_distinct(m)) throw ConfigError("unknown metric: " + m);
    if (m == "bs" && f.embeddings.empty()) throw ConfigError("metric bs requires --embeddings");
  }
  if (!requested.empty() && f.preds.empty()) throw ConfigError("--metrics requires --preds");

  Manifest manifest("eval");
  Json reports = Json::array();
  std::vector<metrics::MetricReport> summary;

  if (!requested.empty()) {
    manifest.Flag("--metrics", f.metrics);
    manifest.Flag("--preds", f.preds);
    manifest.Input("preds", f.preds);
    const auto preds = ReadEvalRecords(f.preds, {"prediction", "target", "definitions", "definition"});
    std::vector<EvalRecord> refs;
    if (!f.refs.empty()) {
      manifest.Flag("--refs", f.refs);
      manifest.Input("refs", f.refs);
      refs = ReadEvalRecords(f.refs, {"reference", "target", "definitions", "definition"});
    } else {
      refs = ReadEvalRecords(f.preds, {"reference"});
    }
    manifest.Flag("--align", f.align);
    manifest.Flag("--bleu-max-n", std::to_string(f.bleu_max_n));
    manifest.Flag("--bleu-variant", f.bleu_variant);
    const auto aligned = AlignRecords(preds, refs, f.align);

    std::optional<metrics::EmbeddingTable> table;
    if (!f.embeddings.empty()) {
      manifest.Flag("--embeddings", f.embeddings);
      manifest.Input("embeddings", f.embeddings);
      table = metrics::LoadEmbeddings(f.embeddings);
    }
    for (const auto& m : requested) {
      metrics::MetricReport report;
      if (m == "bleu") {
        metrics::BleuOptions options;
        options.max_n = f.bleu_max_n;
        options.variant = f.bleu_variant == "sentence_avg" ? metrics::BleuVariant::kSentenceAverage
                                                           : metrics::BleuVariant::kCorpus;
        report = metrics::Bleu(aligned.pairs, options, c.jobs);
      } else if (m == "rouge1" || m == "rouge2") {
        report = metrics::RougeN(aligned.pairs, m == "rouge1" ? 1 : 2, c.jobs);
      } else if (m == "rougeL") {
        report = metrics::RougeL(aligned.pairs, c.jobs);
      } else if (m == "bs") {
        report = metrics::GreedyMatch(aligned.pairs, *table, c.jobs);
      } else if (m == "overlap") {
        std::vector<std::pair<std::string, std::vector<std::string>>> entries;
        for (std::size_t i = 0; i < aligned.pairs.size(); ++i) {
          entries.emplace_back(aligned.words[i], builder::SplitSegments(aligned.pairs[i].candidate));
        }
        report.name = "overlap";
        report.corpus_score = metrics::OverlapRate(entries);
        std::vector<std::pair<std::string, std::vector<std::string>>> gold;
        for (std::size_t i = 0; i < aligned.pairs.size(); ++i) {
          gold.emplace_back(aligned.words[i], builder::SplitSegments(aligned.pairs[i].reference));
        }
        report.stats["reference_overlap"] = metrics::OverlapRate(gold);
        report.config = {{"match", "headword_token_lowercase"}};
      } else {
        std::vector<std::vector<std::string>> definitions;
        for (const auto& p : aligned.pairs) definitions.push_back(builder::SplitSegments(p.candidate));
        report = metrics::DistinctReport(definitions, std::stoul(m.substr(8)));
      }
      reports.push_back(io::ToJson(report));
      summary.push_back(std::move(report));
    }
  }
  std::string stats_text;
  if (!f.stats.empty()) {
    manifest.Flag("--stats", f.stats);
    manifest.Input("stats", f.stats);
    const auto stats = metrics::ComputeDatasetStats(io::ReadMdm(f.stats));
    reports.push_back(io::ToJson(stats));
    std::ostringstream s;
    s << "entries " << stats.entries << ", mean context tokens " << stats.mean_context_tokens
      << ", mean N " << stats.mean_contexts << ", mean M " << stats.mean_definitions << "\n";
    stats_text = s.str();
  }

  const std::string table_text = (summary.empty() ? std::string() : io::SummaryTable(summary)) + stats_text;
  out << table_text;
  if (!c.output.empty()) {
    manifest.Output(c.output, "reports.json", reports.dump(2) + "\n");
    manifest.Output(c.output, "summary.txt", table_text);
    manifest.Write(c.output);
  }
  return kExitOk;
}

int CmdReplay(const std::string& manifest_path, const Common& c, std::ostream& out,
              std::ostream& err) {
  const auto manifest = Json::parse(io::ReadFile(manifest_path));
  for (const auto& input : manifest.at("inputs")) {
    const auto path = input.at("path").get<std::string>();
    if (io::FileDigest(path) != input.at("digest").get<std::string>()) {
      throw IoError("input changed since the manifest was written: " + path);
    }
  }
  auto args = manifest.at("argv").get<std::vector<std::string>>();
  args.insert(args.end(), {"-o", c.output, "--jobs", std::to_string(c.jobs)});
  return Run(args, out, err);
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return kExitConfig;
    case ErrorKind::kIo: return kExitIo;
    case ErrorKind::kEmpty: return kExitEmpty;
    case ErrorKind::kAlignment: return kExitAlignment;
  }
  return kExitIo;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build multiple-definition-modeling datasets and score definition generators", "mdmkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  int code = kExitOk;

  CorpusFlags index_flags;
  auto* index_cmd = app.add_subcommand("index", "Tokenize a corpus and write its word index");
  index_flags.Register(index_cmd, true);
  AddCommon(index_cmd, common);

  WordWikiFlags ww;
  auto* ww_cmd = app.add_subcommand("build-wordwiki", "Pair inventory glosses with corpus sentences");
  ww.corpus.Register(ww_cmd, false);
  ww_cmd->add_option("--index", ww.index_path, "Prebuilt index from `index`")->check(CLI::ExistingFile);
  ww.inventory.Register(ww_cmd, true);
  ww_cmd->add_option("--k", ww.k, "Extra contexts per word (N = M + k); presets 0, 2, 4");
  ww_cmd->add_option("--token-budget", ww.token_budget, "Max context tokens per entry");
  ww_cmd->add_option("--seed", ww.seed, "Sampling seed");
  AddCommon(ww_cmd, common);

  std::string sdm_path;
  std::string mdm_path;
  InventoryFlags easy_inv;
  auto* easy_cmd = app.add_subcommand("build-easy", "Group aligned SDM pairs into MDM entries");
  easy_cmd->add_option("--sdm", sdm_path, "SDM JSON-Lines")->required()->check(CLI::ExistingFile);
  easy_inv.Register(easy_cmd, false);
  AddCommon(easy_cmd, common);

  InventoryFlags format_inv;
  auto* format_cmd = app.add_subcommand("format", "Write model-ready examples for an MDM file");
  format_cmd->add_option("--mdm", mdm_path, "MDM JSON-Lines")->required()->check(CLI::ExistingFile);
  format_inv.Register(format_cmd, false);
  AddCommon(format_cmd, common);

  auto* ungroup_cmd = app.add_subcommand("ungroup", "Split aligned MDM entries into SDM pairs");
  ungroup_cmd->add_option("--mdm", mdm_path, "MDM JSON-Lines")->required()->check(CLI::ExistingFile);
  AddCommon(ungroup_cmd, common);

  std::size_t d = 1;
  std::uint64_t del_seed = 0;
  auto* del_cmd = app.add_subcommand("build-del", "Hold out d senses per word for novel-sense tests");
  del_cmd->add_option("--sdm", sdm_path, "SDM JSON-Lines")->required()->check(CLI::ExistingFile);
  del_cmd->add_option("--d", d, "Senses held out per word")->required()->check(CLI::PositiveNumber);
  del_cmd->add_option("--seed", del_seed, "Selection seed");
  AddCommon(del_cmd, common);

  std::string preds_path;
  std::string ref_path;
  auto* group_cmd = app.add_subcommand("group-preds", "Join per-context predictions per word");
  group_cmd->add_option("--preds", preds_path, "Predictions JSON-Lines")->required()->check(CLI::ExistingFile);
  group_cmd->add_option("--ref", ref_path, "Reference MDM JSON-Lines")->required()->check(CLI::ExistingFile);
  AddCommon(group_cmd, common);

  EvalFlags ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions or report dataset statistics");
  eval_cmd->add_option("--metrics", ev.metrics,
                       "Comma list: bleu,rouge1,rouge2,rougeL,bs,distinct<N>,overlap");
  eval_cmd->add_option("--preds", ev.preds, "Predictions JSON-Lines")->check(CLI::ExistingFile);
  eval_cmd->add_option("--refs", ev.refs, "References JSON-Lines")->check(CLI::ExistingFile);
  eval_cmd->add_option("--embeddings", ev.embeddings, "Embedding TSV for bs")->check(CLI::ExistingFile);
  eval_cmd->add_option("--stats", ev.stats, "MDM JSON-Lines to describe")->check(CLI::ExistingFile);
  eval_cmd->add_option("--align", ev.align, "Pair records by line or by word")
      ->check(CLI::IsMember({"line", "word"}));
  eval_cmd->add_option("--bleu-max-n", ev.bleu_max_n, "Highest BLEU n-gram order")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--bleu-variant", ev.bleu_variant, "corpus or sentence_avg")
      ->check(CLI::IsMember({"corpus", "sentence_avg"}));
  AddCommon(eval_cmd, common, false);

  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "Rebuild outputs from a manifest");
  replay_cmd->add_option("--manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
  AddCommon(replay_cmd, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*index_cmd) code = CmdIndex(index_flags, common, out);
    else if (*ww_cmd) code = CmdBuildWordWiki(ww, common, out, err);
    else if (*easy_cmd) code = CmdBuildEasy(sdm_path, easy_inv, common, out);
    else if (*format_cmd) code = CmdFormat(mdm_path, format_inv, common, out);
    else if (*ungroup_cmd) code = CmdUngroup(mdm_path, common, out);
    else if (*del_cmd) code = CmdBuildDel(sdm_path, d, del_seed, common, out, err);
    else if (*group_cmd) code = CmdGroupPreds(preds_path, ref_path, common, out);
    else if (*eval_cmd) code = CmdEval(ev, common, out);
    else if (*replay_cmd) code = CmdReplay(manifest_path, common, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return Run(args, std::cout, std::cerr);
}

}  // namespace mdm::cli
