// Command-line front end: one subcommand per analysis, JSON config with flag
// overrides, every output stamped with version, config hash and seed.

#include "semdrift/aligner.hpp"
#include "semdrift/bundled.hpp"
#include "semdrift/drift.hpp"
#include "semdrift/embedding.hpp"
#include "semdrift/error.hpp"
#include "semdrift/json_io.hpp"
#include "semdrift/parallel.hpp"
#include "semdrift/phylo.hpp"
#include "semdrift/quality.hpp"
#include "semdrift/rsa.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace semdrift;

namespace {

constexpr const char* kVersion = "0.1.0";

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::string manifest;
  std::string concepts = "swadesh";
  std::string anchor = "en";
  std::size_t vocab_cap = kDefaultVocabCap;
  bool normalize = true;
  std::uint64_t seed = 0;
  std::size_t iterations = 50'000;
  double lo = 0.3;
  double hi = 0.8;
  double fuzzy_cutoff = 0.6;
  std::string clusters;
  std::string gold;
  std::string matrix;
  std::string metric = "row-euclidean";
  std::vector<std::string> dicts;
  std::vector<std::string> focus;
  std::vector<std::string> languages;
  std::size_t neighbors = 5;
  std::string word;
  std::size_t k = 5;
  bool include_self = true;
  Format format = Format::Csv;
  std::string out_dir = ".";
  unsigned threads = 0;
};

// Flag values stay empty unless given on the command line, so they can be
// layered over the config file.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> manifest, concepts, anchor, clusters, gold, matrix, metric, word,
      format, out_dir;
  std::optional<std::size_t> vocab_cap, iterations, neighbors, k;
  std::optional<bool> normalize, include_self;
  std::optional<std::uint64_t> seed;
  std::optional<double> lo, hi, fuzzy_cutoff;
  std::optional<unsigned> threads;
  std::vector<std::string> dicts, focus, languages;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Bundled names win over paths.
std::string resolve_text(const std::string& name_or_path, const char* what) {
  if (auto bundled = bundled_resource(name_or_path)) return std::string(*bundled);
  if (!fs::exists(name_or_path)) {
    throw ValidationError(std::string(what) + " '" + name_or_path +
                          "' is neither a bundled resource nor an existing file");
  }
  return read_file(name_or_path);
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ValidationError("unknown format '" + s + "' (expected csv or json)");
}

ClusterMetric parse_metric(const std::string& s) {
  if (s == "row-euclidean") return ClusterMetric::RowEuclidean;
  if (s == "one-minus-similarity") return ClusterMetric::OneMinusSimilarity;
  throw ValidationError("unknown metric '" + s + "' (expected row-euclidean or one-minus-similarity)");
}

template <typename T>
void take(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void apply_config_file(RunConfig& cfg, const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config " + path.string() + " must be a JSON object");
  try {
    take(j, "manifest", cfg.manifest);
    take(j, "concepts", cfg.concepts);
    take(j, "anchor", cfg.anchor);
    take(j, "vocab_cap", cfg.vocab_cap);
    take(j, "normalize", cfg.normalize);
    take(j, "seed", cfg.seed);
    take(j, "iterations", cfg.iterations);
    take(j, "lo", cfg.lo);
    take(j, "hi", cfg.hi);
    take(j, "fuzzy_cutoff", cfg.fuzzy_cutoff);
    take(j, "clusters", cfg.clusters);
    take(j, "gold", cfg.gold);
    take(j, "matrix", cfg.matrix);
    take(j, "metric", cfg.metric);
    take(j, "dicts", cfg.dicts);
    take(j, "focus", cfg.focus);
    take(j, "languages", cfg.languages);
    take(j, "neighbors", cfg.neighbors);
    take(j, "word", cfg.word);
    take(j, "k", cfg.k);
    take(j, "include_self", cfg.include_self);
    take(j, "out_dir", cfg.out_dir);
    take(j, "threads", cfg.threads);
    if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
  } catch (const Json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  // Relative paths in a config file are relative to the file.
  const fs::path base = path.parent_path();
  auto rebase = [&](std::string& p) {
    if (!p.empty() && !bundled_resource(p) && fs::path(p).is_relative()) p = (base / p).string();
  };
  rebase(cfg.manifest);
  rebase(cfg.concepts);
  rebase(cfg.clusters);
  rebase(cfg.gold);
  rebase(cfg.matrix);
  if (j.contains("out_dir")) rebase(cfg.out_dir);
  for (auto& d : cfg.dicts) {
    auto eq = d.find('=');
    if (eq != std::string::npos && fs::path(d.substr(eq + 1)).is_relative()) {
      d = d.substr(0, eq + 1) + (base / d.substr(eq + 1)).string();
    }
  }
}

template <typename T>
void override_with(T& target, const std::optional<T>& flag) {
  if (flag) target = *flag;
}

RunConfig effective_config(const std::string& command, const Flags& f) {
  RunConfig cfg;
  cfg.command = command;
  if (f.config) apply_config_file(cfg, *f.config);
  override_with(cfg.manifest, f.manifest);
  override_with(cfg.concepts, f.concepts);
  override_with(cfg.anchor, f.anchor);
  override_with(cfg.vocab_cap, f.vocab_cap);
  override_with(cfg.normalize, f.normalize);
  override_with(cfg.seed, f.seed);
  override_with(cfg.iterations, f.iterations);
  override_with(cfg.lo, f.lo);
  override_with(cfg.hi, f.hi);
  override_with(cfg.fuzzy_cutoff, f.fuzzy_cutoff);
  override_with(cfg.clusters, f.clusters);
  override_with(cfg.gold, f.gold);
  override_with(cfg.matrix, f.matrix);
  override_with(cfg.metric, f.metric);
  override_with(cfg.word, f.word);
  override_with(cfg.neighbors, f.neighbors);
  override_with(cfg.k, f.k);
  override_with(cfg.include_self, f.include_self);
  override_with(cfg.out_dir, f.out_dir);
  override_with(cfg.threads, f.threads);
  if (f.format) cfg.format = parse_format(*f.format);
  if (!f.dicts.empty()) cfg.dicts = f.dicts;
  if (!f.focus.empty()) cfg.focus = f.focus;
  if (!f.languages.empty()) cfg.languages = f.languages;
  return cfg;
}

// Everything that can change an output, and nothing that cannot (thread
// count and output location are left out so they never alter the bytes).
std::string config_hash(const RunConfig& c) {
  const Json j{{"command", c.command},     {"manifest", c.manifest},
               {"concepts", c.concepts},   {"anchor", c.anchor},
               {"vocab_cap", c.vocab_cap}, {"normalize", c.normalize},
               {"seed", c.seed},           {"iterations", c.iterations},
               {"lo", c.lo},               {"hi", c.hi},
               {"fuzzy_cutoff", c.fuzzy_cutoff}, {"clusters", c.clusters},
               {"gold", c.gold},           {"matrix", c.matrix},
               {"metric", c.metric},       {"dicts", c.dicts},
               {"focus", c.focus},         {"languages", c.languages},
               {"neighbors", c.neighbors}, {"word", c.word},
               {"k", c.k},                 {"include_self", c.include_self},
               {"format", c.format == Format::Csv ? "csv" : "json"}};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

class Output {
 public:
  explicit Output(const RunConfig& cfg) : cfg_(cfg), hash_(config_hash(cfg)) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + cfg.out_dir + ": " + ec.message());
  }

  Format format() const { return cfg_.format; }
  const char* ext() const { return cfg_.format == Format::Csv ? ".csv" : ".json"; }

  std::string provenance_line() const {
    return std::string("semdrift ") + kVersion + " config=" + hash_ + " seed=" + std::to_string(cfg_.seed);
  }

  Json provenance() const {
    return Json{{"tool", "semdrift"}, {"version", kVersion}, {"config_hash", hash_}, {"seed", cfg_.seed}};
  }

  template <typename Writer>
  void csv(const std::string& name, Writer&& write) const {
    std::ostringstream ss;
    ss << "# " << provenance_line() << '\n';
    write(ss);
    put(name, ss.str());
  }

  void json(const std::string& name, const Json& body) const {
    Json out{{"provenance", provenance()}};
    for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
    put(name, out.dump(2) + "\n");
  }

  void text(const std::string& name, const std::string& body) const { put(name, body); }

 private:
  void put(const std::string& name, const std::string& body) const {
    const fs::path path = fs::path(cfg_.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
    if (!out) throw std::runtime_error("write failed for " + path.string());
    std::cout << "wrote " << path.string() << '\n';
  }

  const RunConfig& cfg_;
  std::string hash_;
};

std::vector<LanguageId> to_ids(const std::vector<std::string>& codes) {
  std::vector<LanguageId> out;
  for (const auto& c : codes) out.emplace_back(c);
  return out;
}

std::vector<std::string> concept_list(const RunConfig& cfg) {
  std::istringstream in(resolve_text(cfg.concepts, "concept list"));
  auto list = read_concept_list(in);
  if (list.empty()) throw ValidationError("concept list '" + cfg.concepts + "' is empty");
  return list;
}

// Builds the concept set for `wanted` languages (every manifest language
// when empty). Word spaces are loaded and resolved one at a time so only the
// anchor and one target are resident together.
ConceptSet load_concept_set(const RunConfig& cfg, const std::vector<LanguageId>& wanted = {}) {
  if (cfg.manifest.empty()) throw ValidationError("--manifest is required");
  if (!fs::exists(cfg.manifest)) throw ValidationError("manifest " + cfg.manifest + " does not exist");
  const Manifest manifest = load_manifest(cfg.manifest);
  const LanguageId anchor(cfg.anchor);

  auto is_wanted = [&](const LanguageId& l) {
    return wanted.empty() || l == anchor ||
           std::find(wanted.begin(), wanted.end(), l) != wanted.end();
  };
  auto check_all_present = [&](const std::vector<ManifestEntry>& entries) {
    for (const auto& w : wanted) {
      bool present = std::any_of(entries.begin(), entries.end(),
                                 [&](const ManifestEntry& e) { return e.language == w; });
      if (!present) throw ValidationError("language '" + w.code() + "' is not in the manifest");
    }
  };

  const auto aligned = manifest.with_role(ManifestRole::AlignedItems);
  const auto spaces = manifest.with_role(ManifestRole::WordSpace);
  if (!aligned.empty() && !spaces.empty()) {
    throw ValidationError("manifest mixes word-space and aligned-items entries");
  }

  ConceptSet set;
  if (!aligned.empty()) {
    check_all_present(aligned);
    std::vector<std::pair<LanguageId, fs::path>> paths;
    for (const auto& e : aligned) {
      if (is_wanted(e.language)) paths.emplace_back(e.language, e.path);
    }
    const AlignedItemSet items = load_aligned_items(paths);
    if (!items.language_index(anchor)) {
      throw ValidationError("anchor '" + anchor.code() + "' is not in the manifest");
    }
    set = concept_set_from_aligned(items, anchor);
  } else {
    check_all_present(spaces);
    const VecLoadOptions opts{cfg.vocab_cap, cfg.normalize, false};
    auto anchor_entry = std::find_if(spaces.begin(), spaces.end(),
                                     [&](const ManifestEntry& e) { return e.language == anchor; });
    if (anchor_entry == spaces.end()) {
      throw ValidationError("anchor '" + anchor.code() + "' is not in the manifest");
    }
    const auto list = concept_list(cfg);
    {
      const auto anchor_space = load_vec_file<float>(anchor_entry->path, anchor, opts);
      set = anchor_concept_set(std::span<const std::string>(list), anchor_space);
    }
    for (const auto& e : spaces) {
      if (e.language == anchor || !is_wanted(e.language)) continue;
      const auto space = load_vec_file<float>(e.path, e.language, opts);
      add_language(set, space);
    }
  }

  // The anchor is always loaded (translation starts from it) but only
  // analysed when requested.
  if (!wanted.empty()) set = restrict_languages(set, wanted);
  for (const auto& d : set.dropped) {
    std::cout << "dropped concept '" << d.term << "': " << d.reason << '\n';
  }
  return set;
}

RsaOptions rsa_options(const RunConfig& cfg) { return RsaOptions{cfg.include_self}; }

void cmd_rsa(const RunConfig& cfg) {
  const ConceptSet set = load_concept_set(cfg, to_ids(cfg.languages));
  const Output out(cfg);
  std::cout << set.size() << " concepts retained, " << set.dropped.size() << " dropped\n";

  std::vector<Rsm> rsms;
  for (const auto& lang : set.languages()) rsms.push_back(build_rsm(set, lang));
  const auto matrix = build_language_matrix(rsms, rsa_options(cfg));
  const auto variance = word_pair_variance(set);

  for (const auto& rsm : rsms) {
    const std::string name = "rsm_" + rsm.language.code();
    if (out.format() == Format::Csv) {
      out.csv(name + ".csv", [&](std::ostream& os) { write_csv(os, rsm); });
    } else {
      out.json(name + ".json", as_json(rsm));
    }
  }
  if (out.format() == Format::Csv) {
    out.csv("language_matrix.csv", [&](std::ostream& os) { write_csv(os, matrix); });
    out.csv("word_pair_variance.csv", [&](std::ostream& os) { write_csv(os, variance); });
  } else {
    out.json("language_matrix.json", as_json(matrix));
    out.json("word_pair_variance.json", as_json(variance));
  }
  if (matrix.degenerate > 0) {
    spdlog::warn("{} degenerate similarity rows counted as 0", matrix.degenerate);
  }
}

void cmd_cluster(const RunConfig& cfg) {
  if (!(cfg.lo < cfg.hi)) throw ValidationError("--lo must be below --hi");
  if (cfg.iterations == 0) throw ValidationError("--iterations must be positive");
  const ClusterMetric metric = parse_metric(cfg.metric);

  LanguageSimilarityMatrix matrix;
  if (!cfg.matrix.empty()) {
    if (!fs::exists(cfg.matrix)) throw ValidationError("matrix " + cfg.matrix + " does not exist");
    std::ifstream in(cfg.matrix, std::ios::binary);
    matrix = read_language_matrix_csv(in);
  } else {
    const ConceptSet set = load_concept_set(cfg, to_ids(cfg.languages));
    matrix = build_language_matrix(set, rsa_options(cfg));
  }

  std::optional<PhyloTree> gold;
  if (!cfg.gold.empty()) {
    gold = parse_newick(resolve_text(cfg.gold, "gold tree"));
  }

  const PhyloTree tree = ward_cluster(matrix, metric);
  const Output out(cfg);
  out.text("tree.nwk", "[" + out.provenance_line() + "]\n" + serialize_newick(tree) + "\n");
  out.csv("merges.csv", [&](std::ostream& os) { write_merges_csv(os, tree); });
  if (out.format() == Format::Json) out.json("language_matrix.json", as_json(matrix));

  if (!gold) return;
  check_same_leaves(tree, *gold);
  const RandomBaselineOptions ropts{cfg.iterations, cfg.lo, cfg.hi, cfg.seed, metric};
  const BaselineResult random = random_baseline(matrix.languages, *gold, ropts);
  const BaselineResult permuted = permutation_baseline(matrix, *gold, cfg.iterations, cfg.seed, metric);
  const TreeScore score = score_tree(tree, *gold, random.mean);

  Json body = as_json(score, random);
  Json perm = Json{{"baseline", as_json(permuted)},
                   {"quality_change_pct", quality_change_pct(permuted.mean, random.mean)}};
  if (permuted.mean > 0.0) {
    perm["model_vs_permutation_pct"] = quality_change_pct(score.model_distance, permuted.mean);
  }
  body["permutation"] = std::move(perm);
  out.json("score.json", body);
  std::cout << "model distance " << score.model_distance << ", random baseline " << random.mean
            << ", quality change " << format_number(score.quality_change_pct) << "%\n";
}

void cmd_drift(const RunConfig& cfg) {
  if (cfg.clusters.empty()) throw ValidationError("--clusters is required");
  const ClusterPartition partition = parse_partition(resolve_text(cfg.clusters, "cluster config"));
  const ConceptSet set = load_concept_set(cfg, partition.members());
  const DriftReport report = compute_drift(set, partition, rsa_options(cfg));
  const Output out(cfg);
  if (out.format() == Format::Csv) {
    out.csv("drift.csv", [&](std::ostream& os) { write_csv(os, report); });
  } else {
    out.json("drift.json", as_json(report));
  }
}

std::vector<BilingualDictionary> load_dicts(const RunConfig& cfg) {
  std::vector<BilingualDictionary> dicts;
  for (const auto& spec : cfg.dicts) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw ValidationError("--dict expects LANG=PATH, got '" + spec + "'");
    }
    dicts.push_back(load_dictionary_tsv(spec.substr(eq + 1), LanguageId(cfg.anchor),
                                        LanguageId(spec.substr(0, eq))));
  }
  return dicts;
}

void cmd_quality(const RunConfig& cfg) {
  if (!(cfg.fuzzy_cutoff > 0.0 && cfg.fuzzy_cutoff <= 1.0)) {
    throw ValidationError("--fuzzy-cutoff must lie in (0, 1]");
  }
  const LanguageId anchor(cfg.anchor);
  auto wanted = to_ids(cfg.languages);
  if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), anchor) == wanted.end()) {
    wanted.insert(wanted.begin(), anchor);
  }
  const ConceptSet set = load_concept_set(cfg, wanted);
  QualityReport report;

  const bool aligned = load_manifest(cfg.manifest).with_role(ManifestRole::AlignedItems).size() > 0;
  if (aligned) {
    // Re-wrap the resolved rows; they are exactly the aligned item vectors.
    AlignedItemSet items;
    items.item_ids = set.concepts;
    for (const auto& r : set.resolutions) {
      items.languages.push_back(r.language);
      items.matrices.push_back(r.vectors);
    }
    report.method = "similarity-search";
    for (const auto& lang : set.languages()) {
      if (lang == anchor) continue;
      auto one = similarity_search_accuracy(items, anchor, lang);
      report.languages.push_back(one.languages.front());
    }
  } else {
    const auto dicts = load_dicts(cfg);
    std::vector<LanguageId> evaluated;
    for (const auto& lang : set.languages()) {
      if (lang == anchor) continue;
      const bool has = std::any_of(dicts.begin(), dicts.end(),
                                   [&](const BilingualDictionary& d) { return d.target == lang; });
      if (has) {
        evaluated.push_back(lang);
      } else {
        spdlog::warn("no dictionary for '{}', language skipped", lang.code());
      }
    }
    if (evaluated.empty()) throw ValidationError("no language has a dictionary; pass --dict LANG=PATH");
    report = word_quality(set, dicts, cfg.fuzzy_cutoff, evaluated);
  }

  const Output out(cfg);
  if (out.format() == Format::Csv) {
    out.csv("quality.csv", [&](std::ostream& os) { write_csv(os, report); });
  } else {
    out.json("quality.json", as_json(report));
  }
}

void cmd_project(const RunConfig& cfg) {
  if (cfg.focus.empty()) throw ValidationError("--focus is required");
  const ConceptSet set = load_concept_set(cfg, to_ids(cfg.languages));
  const Projection2D projection =
      project_concepts(set, set.languages(), cfg.focus, static_cast<Index>(cfg.neighbors));
  const Output out(cfg);
  if (out.format() == Format::Csv) {
    out.csv("projection.csv", [&](std::ostream& os) { write_csv(os, projection); });
  } else {
    out.json("projection.json", as_json(projection));
  }
}

void cmd_translate(const RunConfig& cfg) {
  if (cfg.word.empty()) throw ValidationError("--word is required");
  if (cfg.k == 0) throw ValidationError("--k must be positive");
  if (cfg.manifest.empty()) throw ValidationError("--manifest is required");
  if (!fs::exists(cfg.manifest)) throw ValidationError("manifest " + cfg.manifest + " does not exist");
  const Manifest manifest = load_manifest(cfg.manifest);
  const auto spaces = manifest.with_role(ManifestRole::WordSpace);
  const LanguageId anchor(cfg.anchor);
  const VecLoadOptions opts{cfg.vocab_cap, cfg.normalize, false};
  const auto wanted = to_ids(cfg.languages);

  auto anchor_entry = std::find_if(spaces.begin(), spaces.end(),
                                   [&](const ManifestEntry& e) { return e.language == anchor; });
  if (anchor_entry == spaces.end()) {
    throw ValidationError("anchor '" + anchor.code() + "' has no word space in the manifest");
  }
  VectorXd query;
  {
    const auto anchor_space = load_vec_file<float>(anchor_entry->path, anchor, opts);
    auto row = anchor_space.lookup(cfg.word);
    if (!row) throw ValidationError("'" + cfg.word + "' is not in the " + anchor.code() + " vocabulary");
    query = row->template cast<double>();
  }

  std::vector<TranslationCandidates> results;
  for (const auto& e : spaces) {
    if (e.language == anchor) continue;
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), e.language) == wanted.end()) continue;
    const auto space = load_vec_file<float>(e.path, e.language, opts);
    results.push_back(translate(query, space, static_cast<Index>(cfg.k), cfg.word));
  }

  const Output out(cfg);
  if (out.format() == Format::Csv) {
    out.csv("translations.csv", [&](std::ostream& os) {
      os << "query,language,rank,token,cosine\n";
      for (const auto& r : results) {
        for (std::size_t i = 0; i < r.top_k.size(); ++i) {
          os << r.query << ',' << r.language.code() << ',' << i + 1 << ',' << r.top_k[i].token << ','
             << format_number(r.top_k[i].cosine) << '\n';
        }
      }
    });
  } else {
    Json all = Json::array();
    for (const auto& r : results) all.push_back(as_json(r));
    out.json("translations.json", Json{{"translations", std::move(all)}});
  }
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--manifest", f.manifest, "workspace manifest (JSON)");
  sub->add_option("--anchor", f.anchor, "anchor language (default en)");
  sub->add_option("--seed", f.seed, "seed for every random draw (default 0)");
  sub->add_option("--threads", f.threads, "worker threads, 0 = all cores");
  sub->add_option("--out-dir", f.out_dir, "output directory (default .)");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--vocab-cap", f.vocab_cap, "rows read per vector file (default 200000)");
  sub->add_option("--normalize", f.normalize, "L2-normalize vectors on load (default true)");
  sub->add_option("--languages", f.languages, "restrict to these languages")->delimiter(',');
}

void add_concepts(CLI::App* sub, Flags& f) {
  sub->add_option("--concepts", f.concepts, "concept list path or bundled name (swadesh, pereira)");
  sub->add_option("--include-self", f.include_self, "keep self-similarity in similarity vectors");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-lingual semantic organisation analysis"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);
  Flags f;

  auto* rsa = app.add_subcommand("rsa", "RSMs, second-order language matrix, word-pair variance");
  add_common(rsa, f);
  add_concepts(rsa, f);

  auto* cluster = app.add_subcommand("cluster", "Ward tree over languages, optionally scored");
  add_common(cluster, f);
  add_concepts(cluster, f);
  cluster->add_option("--matrix", f.matrix, "precomputed language matrix CSV");
  cluster->add_option("--gold", f.gold, "gold Newick tree path or bundled name");
  cluster->add_option("--iterations", f.iterations, "baseline iterations (default 50000)");
  cluster->add_option("--lo", f.lo, "random baseline lower bound (default 0.3)");
  cluster->add_option("--hi", f.hi, "random baseline upper bound (default 0.8)");
  cluster->add_option("--metric", f.metric, "row-euclidean or one-minus-similarity");

  auto* drift = app.add_subcommand("drift", "per-concept semantic drift for a cluster partition");
  add_common(drift, f);
  add_concepts(drift, f);
  drift->add_option("--clusters", f.clusters, "partition JSON path or bundled name");

  auto* quality = app.add_subcommand("quality", "translation quality of the loaded spaces");
  add_common(quality, f);
  add_concepts(quality, f);
  quality->add_option("--dict", f.dicts, "LANG=PATH dictionary TSV from the anchor language");
  quality->add_option("--fuzzy-cutoff", f.fuzzy_cutoff, "close-match ratio threshold (default 0.6)");

  auto* project = app.add_subcommand("project", "2-D PCA projection of focus concepts");
  add_common(project, f);
  add_concepts(project, f);
  project->add_option("--focus", f.focus, "focus concepts")->delimiter(',');
  project->add_option("--neighbors", f.neighbors, "in-list neighbours per focus concept (default 5)");

  auto* translate_cmd = app.add_subcommand("translate", "nearest-neighbour translations of one word");
  add_common(translate_cmd, f);
  translate_cmd->add_option("--word", f.word, "anchor-language word");
  translate_cmd->add_option("--k", f.k, "neighbours per language (default 5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = effective_config(command, f);
    set_thread_count(cfg.threads);
    if (command == "rsa") cmd_rsa(cfg);
    else if (command == "cluster") cmd_cluster(cfg);
    else if (command == "drift") cmd_drift(cfg);
    else if (command == "quality") cmd_quality(cfg);
    else if (command == "project") cmd_project(cfg);
    else cmd_translate(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
