#include "oxmc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oxmc/analysis.hpp"
#include "oxmc/augmentor.hpp"
#include "oxmc/biassim.hpp"
#include "oxmc/decoder.hpp"
#include "oxmc/io.hpp"
#include "oxmc/metrics.hpp"
#include "oxmc/rng.hpp"
#include "oxmc/splitter.hpp"

namespace oxmc::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Round-trip-stable fixed formatting for TSV values.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_manifest(const fs::path& p, const char* command, ojson config, ojson extra = {}) {
  ojson m;
  m["tool"] = "oxmc";
  m["command"] = command;
  m["config"] = std::move(config);
  if (!extra.is_null()) m["results"] = std::move(extra);
  io::atomic_write_file(p, m.dump(2) + "\n");
}

std::string report_tsv(const MetricReport& rep) {
  std::string out = "metric\tvalue\n";
  out += "k\t" + std::to_string(rep.k) + "\n";
  out += "evaluated\t" + std::to_string(rep.evaluated) + "\n";
  out += "skipped_empty_gt\t" + std::to_string(rep.skipped_empty_gt) + "\n";
  out += "p_at_k\t" + num(rep.p_at_k) + "\n";
  out += "r_at_k\t" + num(rep.r_at_k) + "\n";
  out += "f1_at_k\t" + num(rep.f1_at_k) + "\n";
  out += "p_at_O\t" + num(rep.p_at_O) + "\n";
  out += "r_at_O\t" + num(rep.r_at_O) + "\n";
  out += "f1_at_O\t" + num(rep.f1_at_O) + "\n";
  out += "b_at_k\t" + num(rep.b_at_k) + "\n";
  out += "uniq_at_k\t" + num(rep.uniq_at_k) + "\n";
  return out;
}

std::vector<TrainingSequence> dataset_sequences(const Dataset& d, Paradigm paradigm,
                                                const Vocab& vocab, std::size_t max_text_tokens,
                                                const std::map<std::string, std::string>* origin,
                                                std::uint64_t aug_weight) {
  std::vector<TrainingSequence> seqs;
  for (const Instance& inst : d.instances) {
    std::uint64_t weight = 1;
    if (origin) {
      auto it = origin->find(inst.item_id);
      if (it != origin->end() && it->second == "augmented") weight = aug_weight;
    }
    for (TrainingSequence& seq :
         build_training_sequences(inst, paradigm, vocab, max_text_tokens, weight))
      seqs.push_back(std::move(seq));
  }
  return seqs;
}

std::vector<Prediction> decode_dataset(const NgramScorer& model, const Dataset& d,
                                       DecodeRequest req, std::uint64_t root_seed) {
  std::vector<Prediction> preds;
  preds.reserve(d.size());
  for (const Instance& inst : d.instances) {
    req.seed = derive_seed(root_seed, "decode." + inst.item_id);
    DecodeResult res = decode(model, inst.text, req);
    preds.push_back({inst.item_id, std::move(res.keyphrases)});
  }
  return preds;
}

// ---- subcommand configs ----

struct CurateArgs {
  std::string input, output;
};

struct SplitArgs {
  std::string input, output;
  std::vector<double> ratios{0.8, 0.1, 0.1};
  std::uint64_t seed = 0;
};

struct AnalyzeArgs {
  std::string input, output;
  std::uint64_t hot_threshold = 5, diverse_threshold = 5;
};

struct TrainArgs {
  std::string input, output, provenance;
  std::string paradigm = "pusl";
  int order = 4;
  double alpha = 1e-4;
  std::size_t max_text_tokens = 32;
  std::uint64_t min_freq = 1;
  std::uint64_t aug_weight = 1;
};

struct DecodeArgs {
  std::string model, input, output;
  std::string paradigm = "pusl";
  std::string mode = "greedy";
  int k = 10;
  int beam_width = 0;
  int max_tokens_per_kp = 8;
  int max_total_tokens = 256;
  std::size_t max_text_tokens = 32;
  double temperature = 1.0;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string input, dataset, output;
  int k = 10;
};

struct AugmentArgs {
  std::string input, model, output;
  double target_mean = 0.0;
  int samples_per_item = 5;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  std::size_t max_output_size = 50000;
  int max_tokens_per_kp = 8;
  int max_total_tokens = 256;
  std::size_t max_text_tokens = 32;
};

struct SimulateArgs {
  std::string output;
  std::size_t items = 1000;
  std::size_t interactions = 9000;
  std::size_t vocab_words = 24;
  std::size_t min_labels = 1, max_labels = 15;
  double mean_labels = 8.0;
  double zipf_s = 1.1;
  std::uint64_t seed = 0;
};

struct PipelineArgs {
  std::string output;
  std::uint64_t seed = 7;
  std::size_t items = 1000;
  std::size_t interactions = 9000;
  std::size_t vocab_words = 24;
  std::size_t min_labels = 1, max_labels = 15;
  double mean_labels = 8.0;
  double zipf_s = 1.1;
  std::vector<double> ratios{0.8, 0.1, 0.1};
  int order = 4;
  double alpha = 1e-4;
  int k = 0;  // 0: twice the train mean, rounded
  double temperature = 1.0;
  int max_tokens_per_kp = 8;
  int max_total_tokens = 256;
  std::size_t max_text_tokens = 32;
};

std::array<double, 3> ratio_array(const std::vector<double>& r) {
  if (r.size() != 3) raise(Errc::invalid_config, "--ratios needs exactly three values");
  return {r[0], r[1], r[2]};
}

// ---- subcommand bodies ----

void do_curate(const CurateArgs& a) {
  Dataset d = curate(io::read_interaction_log(a.input));
  io::write_dataset(d, a.output);
  ojson cfg;
  cfg["input"] = a.input;
  cfg["output"] = a.output;
  ojson res;
  res["instances"] = d.size();
  write_manifest(fs::path(a.output).string() + ".manifest.json", "curate", cfg, res);
}

void do_split(const SplitArgs& a) {
  Dataset d = io::read_dataset(a.input);
  SplitConfig cfg{ratio_array(a.ratios), a.seed};
  DatasetSplits s = make_splits(d, cfg);
  fs::path dir(a.output);
  io::write_dataset(s.train, dir / "train.jsonl");
  io::write_dataset(s.dev, dir / "dev.jsonl");
  io::write_dataset(s.test, dir / "test.jsonl");
  io::write_dataset(s.test_narrow, dir / "test_narrow.jsonl");
  io::write_dataset(s.test_diverse, dir / "test_diverse.jsonl");

  ojson jcfg;
  jcfg["input"] = a.input;
  jcfg["output"] = a.output;
  jcfg["ratios"] = a.ratios;
  jcfg["seed"] = a.seed;
  ojson res;
  res["mu_train"] = s.mu_train;
  res["sizes"] = {{"train", s.train.size()},
                  {"dev", s.dev.size()},
                  {"test", s.test.size()},
                  {"test_narrow", s.test_narrow.size()},
                  {"test_diverse", s.test_diverse.size()}};
  ojson buckets = ojson::object();
  for (const auto& [k, b] : s.test_buckets) buckets[std::to_string(k)] = b.size();
  res["test_bucket_sizes"] = std::move(buckets);
  write_manifest(dir / "manifest.json", "split", jcfg, res);
}

void do_analyze(const AnalyzeArgs& a) {
  Dataset d = io::read_dataset(a.input);
  fs::path dir(a.output);

  HistogramReport hist = label_count_histogram(d);
  std::string tsv = "label_count\tinstances\n";
  for (const auto& [count, n] : hist.counts)
    tsv += std::to_string(count) + "\t" + std::to_string(n) + "\n";
  io::atomic_write_file(dir / "histogram.tsv", tsv);

  QuadrantReport q = quadrant_classify(d, a.hot_threshold, a.diverse_threshold);
  ojson qj;
  qj["hot_threshold"] = q.hot_threshold;
  qj["diverse_threshold"] = q.diverse_threshold;
  qj["counts"] = {{"hot_diverse", q.hot_diverse},
                  {"hot_narrow", q.hot_narrow},
                  {"rare_narrow", q.rare_narrow},
                  {"rare_diverse", q.rare_diverse}};
  qj["proportions"] = {{"hot_diverse", q.p_hot_diverse},
                       {"hot_narrow", q.p_hot_narrow},
                       {"rare_narrow", q.p_rare_narrow},
                       {"rare_diverse", q.p_rare_diverse}};
  io::atomic_write_file(dir / "quadrants.json", qj.dump(2) + "\n");

  std::vector<std::uint64_t> counts;
  for (const Instance& inst : d.instances) counts.push_back(inst.unique_label_count());
  ConcentrationReport c = lorenz_gini(counts);
  ojson cj;
  cj["gini"] = c.gini;
  ojson pts = ojson::array();
  for (const auto& [x, y] : c.lorenz_points) pts.push_back(ojson::array({x, y}));
  cj["lorenz_points"] = std::move(pts);
  io::atomic_write_file(dir / "concentration.json", cj.dump(2) + "\n");

  ojson sj;
  sj["instances"] = d.size();
  sj["mean_label_count"] = hist.mean;
  sj["cv_label_count"] = hist.cv;
  io::atomic_write_file(dir / "stats.json", sj.dump(2) + "\n");

  ojson cfg;
  cfg["input"] = a.input;
  cfg["output"] = a.output;
  cfg["hot_threshold"] = a.hot_threshold;
  cfg["diverse_threshold"] = a.diverse_threshold;
  write_manifest(dir / "manifest.json", "analyze", cfg);
}

void do_train(const TrainArgs& a) {
  Dataset d = io::read_dataset(a.input);
  Paradigm paradigm = parse_paradigm(a.paradigm);
  Vocab vocab = Vocab::build(d, a.min_freq);

  std::map<std::string, std::string> origin;
  if (!a.provenance.empty()) {
    ojson pj = ojson::parse(io::read_file(a.provenance));
    for (const auto& [key, value] : pj.items()) origin[key] = value.get<std::string>();
  }
  std::vector<TrainingSequence> seqs = dataset_sequences(
      d, paradigm, vocab, a.max_text_tokens, a.provenance.empty() ? nullptr : &origin,
      a.aug_weight);
  NgramScorer model = train_ngram(seqs, vocab, a.order, a.alpha);
  model.save(a.output);

  ojson cfg;
  cfg["input"] = a.input;
  cfg["output"] = a.output;
  cfg["paradigm"] = a.paradigm;
  cfg["order"] = a.order;
  cfg["alpha"] = a.alpha;
  cfg["max_text_tokens"] = a.max_text_tokens;
  cfg["min_freq"] = a.min_freq;
  cfg["provenance"] = a.provenance;
  cfg["aug_weight"] = a.aug_weight;
  ojson res;
  res["vocab_size"] = vocab.size();
  res["sequences"] = seqs.size();
  write_manifest(fs::path(a.output).string() + ".manifest.json", "train", cfg, res);
}

void do_decode(const DecodeArgs& a) {
  NgramScorer model = NgramScorer::load(a.model);
  Dataset d = io::read_dataset(a.input);
  DecodeRequest req;
  req.paradigm = parse_paradigm(a.paradigm);
  req.k = a.k;
  req.max_tokens_per_kp = a.max_tokens_per_kp;
  req.max_total_tokens = a.max_total_tokens;
  req.max_text_tokens = a.max_text_tokens;
  req.temperature = a.temperature;
  if (a.mode == "greedy")
    req.mode = DecodeMode::greedy;
  else if (a.mode == "sampled")
    req.mode = DecodeMode::sampled;
  else
    raise(Errc::invalid_config, "--mode must be greedy or sampled");
  req.beam_width = a.beam_width > 0 ? a.beam_width : a.k;

  std::vector<Prediction> preds = decode_dataset(model, d, req, a.seed);
  io::write_predictions(preds, a.output);

  ojson cfg;
  cfg["model"] = a.model;
  cfg["input"] = a.input;
  cfg["output"] = a.output;
  cfg["paradigm"] = a.paradigm;
  cfg["mode"] = a.mode;
  cfg["k"] = a.k;
  cfg["beam_width"] = req.beam_width;
  cfg["max_tokens_per_kp"] = a.max_tokens_per_kp;
  cfg["max_total_tokens"] = a.max_total_tokens;
  cfg["max_text_tokens"] = a.max_text_tokens;
  cfg["temperature"] = a.temperature;
  cfg["seed"] = a.seed;
  ojson res;
  res["predictions"] = preds.size();
  write_manifest(fs::path(a.output).string() + ".manifest.json", "decode", cfg, res);
}

void do_eval(const EvalArgs& a) {
  std::vector<Prediction> preds = io::read_predictions(a.input);
  Dataset d = io::read_dataset(a.dataset);
  MetricReport rep = evaluate_dataset(preds, d, a.k);
  io::atomic_write_file(a.output, report_tsv(rep));

  ojson cfg;
  cfg["input"] = a.input;
  cfg["dataset"] = a.dataset;
  cfg["output"] = a.output;
  cfg["k"] = a.k;
  ojson res;
  res["evaluated"] = rep.evaluated;
  res["skipped_empty_gt"] = rep.skipped_empty_gt;
  res["f1_at_O"] = rep.f1_at_O;
  res["b_at_k"] = rep.b_at_k;
  res["uniq_at_k"] = rep.uniq_at_k;
  write_manifest(fs::path(a.output).string() + ".manifest.json", "eval", cfg, res);
}

void do_augment(const AugmentArgs& a) {
  Dataset d = io::read_dataset(a.input);
  NgramScorer model = NgramScorer::load(a.model);
  AugmentationConfig cfg;
  cfg.target_mean = a.target_mean;
  cfg.samples_per_item = a.samples_per_item;
  cfg.temperature = a.temperature;
  cfg.seed = a.seed;
  cfg.max_output_size = a.max_output_size;
  cfg.max_tokens_per_kp = a.max_tokens_per_kp;
  cfg.max_total_tokens = a.max_total_tokens;
  cfg.max_text_tokens = a.max_text_tokens;
  PosttrainResult out = build_posttrain_set(d, model, cfg);
  io::write_dataset(out.data, a.output);

  ojson prov = ojson::object();
  for (const auto& [id, origin] : out.provenance) prov[id] = origin;
  io::atomic_write_file(fs::path(a.output).string() + ".provenance.json", prov.dump(2) + "\n");

  ojson jcfg;
  jcfg["input"] = a.input;
  jcfg["model"] = a.model;
  jcfg["output"] = a.output;
  jcfg["target_mean"] = a.target_mean;
  jcfg["samples_per_item"] = a.samples_per_item;
  jcfg["temperature"] = a.temperature;
  jcfg["seed"] = a.seed;
  jcfg["max_output_size"] = a.max_output_size;
  ojson res;
  res["size"] = out.data.size();
  std::size_t augmented = 0;
  for (const auto& [id, origin] : out.provenance) augmented += origin == "augmented" ? 1 : 0;
  res["augmented"] = augmented;
  res["original"] = out.data.size() - augmented;
  write_manifest(fs::path(a.output).string() + ".manifest.json", "augment", jcfg, res);
}

UniverseConfig universe_config(std::size_t items, std::size_t vocab_words, std::size_t min_labels,
                               std::size_t max_labels, double mean_labels, double zipf_s,
                               std::uint64_t seed) {
  UniverseConfig u;
  u.num_items = items;
  u.vocab_words = vocab_words;
  u.min_labels = min_labels;
  u.max_labels = max_labels;
  u.mean_labels = mean_labels;
  u.zipf_s = zipf_s;
  u.seed = seed;
  return u;
}

void do_simulate(const SimulateArgs& a) {
  UniverseConfig ucfg = universe_config(a.items, a.vocab_words, a.min_labels, a.max_labels,
                                        a.mean_labels, a.zipf_s, a.seed);
  Universe u = generate_universe(ucfg);
  std::vector<InteractionRecord> log =
      simulate_annotations(u, a.interactions, derive_seed(a.seed, "simulate"));
  fs::path dir(a.output);
  write_universe(u, dir / "universe.jsonl");
  io::write_interaction_log(log, dir / "raw_log.jsonl");

  ojson cfg;
  cfg["output"] = a.output;
  cfg["items"] = a.items;
  cfg["interactions"] = a.interactions;
  cfg["vocab_words"] = a.vocab_words;
  cfg["min_labels"] = a.min_labels;
  cfg["max_labels"] = a.max_labels;
  cfg["mean_labels"] = a.mean_labels;
  cfg["zipf_s"] = a.zipf_s;
  cfg["seed"] = a.seed;
  ojson res;
  res["records"] = log.size();
  write_manifest(dir / "manifest.json", "simulate", cfg, res);
}

void do_pipeline(const PipelineArgs& a) {
  fs::path dir(a.output);

  // simulate
  UniverseConfig ucfg = universe_config(a.items, a.vocab_words, a.min_labels, a.max_labels,
                                        a.mean_labels, a.zipf_s, a.seed);
  Universe u = generate_universe(ucfg);
  std::vector<InteractionRecord> log =
      simulate_annotations(u, a.interactions, derive_seed(a.seed, "simulate"));
  write_universe(u, dir / "universe.jsonl");
  io::write_interaction_log(log, dir / "raw_log.jsonl");

  // curate + split
  Dataset curated = curate(log);
  io::write_dataset(curated, dir / "curated.jsonl");
  DatasetSplits splits = make_splits(curated, SplitConfig{ratio_array(a.ratios), a.seed});
  io::write_dataset(splits.train, dir / "train.jsonl");
  io::write_dataset(splits.dev, dir / "dev.jsonl");
  io::write_dataset(splits.test, dir / "test.jsonl");

  int k_eval = a.k > 0 ? a.k : std::max(1, static_cast<int>(std::lround(2.0 * splits.mu_train)));

  // train + decode + eval, per paradigm
  Vocab vocab = Vocab::build(splits.train, 1);
  ojson summary;
  summary["mu_train"] = splits.mu_train;
  summary["k_eval"] = k_eval;
  summary["train_size"] = splits.train.size();
  summary["test_size"] = splits.test.size();

  // coverage is judged against the simulated truth for exactly the test items
  std::set<std::string> test_ids;
  for (const Instance& inst : splits.test.instances) test_ids.insert(inst.item_id);
  Universe test_universe;
  test_universe.cfg = u.cfg;
  for (const UniverseItem& item : u.items)
    if (test_ids.count(item.item_id)) test_universe.items.push_back(item);

  for (Paradigm paradigm : {Paradigm::pusl, Paradigm::one2seq}) {
    std::string name(paradigm_name(paradigm));
    std::vector<TrainingSequence> seqs =
        dataset_sequences(splits.train, paradigm, vocab, a.max_text_tokens, nullptr, 1);
    NgramScorer model = train_ngram(seqs, vocab, a.order, a.alpha);
    model.save(dir / ("model_" + name + ".bin"));

    DecodeRequest req;
    req.paradigm = paradigm;
    req.k = k_eval;
    req.max_tokens_per_kp = a.max_tokens_per_kp;
    req.max_total_tokens = a.max_total_tokens;
    req.max_text_tokens = a.max_text_tokens;
    req.mode = DecodeMode::sampled;
    req.temperature = a.temperature;
    std::vector<Prediction> preds =
        decode_dataset(model, splits.test, req, derive_seed(a.seed, "decode." + name));
    io::write_predictions(preds, dir / ("preds_" + name + ".jsonl"));

    MetricReport rep = evaluate_dataset(preds, splits.test, k_eval);
    io::atomic_write_file(dir / ("report_" + name + ".tsv"), report_tsv(rep));

    ojson pj;
    pj["uniq_at_k"] = rep.uniq_at_k;
    pj["b_at_k"] = rep.b_at_k;
    pj["f1_at_O"] = rep.f1_at_O;
    pj["coverage_at_k"] =
        test_universe.items.empty() ? 0.0 : coverage(test_universe, preds, k_eval);
    summary[name] = std::move(pj);
  }
  io::atomic_write_file(dir / "summary.json", summary.dump(2) + "\n");

  ojson cfg;
  cfg["output"] = a.output;
  cfg["seed"] = a.seed;
  cfg["items"] = a.items;
  cfg["interactions"] = a.interactions;
  cfg["vocab_words"] = a.vocab_words;
  cfg["min_labels"] = a.min_labels;
  cfg["max_labels"] = a.max_labels;
  cfg["mean_labels"] = a.mean_labels;
  cfg["zipf_s"] = a.zipf_s;
  cfg["ratios"] = a.ratios;
  cfg["order"] = a.order;
  cfg["alpha"] = a.alpha;
  cfg["k"] = a.k;
  cfg["k_eval"] = k_eval;
  cfg["temperature"] = a.temperature;
  cfg["max_tokens_per_kp"] = a.max_tokens_per_kp;
  cfg["max_total_tokens"] = a.max_total_tokens;
  cfg["max_text_tokens"] = a.max_text_tokens;
  write_manifest(dir / "manifest.json", "pipeline", cfg);
}

int classify_error(const Error& e) {
  switch (e.code()) {
    case Errc::invalid_config: return 1;
    default: return 2;
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Workbench for open-vocabulary multi-label keyphrase experiments"};
  app.require_subcommand(1);

  CurateArgs curate_args;
  auto* c = app.add_subcommand("curate", "Normalize and deduplicate a raw interaction log");
  c->add_option("--input", curate_args.input, "Raw interaction log (JSONL)")->required();
  c->add_option("--output", curate_args.output, "Curated dataset path (JSONL)")->required();

  SplitArgs split_args;
  auto* s = app.add_subcommand("split", "Seeded train/dev/test split with test buckets");
  s->add_option("--input", split_args.input, "Curated dataset")->required();
  s->add_option("--output", split_args.output, "Output directory")->required();
  s->add_option("--ratios", split_args.ratios, "Train,dev,test fractions")->delimiter(',');
  s->add_option("--seed", split_args.seed, "Shuffle seed");

  AnalyzeArgs analyze_args;
  auto* an = app.add_subcommand("analyze", "Label-count diagnostics and concentration curves");
  an->add_option("--input", analyze_args.input, "Curated dataset")->required();
  an->add_option("--output", analyze_args.output, "Output directory")->required();
  an->add_option("--hot-threshold", analyze_args.hot_threshold, "Interactions for a hot item");
  an->add_option("--diverse-threshold", analyze_args.diverse_threshold,
                 "Unique labels for a diverse item");

  TrainArgs train_args;
  auto* t = app.add_subcommand("train", "Train the count-based sequence scorer");
  t->add_option("--input", train_args.input, "Curated dataset")->required();
  t->add_option("--output", train_args.output, "Model output path")->required();
  t->add_option("--paradigm", train_args.paradigm, "one2one | one2seq | pusl");
  t->add_option("--order", train_args.order, "Ngram order (>= 2)");
  t->add_option("--alpha", train_args.alpha, "Add-alpha smoothing (> 0)");
  t->add_option("--max-text-tokens", train_args.max_text_tokens, "Item text truncation");
  t->add_option("--min-freq", train_args.min_freq, "Vocabulary frequency cutoff");
  t->add_option("--provenance", train_args.provenance,
                "Provenance sidecar from augment; enables --aug-weight");
  t->add_option("--aug-weight", train_args.aug_weight, "Count weight for augmented instances");

  DecodeArgs decode_args;
  auto* de = app.add_subcommand("decode", "Generate keyphrases for every item");
  de->add_option("--model", decode_args.model, "Trained model")->required();
  de->add_option("--input", decode_args.input, "Curated dataset")->required();
  de->add_option("--output", decode_args.output, "Predictions path (JSONL)")->required();
  de->add_option("--paradigm", decode_args.paradigm, "one2one | one2seq | pusl");
  de->add_option("--mode", decode_args.mode, "greedy | sampled");
  de->add_option("--k", decode_args.k, "Requested keyphrase count");
  de->add_option("--beam-width", decode_args.beam_width, "Beam width (one2one; default k)");
  de->add_option("--max-tokens-per-kp", decode_args.max_tokens_per_kp, "Keyphrase token cap");
  de->add_option("--max-total-tokens", decode_args.max_total_tokens, "Per-item token budget");
  de->add_option("--max-text-tokens", decode_args.max_text_tokens, "Item text truncation");
  de->add_option("--temperature", decode_args.temperature, "Sampling temperature");
  de->add_option("--seed", decode_args.seed, "Sampling seed");

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "Score predictions against a dataset");
  ev->add_option("--input", eval_args.input, "Predictions (JSONL)")->required();
  ev->add_option("--dataset", eval_args.dataset, "Curated dataset with ground truth")->required();
  ev->add_option("--output", eval_args.output, "Report path (TSV)")->required();
  ev->add_option("--k", eval_args.k, "Cutoff for @k metrics");

  AugmentArgs augment_args;
  auto* au = app.add_subcommand("augment", "Build the rejection-sampled post-training set");
  au->add_option("--input", augment_args.input, "Training dataset")->required();
  au->add_option("--model", augment_args.model, "Generator model")->required();
  au->add_option("--output", augment_args.output, "Post-training dataset path")->required();
  au->add_option("--target-mean", augment_args.target_mean,
                 "Acceptance threshold; 0 computes the input mean");
  au->add_option("--samples-per-item", augment_args.samples_per_item, "Keyphrases sampled per item");
  au->add_option("--temperature", augment_args.temperature, "Sampling temperature");
  au->add_option("--seed", augment_args.seed, "Sampling seed");
  au->add_option("--max-output-size", augment_args.max_output_size, "Output size cap");
  au->add_option("--max-tokens-per-kp", augment_args.max_tokens_per_kp, "Keyphrase token cap");
  au->add_option("--max-total-tokens", augment_args.max_total_tokens, "Per-item token budget");
  au->add_option("--max-text-tokens", augment_args.max_text_tokens, "Item text truncation");

  SimulateArgs sim_args;
  auto* si = app.add_subcommand("simulate", "Generate a universe and a biased annotation log");
  si->add_option("--output", sim_args.output, "Output directory")->required();
  si->add_option("--items", sim_args.items, "Universe size");
  si->add_option("--interactions", sim_args.interactions, "Annotation volume");
  si->add_option("--vocab-words", sim_args.vocab_words, "Category word pool size");
  si->add_option("--min-labels", sim_args.min_labels, "Minimum true labels per item");
  si->add_option("--max-labels", sim_args.max_labels, "Maximum true labels per item");
  si->add_option("--mean-labels", sim_args.mean_labels, "Mean true labels per item");
  si->add_option("--zipf-s", sim_args.zipf_s, "Popularity skew exponent");
  si->add_option("--seed", sim_args.seed, "Generator seed");

  PipelineArgs pipe_args;
  auto* pi = app.add_subcommand("pipeline",
                                "simulate, curate, split, train, decode, eval in one run");
  pi->add_option("--output", pipe_args.output, "Output directory")->required();
  pi->add_option("--seed", pipe_args.seed, "Root seed");
  pi->add_option("--items", pipe_args.items, "Universe size");
  pi->add_option("--interactions", pipe_args.interactions, "Annotation volume");
  pi->add_option("--vocab-words", pipe_args.vocab_words, "Category word pool size");
  pi->add_option("--min-labels", pipe_args.min_labels, "Minimum true labels per item");
  pi->add_option("--max-labels", pipe_args.max_labels, "Maximum true labels per item");
  pi->add_option("--mean-labels", pipe_args.mean_labels, "Mean true labels per item");
  pi->add_option("--zipf-s", pipe_args.zipf_s, "Popularity skew exponent");
  pi->add_option("--ratios", pipe_args.ratios, "Train,dev,test fractions")->delimiter(',');
  pi->add_option("--order", pipe_args.order, "Ngram order");
  pi->add_option("--alpha", pipe_args.alpha, "Add-alpha smoothing");
  pi->add_option("--k", pipe_args.k, "Decode budget; 0 uses twice the train mean");
  pi->add_option("--temperature", pipe_args.temperature, "Sampling temperature");
  pi->add_option("--max-tokens-per-kp", pipe_args.max_tokens_per_kp, "Keyphrase token cap");
  pi->add_option("--max-total-tokens", pipe_args.max_total_tokens, "Per-item token budget");
  pi->add_option("--max-text-tokens", pipe_args.max_text_tokens, "Item text truncation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 1;
  }

  try {
    if (c->parsed()) do_curate(curate_args);
    if (s->parsed()) do_split(split_args);
    if (an->parsed()) do_analyze(analyze_args);
    if (t->parsed()) do_train(train_args);
    if (de->parsed()) do_decode(decode_args);
    if (ev->parsed()) do_eval(eval_args);
    if (au->parsed()) do_augment(augment_args);
    if (si->parsed()) do_simulate(sim_args);
    if (pi->parsed()) do_pipeline(pipe_args);
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return classify_error(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace oxmc::cli
