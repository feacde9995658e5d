// Command-line surface for the open-world active-learning engine.
//
//   owal simulate --config config.json --out results/
//   owal score    --policy olc --dump preds.jsonl --catalog catalog.json --out scores.csv
//   owal select   --policy coreset --dump preds.jsonl --k 10 --labeled ids.txt
//   owal evaluate --pred preds.jsonl --truth truth.jsonl --tau 0.5
//
// Exit codes: 0 success, 2 config/usage error, 3 data error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "owal/error.hpp"
#include "owal/io/config.hpp"
#include "owal/io/csv.hpp"
#include "owal/io/jsonl.hpp"
#include "owal/io/number_format.hpp"
#include "owal/io/simulate.hpp"
#include "owal/metrics/metrics.hpp"
#include "owal/scoring/policies.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    owal::io::write_file_atomic(out_path, content);
  }
}

// Derives a catalog from the labels present in a dump when none is supplied:
// every observed label is treated as known.
owal::ClassCatalog catalog_from_dump(const std::vector<owal::FrameRecord>& records) {
  std::set<int> labels;
  for (const owal::FrameRecord& record : records) {
    for (const owal::PredictedBox& box : record.boxes) labels.insert(box.label);
  }
  if (labels.empty()) labels.insert(1);
  return owal::ClassCatalog(std::vector<int>(labels.begin(), labels.end()), {});
}

std::vector<std::string> read_id_lines(const std::string& path) {
  std::istringstream in(owal::io::read_file(path));
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) ids.push_back(line);
  }
  return ids;
}

std::optional<std::uint64_t> seed_override_from_env() {
  const char* env = std::getenv("OWAL_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    return std::stoull(env);
  } catch (...) {
    throw owal::ConfigError(std::string("OWAL_SEED is not an integer: ") + env);
  }
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  owal::io::ExperimentConfig config = owal::io::parse_config(config_path);
  if (const auto seed = seed_override_from_env()) {
    config.world.seed = *seed;
    config.protocol.seed = *seed;
  }
  const owal::io::SimulateResult result = owal::io::run_simulate(config, out_dir);
  std::cout << "wrote " << result.trace_path << "\n"
            << "wrote " << result.metrics_path << "\n"
            << "wrote " << result.selections_path << "\n";
  return kExitOk;
}

int cmd_score(const std::string& policy_name, const std::string& dump_path,
              const std::string& catalog_path, const std::string& out_path, bool diagnostics) {
  const owal::scoring::Policy policy = owal::scoring::parse_policy(policy_name);
  if (!owal::scoring::is_scored_policy(policy)) {
    throw owal::ConfigError("policy \"" + policy_name + "\" has no per-frame score");
  }
  const std::vector<owal::FrameRecord> records = owal::io::parse_prediction_dump(dump_path);
  const owal::ClassCatalog catalog = owal::io::parse_catalog(catalog_path);
  for (const owal::FrameRecord& record : records) owal::validate_record(record, catalog);

  std::vector<std::string> header = {"frame_id", "score", "n_boxes", "p_unknown"};
  std::vector<std::string> diag_keys;
  if (diagnostics) {
    for (int id : catalog.effective_known_ids()) {
      diag_keys.push_back("count_" + std::to_string(id));
      diag_keys.push_back("mean_confidence_" + std::to_string(id));
    }
    diag_keys.push_back("harmonic_mean");
    diag_keys.push_back("max_entropy");
    header.insert(header.end(), diag_keys.begin(), diag_keys.end());
  }
  owal::io::CsvBuilder csv(header);

  const std::vector<owal::scoring::ScoredFrame> scored =
      owal::scoring::score_frames(policy, records, catalog, 0);
  std::map<std::string, const owal::FrameRecord*> by_id;
  for (const owal::FrameRecord& record : records) by_id[record.frame_id] = &record;
  std::map<std::string, const owal::scoring::ScoredFrame*> scored_by_id;
  for (const owal::scoring::ScoredFrame& s : scored) scored_by_id[s.frame_id] = &s;

  for (const std::string& frame_id : owal::scoring::select_top_k(scored, scored.size())) {
    const owal::FrameRecord& record = *by_id.at(frame_id);
    const owal::scoring::LabelDistribution dist =
        owal::scoring::label_distribution(record, catalog);
    std::vector<std::string> row = {
        frame_id, owal::io::format_double(scored_by_id.at(frame_id)->score),
        owal::io::format_long(static_cast<long>(dist.n_boxes)),
        owal::io::format_double(dist.unknown_component())};
    if (diagnostics) {
      std::map<std::string, double> diag;
      if (!record.boxes.empty()) {
        diag = owal::scoring::relationship_diagnostics(dist, record);
      }
      for (const std::string& key : diag_keys) {
        const auto it = diag.find(key);
        row.push_back(it == diag.end() ? "" : owal::io::format_double(it->second));
      }
    }
    csv.add_row(row);
  }
  emit(out_path, csv.str());
  return kExitOk;
}

int cmd_select(const std::string& policy_name, const std::string& dump_path, std::size_t k,
               const std::string& labeled_path, const std::string& catalog_path,
               std::uint64_t seed, std::size_t k1, std::size_t k2, const std::string& out_path) {
  const owal::scoring::Policy policy = owal::scoring::parse_policy(policy_name);
  std::vector<owal::FrameRecord> records = owal::io::parse_prediction_dump(dump_path);

  const owal::ClassCatalog catalog = catalog_path.empty()
                                         ? catalog_from_dump(records)
                                         : owal::io::parse_catalog(catalog_path);
  if (!catalog_path.empty()) {
    for (const owal::FrameRecord& record : records) owal::validate_record(record, catalog);
  }

  std::set<std::string> labeled;
  if (!labeled_path.empty()) {
    std::set<std::string> dump_ids;
    for (const owal::FrameRecord& record : records) dump_ids.insert(record.frame_id);
    for (const std::string& id : read_id_lines(labeled_path)) {
      if (dump_ids.count(id) == 0) {
        throw owal::DataError("labeled frame \"" + id + "\" not present in dump");
      }
      labeled.insert(id);
    }
  }

  std::vector<owal::FrameRecord> unlabeled;
  for (const owal::FrameRecord& record : records) {
    if (labeled.count(record.frame_id) == 0) unlabeled.push_back(record);
  }
  if (k > unlabeled.size()) {
    throw owal::ConfigError("k exceeds number of unlabeled frames in dump");
  }

  std::vector<std::string> picks;
  if (policy == owal::scoring::Policy::kCoreset) {
    picks = owal::scoring::coreset_select(records, labeled, k);
  } else if (policy == owal::scoring::Policy::kCrb ||
             policy == owal::scoring::Policy::kOpenCrb) {
    owal::crb::CrbConfig config;
    config.n_r = k;
    config.k1 = std::min(k1 != 0 ? k1 : 3 * k, unlabeled.size());
    config.k2 = std::min(k2 != 0 ? k2 : 2 * k, config.k1);
    // A single selection is the first acquisition round: open-crb reduces to
    // unknown-aware entropy; crb runs the full three-stage filter.
    picks = policy == owal::scoring::Policy::kOpenCrb
                ? owal::crb::open_crb_round(unlabeled, catalog, config, 1)
                : owal::crb::crb_select(unlabeled, catalog, config);
  } else {
    picks = owal::scoring::select_top_k(
        owal::scoring::score_frames(policy, unlabeled, catalog, seed), k);
  }

  owal::io::CsvBuilder csv({"rank", "frame_id"});
  for (std::size_t i = 0; i < picks.size(); ++i) {
    csv.add_row({owal::io::format_long(static_cast<long>(i + 1)), picks[i]});
  }
  emit(out_path, csv.str());
  return kExitOk;
}

int cmd_evaluate(const std::string& pred_path, const std::string& truth_path, double tau,
                 const std::string& catalog_path, const std::string& out_path) {
  const std::vector<owal::FrameRecord> predictions = owal::io::parse_prediction_dump(pred_path);
  const auto truth = owal::io::parse_truth_dump(truth_path);

  owal::ClassCatalog catalog;
  if (!catalog_path.empty()) {
    catalog = owal::io::parse_catalog(catalog_path);
  } else {
    std::set<int> labels;
    for (const auto& [id, boxes] : truth) {
      for (const owal::GroundTruthBox& box : boxes) labels.insert(box.label);
    }
    for (const owal::FrameRecord& record : predictions) {
      for (const owal::PredictedBox& box : record.boxes) labels.insert(box.label);
    }
    if (labels.empty()) labels.insert(1);
    catalog = owal::ClassCatalog(std::vector<int>(labels.begin(), labels.end()), {});
  }

  owal::metrics::EvalOptions options;
  options.default_iou = tau;
  const owal::metrics::MetricReport report =
      owal::metrics::evaluate(predictions, truth, catalog, options);

  owal::io::CsvBuilder csv({"metric", "value"});
  for (const auto& [class_id, ap] : report.per_class_ap) {
    csv.add_row({"ap_" + std::to_string(class_id), owal::io::format_double(ap)});
  }
  csv.add_row({"map_unk", owal::io::format_double(report.map_unk)});
  csv.add_row({"map_k", owal::io::format_double(report.map_k)});
  csv.add_row({"map_h", owal::io::format_double(report.map_h)});
  emit(out_path, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-world active-learning query engine, simulator and evaluator"};
  app.require_subcommand(1);

  std::string config_path, out_path, dump_path, catalog_path, labeled_path;
  std::string pred_path, truth_path, policy_name;
  std::size_t k = 0, k1 = 0, k2 = 0;
  std::uint64_t seed = 1;
  double tau = 0.5;
  bool diagnostics = false;

  CLI::App* simulate = app.add_subcommand("simulate", "Run a multi-round experiment");
  simulate->add_option("--config", config_path, "Experiment config JSON")->required();
  simulate->add_option("--out", out_path, "Output directory")->required();

  CLI::App* score = app.add_subcommand("score", "Score frames of a prediction dump");
  score->add_option("--policy", policy_name, "Scoring policy")->required();
  score->add_option("--dump", dump_path, "Prediction dump (JSONL)")->required();
  score->add_option("--catalog", catalog_path, "Class catalog JSON")->required();
  score->add_option("--out", out_path, "Output CSV (default stdout)");
  score->add_flag("--diagnostics", diagnostics, "Add per-class diagnostic columns");

  CLI::App* select = app.add_subcommand("select", "Pick top frames under a policy");
  select->add_option("--policy", policy_name, "Selection policy")->required();
  select->add_option("--dump", dump_path, "Prediction dump (JSONL)")->required();
  select->add_option("--k", k, "Number of frames to pick")->required();
  select->add_option("--labeled", labeled_path, "File of already-labeled frame ids");
  select->add_option("--catalog", catalog_path, "Class catalog JSON (optional)");
  select->add_option("--seed", seed, "Seed for the random policy");
  select->add_option("--k1", k1, "Stage-1 survivor count for crb (default 3k)");
  select->add_option("--k2", k2, "Stage-2 survivor count for crb (default 2k)");
  select->add_option("--out", out_path, "Output CSV (default stdout)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Per-class AP and mAP summary");
  evaluate->add_option("--pred", pred_path, "Prediction dump (JSONL)")->required();
  evaluate->add_option("--truth", truth_path, "Ground-truth dump (JSONL)")->required();
  evaluate->add_option("--tau", tau, "IoU threshold in (0, 1)");
  evaluate->add_option("--catalog", catalog_path, "Class catalog JSON (optional)");
  evaluate->add_option("--out", out_path, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, out_path);
    if (score->parsed()) {
      return cmd_score(policy_name, dump_path, catalog_path, out_path, diagnostics);
    }
    if (select->parsed()) {
      return cmd_select(policy_name, dump_path, k, labeled_path, catalog_path, seed, k1, k2,
                        out_path);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(pred_path, truth_path, tau, catalog_path, out_path);
    }
  } catch (const owal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const owal::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}
