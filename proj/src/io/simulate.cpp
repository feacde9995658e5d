#include "owal/io/simulate.hpp"

#include <filesystem>

#include <json.hpp>

#include "owal/io/csv.hpp"
#include "owal/io/jsonl.hpp"
#include "owal/io/number_format.hpp"
#include "owal/metrics/metrics.hpp"

namespace owal::io {

namespace {

using nlohmann::json;

}  // namespace

std::string metrics_csv(const sim::ExperimentTrace& trace) {
  CsvBuilder csv({"round", "cumulative_known_boxes", "cumulative_unknown_boxes",
                  "cumulative_boxes", "map_unk", "map_k", "map_h"});
  for (const sim::RoundRecord& round : trace.rounds) {
    const metrics::MetricReport& r = round.report;
    csv.add_row({format_int(r.round), format_long(r.cumulative_known_boxes),
                 format_long(r.cumulative_unknown_boxes), format_long(r.cumulative_boxes()),
                 format_double(r.map_unk), format_double(r.map_k), format_double(r.map_h)});
  }
  return csv.str();
}

std::string selections_csv(const sim::ExperimentTrace& trace,
                           const std::map<std::string, std::vector<GroundTruthBox>>& truth,
                           const ClassCatalog& initial_catalog) {
  CsvBuilder csv({"round", "rank", "frame_id", "score", "n_boxes_known", "n_boxes_unknown"});
  ClassCatalog catalog = initial_catalog;
  for (const sim::RoundRecord& round : trace.rounds) {
    int rank = 1;
    for (const std::string& frame_id : round.selected) {
      long known = 0;
      long unknown = 0;
      for (const GroundTruthBox& box : truth.at(frame_id)) {
        (catalog.is_effective_known(box.label) ? known : unknown) += 1;
      }
      const auto score = round.selection_scores.find(frame_id);
      csv.add_row({format_int(round.round), format_int(rank), frame_id,
                   score == round.selection_scores.end() ? "" : format_double(score->second),
                   format_long(known), format_long(unknown)});
      ++rank;
    }
    std::set<int> discovered(round.newly_discovered.begin(), round.newly_discovered.end());
    catalog = catalog.with_discovered(discovered);
  }
  return csv.str();
}

std::string trace_json(const ExperimentConfig& config, const sim::ExperimentTrace& trace) {
  json root;
  root["config"] = json::parse(config_to_json(config));
  root["policy"] = config.policy_name;

  json& ledger = root["ledger"];
  ledger["mode"] = "frames";
  ledger["budget"] = trace.ledger.budget();
  ledger["cumulative_known_boxes"] = trace.ledger.cumulative_known();
  ledger["cumulative_unknown_boxes"] = trace.ledger.cumulative_unknown();
  ledger["cumulative_frames"] = trace.ledger.cumulative_frames();

  root["rounds"] = json::array();
  for (const sim::RoundRecord& round : trace.rounds) {
    json entry;
    entry["round"] = round.round;
    entry["selected"] = round.selected;
    entry["frames_selected"] = round.entry.frames_selected;
    entry["known_boxes"] = round.entry.known_boxes;
    entry["unknown_boxes"] = round.entry.unknown_boxes;
    entry["newly_discovered"] = round.newly_discovered;
    entry["map_unk"] = round.report.map_unk;
    entry["map_k"] = round.report.map_k;
    entry["map_h"] = round.report.map_h;
    root["rounds"].push_back(std::move(entry));
  }

  root["final_discovered"] = std::vector<int>(trace.final_catalog.discovered().begin(),
                                              trace.final_catalog.discovered().end());
  return root.dump(2) + "\n";
}

SimulateResult run_simulate(const ExperimentConfig& config, const std::string& out_dir) {
  const sim::World world = sim::generate_world(config.world);
  SimulateResult result;
  result.trace = sim::run_experiment(world, config.policy, config.protocol, config.crb,
                                     config.eval, config.detector);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  result.trace_path = (fs::path(out_dir) / "trace.json").string();
  result.metrics_path = (fs::path(out_dir) / "metrics.csv").string();
  result.selections_path = (fs::path(out_dir) / "selections.csv").string();

  write_file_atomic(result.trace_path, trace_json(config, result.trace));
  write_file_atomic(result.metrics_path, metrics_csv(result.trace));
  write_file_atomic(result.selections_path,
                    selections_csv(result.trace, world.pool.truth,
                                   sim::initial_catalog(config.world)));
  return result;
}

}  // namespace owal::io
