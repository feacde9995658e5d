#pragma once

#include <string>

#include "owal/io/config.hpp"
#include "owal/sim/experiment.hpp"

namespace owal::io {

struct SimulateResult {
  sim::ExperimentTrace trace;
  std::string trace_path;
  std::string metrics_path;
  std::string selections_path;
};

// Output-file contents for a finished experiment. Column orders:
//   metrics.csv:    round,cumulative_known_boxes,cumulative_unknown_boxes,
//                   cumulative_boxes,map_unk,map_k,map_h
//   selections.csv: round,rank,frame_id,score,n_boxes_known,n_boxes_unknown
// (score is empty for policies without per-frame scores).
std::string metrics_csv(const sim::ExperimentTrace& trace);
std::string selections_csv(const sim::ExperimentTrace& trace,
                           const std::map<std::string, std::vector<GroundTruthBox>>& truth,
                           const ClassCatalog& initial_catalog);
std::string trace_json(const ExperimentConfig& config, const sim::ExperimentTrace& trace);

// End-to-end `simulate`: generate the world, run the experiment, write
// trace.json, metrics.csv and selections.csv into out_dir (atomically).
SimulateResult run_simulate(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace owal::io
