#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "owal/core/ledger.hpp"
#include "owal/crb/pipeline.hpp"
#include "owal/metrics/metrics.hpp"
#include "owal/scoring/policies.hpp"
#include "owal/sim/detector.hpp"
#include "owal/sim/world.hpp"

namespace owal::sim {

// Acquisition schedule: m pre-training frames, then R rounds of N_r frames.
struct Protocol {
  int m = 100;
  int n_r = 100;
  int rounds = 4;
  std::uint64_t seed = 1;
};

// A base policy plus the plug-in switches: olc_first_round swaps in
// unknown-aware entropy selection for round 1 only; olc_every_round uses it
// for every round (ablation).
struct PolicySpec {
  scoring::Policy base = scoring::Policy::kOpenCrb;
  bool olc_first_round = false;
  bool olc_every_round = false;
};

PolicySpec policy_spec_from_name(const std::string& name);

struct RoundRecord {
  int round = 0;                       // 0 = pre-training
  std::vector<std::string> selected;   // in pick order
  std::map<std::string, double> selection_scores;  // empty for unscored policies
  LedgerEntry entry;
  metrics::MetricReport report;
  std::vector<int> newly_discovered;
};

struct ExperimentTrace {
  Protocol protocol;
  PolicySpec policy;
  BudgetLedger ledger;
  std::vector<RoundRecord> rounds;     // rounds[0] is the pre-training round
  ClassCatalog final_catalog;
};

// Full multi-round loop: seeded pre-training restricted to known classes,
// then per round predict -> select -> annotate -> retrain -> evaluate on the
// held-out test frames. Deterministic given (world, policy, protocol).
// Rejects protocols whose budget m + R * N_r exceeds the pool size.
// detector_template supplies the surrogate's noise/saturation parameters; its
// labeled-box counts are reset before pre-training.
ExperimentTrace run_experiment(const World& world, const PolicySpec& policy,
                               const Protocol& protocol, const crb::CrbConfig& crb_config,
                               const metrics::EvalOptions& eval_options,
                               const DetectorSurrogate& detector_template = {});

}  // namespace owal::sim
