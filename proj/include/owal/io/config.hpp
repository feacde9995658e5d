#pragma once

#include <string>

#include "owal/crb/pipeline.hpp"
#include "owal/metrics/metrics.hpp"
#include "owal/sim/detector.hpp"
#include "owal/sim/experiment.hpp"
#include "owal/sim/world.hpp"

namespace owal::io {

// One experiment = world + detector surrogate + protocol + policy + CRB
// filter settings + metric thresholds. Parsed strictly: unknown keys are
// rejected, unset keys take the documented defaults (see default_config()).
struct ExperimentConfig {
  sim::WorldConfig world;
  sim::DetectorSurrogate detector;
  sim::Protocol protocol;
  std::string policy_name = "open-crb";
  sim::PolicySpec policy;
  crb::CrbConfig crb;
  metrics::EvalOptions eval;
};

// Desk-scale default: 3 known + 2 unknown classes, 2000-frame pool,
// 200 test frames, m=100, N_r=100, R=4, open-crb policy.
ExperimentConfig default_config();

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

std::string config_to_json(const ExperimentConfig& config);

}  // namespace owal::io
