#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "owal/core/catalog.hpp"
#include "owal/core/pool.hpp"

namespace owal::sim {

// Object population model for one class: relative frequency, Gaussian size
// priors and a uniform center range per axis.
struct ClassSpec {
  double frequency = 1.0;
  std::array<double, 3> size_mean{4.0, 2.0, 1.5};
  std::array<double, 3> size_sigma{0.3, 0.2, 0.2};
  std::array<std::array<double, 2>, 3> center_range{{{-40.0, 40.0}, {-40.0, 40.0}, {-1.0, 1.0}}};
};

// Unknown objects cluster in scenes. A frame is a scene of this kind with
// probability `fraction`; inside it the object count follows its own Poisson
// mean and the scene's unknown class takes `unknown_share` of the objects
// (one construction site is full of barriers, one depot full of cones).
struct SceneSpec {
  int unknown_class = 0;       // class id this scene concentrates
  double fraction = 0.0;       // per-frame probability of this scene kind
  double objects_mean = 16.0;
  double unknown_share = 0.3;  // expected fraction of the scene's objects
};

struct WorldConfig {
  int n_frames = 2000;
  int n_test = 200;
  int n_known = 3;                  // leading classes are known; the rest unknown
  std::vector<ClassSpec> classes;   // class ids 1..classes.size()
  std::vector<SceneSpec> scenes;    // at most one per unknown class
  double objects_per_frame_mean = 6.0;
  double embedding_noise = 0.15;
  // Unknown-class counts enter the embedding signature scaled by this factor:
  // features of a detector that never trained on a class represent it weakly.
  double unknown_embedding_weight = 0.05;
  std::uint64_t seed = 1;
};

// A fully generated environment: a pool of unlabeled frames with oracle-held
// ground truth, held-out test truth, and per-frame embeddings (noisy
// per-class object-count signatures, dimension = number of classes).
struct World {
  WorldConfig config;
  PoolState pool;
  std::map<std::string, std::vector<GroundTruthBox>> test_truth;
  std::map<std::string, std::vector<double>> embeddings;
};

void validate_world_config(const WorldConfig& config);

ClassCatalog initial_catalog(const WorldConfig& config);

// Deterministic in config.seed; frame contents are drawn from per-frame
// streams keyed by (seed, frame_id), so generation order is irrelevant.
World generate_world(const WorldConfig& config);

}  // namespace owal::sim
