#include "owal/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "owal/error.hpp"
#include "owal/rng.hpp"

namespace owal::sim {

namespace {

constexpr double kMinSize = 0.05;

std::string frame_name(const char* prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%06d", prefix, index);
  return buf;
}

int draw_class(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                         cumulative.size() - 1);
  return static_cast<int>(idx) + 1;
}

// One cumulative weight vector per scene kind: index 0 is a normal frame,
// index 1 + j corresponds to config.scenes[j]. Inside a scene the target
// class's weight is raised so it takes the configured share of the objects.
std::vector<std::vector<double>> scene_weight_tables(const WorldConfig& config) {
  std::vector<std::vector<double>> tables;
  tables.reserve(config.scenes.size() + 1);

  double base_total = 0.0;
  for (const ClassSpec& spec : config.classes) base_total += spec.frequency;

  for (std::size_t scene = 0; scene <= config.scenes.size(); ++scene) {
    std::vector<double> cumulative;
    cumulative.reserve(config.classes.size());
    double total = 0.0;
    for (std::size_t i = 0; i < config.classes.size(); ++i) {
      double weight = config.classes[i].frequency;
      if (scene > 0) {
        const SceneSpec& spec = config.scenes[scene - 1];
        if (static_cast<int>(i) + 1 == spec.unknown_class) {
          // share s of the draw: w' = s / (1 - s) * (total weight of others)
          const double others = base_total - config.classes[i].frequency;
          weight = spec.unknown_share / (1.0 - spec.unknown_share) * others;
        }
      }
      total += weight;
      cumulative.push_back(total);
    }
    tables.push_back(std::move(cumulative));
  }
  return tables;
}

std::vector<GroundTruthBox> draw_frame_truth(Rng& rng, const WorldConfig& config,
                                             const std::vector<std::vector<double>>& tables) {
  // One uniform draw decides the scene kind; scene fractions stack.
  std::size_t scene = 0;
  double mean = config.objects_per_frame_mean;
  if (!config.scenes.empty()) {
    double u = rng.uniform();
    for (std::size_t j = 0; j < config.scenes.size(); ++j) {
      if (u < config.scenes[j].fraction) {
        scene = j + 1;
        mean = config.scenes[j].objects_mean;
        break;
      }
      u -= config.scenes[j].fraction;
    }
  }
  const std::vector<double>& cumulative = tables[scene];

  std::vector<GroundTruthBox> boxes;
  const int count = rng.poisson(mean);
  boxes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    GroundTruthBox box;
    box.label = draw_class(rng, cumulative);
    const ClassSpec& spec = config.classes[static_cast<std::size_t>(box.label - 1)];
    for (std::size_t d = 0; d < 3; ++d) {
      box.center[d] = rng.uniform(spec.center_range[d][0], spec.center_range[d][1]);
      box.size[d] = std::max(kMinSize, rng.normal(spec.size_mean[d], spec.size_sigma[d]));
    }
    box.heading = rng.uniform(-M_PI, M_PI);
    boxes.push_back(box);
  }
  return boxes;
}

std::vector<double> count_signature(const std::vector<GroundTruthBox>& truth,
                                    const WorldConfig& config, Rng& rng) {
  std::vector<double> signature(config.classes.size(), 0.0);
  for (const GroundTruthBox& box : truth) {
    const bool known = box.label <= config.n_known;
    signature[static_cast<std::size_t>(box.label - 1)] +=
        known ? 1.0 : config.unknown_embedding_weight;
  }
  for (double& v : signature) v += rng.normal(0.0, config.embedding_noise);
  return signature;
}

}  // namespace

void validate_world_config(const WorldConfig& config) {
  if (config.classes.empty()) {
    throw ConfigError("world requires at least one class");
  }
  if (config.n_known < 1 || config.n_known > static_cast<int>(config.classes.size())) {
    throw ConfigError("n_known must lie in [1, number of classes]");
  }
  if (config.n_frames < 1 || config.n_test < 0) {
    throw ConfigError("n_frames must be >= 1 and n_test >= 0");
  }
  if (config.objects_per_frame_mean < 0.0) {
    throw ConfigError("objects_per_frame_mean must be >= 0");
  }
  for (const ClassSpec& spec : config.classes) {
    if (!(spec.frequency > 0.0)) {
      throw ConfigError("class frequencies must be > 0");
    }
    for (double s : spec.size_sigma) {
      if (!(s > 0.0)) throw ConfigError("size sigmas must be > 0");
    }
  }
  double total_fraction = 0.0;
  for (const SceneSpec& scene : config.scenes) {
    if (scene.unknown_class <= config.n_known ||
        scene.unknown_class > static_cast<int>(config.classes.size())) {
      throw ConfigError("scene unknown_class must be an unknown class id");
    }
    if (scene.fraction < 0.0 || scene.objects_mean < 0.0 || scene.unknown_share <= 0.0 ||
        scene.unknown_share >= 1.0) {
      throw ConfigError("scene spec requires fraction >= 0, objects_mean >= 0, share in (0,1)");
    }
    total_fraction += scene.fraction;
  }
  if (total_fraction > 1.0) {
    throw ConfigError("scene fractions must sum to at most 1");
  }
}

ClassCatalog initial_catalog(const WorldConfig& config) {
  std::vector<int> known;
  std::vector<int> unknown;
  for (int id = 1; id <= static_cast<int>(config.classes.size()); ++id) {
    (id <= config.n_known ? known : unknown).push_back(id);
  }
  return ClassCatalog(std::move(known), std::move(unknown));
}

World generate_world(const WorldConfig& config) {
  validate_world_config(config);

  const std::vector<std::vector<double>> tables = scene_weight_tables(config);

  World world;
  world.config = config;

  // Streams are keyed by (seed, purpose, frame_id) so no other consumer of
  // the experiment seed can collide with world generation.
  const std::uint64_t stream = mix(config.seed, hash_str("world-gen"));
  for (int i = 0; i < config.n_frames; ++i) {
    const std::string id = frame_name("frame", i);
    Rng rng(mix(stream, hash_str(id)));
    std::vector<GroundTruthBox> truth = draw_frame_truth(rng, config, tables);
    world.embeddings[id] = count_signature(truth, config, rng);
    world.pool.truth[id] = std::move(truth);
    world.pool.unlabeled.insert(id);
  }
  for (int i = 0; i < config.n_test; ++i) {
    const std::string id = frame_name("test", i);
    Rng rng(mix(stream, hash_str(id)));
    world.test_truth[id] = draw_frame_truth(rng, config, tables);
  }
  return world;
}

}  // namespace owal::sim
