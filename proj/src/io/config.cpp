#include "owal/io/config.hpp"

#include <json.hpp>

#include "owal/error.hpp"
#include "owal/io/jsonl.hpp"

namespace owal::io {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError("unknown config key \"" + where + it.key() + "\"");
    }
  }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError("config key \"" + where + key + "\" must be a number");
  }
  return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw ConfigError("config key \"" + where + key + "\" must be an integer");
  }
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) {
    throw ConfigError("config key \"" + where + key + "\" must be a boolean");
  }
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback,
                       const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    throw ConfigError("config key \"" + where + key + "\" must be a string");
  }
  return obj[key].get<std::string>();
}

std::array<double, 3> get_triple(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 3) {
    throw ConfigError("config key \"" + where + "\" must be an array of 3 numbers");
  }
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!value[i].is_number()) {
      throw ConfigError("config key \"" + where + "\" must be an array of 3 numbers");
    }
    out[i] = value[i].get<double>();
  }
  return out;
}

sim::ClassSpec parse_class_spec(const json& obj, const sim::ClassSpec& fallback,
                                const std::string& where) {
  reject_unknown_keys(obj, {"frequency", "size_mean", "size_sigma", "center_range"}, where);
  sim::ClassSpec spec = fallback;
  spec.frequency = get_number(obj, "frequency", fallback.frequency, where);
  if (obj.contains("size_mean")) spec.size_mean = get_triple(obj["size_mean"], where + "size_mean");
  if (obj.contains("size_sigma")) {
    spec.size_sigma = get_triple(obj["size_sigma"], where + "size_sigma");
  }
  if (obj.contains("center_range")) {
    const json& ranges = obj["center_range"];
    if (!ranges.is_array() || ranges.size() != 3) {
      throw ConfigError("config key \"" + where + "center_range\" must be 3 [lo, hi] pairs");
    }
    for (std::size_t d = 0; d < 3; ++d) {
      if (!ranges[d].is_array() || ranges[d].size() != 2 || !ranges[d][0].is_number() ||
          !ranges[d][1].is_number()) {
        throw ConfigError("config key \"" + where + "center_range\" must be 3 [lo, hi] pairs");
      }
      spec.center_range[d] = {ranges[d][0].get<double>(), ranges[d][1].get<double>()};
    }
  }
  return spec;
}

void parse_world(const json& obj, ExperimentConfig& config) {
  const std::string where = "world.";
  reject_unknown_keys(obj,
                      {"n_frames", "n_test", "n_known", "classes", "scenes",
                       "objects_per_frame_mean", "embedding_noise", "unknown_embedding_weight",
                       "seed", "detector"},
                      where);
  sim::WorldConfig& world = config.world;
  world.n_frames = get_int(obj, "n_frames", world.n_frames, where);
  world.n_test = get_int(obj, "n_test", world.n_test, where);
  world.n_known = get_int(obj, "n_known", world.n_known, where);
  world.objects_per_frame_mean =
      get_number(obj, "objects_per_frame_mean", world.objects_per_frame_mean, where);
  world.embedding_noise = get_number(obj, "embedding_noise", world.embedding_noise, where);
  world.unknown_embedding_weight =
      get_number(obj, "unknown_embedding_weight", world.unknown_embedding_weight, where);
  if (obj.contains("scenes")) {
    if (!obj["scenes"].is_array()) {
      throw ConfigError("config key \"world.scenes\" must be an array");
    }
    std::vector<sim::SceneSpec> scenes;
    for (std::size_t i = 0; i < obj["scenes"].size(); ++i) {
      const std::string scene_where = where + "scenes[" + std::to_string(i) + "].";
      const json& entry = obj["scenes"][i];
      if (!entry.is_object()) {
        throw ConfigError("config key \"world.scenes\" entries must be objects");
      }
      reject_unknown_keys(entry, {"unknown_class", "fraction", "objects_mean", "unknown_share"},
                          scene_where);
      sim::SceneSpec scene;
      scene.unknown_class = get_int(entry, "unknown_class", scene.unknown_class, scene_where);
      scene.fraction = get_number(entry, "fraction", scene.fraction, scene_where);
      scene.objects_mean = get_number(entry, "objects_mean", scene.objects_mean, scene_where);
      scene.unknown_share = get_number(entry, "unknown_share", scene.unknown_share, scene_where);
      scenes.push_back(scene);
    }
    world.scenes = std::move(scenes);
  }
  if (obj.contains("seed")) {
    if (!obj["seed"].is_number_unsigned() && !obj["seed"].is_number_integer()) {
      throw ConfigError("config key \"world.seed\" must be an integer");
    }
    world.seed = obj["seed"].get<std::uint64_t>();
  }
  if (obj.contains("classes")) {
    if (!obj["classes"].is_array() || obj["classes"].empty()) {
      throw ConfigError("config key \"world.classes\" must be a non-empty array");
    }
    std::vector<sim::ClassSpec> specs;
    for (std::size_t i = 0; i < obj["classes"].size(); ++i) {
      const std::string class_where = where + "classes[" + std::to_string(i) + "].";
      if (!obj["classes"][i].is_object()) {
        throw ConfigError("config key \"world.classes\" entries must be objects");
      }
      specs.push_back(parse_class_spec(obj["classes"][i], sim::ClassSpec{}, class_where));
    }
    world.classes = std::move(specs);
  }

  if (obj.contains("detector")) {
    const json& det = obj["detector"];
    const std::string det_where = "world.detector.";
    reject_unknown_keys(det,
                        {"half_saturation", "confidence_noise", "localization_noise",
                         "spurious_rate", "false_positive_rate"},
                        det_where);
    sim::DetectorSurrogate& d = config.detector;
    d.half_saturation = get_number(det, "half_saturation", d.half_saturation, det_where);
    d.confidence_noise = get_number(det, "confidence_noise", d.confidence_noise, det_where);
    d.localization_noise = get_number(det, "localization_noise", d.localization_noise, det_where);
    d.spurious_rate = get_number(det, "spurious_rate", d.spurious_rate, det_where);
    d.false_positive_rate =
        get_number(det, "false_positive_rate", d.false_positive_rate, det_where);
  }
}

void parse_protocol(const json& obj, ExperimentConfig& config) {
  const std::string where = "protocol.";
  reject_unknown_keys(obj, {"m", "n_r", "rounds", "seed"}, where);
  config.protocol.m = get_int(obj, "m", config.protocol.m, where);
  config.protocol.n_r = get_int(obj, "n_r", config.protocol.n_r, where);
  config.protocol.rounds = get_int(obj, "rounds", config.protocol.rounds, where);
  if (obj.contains("seed")) {
    if (!obj["seed"].is_number_unsigned() && !obj["seed"].is_number_integer()) {
      throw ConfigError("config key \"protocol.seed\" must be an integer");
    }
    config.protocol.seed = obj["seed"].get<std::uint64_t>();
  }
}

void parse_policy(const json& obj, ExperimentConfig& config) {
  const std::string where = "policy.";
  reject_unknown_keys(obj, {"name", "olc_first_round", "olc_every_round"}, where);
  config.policy_name = get_string(obj, "name", config.policy_name, where);
  try {
    config.policy = sim::policy_spec_from_name(config.policy_name);
  } catch (const ConfigError&) {
    throw ConfigError("config key \"policy.name\": unknown policy \"" + config.policy_name +
                      "\"");
  }
  config.policy.olc_first_round =
      get_bool(obj, "olc_first_round", config.policy.olc_first_round, where);
  config.policy.olc_every_round =
      get_bool(obj, "olc_every_round", config.policy.olc_every_round, where);
}

void parse_crb(const json& obj, ExperimentConfig& config) {
  const std::string where = "crb.";
  reject_unknown_keys(obj, {"k1", "k2", "geometry_bins", "smoothing_epsilon", "prior"}, where);
  crb::CrbConfig& crb = config.crb;
  crb.k1 = static_cast<std::size_t>(get_int(obj, "k1", static_cast<int>(crb.k1), where));
  crb.k2 = static_cast<std::size_t>(get_int(obj, "k2", static_cast<int>(crb.k2), where));
  crb.geometry_bins = get_int(obj, "geometry_bins", crb.geometry_bins, where);
  crb.smoothing_epsilon = get_number(obj, "smoothing_epsilon", crb.smoothing_epsilon, where);
  const std::string prior = get_string(
      obj, "prior",
      crb.prior_source == crb::PriorSource::kUniform ? "uniform" : "empirical-unlabeled", where);
  if (prior == "uniform") {
    crb.prior_source = crb::PriorSource::kUniform;
  } else if (prior == "empirical-unlabeled") {
    crb.prior_source = crb::PriorSource::kEmpiricalUnlabeled;
  } else {
    throw ConfigError("config key \"crb.prior\" must be \"uniform\" or \"empirical-unlabeled\"");
  }
}

void parse_metrics(const json& obj, ExperimentConfig& config) {
  const std::string where = "metrics.";
  reject_unknown_keys(obj, {"iou_threshold", "iou_per_class"}, where);
  config.eval.default_iou = get_number(obj, "iou_threshold", config.eval.default_iou, where);
  if (config.eval.default_iou <= 0.0 || config.eval.default_iou >= 1.0) {
    throw ConfigError("config key \"metrics.iou_threshold\" must lie in (0, 1)");
  }
  if (obj.contains("iou_per_class")) {
    if (!obj["iou_per_class"].is_object()) {
      throw ConfigError("config key \"metrics.iou_per_class\" must map class id to threshold");
    }
    for (auto it = obj["iou_per_class"].begin(); it != obj["iou_per_class"].end(); ++it) {
      int class_id = 0;
      try {
        class_id = std::stoi(it.key());
      } catch (...) {
        throw ConfigError("config key \"metrics.iou_per_class\" keys must be class ids");
      }
      if (!it.value().is_number()) {
        throw ConfigError("config key \"metrics.iou_per_class\" values must be numbers");
      }
      config.eval.per_class_iou[class_id] = it.value().get<double>();
    }
  }
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig config;
  config.world.n_frames = 2000;
  config.world.n_test = 200;
  config.world.n_known = 3;
  config.world.objects_per_frame_mean = 12.0;
  config.world.embedding_noise = 0.15;
  config.world.seed = 1;
  config.world.classes = {
      // Known: frequent street classes.
      {0.34, {4.5, 1.8, 1.6}, {0.40, 0.15, 0.15}, {{{-40, 40}, {-40, 40}, {-1, 1}}}},
      {0.33, {0.8, 0.7, 1.75}, {0.10, 0.10, 0.15}, {{{-40, 40}, {-40, 40}, {-1, 1}}}},
      {0.33, {1.8, 0.6, 1.7}, {0.20, 0.10, 0.15}, {{{-40, 40}, {-40, 40}, {-1, 1}}}},
      // Unknown: roadside classes, rare outside open scenes.
      {0.0005, {1.9, 0.55, 1.1}, {0.20, 0.08, 0.10}, {{{-40, 40}, {-40, 40}, {-1, 1}}}},
      {0.0005, {0.75, 0.65, 0.95}, {0.08, 0.08, 0.10}, {{{-40, 40}, {-40, 40}, {-1, 1}}}},
  };
  // Unknown objects appear almost exclusively inside small dedicated scenes.
  config.world.scenes = {
      {4, 0.10, 7.0, 0.32},
      {5, 0.10, 7.0, 0.32},
  };
  config.detector.half_saturation = 25.0;
  config.detector.confidence_noise = 0.02;
  config.detector.localization_noise = 0.5;
  config.detector.spurious_rate = 0.45;
  config.detector.false_positive_rate = 0.01;
  config.protocol = {100, 100, 4, 1};
  config.policy_name = "open-crb";
  config.policy = sim::policy_spec_from_name("open-crb");
  config.crb.k1 = 100;
  config.crb.k2 = 100;
  config.crb.geometry_bins = 10;
  config.crb.prior_source = crb::PriorSource::kEmpiricalUnlabeled;
  config.eval.default_iou = 0.5;
  return config;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": malformed JSON: " + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError(origin + ": config must be a JSON object");
  }
  reject_unknown_keys(root, {"world", "protocol", "policy", "crb", "metrics"}, "");

  ExperimentConfig config = default_config();
  const auto section = [&root](const char* name) -> const json* {
    if (!root.contains(name)) return nullptr;
    if (!root[name].is_object()) {
      throw ConfigError(std::string("config section \"") + name + "\" must be an object");
    }
    return &root[name];
  };
  if (const json* obj = section("world")) parse_world(*obj, config);
  if (const json* obj = section("protocol")) parse_protocol(*obj, config);
  if (const json* obj = section("policy")) parse_policy(*obj, config);
  if (const json* obj = section("crb")) parse_crb(*obj, config);
  if (const json* obj = section("metrics")) parse_metrics(*obj, config);

  sim::validate_world_config(config.world);
  return config;
}

ExperimentConfig parse_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text, path);
}

std::string config_to_json(const ExperimentConfig& config) {
  json root;
  json& world = root["world"];
  world["n_frames"] = config.world.n_frames;
  world["n_test"] = config.world.n_test;
  world["n_known"] = config.world.n_known;
  world["objects_per_frame_mean"] = config.world.objects_per_frame_mean;
  world["embedding_noise"] = config.world.embedding_noise;
  world["unknown_embedding_weight"] = config.world.unknown_embedding_weight;
  world["scenes"] = json::array();
  for (const sim::SceneSpec& scene : config.world.scenes) {
    json entry;
    entry["unknown_class"] = scene.unknown_class;
    entry["fraction"] = scene.fraction;
    entry["objects_mean"] = scene.objects_mean;
    entry["unknown_share"] = scene.unknown_share;
    world["scenes"].push_back(entry);
  }
  world["seed"] = config.world.seed;
  world["classes"] = json::array();
  for (const sim::ClassSpec& spec : config.world.classes) {
    json entry;
    entry["frequency"] = spec.frequency;
    entry["size_mean"] = spec.size_mean;
    entry["size_sigma"] = spec.size_sigma;
    entry["center_range"] = spec.center_range;
    world["classes"].push_back(entry);
  }
  json& det = world["detector"];
  det["half_saturation"] = config.detector.half_saturation;
  det["confidence_noise"] = config.detector.confidence_noise;
  det["localization_noise"] = config.detector.localization_noise;
  det["spurious_rate"] = config.detector.spurious_rate;
  det["false_positive_rate"] = config.detector.false_positive_rate;

  json& protocol = root["protocol"];
  protocol["m"] = config.protocol.m;
  protocol["n_r"] = config.protocol.n_r;
  protocol["rounds"] = config.protocol.rounds;
  protocol["seed"] = config.protocol.seed;

  json& policy = root["policy"];
  policy["name"] = config.policy_name;
  policy["olc_first_round"] = config.policy.olc_first_round;
  policy["olc_every_round"] = config.policy.olc_every_round;

  json& crb = root["crb"];
  crb["k1"] = config.crb.k1;
  crb["k2"] = config.crb.k2;
  crb["geometry_bins"] = config.crb.geometry_bins;
  crb["smoothing_epsilon"] = config.crb.smoothing_epsilon;
  crb["prior"] = config.crb.prior_source == crb::PriorSource::kUniform ? "uniform"
                                                                       : "empirical-unlabeled";

  json& eval = root["metrics"];
  eval["iou_threshold"] = config.eval.default_iou;
  if (!config.eval.per_class_iou.empty()) {
    json per;
    for (const auto& [class_id, tau] : config.eval.per_class_iou) {
      per[std::to_string(class_id)] = tau;
    }
    eval["iou_per_class"] = per;
  }
  return root.dump(2) + "\n";
}

}  // namespace owal::io
