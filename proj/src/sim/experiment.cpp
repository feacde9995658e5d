#include "owal/sim/experiment.hpp"

#include <algorithm>
#include <stdexcept>

#include "owal/error.hpp"
#include "owal/rng.hpp"

namespace owal::sim {

namespace {

// Seeded pre-training sample: deterministic shuffle of the unlabeled ids.
std::vector<std::string> sample_pretrain_frames(const PoolState& pool, int m,
                                                std::uint64_t seed) {
  std::vector<std::string> ids(pool.unlabeled.begin(), pool.unlabeled.end());
  Rng rng(mix(seed, hash_str("pretrain")));
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1], ids[rng.uniform_index(i)]);
  }
  ids.resize(static_cast<std::size_t>(m));
  return ids;
}

std::vector<FrameRecord> predict_pool(const DetectorSurrogate& detector, const World& world,
                                      const std::set<std::string>& frame_ids,
                                      const ClassCatalog& catalog, std::uint64_t seed,
                                      int round) {
  std::vector<FrameRecord> records;
  records.reserve(frame_ids.size());
  for (const std::string& id : frame_ids) {
    const auto emb = world.embeddings.find(id);
    records.push_back(predict(detector, id, world.pool.truth.at(id),
                              emb == world.embeddings.end() ? nullptr : &emb->second, catalog,
                              seed, round));
  }
  return records;
}

std::vector<FrameRecord> predict_test(const DetectorSurrogate& detector, const World& world,
                                      const ClassCatalog& catalog, std::uint64_t seed,
                                      int round) {
  std::vector<FrameRecord> records;
  records.reserve(world.test_truth.size());
  for (const auto& [id, truth] : world.test_truth) {
    records.push_back(predict(detector, id, truth, nullptr, catalog, seed, round));
  }
  return records;
}

bool use_olc(const PolicySpec& policy, int round) {
  if (policy.olc_every_round || policy.base == scoring::Policy::kOlc) return true;
  if (round == 1 &&
      (policy.olc_first_round || policy.base == scoring::Policy::kOpenCrb)) {
    return true;
  }
  return false;
}

struct Selection {
  std::vector<std::string> ids;
  std::map<std::string, double> scores;
};

Selection select_round(const PolicySpec& policy, const std::vector<FrameRecord>& records,
                       const World& world, const PoolState& pool, const ClassCatalog& catalog,
                       const crb::CrbConfig& crb_config, int round, std::uint64_t seed,
                       std::size_t n_r) {
  Selection selection;

  scoring::Policy effective = policy.base;
  if (use_olc(policy, round)) {
    effective = scoring::Policy::kOlc;
  } else if (policy.base == scoring::Policy::kOpenCrb) {
    effective = scoring::Policy::kCrb;
  }

  if (effective == scoring::Policy::kCrb) {
    crb::CrbConfig round_config = crb_config;
    round_config.n_r = n_r;
    selection.ids = crb::crb_select(records, catalog, round_config);
    return selection;
  }
  if (effective == scoring::Policy::kCoreset) {
    // Labeled frames participate with their embeddings and no predictions.
    std::vector<FrameRecord> frames = records;
    for (const std::string& id : pool.labeled) {
      FrameRecord rec;
      rec.frame_id = id;
      rec.embedding = world.embeddings.at(id);
      frames.push_back(std::move(rec));
    }
    selection.ids = scoring::coreset_select(frames, pool.labeled, n_r);
    return selection;
  }

  const std::vector<scoring::ScoredFrame> scored = scoring::score_frames(
      effective, records, catalog, mix(seed, static_cast<std::uint64_t>(round)));
  selection.ids = scoring::select_top_k(scored, n_r);
  std::map<std::string, double> by_id;
  for (const scoring::ScoredFrame& s : scored) by_id[s.frame_id] = s.score;
  for (const std::string& id : selection.ids) selection.scores[id] = by_id.at(id);
  return selection;
}

}  // namespace

PolicySpec policy_spec_from_name(const std::string& name) {
  PolicySpec spec;
  spec.base = scoring::parse_policy(name);
  if (spec.base == scoring::Policy::kOpenCrb) spec.olc_first_round = true;
  if (spec.base == scoring::Policy::kOlc) spec.olc_every_round = true;
  return spec;
}

ExperimentTrace run_experiment(const World& world, const PolicySpec& policy,
                               const Protocol& protocol, const crb::CrbConfig& crb_config,
                               const metrics::EvalOptions& eval_options,
                               const DetectorSurrogate& detector_template) {
  if (protocol.m < 0 || protocol.n_r < 1 || protocol.rounds < 0) {
    throw ConfigError("protocol requires m >= 0, n_r >= 1, rounds >= 0");
  }
  const long budget =
      static_cast<long>(protocol.m) + static_cast<long>(protocol.rounds) * protocol.n_r;
  if (budget > static_cast<long>(world.pool.unlabeled.size())) {
    throw ConfigError("budget m + R * n_r exceeds pool size");
  }

  ExperimentTrace trace;
  trace.protocol = protocol;
  trace.policy = policy;
  trace.ledger = BudgetLedger(BudgetMode::kFrames, budget);

  ClassCatalog catalog = initial_catalog(world.config);
  PoolState pool = world.pool;
  DetectorSurrogate detector = detector_template;
  detector.labeled_boxes.clear();
  detector.embedding_dim = static_cast<int>(world.config.classes.size());

  const auto evaluate_round = [&](int round) {
    const std::vector<FrameRecord> test_predictions =
        predict_test(detector, world, catalog, mix(protocol.seed, hash_str("eval")), round);
    metrics::MetricReport report =
        metrics::evaluate(test_predictions, world.test_truth, catalog, eval_options);
    report.round = round;
    report.cumulative_known_boxes = trace.ledger.cumulative_known();
    report.cumulative_unknown_boxes = trace.ledger.cumulative_unknown();
    return report;
  };

  // Round 0: pre-train on m frames annotated for known classes only; unknown
  // objects in those frames stay present-but-unlabeled.
  {
    RoundRecord round0;
    round0.round = 0;
    round0.selected = sample_pretrain_frames(pool, protocol.m, protocol.seed);
    AnnotationResult result = annotate_known_only(pool, catalog, round0.selected);
    result.entry.round = 0;
    pool = std::move(result.pool);
    catalog = result.catalog;
    trace.ledger.add(result.entry);
    round0.entry = result.entry;

    std::map<int, long> counts = count_boxes_per_class(world.pool.truth, round0.selected);
    for (auto it = counts.begin(); it != counts.end();) {
      it = catalog.is_effective_known(it->first) ? std::next(it) : counts.erase(it);
    }
    detector = retrain(detector, counts);

    round0.report = evaluate_round(0);
    trace.rounds.push_back(std::move(round0));
  }

  for (int round = 1; round <= protocol.rounds; ++round) {
    RoundRecord record;
    record.round = round;

    const std::vector<FrameRecord> records =
        predict_pool(detector, world, pool.unlabeled, catalog, protocol.seed, round);

    Selection selection =
        select_round(policy, records, world, pool, catalog, crb_config, round, protocol.seed,
                     static_cast<std::size_t>(protocol.n_r));
    record.selected = selection.ids;
    record.selection_scores = std::move(selection.scores);

    AnnotationResult result = annotate(pool, catalog, record.selected);
    result.entry.round = round;
    pool = std::move(result.pool);
    catalog = result.catalog;
    trace.ledger.add(result.entry);
    record.entry = result.entry;
    record.newly_discovered.assign(result.newly_discovered.begin(),
                                   result.newly_discovered.end());

    detector = retrain(detector, count_boxes_per_class(world.pool.truth, record.selected));

    record.report = evaluate_round(round);
    trace.rounds.push_back(std::move(record));
  }

  trace.final_catalog = catalog;
  return trace;
}

}  // namespace owal::sim
