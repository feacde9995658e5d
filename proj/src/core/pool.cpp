#include "owal/core/pool.hpp"

#include <stdexcept>

namespace owal {

void validate_pool(const PoolState& pool) {
  for (const std::string& id : pool.labeled) {
    if (pool.unlabeled.count(id) > 0) {
      throw std::invalid_argument("frame " + id + " is both labeled and unlabeled");
    }
    if (pool.truth.find(id) == pool.truth.end()) {
      throw std::invalid_argument("frame " + id + " has no truth entry");
    }
  }
  for (const std::string& id : pool.unlabeled) {
    if (pool.truth.find(id) == pool.truth.end()) {
      throw std::invalid_argument("frame " + id + " has no truth entry");
    }
  }
}

namespace {

AnnotationResult annotate_impl(const PoolState& pool, const ClassCatalog& catalog,
                               const std::vector<std::string>& selected, bool known_only) {
  std::set<std::string> seen;
  for (const std::string& id : selected) {
    if (!seen.insert(id).second) {
      throw std::invalid_argument("duplicate frame id in selection: " + id);
    }
    if (pool.unlabeled.count(id) == 0) {
      throw std::invalid_argument("frame " + id + " not in unlabeled pool");
    }
  }

  AnnotationResult result;
  result.pool = pool;
  result.entry.frames_selected = static_cast<int>(selected.size());

  for (const std::string& id : selected) {
    result.pool.unlabeled.erase(id);
    result.pool.labeled.insert(id);
    for (const GroundTruthBox& box : pool.truth.at(id)) {
      if (catalog.is_effective_known(box.label)) {
        ++result.entry.known_boxes;
      } else if (!known_only) {
        ++result.entry.unknown_boxes;
        result.newly_discovered.insert(box.label);
      }
    }
  }

  result.catalog = known_only ? catalog : catalog.with_discovered(result.newly_discovered);
  return result;
}

}  // namespace

AnnotationResult annotate(const PoolState& pool, const ClassCatalog& catalog,
                          const std::vector<std::string>& selected) {
  return annotate_impl(pool, catalog, selected, /*known_only=*/false);
}

AnnotationResult annotate_known_only(const PoolState& pool, const ClassCatalog& catalog,
                                     const std::vector<std::string>& selected) {
  return annotate_impl(pool, catalog, selected, /*known_only=*/true);
}

}  // namespace owal
