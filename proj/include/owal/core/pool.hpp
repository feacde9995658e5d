#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "owal/core/catalog.hpp"
#include "owal/core/frame.hpp"
#include "owal/core/ledger.hpp"

namespace owal {

// Disjoint labeled/unlabeled frame-id sets plus the oracle-held ground truth.
// Every id in either set must have a truth entry. Values are immutable:
// annotation returns new state instead of mutating in place, so read-only
// snapshots are safe to share across workers.
struct PoolState {
  std::set<std::string> labeled;
  std::set<std::string> unlabeled;
  std::map<std::string, std::vector<GroundTruthBox>> truth;
};

void validate_pool(const PoolState& pool);

struct AnnotationResult {
  PoolState pool;
  ClassCatalog catalog;        // discovery applied
  LedgerEntry entry;           // round index left at 0; caller assigns
  std::set<int> newly_discovered;
};

// Oracle annotation of the selected frames: moves them to the labeled set,
// counts their ground-truth boxes split known/unknown against the catalog in
// force *before* the call, and adds every unknown class seen to discovered.
// Rejects ids that are not in the unlabeled set and duplicate ids.
AnnotationResult annotate(const PoolState& pool, const ClassCatalog& catalog,
                          const std::vector<std::string>& selected);

// Restricted oracle used for pre-training pools: only boxes of effective
// known classes are annotated (and counted); unknown objects in the selected
// frames stay present-but-unlabeled and are not discovered.
AnnotationResult annotate_known_only(const PoolState& pool, const ClassCatalog& catalog,
                                     const std::vector<std::string>& selected);

}  // namespace owal
