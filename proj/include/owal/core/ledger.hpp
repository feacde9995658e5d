#pragma once

#include <cstdint>
#include <vector>

namespace owal {

// Cost unit is annotated ground-truth boxes; frames are tracked as well so
// frame-count budgets stay expressible.
struct LedgerEntry {
  int round = 0;
  int frames_selected = 0;
  long known_boxes = 0;
  long unknown_boxes = 0;

  long cost() const { return known_boxes + unknown_boxes; }
};

enum class BudgetMode { kNone, kFrames, kBoxes };

class BudgetLedger {
 public:
  BudgetLedger() = default;
  BudgetLedger(BudgetMode mode, long budget) : mode_(mode), budget_(budget) {}

  // Entries must arrive with non-decreasing round indices and non-negative
  // counts; a configured budget cap is enforced on add.
  void add(const LedgerEntry& entry);

  const std::vector<LedgerEntry>& rounds() const { return rounds_; }
  BudgetMode mode() const { return mode_; }
  long budget() const { return budget_; }

  long cumulative_frames() const;
  long cumulative_known() const;
  long cumulative_unknown() const;
  long cumulative_cost() const { return cumulative_known() + cumulative_unknown(); }

  long cumulative_known_upto(int round) const;
  long cumulative_unknown_upto(int round) const;

  int last_round() const;

 private:
  std::vector<LedgerEntry> rounds_;
  BudgetMode mode_ = BudgetMode::kNone;
  long budget_ = 0;
};

// Annotated unknown boxes divided by annotated known boxes over all rounds up
// to and including upto_round. Returns +infinity when only unknown boxes were
// annotated, and 0 when nothing was.
double unknown_to_known_ratio(const BudgetLedger& ledger, int upto_round);

}  // namespace owal
