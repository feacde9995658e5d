#include "owal/core/ledger.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace owal {

void BudgetLedger::add(const LedgerEntry& entry) {
  if (entry.frames_selected < 0 || entry.known_boxes < 0 || entry.unknown_boxes < 0) {
    throw std::invalid_argument("ledger entry counts must be non-negative");
  }
  if (!rounds_.empty() && entry.round < rounds_.back().round) {
    throw std::invalid_argument("ledger rounds must be non-decreasing");
  }
  if (mode_ == BudgetMode::kFrames &&
      cumulative_frames() + entry.frames_selected > budget_) {
    throw std::invalid_argument("frame budget exceeded: " +
                                std::to_string(cumulative_frames() + entry.frames_selected) +
                                " > " + std::to_string(budget_));
  }
  if (mode_ == BudgetMode::kBoxes && cumulative_cost() + entry.cost() > budget_) {
    throw std::invalid_argument("box budget exceeded");
  }
  rounds_.push_back(entry);
}

long BudgetLedger::cumulative_frames() const {
  long total = 0;
  for (const LedgerEntry& e : rounds_) total += e.frames_selected;
  return total;
}

long BudgetLedger::cumulative_known() const {
  long total = 0;
  for (const LedgerEntry& e : rounds_) total += e.known_boxes;
  return total;
}

long BudgetLedger::cumulative_unknown() const {
  long total = 0;
  for (const LedgerEntry& e : rounds_) total += e.unknown_boxes;
  return total;
}

long BudgetLedger::cumulative_known_upto(int round) const {
  long total = 0;
  for (const LedgerEntry& e : rounds_) {
    if (e.round <= round) total += e.known_boxes;
  }
  return total;
}

long BudgetLedger::cumulative_unknown_upto(int round) const {
  long total = 0;
  for (const LedgerEntry& e : rounds_) {
    if (e.round <= round) total += e.unknown_boxes;
  }
  return total;
}

int BudgetLedger::last_round() const {
  if (rounds_.empty()) {
    throw std::invalid_argument("ledger has no rounds");
  }
  return rounds_.back().round;
}

double unknown_to_known_ratio(const BudgetLedger& ledger, int upto_round) {
  if (!ledger.rounds().empty() && upto_round > ledger.last_round()) {
    throw std::invalid_argument("upto_round beyond last recorded round");
  }
  const long known = ledger.cumulative_known_upto(upto_round);
  const long unknown = ledger.cumulative_unknown_upto(upto_round);
  if (known == 0) {
    return unknown == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(unknown) / static_cast<double>(known);
}

}  // namespace owal
