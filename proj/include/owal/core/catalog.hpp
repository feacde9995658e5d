#pragma once

#include <set>
#include <vector>

namespace owal {

// Class inventory for an open-world pool. known_ids are the classes present
// in pre-training labels; unknown_ids are classes that may appear in the pool
// but have never been annotated. Once an unknown class is annotated it is
// "discovered" and joins the effective known set for every later operation.
class ClassCatalog {
 public:
  ClassCatalog() = default;
  ClassCatalog(std::vector<int> known_ids, std::vector<int> unknown_ids,
               std::set<int> discovered = {});

  const std::vector<int>& known_ids() const { return known_ids_; }
  const std::vector<int>& unknown_ids() const { return unknown_ids_; }
  const std::set<int>& discovered() const { return discovered_; }

  // Original known ids followed by discovered ids in ascending order. This
  // ordering defines the component layout of label distributions and the
  // layout of per-class score vectors.
  std::vector<int> effective_known_ids() const;
  std::size_t effective_known_count() const { return known_ids_.size() + discovered_.size(); }

  bool is_effective_known(int class_id) const;
  bool is_unknown(int class_id) const;
  bool is_listed(int class_id) const { return is_effective_known(class_id) || is_unknown(class_id); }

  // Position of class_id within effective_known_ids(), or -1 if absent.
  int effective_index(int class_id) const;

  // Value-semantics discovery: returns a catalog with the given unknown ids
  // added to the discovered set. Ids not listed as unknown are rejected.
  ClassCatalog with_discovered(const std::set<int>& newly) const;

 private:
  void validate() const;

  std::vector<int> known_ids_;
  std::vector<int> unknown_ids_;
  std::set<int> discovered_;
};

}  // namespace owal
