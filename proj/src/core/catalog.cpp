#include "owal/core/catalog.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace owal {

ClassCatalog::ClassCatalog(std::vector<int> known_ids, std::vector<int> unknown_ids,
                           std::set<int> discovered)
    : known_ids_(std::move(known_ids)),
      unknown_ids_(std::move(unknown_ids)),
      discovered_(std::move(discovered)) {
  validate();
}

void ClassCatalog::validate() const {
  if (known_ids_.empty()) {
    throw std::invalid_argument("catalog requires at least one known class");
  }
  for (int id : known_ids_) {
    if (std::find(unknown_ids_.begin(), unknown_ids_.end(), id) != unknown_ids_.end()) {
      throw std::invalid_argument("class id " + std::to_string(id) +
                                  " listed as both known and unknown");
    }
  }
  for (int id : discovered_) {
    if (std::find(unknown_ids_.begin(), unknown_ids_.end(), id) == unknown_ids_.end()) {
      throw std::invalid_argument("discovered class " + std::to_string(id) +
                                  " is not an unknown class");
    }
  }
}

std::vector<int> ClassCatalog::effective_known_ids() const {
  std::vector<int> ids = known_ids_;
  ids.insert(ids.end(), discovered_.begin(), discovered_.end());
  return ids;
}

bool ClassCatalog::is_effective_known(int class_id) const {
  return std::find(known_ids_.begin(), known_ids_.end(), class_id) != known_ids_.end() ||
         discovered_.count(class_id) > 0;
}

bool ClassCatalog::is_unknown(int class_id) const {
  return std::find(unknown_ids_.begin(), unknown_ids_.end(), class_id) != unknown_ids_.end();
}

int ClassCatalog::effective_index(int class_id) const {
  const std::vector<int> ids = effective_known_ids();
  const auto it = std::find(ids.begin(), ids.end(), class_id);
  if (it == ids.end()) return -1;
  return static_cast<int>(it - ids.begin());
}

ClassCatalog ClassCatalog::with_discovered(const std::set<int>& newly) const {
  std::set<int> merged = discovered_;
  merged.insert(newly.begin(), newly.end());
  return ClassCatalog(known_ids_, unknown_ids_, std::move(merged));
}

}  // namespace owal
