#include "posebench/types.hpp"

#include <algorithm>

#include "posebench/errors.hpp"

namespace posebench {

int Dataset::label_index(const std::string& label) const {
  auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return -1;
  return static_cast<int>(it - labels.begin());
}

void Dataset::validate() const {
  if (!std::is_sorted(labels.begin(), labels.end()))
    throw DataError("dataset label vocabulary is not sorted");
  for (const auto& m : meta) {
    if (label_index(m.label) < 0)
      throw DataError("sample label '" + m.label + "' missing from vocabulary");
  }
  if (hierarchy) {
    for (const auto& label : labels) {
      if (!hierarchy->up.count(label))
        throw DataError("hierarchy does not cover label '" + label + "'");
    }
  }
  if (!poses.empty() && poses.size() != meta.size())
    throw DataError("pose array length does not match sample metadata");
  if (!features.empty() && features.size() != meta.size())
    throw DataError("feature array length does not match sample metadata");
}

}  // namespace posebench
