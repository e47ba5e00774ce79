#pragma once

#include <string>
#include <string_view>

#include "posebench/types.hpp"

namespace posebench {

// Single JSON document with `samples`, `labels` and optional `hierarchy`
// sections. Serialization is canonical (sorted keys, shortest round-trip
// number formatting), so identical datasets serialize to identical bytes.
std::string dataset_to_json(const Dataset& dataset);
Dataset dataset_from_json(std::string_view bytes);

void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

// Hierarchy file: {"leaf": ["level2", "level1"], ...}
Hierarchy hierarchy_from_json(std::string_view bytes);
std::string hierarchy_to_json(const Hierarchy& hierarchy);
Hierarchy load_hierarchy(const std::string& path);

std::string read_file(const std::string& path);           // throws DataError
void write_file(const std::string& path, std::string_view content);

}  // namespace posebench
