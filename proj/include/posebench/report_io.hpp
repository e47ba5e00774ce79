#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "posebench/evaluate.hpp"

namespace posebench {

// Report document: strategy, params, leakage, per_class, macro, accuracy,
// per_level_accuracy, confusion, plus the resolved run configuration and the
// artifact version. run_config may be null for library callers.
nlohmann::json report_to_json(const EvalReport& report,
                              const nlohmann::json& run_config = nullptr);

// Aligned-column table in the shape of the cross-validation result tables
// (ID, class, precision, recall, F1, averages row), with a prominent warning
// when the plan leaked.
std::string render_report_text(const nlohmann::json& report_doc);

}  // namespace posebench
