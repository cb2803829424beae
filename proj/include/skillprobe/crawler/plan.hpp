#pragma once

#include <string>

#include "skillprobe/core/serialization.hpp"
#include "skillprobe/core/types.hpp"
#include "skillprobe/crawler/extraction.hpp"

namespace skillprobe {

struct ElicitationPlan {
  int variety_runs = 3;
  int silence_count = 2;
  Millis response_timeout{8000};
  int max_extracted_commands = 8;
  // The CLI fails with exit code 3 when a larger fraction of the crawled
  // skills is excluded for connector errors.
  double connector_failure_threshold = 0.5;
  ExtractionRules extraction = default_extraction_rules();

  // Throws ValidationError naming the offending field.
  void validate() const;
};

void to_json(json& j, const ElicitationPlan& plan);
// Missing keys keep their defaults; validates the result.
void from_json(const json& j, ElicitationPlan& plan);
ElicitationPlan load_plan(const std::string& path);

}  // namespace skillprobe
