#include "skillprobe/crawler/plan.hpp"

#include "skillprobe/core/error.hpp"

namespace skillprobe {

void ElicitationPlan::validate() const {
  if (variety_runs < 2) throw ValidationError("variety_runs", "must be at least 2");
  if (silence_count < 1) throw ValidationError("silence_count", "must be positive");
  if (response_timeout.count() < 0) throw ValidationError("response_timeout_ms", "must not be negative");
  if (max_extracted_commands < 1) throw ValidationError("max_extracted_commands", "must be positive");
  if (connector_failure_threshold < 0.0 || connector_failure_threshold > 1.0) {
    throw ValidationError("connector_failure_threshold", "must lie in [0, 1]");
  }
  extraction.validate();
}

void to_json(json& j, const ElicitationPlan& plan) {
  j = json{{"variety_runs", plan.variety_runs},
           {"silence_count", plan.silence_count},
           {"response_timeout_ms", plan.response_timeout.count()},
           {"max_extracted_commands", plan.max_extracted_commands},
           {"connector_failure_threshold", plan.connector_failure_threshold},
           {"extraction", extraction_rules_to_json(plan.extraction)}};
}

void from_json(const json& j, ElicitationPlan& plan) {
  plan = ElicitationPlan{};
  if (!j.is_object()) throw ParseError("plan must be a JSON object");
  try {
    plan.variety_runs = j.value("variety_runs", plan.variety_runs);
    plan.silence_count = j.value("silence_count", plan.silence_count);
    plan.response_timeout =
        Millis{j.value("response_timeout_ms", static_cast<std::int64_t>(plan.response_timeout.count()))};
    plan.max_extracted_commands = j.value("max_extracted_commands", plan.max_extracted_commands);
    plan.connector_failure_threshold =
        j.value("connector_failure_threshold", plan.connector_failure_threshold);
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  if (j.contains("extraction")) plan.extraction = extraction_rules_from_json(j.at("extraction"));
  plan.validate();
}

ElicitationPlan load_plan(const std::string& path) { return read_json_file(path).get<ElicitationPlan>(); }

}  // namespace skillprobe
