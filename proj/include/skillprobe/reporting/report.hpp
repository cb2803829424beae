#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skillprobe/core/serialization.hpp"
#include "skillprobe/evaluator/evaluator.hpp"
#include "skillprobe/ingestion/roster.hpp"
#include "skillprobe/reporting/rational.hpp"

namespace skillprobe {

struct GuidelineStats {
  int compliant = 0;
  int non_compliant = 0;
  int not_applicable = 0;
  int inconclusive = 0;
  // compliant / total_skills.
  Rational rate;
  // compliant / (compliant + non_compliant); absent when both are zero.
  std::optional<Rational> strict_rate;
  // Skills whose verdict carries each facet as true.
  std::map<std::string, int> facet_counts;

  int total() const { return compliant + non_compliant + not_applicable + inconclusive; }
};

struct CategoryStats {
  int skills = 0;
  // Mean number of compliant guidelines per skill.
  Rational avg_guidelines_complied;
  // Mean of the group's per-guideline compliance rates.
  std::map<FeatureGroup, Rational> feature_group_rates;
};

struct ComplianceReport {
  std::map<Guideline, GuidelineStats> per_guideline;
  std::vector<Guideline> guideline_ranking;
  std::map<Category, CategoryStats> per_category;
  std::vector<Category> category_ranking;
  int total_skills = 0;

  // Throws ValidationError when counts do not sum to total_skills.
  void validate() const;
};

// Evaluations that count toward a report: not excluded by the connector and,
// when a roster is given, not excluded there either.
std::vector<SkillEvaluation> reportable(const std::vector<SkillEvaluation>& evaluations,
                                        const Roster* roster = nullptr);

// compliant / total over the given evaluations. Throws PreconditionError
// when `evaluations` is empty.
Rational compliance_rate(const std::vector<SkillEvaluation>& evaluations, Guideline guideline);

// Descending rate, ties by ascending guideline number.
std::vector<Guideline> rank_guidelines(const ComplianceReport& report);

struct CategorySummary {
  std::map<Category, CategoryStats> per_category;
  // Descending average, ties by category name.
  std::vector<Category> ranking;
};

// Throws ValidationError for an evaluation whose skill is not in the roster.
CategorySummary category_summary(const std::vector<SkillEvaluation>& evaluations, const Roster& roster);

// Full report over the reportable evaluations. Throws PreconditionError
// when none remain.
ComplianceReport build_report(const std::vector<SkillEvaluation>& evaluations, const Roster& roster);

enum class ReportFormat { json, csv, markdown };
ReportFormat parse_report_format(std::string_view text);

json report_to_json(const ComplianceReport& report);
// Deterministic bytes. CSV: one table per section, separated by a blank line.
std::string emit_report(const ComplianceReport& report, ReportFormat format);

}  // namespace skillprobe
