#include "skillprobe/reporting/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "skillprobe/core/error.hpp"

namespace skillprobe {

namespace {

int compliant_count(const SkillEvaluation& e) {
  int n = 0;
  for (const auto& [g, v] : e.verdicts) n += v.verdict == Verdict::compliant ? 1 : 0;
  return n;
}

Verdict verdict_of(const SkillEvaluation& e, Guideline g) {
  auto it = e.verdicts.find(g);
  if (it == e.verdicts.end()) {
    throw ValidationError("verdicts", "missing " + std::string(to_string(g)) + " for " + e.skill_id);
  }
  return it->second.verdict;
}

std::vector<Guideline> guidelines_in(FeatureGroup group) {
  std::vector<Guideline> out;
  for (Guideline g : kAllGuidelines) {
    if (feature_group(g) == group) out.push_back(g);
  }
  return out;
}

json rational_json(const Rational& r) {
  return json{{"numerator", r.numerator()}, {"denominator", r.denominator()}, {"decimal", r.decimal()}};
}

std::string csv_cell(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void ComplianceReport::validate() const {
  for (const auto& [g, stats] : per_guideline) {
    if (stats.total() != total_skills) {
      throw ValidationError("per_guideline", std::string(to_string(g)) + " counts do not sum to total_skills");
    }
    if (stats.rate > Rational(1, 1)) throw ValidationError("per_guideline", "rate above 1");
  }
}

std::vector<SkillEvaluation> reportable(const std::vector<SkillEvaluation>& evaluations, const Roster* roster) {
  std::set<std::string> roster_excluded;
  if (roster) {
    for (const auto& s : roster->skills) {
      if (s.excluded()) roster_excluded.insert(s.id);
    }
  }
  std::vector<SkillEvaluation> out;
  for (const auto& e : evaluations) {
    if (!e.excluded_reason && !roster_excluded.count(e.skill_id)) out.push_back(e);
  }
  return out;
}

Rational compliance_rate(const std::vector<SkillEvaluation>& evaluations, Guideline guideline) {
  if (evaluations.empty()) throw PreconditionError("compliance rate of an empty evaluation set");
  std::int64_t compliant = 0;
  for (const auto& e : evaluations) compliant += verdict_of(e, guideline) == Verdict::compliant ? 1 : 0;
  return Rational(compliant, static_cast<std::int64_t>(evaluations.size()));
}

std::vector<Guideline> rank_guidelines(const ComplianceReport& report) {
  std::vector<Guideline> order(kAllGuidelines.begin(), kAllGuidelines.end());
  auto rate = [&](Guideline g) {
    auto it = report.per_guideline.find(g);
    return it == report.per_guideline.end() ? Rational() : it->second.rate;
  };
  std::stable_sort(order.begin(), order.end(), [&](Guideline a, Guideline b) { return rate(a) > rate(b); });
  return order;
}

CategorySummary category_summary(const std::vector<SkillEvaluation>& evaluations, const Roster& roster) {
  std::map<std::string, Category> category_of;
  for (const auto& s : roster.skills) category_of.emplace(s.id, s.category);

  std::map<Category, std::vector<const SkillEvaluation*>> grouped;
  for (const auto& e : evaluations) {
    auto it = category_of.find(e.skill_id);
    if (it == category_of.end()) throw ValidationError("skill_id", "'" + e.skill_id + "' is not in the roster");
    grouped[it->second].push_back(&e);
  }

  CategorySummary out;
  for (const auto& [category, members] : grouped) {
    CategoryStats stats;
    stats.skills = static_cast<int>(members.size());
    std::int64_t complied = 0;
    for (const auto* e : members) complied += compliant_count(*e);
    stats.avg_guidelines_complied = Rational(complied, stats.skills);
    for (FeatureGroup group : kAllFeatureGroups) {
      const auto guidelines = guidelines_in(group);
      Rational sum;
      for (Guideline g : guidelines) {
        std::int64_t n = 0;
        for (const auto* e : members) n += verdict_of(*e, g) == Verdict::compliant ? 1 : 0;
        sum = sum + Rational(n, stats.skills);
      }
      stats.feature_group_rates[group] = sum / static_cast<std::int64_t>(guidelines.size());
    }
    out.per_category[category] = stats;
    out.ranking.push_back(category);
  }
  std::sort(out.ranking.begin(), out.ranking.end(), [&](Category a, Category b) {
    const auto& x = out.per_category.at(a).avg_guidelines_complied;
    const auto& y = out.per_category.at(b).avg_guidelines_complied;
    if (x != y) return x > y;
    return to_string(a) < to_string(b);
  });
  return out;
}

ComplianceReport build_report(const std::vector<SkillEvaluation>& evaluations, const Roster& roster) {
  const auto counted = reportable(evaluations, &roster);
  if (counted.empty()) throw PreconditionError("no evaluations left to report on");

  ComplianceReport report;
  report.total_skills = static_cast<int>(counted.size());
  for (Guideline g : kAllGuidelines) {
    GuidelineStats stats;
    for (const auto& e : counted) {
      const auto& v = e.verdicts.at(g);
      switch (v.verdict) {
        case Verdict::compliant:
          ++stats.compliant;
          break;
        case Verdict::non_compliant:
          ++stats.non_compliant;
          break;
        case Verdict::not_applicable:
          ++stats.not_applicable;
          break;
        case Verdict::inconclusive:
          ++stats.inconclusive;
          break;
      }
      for (const auto& [facet, value] : v.facets) stats.facet_counts[facet] += value ? 1 : 0;
    }
    stats.rate = compliance_rate(counted, g);
    if (stats.compliant + stats.non_compliant > 0) {
      stats.strict_rate = Rational(stats.compliant, stats.compliant + stats.non_compliant);
    }
    report.per_guideline[g] = stats;
  }
  report.guideline_ranking = rank_guidelines(report);
  auto summary = category_summary(counted, roster);
  report.per_category = std::move(summary.per_category);
  report.category_ranking = std::move(summary.ranking);
  report.validate();
  return report;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "markdown" || text == "md") return ReportFormat::markdown;
  throw ValidationError("format", "unknown report format '" + std::string(text) + "'");
}

json report_to_json(const ComplianceReport& report) {
  json guidelines = json::array();
  for (const auto& [g, s] : report.per_guideline) {
    guidelines.push_back(json{{"guideline", std::string(to_string(g))},
                              {"feature_group", std::string(to_string(feature_group(g)))},
                              {"compliant", s.compliant},
                              {"non_compliant", s.non_compliant},
                              {"not_applicable", s.not_applicable},
                              {"inconclusive", s.inconclusive},
                              {"rate", rational_json(s.rate)},
                              {"strict_rate", s.strict_rate ? rational_json(*s.strict_rate) : json(nullptr)},
                              {"facet_counts", s.facet_counts}});
  }
  json ranking = json::array();
  for (Guideline g : report.guideline_ranking) ranking.push_back(std::string(to_string(g)));
  json categories = json::array();
  for (Category c : report.category_ranking) {
    const auto& s = report.per_category.at(c);
    json groups = json::object();
    for (const auto& [group, rate] : s.feature_group_rates) groups[std::string(to_string(group))] = rational_json(rate);
    categories.push_back(json{{"category", std::string(to_string(c))},
                              {"skills", s.skills},
                              {"avg_guidelines_complied", rational_json(s.avg_guidelines_complied)},
                              {"feature_group_rates", groups}});
  }
  json category_ranking = json::array();
  for (Category c : report.category_ranking) category_ranking.push_back(std::string(to_string(c)));
  return json{{"total_skills", report.total_skills},
              {"per_guideline", guidelines},
              {"guideline_ranking", ranking},
              {"per_category", categories},
              {"category_ranking", category_ranking}};
}

std::string emit_report(const ComplianceReport& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::json:
      out << report_to_json(report).dump(2) << '\n';
      break;
    case ReportFormat::csv: {
      out << "guideline,feature_group,compliant,non_compliant,not_applicable,inconclusive,total,rate,strict_rate,"
             "goodbye_present\n";
      for (const auto& [g, s] : report.per_guideline) {
        out << to_string(g) << ',' << to_string(feature_group(g)) << ',' << s.compliant << ',' << s.non_compliant
            << ',' << s.not_applicable << ',' << s.inconclusive << ',' << report.total_skills << ','
            << s.rate.decimal() << ',' << (s.strict_rate ? s.strict_rate->decimal() : "") << ',';
        if (auto it = s.facet_counts.find("goodbye_present"); it != s.facet_counts.end()) out << it->second;
        out << '\n';
      }
      out << "\nrank,guideline,rate\n";
      int rank = 0;
      for (Guideline g : report.guideline_ranking) {
        out << ++rank << ',' << to_string(g) << ',' << report.per_guideline.at(g).rate.decimal() << '\n';
      }
      out << "\nrank,category,skills,avg_guidelines_complied";
      for (FeatureGroup f : kAllFeatureGroups) out << ',' << to_string(f);
      out << '\n';
      rank = 0;
      for (Category c : report.category_ranking) {
        const auto& s = report.per_category.at(c);
        out << ++rank << ',' << csv_cell(to_string(c)) << ',' << s.skills << ',' << s.avg_guidelines_complied.decimal();
        for (FeatureGroup f : kAllFeatureGroups) out << ',' << s.feature_group_rates.at(f).decimal();
        out << '\n';
      }
      break;
    }
    case ReportFormat::markdown: {
      out << "# Design guideline compliance\n\n";
      out << "Skills evaluated: " << report.total_skills << "\n\n";
      out << "## Compliance rate per guideline\n\n";
      out << "| Guideline | Feature group | Compliant | Non-compliant | N/A | Inconclusive | Rate | Strict rate |\n";
      out << "|---|---|---:|---:|---:|---:|---:|---:|\n";
      for (const auto& [g, s] : report.per_guideline) {
        out << "| " << to_string(g) << " | " << to_string(feature_group(g)) << " | " << s.compliant << " | "
            << s.non_compliant << " | " << s.not_applicable << " | " << s.inconclusive << " | " << s.rate.percent()
            << "% | " << (s.strict_rate ? s.strict_rate->percent() + "%" : "n/a") << " |\n";
      }
      if (auto it = report.per_guideline.find(Guideline::G3); it != report.per_guideline.end()) {
        auto f = it->second.facet_counts.find("goodbye_present");
        out << "\nG3 skills saying goodbye: " << (f == it->second.facet_counts.end() ? 0 : f->second) << " of "
            << report.total_skills << "\n";
      }
      out << "\nRanking: ";
      for (std::size_t i = 0; i < report.guideline_ranking.size(); ++i) {
        out << (i ? " > " : "") << to_string(report.guideline_ranking[i]);
      }
      out << "\n\n## Support rate per category\n\n";
      out << "| Rank | Category | Skills | Avg guidelines complied | Basic commands | Variety | Error handling | "
             "Memorizing |\n";
      out << "|---:|---|---:|---:|---:|---:|---:|---:|\n";
      int rank = 0;
      for (Category c : report.category_ranking) {
        const auto& s = report.per_category.at(c);
        out << "| " << ++rank << " | " << to_string(c) << " | " << s.skills << " | "
            << s.avg_guidelines_complied.decimal();
        for (FeatureGroup f : kAllFeatureGroups) out << " | " << s.feature_group_rates.at(f).percent() << "%";
        out << " |\n";
      }
      break;
    }
  }
  return out.str();
}

}  // namespace skillprobe
