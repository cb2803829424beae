#pragma once

#include <string>
#include <vector>

#include "skillprobe/core/types.hpp"

namespace skillprobe {

struct Roster {
  std::vector<SkillDescriptor> skills;
  std::string source;

  // Throws ValidationError on duplicate ids or an invalid row.
  void validate() const;
};

enum class RosterFormat { csv, json };

// Columns: id, display_name, invocation_name, category, subcategory,
// review_count, avg_rating, excluded_reason. Empty optional cells mean
// "absent". The JSON form is an array of objects with the same keys.
Roster load_roster(const std::string& path, RosterFormat format);
Roster parse_roster_csv(const std::string& contents, const std::string& source = {});
Roster parse_roster_json(const std::string& contents, const std::string& source = {});

// Guess the format from the file extension (.json, otherwise CSV).
RosterFormat roster_format_for(const std::string& path);

std::string roster_to_csv(const Roster& roster);

// Per category, the k most-reviewed skills with subcategories balanced:
// each of the m subcategories gets ceil(k/m) or floor(k/m) slots, the larger
// shares going to subcategories whose best skill has the most reviews.
// Slots a small subcategory cannot fill go to the best remaining skills of
// the category. Ties break by ascending id. Output is grouped by category
// (enum order), each group sorted by descending review_count.
Roster select_top(const Roster& roster, int k);

}  // namespace skillprobe
