#include "skillprobe/ingestion/roster.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/serialization.hpp"

namespace skillprobe {

namespace {

const std::vector<std::string> kColumns = {"id",         "display_name", "invocation_name",
                                           "category",   "subcategory",  "review_count",
                                           "avg_rating", "excluded_reason"};

// RFC 4180 records. Quoted fields may contain commas, quotes ("") and
// newlines. Returns records paired with the 1-based line they start on.
std::vector<std::pair<std::size_t, std::vector<std::string>>> split_csv(const std::string& text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool record_has_content = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_record = [&] {
    if (record_has_content || !fields.empty()) {
      fields.push_back(std::move(field));
      records.emplace_back(record_line, std::move(fields));
    }
    fields.clear();
    field.clear();
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) throw ParseError("unexpected quote inside unquoted field", line);
        in_quotes = true;
        record_has_content = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        record_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        field.push_back(c);
        record_has_content = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", record_line);
  end_record();
  return records;
}

std::optional<std::string> optional_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return cell;
}

std::int64_t parse_int_cell(const std::string& cell, const char* field, std::size_t row) {
  std::int64_t value = 0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(std::string(field) + ": not an integer '" + cell + "'", row);
  }
  return value;
}

double parse_double_cell(const std::string& cell, const char* field, std::size_t row) {
  std::istringstream in(cell);
  in.imbue(std::locale::classic());
  double value = 0;
  in >> value;
  if (!in || !in.eof()) {
    throw ParseError(std::string(field) + ": not a number '" + cell + "'", row);
  }
  return value;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_rating(double r) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << r;
  return out.str();
}

bool by_reviews_then_id(const SkillDescriptor& a, const SkillDescriptor& b) {
  if (a.review_count != b.review_count) return a.review_count > b.review_count;
  return a.id < b.id;
}

}  // namespace

void Roster::validate() const {
  std::set<std::string> ids;
  for (const auto& s : skills) {
    s.validate();
    if (!ids.insert(s.id).second) throw ValidationError("id", "duplicate skill id '" + s.id + "'");
  }
}

RosterFormat roster_format_for(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".json") return RosterFormat::json;
  return RosterFormat::csv;
}

Roster load_roster(const std::string& path, RosterFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open roster " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return format == RosterFormat::csv ? parse_roster_csv(buf.str(), path)
                                     : parse_roster_json(buf.str(), path);
}

Roster parse_roster_csv(const std::string& contents, const std::string& source) {
  Roster roster;
  roster.source = source;
  const auto records = split_csv(contents);
  if (records.empty()) return roster;

  const auto& header = records.front().second;
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (const char* required : {"id", "invocation_name", "category", "review_count"}) {
    if (!column.count(required)) {
      throw ParseError(std::string("missing column '") + required + "'", records.front().first);
    }
  }

  std::set<std::string> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [row, cells] = records[r];
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(cells.size()),
                       row);
    }
    auto cell = [&](const std::string& name) -> std::string {
      auto it = column.find(name);
      return it == column.end() ? std::string{} : cells[it->second];
    };

    SkillDescriptor s;
    s.id = cell("id");
    s.display_name = cell("display_name");
    s.invocation_name = cell("invocation_name");
    try {
      s.category = parse_category(cell("category"));
    } catch (const ValidationError& e) {
      throw ValidationError("category", "row " + std::to_string(row) + ": " + e.what());
    }
    s.subcategory = optional_cell(cell("subcategory"));
    s.review_count = parse_int_cell(cell("review_count"), "review_count", row);
    if (auto rating = cell("avg_rating"); !rating.empty()) {
      s.avg_rating = parse_double_cell(rating, "avg_rating", row);
    }
    s.excluded_reason = optional_cell(cell("excluded_reason"));
    try {
      s.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), "row " + std::to_string(row) + ": " + e.what());
    }
    if (!ids.insert(s.id).second) {
      throw ValidationError("id", "row " + std::to_string(row) + ": duplicate skill id '" + s.id +
                                      "'");
    }
    roster.skills.push_back(std::move(s));
  }
  return roster;
}

Roster parse_roster_json(const std::string& contents, const std::string& source) {
  Roster roster;
  roster.source = source;
  if (contents.find_first_not_of(" \t\r\n") == std::string::npos) return roster;
  json doc;
  try {
    doc = json::parse(contents);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  if (doc.is_object() && doc.contains("skills")) doc = doc.at("skills");
  if (!doc.is_array()) throw ParseError("roster JSON must be an array of skills");
  std::size_t row = 0;
  for (const auto& item : doc) {
    ++row;
    try {
      roster.skills.push_back(item.get<SkillDescriptor>());
    } catch (const json::exception& e) {
      throw ParseError(e.what(), row);
    } catch (const ValidationError& e) {
      throw ValidationError(e.field(), "row " + std::to_string(row) + ": " + e.what());
    }
  }
  roster.validate();
  return roster;
}

std::string roster_to_csv(const Roster& roster) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const auto& s : roster.skills) {
    out << csv_escape(s.id) << ',' << csv_escape(s.display_name) << ','
        << csv_escape(s.invocation_name) << ',' << to_string(s.category) << ','
        << csv_escape(s.subcategory.value_or("")) << ',' << s.review_count << ','
        << (s.avg_rating ? format_rating(*s.avg_rating) : "") << ','
        << csv_escape(s.excluded_reason.value_or("")) << '\n';
  }
  return out.str();
}

Roster select_top(const Roster& roster, int k) {
  if (k < 1) throw PreconditionError("select_top: k must be >= 1");
  const auto slots_total = static_cast<std::size_t>(k);

  Roster out;
  out.source = roster.source;
  for (Category category : kAllCategories) {
    std::map<std::string, std::vector<SkillDescriptor>> by_sub;
    std::size_t members = 0;
    for (const auto& s : roster.skills) {
      if (s.category != category) continue;
      by_sub[s.subcategory.value_or("")].push_back(s);
      ++members;
    }
    if (members == 0) continue;
    for (auto& [_, group] : by_sub) std::sort(group.begin(), group.end(), by_reviews_then_id);

    std::vector<SkillDescriptor> chosen;
    if (members <= slots_total) {
      for (auto& [_, group] : by_sub) chosen.insert(chosen.end(), group.begin(), group.end());
    } else {
      // Larger shares go to the subcategories with the strongest top skill.
      std::vector<const std::vector<SkillDescriptor>*> order;
      for (auto& [_, group] : by_sub) order.push_back(&group);
      std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
        return by_reviews_then_id(a->front(), b->front());
      });

      const std::size_t m = order.size();
      std::vector<SkillDescriptor> leftovers;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t share = slots_total / m + (i < slots_total % m ? 1 : 0);
        const auto& group = *order[i];
        const std::size_t take = std::min(share, group.size());
        chosen.insert(chosen.end(), group.begin(), group.begin() + static_cast<long>(take));
        leftovers.insert(leftovers.end(), group.begin() + static_cast<long>(take), group.end());
      }
      std::sort(leftovers.begin(), leftovers.end(), by_reviews_then_id);
      for (const auto& s : leftovers) {
        if (chosen.size() >= slots_total) break;
        chosen.push_back(s);
      }
    }
    std::sort(chosen.begin(), chosen.end(), by_reviews_then_id);
    out.skills.insert(out.skills.end(), chosen.begin(), chosen.end());
  }
  return out;
}

}  // namespace skillprobe
