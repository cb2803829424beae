#include "skillprobe/evaluator/evaluator.hpp"

#include <algorithm>

#include "skillprobe/core/error.hpp"
#include "skillprobe/core/text.hpp"

namespace skillprobe {

namespace {

bool failed_turn(const Session& s, std::size_t t) {
  return s.termination == Termination::connector_error && t + 1 == s.turns().size();
}

Evidence at(const Session& s, std::size_t t) {
  return Evidence{SessionRef{s.probe, s.run_index}, static_cast<int>(t)};
}

// Index of the open turn when it reached the skill.
std::optional<std::size_t> open_turn(const Session& s) {
  if (s.turns().empty() || failed_turn(s, 0)) return std::nullopt;
  const Turn& t = s.turns().front();
  if (t.silence()) return std::nullopt;
  const std::string& c = t.command_text();
  if (c != "open" && c.rfind("open ", 0) != 0) return std::nullopt;
  return 0;
}

// Index of the last delivered turn saying `command`.
std::optional<std::size_t> command_turn(const Session& s, const std::string& command) {
  std::optional<std::size_t> found;
  for (std::size_t t = 0; t < s.turns().size(); ++t) {
    if (!s.turns()[t].silence() && s.turns()[t].command_text() == command && !failed_turn(s, t)) found = t;
  }
  return found;
}

std::vector<const Session*> loops(const std::vector<Session>& sessions) {
  std::vector<const Session*> out;
  for (const auto& s : sessions) {
    if (is_open_help_stop(s.probe)) out.push_back(&s);
  }
  return out;
}

std::vector<const Session*> variety_loops(const std::vector<Session>& sessions) {
  std::vector<const Session*> out;
  for (const auto& s : sessions) {
    if (s.probe == Probe::variety_run || s.probe == Probe::basic_loop) out.push_back(&s);
  }
  return out;
}

GuidelineVerdict make(Guideline g, Verdict v, std::vector<Evidence> evidence, std::string note = {}) {
  GuidelineVerdict out;
  out.guideline = g;
  out.verdict = v;
  out.evidence = std::move(evidence);
  out.note = std::move(note);
  return out;
}

GuidelineVerdict inconclusive(Guideline g, std::string note) {
  return make(g, Verdict::inconclusive, {}, std::move(note));
}

std::vector<Evidence> open_evidence(const std::vector<const Session*>& sessions) {
  std::vector<Evidence> out;
  for (const Session* s : sessions) {
    if (open_turn(*s)) out.push_back(at(*s, 0));
  }
  return out;
}

// Pairwise comparison of normalized texts.
GuidelineVerdict compare_all(Guideline g, const std::vector<std::pair<std::string, Evidence>>& items,
                             const char* what) {
  if (items.size() < 2) {
    return inconclusive(g, std::string("fewer than two comparable ") + what);
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (items[i].first != items[j].first) {
        return make(g, Verdict::compliant, {items[i].second, items[j].second},
                    std::string(what) + " vary across runs");
      }
    }
  }
  std::vector<Evidence> evidence;
  for (const auto& item : items) evidence.push_back(item.second);
  return make(g, Verdict::non_compliant, evidence, std::string("identical ") + what + " in every run");
}

}  // namespace

std::optional<bool> detect_one_shot(const std::vector<Session>& sessions) {
  bool any = false;
  bool all_one_shot = true;
  for (const Session* s : loops(sessions)) {
    if (s->termination == Termination::connector_error) continue;
    any = true;
    all_one_shot = all_one_shot && s->termination == Termination::auto_exit && s->turns().size() == 1;
  }
  if (!any) return std::nullopt;
  return all_one_shot;
}

VerdictMap eval_basic(const std::vector<Session>& sessions, const MarkerLexicon& lexicon) {
  VerdictMap out;
  const auto basic = loops(sessions);
  const auto one_shot = detect_one_shot(sessions);

  {
    std::vector<Evidence> seen;
    std::vector<Evidence> missing;
    for (const Session* s : basic) {
      if (s->termination == Termination::connector_error) continue;
      const auto t = open_turn(*s);
      if (t && !s->turns()[*t].response_text().empty()) {
        seen.push_back(at(*s, *t));
      } else {
        missing.push_back(at(*s, t.value_or(0)));
      }
    }
    if (seen.empty() && missing.empty()) {
      out[Guideline::G1] = inconclusive(Guideline::G1, "no loop completed");
    } else if (!missing.empty()) {
      out[Guideline::G1] = make(Guideline::G1, Verdict::non_compliant, missing, "open drew no response");
    } else {
      out[Guideline::G1] = make(Guideline::G1, Verdict::compliant, seen);
    }
  }

  if (!one_shot) {
    out[Guideline::G2] = inconclusive(Guideline::G2, "no loop completed");
  } else if (*one_shot) {
    out[Guideline::G2] =
        make(Guideline::G2, Verdict::non_compliant, open_evidence(basic), "one-shot skill offers no help");
  } else {
    std::vector<Evidence> helps;
    std::optional<Evidence> good;
    for (const Session* s : basic) {
      const auto t = command_turn(*s, "help");
      if (!t) continue;
      helps.push_back(at(*s, *t));
      const Turn& turn = s->turns()[*t];
      if (!good && turn.response && !turn.response_text().empty() && lexicon.informative(turn.response->text())) {
        good = at(*s, *t);
      }
    }
    if (good) {
      out[Guideline::G2] = make(Guideline::G2, Verdict::compliant, {*good});
    } else if (helps.empty()) {
      out[Guideline::G2] = inconclusive(Guideline::G2, "help was never delivered");
    } else {
      out[Guideline::G2] = make(Guideline::G2, Verdict::non_compliant, helps, "help response not informative");
    }
  }

  {
    std::vector<Evidence> ended;
    std::vector<Evidence> stuck;
    bool goodbye = false;
    for (const auto& s : sessions) {
      if (s.termination == Termination::connector_error || s.turns().empty()) continue;
      if (const auto t = command_turn(s, "stop")) {
        if (s.termination == Termination::exited_by_stop) {
          ended.push_back(at(s, *t));
          goodbye = goodbye || !s.turns()[*t].response_text().empty();
        } else {
          stuck.push_back(at(s, *t));
        }
      } else if (s.termination == Termination::auto_exit) {
        ended.push_back(at(s, s.turns().size() - 1));
      }
    }
    GuidelineVerdict v;
    if (!stuck.empty()) {
      v = make(Guideline::G3, Verdict::non_compliant, stuck, "stop did not end the session");
    } else if (!ended.empty()) {
      v = make(Guideline::G3, Verdict::compliant, ended);
    } else {
      v = inconclusive(Guideline::G3, "no session reached its end");
    }
    v.facets["goodbye_present"] = goodbye;
    out[Guideline::G3] = v;
  }
  return out;
}

VerdictMap eval_variety(const std::vector<Session>& sessions) {
  VerdictMap out;
  const auto runs = variety_loops(sessions);

  std::vector<std::pair<std::string, Evidence>> openings;
  for (const Session* s : runs) {
    if (const auto t = open_turn(*s)) openings.emplace_back(s->turns()[*t].response_text(), at(*s, *t));
  }
  out[Guideline::G4] = compare_all(Guideline::G4, openings, "opening prompts");

  if (detect_one_shot(sessions).value_or(false)) {
    out[Guideline::G5] = make(Guideline::G5, Verdict::non_compliant, open_evidence(runs),
                              "one-shot skill never says goodbye");
  } else {
    std::vector<std::pair<std::string, Evidence>> goodbyes;
    for (const Session* s : runs) {
      if (const auto t = command_turn(*s, "stop")) {
        goodbyes.emplace_back(s->turns()[*t].response_text(), at(*s, *t));
      }
    }
    out[Guideline::G5] = compare_all(Guideline::G5, goodbyes, "stop responses");
  }
  return out;
}

VerdictMap eval_error_handling(const Session& silence, std::string_view opening_prompt,
                               const MarkerLexicon& lexicon, bool one_shot) {
  VerdictMap out;
  if (one_shot) {
    out[Guideline::G6] = make(Guideline::G6, Verdict::not_applicable,
                              silence.turns().empty() ? std::vector<Evidence>{} : std::vector{at(silence, 0)},
                              "one-shot skill");
    if (silence.turns().empty()) {
      out[Guideline::G7] = inconclusive(Guideline::G7, "silence probe recorded nothing");
    } else {
      out[Guideline::G7] = make(Guideline::G7, Verdict::non_compliant, {at(silence, 0)},
                                "one-shot skill cannot re-prompt");
    }
    return out;
  }

  std::vector<std::size_t> silences;
  std::vector<std::size_t> reprompts;
  const auto& turns = silence.turns();
  for (std::size_t t = 0; t < turns.size(); ++t) {
    if (!turns[t].silence() || failed_turn(silence, t)) continue;
    silences.push_back(t);
    const bool closing_words = silence.termination == Termination::auto_exit && t + 1 == turns.size();
    if (!turns[t].response_text().empty() && !closing_words) reprompts.push_back(t);
  }

  if (reprompts.empty()) {
    if (silence.termination == Termination::connector_error || turns.empty()) {
      out[Guideline::G6] = inconclusive(Guideline::G6, "silence probe failed in the connector");
      out[Guideline::G7] = inconclusive(Guideline::G7, "silence probe failed in the connector");
      return out;
    }
    std::vector<Evidence> evidence;
    for (auto t : silences) evidence.push_back(at(silence, t));
    if (evidence.empty()) evidence.push_back(at(silence, 0));
    out[Guideline::G6] = make(Guideline::G6, Verdict::non_compliant, evidence, "no re-prompt after silence");
    out[Guideline::G7] = make(Guideline::G7, Verdict::non_compliant, evidence, "no re-prompt to reword");
    return out;
  }

  std::vector<Evidence> evidence;
  for (auto t : reprompts) evidence.push_back(at(silence, t));
  out[Guideline::G6] = make(Guideline::G6, Verdict::compliant, evidence);

  std::string opening;
  if (const auto t = open_turn(silence)) opening = turns[*t].response_text();
  if (opening.empty()) opening = normalize(opening_prompt);
  const std::size_t opening_words = word_count(opening);

  for (std::size_t k = 0; k < reprompts.size(); ++k) {
    const Turn& turn = turns[reprompts[k]];
    const std::string& text = turn.response_text();
    if (text == opening) continue;
    bool novel = k > 0;
    for (std::size_t p = 0; p < k; ++p) novel = novel && turns[reprompts[p]].response_text() != text;
    const bool instructive = lexicon.has_instruction_marker(text);
    const bool longer = word_count(text) > opening_words;
    if (novel || instructive || longer) {
      out[Guideline::G7] = make(Guideline::G7, Verdict::compliant, {at(silence, reprompts[k])});
      return out;
    }
  }
  out[Guideline::G7] = make(Guideline::G7, Verdict::non_compliant, evidence, "re-prompt repeats the opening prompt");
  return out;
}

GuidelineVerdict eval_memory(const Session& first_basic, const Session& memory_session,
                             const MarkerLexicon& lexicon) {
  const auto a = open_turn(first_basic);
  const auto b = open_turn(memory_session);
  if (!a || !b) return inconclusive(Guideline::G8, "missing opening prompt");
  const std::string& first = first_basic.turns()[*a].response_text();
  const std::string& later = memory_session.turns()[*b].response_text();
  std::vector<Evidence> evidence{at(first_basic, *a), at(memory_session, *b)};
  if (first == later) {
    return make(Guideline::G8, Verdict::non_compliant, evidence, "opening prompt unchanged");
  }
  for (const auto& marker : lexicon.memory_markers) {
    if (contains_phrase(later, marker) && !contains_phrase(first, marker)) {
      return make(Guideline::G8, Verdict::compliant, evidence, "memory marker: " + marker);
    }
  }
  GuidelineVerdict v = inconclusive(Guideline::G8, "opening prompt changed without a memory marker");
  v.evidence = evidence;
  return v;
}

SkillEvaluation evaluate_skill(const std::vector<Session>& sessions, const MarkerLexicon& lexicon) {
  if (sessions.empty()) throw PreconditionError("evaluate_skill needs at least one session");
  SkillEvaluation eval;
  eval.skill_id = sessions.front().skill_id;

  const bool all_failed = std::all_of(sessions.begin(), sessions.end(), [](const Session& s) {
    return s.termination == Termination::connector_error;
  });
  if (all_failed) {
    eval.excluded_reason = "connector_error: every session failed";
    for (Guideline g : kAllGuidelines) eval.verdicts[g] = inconclusive(g, "every session failed in the connector");
    eval.verdicts[Guideline::G3].facets["goodbye_present"] = false;
    return eval;
  }

  eval.one_shot = detect_one_shot(sessions).value_or(false);
  eval.verdicts = eval_basic(sessions, lexicon);
  eval.verdicts.merge(eval_variety(sessions));

  const Session* first = nullptr;
  const Session* silence = nullptr;
  const Session* memory = nullptr;
  for (const auto& s : sessions) {
    if (!first && (s.probe == Probe::variety_run || s.probe == Probe::basic_loop)) first = &s;
    if (!silence && s.probe == Probe::silence_probe) silence = &s;
    if (!memory && s.probe == Probe::memory_check) memory = &s;
  }

  if (silence) {
    std::string opening;
    if (first) {
      if (const auto t = open_turn(*first)) opening = first->turns()[*t].response_text();
    }
    eval.verdicts.merge(eval_error_handling(*silence, opening, lexicon, eval.one_shot));
  } else {
    eval.verdicts[Guideline::G6] = inconclusive(Guideline::G6, "no silence probe");
    eval.verdicts[Guideline::G7] = inconclusive(Guideline::G7, "no silence probe");
  }

  if (first && memory) {
    eval.verdicts[Guideline::G8] = eval_memory(*first, *memory, lexicon);
  } else {
    eval.verdicts[Guideline::G8] = inconclusive(Guideline::G8, "no memory probe");
  }
  return eval;
}

std::vector<SkillEvaluation> evaluate_corpus(const std::vector<Session>& corpus, const MarkerLexicon& lexicon) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<Session>> by_skill;
  for (const auto& s : corpus) {
    auto [it, inserted] = by_skill.try_emplace(s.skill_id);
    if (inserted) order.push_back(s.skill_id);
    it->second.push_back(s);
  }
  std::vector<SkillEvaluation> out;
  out.reserve(order.size());
  for (const auto& id : order) out.push_back(evaluate_skill(by_skill.at(id), lexicon));
  return out;
}

void to_json(json& j, const SkillEvaluation& e) {
  json verdicts = json::array();
  for (Guideline g : kAllGuidelines) {
    if (auto it = e.verdicts.find(g); it != e.verdicts.end()) verdicts.push_back(it->second);
  }
  j = json{{"skill_id", e.skill_id},
           {"one_shot", e.one_shot},
           {"excluded_reason", e.excluded_reason ? json(*e.excluded_reason) : json(nullptr)},
           {"verdicts", verdicts}};
}

void from_json(const json& j, SkillEvaluation& e) {
  e = SkillEvaluation{};
  e.skill_id = j.at("skill_id").get<std::string>();
  e.one_shot = j.value("one_shot", false);
  if (j.contains("excluded_reason") && !j.at("excluded_reason").is_null()) {
    e.excluded_reason = j.at("excluded_reason").get<std::string>();
  }
  for (const auto& item : j.at("verdicts")) {
    auto v = item.get<GuidelineVerdict>();
    if (!e.verdicts.emplace(v.guideline, v).second) {
      throw ValidationError("verdicts", "duplicate " + std::string(to_string(v.guideline)) + " for " + e.skill_id);
    }
  }
  for (Guideline g : kAllGuidelines) {
    if (!e.verdicts.count(g)) {
      throw ValidationError("verdicts", "missing " + std::string(to_string(g)) + " for " + e.skill_id);
    }
  }
}

json evaluations_to_json(const std::vector<SkillEvaluation>& evaluations) {
  return json{{"evaluations", evaluations}};
}

std::vector<SkillEvaluation> evaluations_from_json(const json& j) {
  const json& items = j.is_object() && j.contains("evaluations") ? j.at("evaluations") : j;
  if (!items.is_array()) throw ParseError("expected an array of evaluations");
  std::vector<SkillEvaluation> out;
  std::size_t row = 0;
  for (const auto& item : items) {
    ++row;
    try {
      out.push_back(item.get<SkillEvaluation>());
    } catch (const json::exception& e) {
      throw ParseError(std::string("evaluation: ") + e.what(), row);
    }
  }
  return out;
}

std::vector<SkillEvaluation> load_evaluations(const std::string& path) {
  return evaluations_from_json(read_json_file(path));
}

}  // namespace skillprobe
