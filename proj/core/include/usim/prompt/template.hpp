#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "usim/model/types.hpp"

namespace usim {

inline constexpr std::string_view kReasoningPrefix = "Reasoning: ";
inline constexpr std::string_view kEmptyHistorySentinel = "(no searches yet)";

// Prompt text with {placeholder} slots, loaded from an editable file.
// Query-stage templates keep the section order Role / Goal / Search History /
// Task / Output Format.
struct PromptTemplate {
  Stage stage = Stage::kQuery;
  std::string kind;  // "thought" or "action"
  std::string text;

  // Validates that the placeholders required for (stage, kind) are present.
  static PromptTemplate parse(Stage stage, std::string kind, std::string text);
  static PromptTemplate load_file(Stage stage, const std::string& kind,
                                  const std::string& path);
};

// Values substituted into a template. `thought`, when present, expands
// {thought_section} into a "Reasoning so far:" line ahead of the Task line;
// otherwise the section renders empty.
struct PromptValues {
  std::string task_description;
  std::string search_history;
  std::string serp_listing;
  std::optional<std::string> thought;
  std::map<std::string, std::string> extra;  // e.g. output_format overrides
};

// Substitutes every placeholder; byte-stable for fixed inputs. Throws on a
// placeholder with no value.
std::string render_template(const PromptTemplate& tmpl, const PromptValues& values);

// Numbered transcript of completed rounds, most recent last:
//   "1. <query> — clicked titles: [t1, t2]"
// Empty history renders the sentinel.
std::string render_search_history(std::span<const QueryRound> prior_rounds);

// "Current query: <q>" followed by one "rank. title" + indented snippet per item.
std::string render_serp_listing(const std::string& query, std::span<const SerpItem> serp);

// True if any known placeholder is left unexpanded in `text`.
bool contains_unexpanded_placeholder(std::string_view text);

// All six stage/kind templates, loaded from a directory of
// "<stage>_<kind>.txt" files.
struct TemplateSet {
  PromptTemplate query_thought, query_action;
  PromptTemplate click_thought, click_action;
  PromptTemplate stop_thought, stop_action;

  static TemplateSet load_dir(const std::string& dir);
  const PromptTemplate& get(Stage stage, std::string_view kind) const;
};

}  // namespace usim
