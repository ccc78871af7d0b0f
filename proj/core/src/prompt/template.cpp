#include "usim/prompt/template.hpp"

#include <array>
#include <sstream>

#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"

namespace usim {

namespace {

constexpr std::array<std::string_view, 5> kKnownPlaceholders = {
    "task_description", "search_history", "serp_listing", "thought_section",
    "output_format"};

bool is_known_placeholder(std::string_view name) {
  for (const auto known : kKnownPlaceholders) {
    if (name == known) return true;
  }
  return false;
}

}  // namespace

PromptTemplate PromptTemplate::parse(Stage stage, std::string kind, std::string text) {
  PromptTemplate tmpl{stage, std::move(kind), std::move(text)};
  const auto require = [&](std::string_view name) {
    const std::string token = "{" + std::string(name) + "}";
    if (tmpl.text.find(token) == std::string::npos) {
      throw Error("template for stage '" + to_string(stage) + "' kind '" + tmpl.kind +
                  "' is missing placeholder " + token);
    }
  };
  require("task_description");
  require("search_history");
  if (stage == Stage::kClick) require("serp_listing");
  if (tmpl.kind == "action") require("thought_section");
  return tmpl;
}

PromptTemplate PromptTemplate::load_file(Stage stage, const std::string& kind,
                                         const std::string& path) {
  return parse(stage, kind, read_file(path));
}

std::string render_template(const PromptTemplate& tmpl, const PromptValues& values) {
  const auto lookup = [&](std::string_view name) -> std::string {
    if (name == "task_description") return values.task_description;
    if (name == "search_history") return values.search_history;
    if (name == "serp_listing") return values.serp_listing;
    if (name == "thought_section") {
      return values.thought ? "Reasoning so far: " + *values.thought + "\n" : std::string{};
    }
    const auto it = values.extra.find(std::string(name));
    if (it != values.extra.end()) return it->second;
    throw Error("no value for placeholder {" + std::string(name) + "}");
  };

  std::string out;
  out.reserve(tmpl.text.size());
  std::size_t pos = 0;
  while (pos < tmpl.text.size()) {
    const std::size_t open = tmpl.text.find('{', pos);
    if (open == std::string::npos) {
      out.append(tmpl.text, pos, std::string::npos);
      break;
    }
    out.append(tmpl.text, pos, open - pos);
    const std::size_t close = tmpl.text.find('}', open);
    if (close == std::string::npos) {
      out.append(tmpl.text, open, std::string::npos);
      break;
    }
    const std::string_view name =
        std::string_view(tmpl.text).substr(open + 1, close - open - 1);
    if (is_known_placeholder(name) || values.extra.count(std::string(name)) > 0) {
      out += lookup(name);
      pos = close + 1;
    } else {
      // Not a placeholder; keep the brace verbatim.
      out.push_back('{');
      pos = open + 1;
    }
  }
  return out;
}

std::string render_search_history(std::span<const QueryRound> prior_rounds) {
  if (prior_rounds.empty()) return std::string(kEmptyHistorySentinel);
  std::ostringstream out;
  for (std::size_t i = 0; i < prior_rounds.size(); ++i) {
    const QueryRound& round = prior_rounds[i];
    if (i > 0) out << "\n";
    out << (i + 1) << ". " << round.query << " — clicked titles: [";
    bool first = true;
    for (const ClickRecord& click : round.clicks) {
      const int idx = click.rank - 1;
      if (idx < 0 || idx >= static_cast<int>(round.serp.size())) continue;
      if (!first) out << ", ";
      out << round.serp[static_cast<std::size_t>(idx)].title;
      first = false;
    }
    out << "]";
  }
  return out.str();
}

std::string render_serp_listing(const std::string& query, std::span<const SerpItem> serp) {
  std::ostringstream out;
  out << "Current query: " << query;
  for (const SerpItem& item : serp) {
    out << "\n" << item.rank << ". " << item.title;
    if (!item.snippet.empty()) out << "\n   " << item.snippet;
  }
  return out.str();
}

bool contains_unexpanded_placeholder(std::string_view text) {
  std::size_t pos = 0;
  while ((pos = text.find('{', pos)) != std::string_view::npos) {
    const std::size_t close = text.find('}', pos);
    if (close == std::string_view::npos) return false;
    if (is_known_placeholder(text.substr(pos + 1, close - pos - 1))) return true;
    ++pos;
  }
  return false;
}

TemplateSet TemplateSet::load_dir(const std::string& dir) {
  const auto path = [&](const char* name) { return dir + "/" + name; };
  TemplateSet set;
  set.query_thought = PromptTemplate::load_file(Stage::kQuery, "thought", path("query_thought.txt"));
  set.query_action = PromptTemplate::load_file(Stage::kQuery, "action", path("query_action.txt"));
  set.click_thought = PromptTemplate::load_file(Stage::kClick, "thought", path("click_thought.txt"));
  set.click_action = PromptTemplate::load_file(Stage::kClick, "action", path("click_action.txt"));
  set.stop_thought = PromptTemplate::load_file(Stage::kStop, "thought", path("stop_thought.txt"));
  set.stop_action = PromptTemplate::load_file(Stage::kStop, "action", path("stop_action.txt"));
  return set;
}

const PromptTemplate& TemplateSet::get(Stage stage, std::string_view kind) const {
  const bool thought = (kind == "thought");
  switch (stage) {
    case Stage::kQuery: return thought ? query_thought : query_action;
    case Stage::kClick: return thought ? click_thought : click_action;
    case Stage::kStop: return thought ? stop_thought : stop_action;
  }
  return query_thought;
}

}  // namespace usim
