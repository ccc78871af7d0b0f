#include "usim/model/sft_export.hpp"

#include "json.hpp"
#include "usim/common/error.hpp"

namespace usim {

namespace {

bool has_text(const std::optional<std::string>& v) { return v && !v->empty(); }

std::string reasoning_output(const std::string& thought) {
  return std::string(kReasoningPrefix) + thought;
}

}  // namespace

std::vector<SftRecord> export_sft_records(const Dataset& dataset, Stage stage,
                                          const PromptTemplate& tmpl) {
  if (tmpl.stage != stage) {
    throw Error("template stage does not match requested export stage");
  }
  std::vector<SftRecord> records;
  for (const Session& session : dataset.sessions) {
    const auto task_it = dataset.tasks.find(session.task_id);
    if (task_it == dataset.tasks.end()) {
      throw Error("unresolved task_id in SFT export: " + session.task_id);
    }
    const std::string& description = task_it->second.description;

    for (std::size_t r = 0; r < session.rounds.size(); ++r) {
      const QueryRound& round = session.rounds[r];
      const std::span<const QueryRound> prior(session.rounds.data(), r);
      const std::span<const QueryRound> through(session.rounds.data(), r + 1);

      PromptValues values;
      values.task_description = description;

      switch (stage) {
        case Stage::kQuery:
          if (!has_text(round.query_thought)) break;
          values.search_history = render_search_history(prior);
          records.push_back(
              {render_template(tmpl, values), reasoning_output(*round.query_thought), stage});
          break;
        case Stage::kClick:
          for (const ClickRecord& click : round.clicks) {
            if (!has_text(click.thought)) continue;
            values.search_history = render_search_history(prior);
            values.serp_listing = render_serp_listing(round.query, round.serp);
            records.push_back(
                {render_template(tmpl, values), reasoning_output(*click.thought), stage});
          }
          break;
        case Stage::kStop:
          if (!has_text(round.stop_thought)) break;
          values.search_history = render_search_history(through);
          records.push_back(
              {render_template(tmpl, values), reasoning_output(*round.stop_thought), stage});
          break;
      }
    }
  }
  return records;
}

void write_sft_records(std::ostream& out, const std::vector<SftRecord>& records) {
  for (const SftRecord& record : records) {
    out << nlohmann::ordered_json{{"input", record.input},
                                  {"output", record.output},
                                  {"stage", to_string(record.stage)}}
               .dump()
        << "\n";
  }
}

}  // namespace usim
