#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "usim/model/types.hpp"

namespace usim {

// One broken invariant: where it is and what is wrong with it.
struct Violation {
  std::string path;
  std::string message;
};

std::vector<Violation> validate_session(const Session& session,
                                        const RatingScale& scale = {});

// Dataset-wide checks: per-session invariants, session_id uniqueness, and
// task_id resolution against `dataset.tasks`.
std::vector<Violation> validate_dataset(const Dataset& dataset,
                                        const RatingScale& scale = {});

// Parses the canonical line-delimited session log (one session per line).
// When `tasks` is given, sessions must resolve against it; otherwise stub
// tasks are synthesized from the referenced task ids so the returned Dataset
// is self-consistent. Throws ParseError / ValidationError.
Dataset parse_session_log(std::istream& in,
                          const std::map<std::string, SearchTask>* tasks = nullptr,
                          const std::string& name = "dataset",
                          const RatingScale& scale = {});

// Canonical JSON for one session / one task (stable field order).
nlohmann::ordered_json session_to_json(const Session& session);
Session session_from_json(const nlohmann::json& record);
nlohmann::ordered_json task_to_json(const SearchTask& task);
SearchTask task_from_json(const nlohmann::json& record);

void write_session_log(std::ostream& out, const Dataset& dataset);
std::string serialize_session_log(const Dataset& dataset);

std::map<std::string, SearchTask> parse_task_file(std::istream& in);
void write_task_file(std::ostream& out, const std::map<std::string, SearchTask>& tasks);

}  // namespace usim
