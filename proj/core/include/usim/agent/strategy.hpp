#pragma once

#include <optional>
#include <string>

namespace usim::agent {

// A "{thought}-{action}" pair: the provider that generates explicit thoughts
// ("N" = none) and the provider that executes actions.
struct StrategyConfig {
  std::optional<std::string> thought_source;
  std::string action_source;

  std::string name() const;
  // Splits at the first '-'; a leading "N" means no explicit thinking. The
  // thought id therefore cannot contain '-', the action id can.
  static StrategyConfig parse(const std::string& name);

  friend bool operator==(const StrategyConfig&, const StrategyConfig&) = default;
};

}  // namespace usim::agent
