#include "usim/agent/strategy.hpp"

#include "usim/common/error.hpp"

namespace usim::agent {

std::string StrategyConfig::name() const {
  return (thought_source ? *thought_source : std::string("N")) + "-" + action_source;
}

StrategyConfig StrategyConfig::parse(const std::string& name) {
  const std::size_t dash = name.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= name.size()) {
    throw Error("strategy must look like '{thought}-{action}', got: " + name);
  }
  const std::string thought = name.substr(0, dash);
  StrategyConfig config;
  config.action_source = name.substr(dash + 1);
  if (thought != "N") config.thought_source = thought;
  if (config.thought_source && *config.thought_source == "N") config.thought_source.reset();
  return config;
}

}  // namespace usim::agent
