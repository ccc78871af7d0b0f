#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace usim::click {

// Dense slot allocation for (query_key, doc_key) parameters.
class PairTable {
 public:
  int intern(const std::string& query_key, const std::string& doc_key);
  std::optional<int> find(const std::string& query_key, const std::string& doc_key) const;
  const std::pair<std::string, std::string>& key(int slot) const { return keys_[static_cast<std::size_t>(slot)]; }
  std::size_t size() const { return keys_.size(); }

 private:
  static std::string joined(const std::string& q, const std::string& d);

  std::unordered_map<std::string, int> index_;
  std::vector<std::pair<std::string, std::string>> keys_;
};

// Click probability at rank r is gamma[r] * alpha(q, d); gamma for rank 1 is
// pinned to 1 so the remaining parameters are identified.
struct PbmParams {
  std::vector<double> gamma;  // by rank, 0-based; gamma[0] == 1
  PairTable pairs;
  std::vector<double> alpha;  // aligned with pairs
  double alpha_default = 0.5;
};

// Examination depends on the rank and on the rank of the most recent click
// in the same impression (0 when there is none).
struct UbmParams {
  // gamma[r][rp]: rank r (0-based), previous click rank rp in 0..r.
  std::vector<std::vector<double>> gamma;
  PairTable pairs;
  std::vector<double> alpha;
  double alpha_default = 0.5;
};

// Cascade with continuation-after-click probability lambda[r].
struct DcmParams {
  std::vector<double> lambda;  // by rank, 0-based
  PairTable pairs;
  std::vector<double> alpha;
  double alpha_default = 0.5;
  double lambda_default = 0.5;
};

// Examination chain with per-document attractiveness and satisfaction and a
// scalar continuation probability.
struct DbnParams {
  PairTable pairs;
  std::vector<double> attract;
  std::vector<double> satisfy;
  double attract_default = 0.5;
  double satisfy_default = 0.5;
  double gamma_continue = 1.0;
};

using ClickModelParams = std::variant<PbmParams, UbmParams, DcmParams, DbnParams>;

std::string model_name(const ClickModelParams& params);

struct TrainReport {
  int iterations = 0;
  // log_likelihoods[i] is the total data log-likelihood of the parameters
  // entering iteration i; one final entry is appended for the fitted
  // parameters. Non-decreasing within 1e-9 per EM step.
  std::vector<double> log_likelihoods;
  bool converged = false;
  double wall_seconds = 0.0;
  std::vector<std::string> notes;  // e.g. unobserved UBM contexts
};

struct TrainConfig {
  int max_iters = 50;
  double tol = 1e-6;
  int jobs = 1;
};

inline constexpr double kProbFloor = 1e-6;
inline constexpr double kProbCeil = 1.0 - 1e-6;

double clamp_prob(double p);

}  // namespace usim::click
