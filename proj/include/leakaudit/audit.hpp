#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "leakaudit/adversary.hpp"
#include "leakaudit/analytic.hpp"
#include "leakaudit/dataset.hpp"
#include "leakaudit/synthdata.hpp"

namespace leakaudit::audit {

enum class Verdict { leakage_possible, leakage_bounded };

inline const char* to_string(Verdict v) {
  return v == Verdict::leakage_bounded ? "leakage-bounded" : "leakage-possible";
}

// Minimum certified lower bound regarded as "safe".  This is user policy,
// not part of the theorems.
struct VerdictPolicy {
  double threshold = 0.95;

  static VerdictPolicy default_for(Loss loss);
};

struct AuditReport {
  Setting setting = Setting::representation;
  Loss loss = Loss::squared;
  double delta = 0.01;
  std::int64_t n = 0;
  std::int64_t k = 0;          // representation setting only
  double c_eta = 0.0;          // representation setting only
  double diam = 0.0;           // representation setting only
  int d = 0;                   // classification setting only
  double empirical_loss = 0.0;
  std::map<std::string, double> epsilon_terms;
  double certified_lower_bound = 0.0;
  bool floored = false;  // true when empirical - epsilon dipped below zero
  std::optional<double> reference_true_loss;
  Verdict verdict = Verdict::leakage_possible;
  double policy_threshold = 0.0;
  std::map<std::string, std::string> metadata;

  double epsilon_total() const;
  nlohmann::json to_json() const;
};

// Theorem-1-style certificate: trains the two-layer adversary, subtracts the
// representation bound, floors at zero.  Squared loss only.
AuditReport certify_representation(const Dataset& ds, int k, const adversary::TrainConfig& cfg,
                                   double c_eta, double diam, double delta,
                                   const VerdictPolicy& policy);

// Classification-setting certificate using the closed-form empirical
// minimizer and the Theorem-2/Theorem-3 bounds.
AuditReport certify_classification(const Dataset& ds, int d, double delta, Loss loss,
                                   const VerdictPolicy& policy);

// Minimal true loss of a synthetic scenario, for validation displays.
double reference_truth(const synthdata::Scenario& scn, const analytic::QuadratureSpec& spec = {});

}  // namespace leakaudit::audit
