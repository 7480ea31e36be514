#include "leakaudit/audit.hpp"

#include <cmath>

#include "leakaudit/finitealpha.hpp"

namespace leakaudit::audit {

VerdictPolicy VerdictPolicy::default_for(Loss loss) {
  if (loss == Loss::squared) return VerdictPolicy{0.95};
  return VerdictPolicy{0.95 * std::log(2.0)};
}

double AuditReport::epsilon_total() const {
  double total = 0.0;
  for (const auto& [name, value] : epsilon_terms) total += value;
  return total;
}

nlohmann::json AuditReport::to_json() const {
  nlohmann::json doc;
  doc["setting"] = leakaudit::to_string(setting);
  doc["loss"] = leakaudit::to_string(loss);
  doc["delta"] = delta;
  doc["n"] = n;
  if (setting == Setting::representation) {
    doc["k"] = k;
    doc["c_eta"] = c_eta;
    doc["diam"] = diam;
  } else {
    doc["d"] = d;
  }
  doc["empirical_loss"] = empirical_loss;
  doc["epsilon_terms"] = epsilon_terms;
  doc["certified_lower_bound"] = certified_lower_bound;
  doc["floored"] = floored;
  if (reference_true_loss) doc["reference_true_loss"] = *reference_true_loss;
  doc["verdict"] = leakaudit::audit::to_string(verdict);
  doc["policy_threshold"] = policy_threshold;
  doc["policy_note"] = "threshold is audit policy, not a theorem constant";
  doc["metadata"] = metadata;
  return doc;
}

namespace {

void finalize(AuditReport& report, const VerdictPolicy& policy) {
  const double lower = report.empirical_loss - report.epsilon_total();
  if (lower < 0.0) {
    report.certified_lower_bound = 0.0;
    report.floored = true;
  } else {
    report.certified_lower_bound = lower;
    report.floored = false;
  }
  report.policy_threshold = policy.threshold;
  report.verdict = report.certified_lower_bound >= policy.threshold ? Verdict::leakage_bounded
                                                                    : Verdict::leakage_possible;
}

}  // namespace

AuditReport certify_representation(const Dataset& ds, int k, const adversary::TrainConfig& cfg,
                                   double c_eta, double diam, double delta,
                                   const VerdictPolicy& policy) {
  ds.validate();
  if (ds.setting != Setting::representation) {
    throw std::invalid_argument("certify_representation: representation-setting dataset required");
  }
  if (cfg.loss != Loss::squared) {
    throw std::invalid_argument(
        "certify_representation: the representation bound covers the squared loss only");
  }

  analytic::BoundIngredients ingredients;
  ingredients.delta = delta;
  ingredients.n = static_cast<std::int64_t>(ds.size());
  ingredients.k = k;
  ingredients.c_eta = c_eta;
  ingredients.diam = diam;
  ingredients.validate();

  const adversary::ErmResult erm = adversary::train_erm(ds, k, cfg);

  AuditReport report;
  report.setting = Setting::representation;
  report.loss = Loss::squared;
  report.delta = delta;
  report.n = ingredients.n;
  report.k = k;
  report.c_eta = c_eta;
  report.diam = diam;
  report.empirical_loss = erm.best_empirical_loss;

  const double dc = diam * c_eta;
  const double nn = static_cast<double>(ingredients.n);
  const double kk = static_cast<double>(k);
  report.epsilon_terms["generalization"] = (2.0 + dc) * (2.0 + dc) * std::sqrt(std::log(1.0 / delta) / (2.0 * nn));
  report.epsilon_terms["approximation_1_over_k"] = dc * dc / kk;
  report.epsilon_terms["approximation_1_over_sqrt_k"] = 4.0 * dc / std::sqrt(kk);

  report.metadata["scenario"] = ds.tag;
  report.metadata["train_seed"] = std::to_string(cfg.seed);
  report.metadata["restarts"] = std::to_string(cfg.restarts);
  report.metadata["epochs"] = std::to_string(cfg.epochs);
  report.metadata["best_restart"] = std::to_string(erm.best_restart_index);
  report.metadata["caveat"] =
      "the representation bound assumes shared compact support and a smooth density ratio; "
      "these hypotheses are not verifiable from data";

  finalize(report, policy);
  return report;
}

AuditReport certify_classification(const Dataset& ds, int d, double delta, Loss loss,
                                   const VerdictPolicy& policy) {
  Dataset tagged = ds;
  tagged.setting = Setting::classification;
  tagged.d = d;
  tagged.validate();

  const finitealpha::JointHistogram hist = finitealpha::histogram(tagged);
  const finitealpha::ClassificationErm erm = finitealpha::min_empirical_loss_classification(hist, loss);

  AuditReport report;
  report.setting = Setting::classification;
  report.loss = loss;
  report.delta = delta;
  report.n = hist.n;
  report.d = d;
  report.empirical_loss = erm.value;
  if (loss == Loss::squared) {
    report.epsilon_terms["generalization"] = analytic::classification_sq_bound(delta, hist.n);
  } else {
    report.epsilon_terms["generalization"] = analytic::classification_log_bound(delta, hist.n, d);
  }
  report.metadata["scenario"] = ds.tag;

  finalize(report, policy);
  return report;
}

double reference_truth(const synthdata::Scenario& scn, const analytic::QuadratureSpec& spec) {
  scn.validate();
  return analytic::minimal_true_loss({scn.mu(), scn.r}, spec);
}

}  // namespace leakaudit::audit
