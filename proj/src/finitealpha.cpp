#include "leakaudit/finitealpha.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace leakaudit::finitealpha {

void JointHistogram::validate() const {
  if (d < 1) throw std::invalid_argument("JointHistogram: d must be positive");
  if (counts[0].size() != static_cast<std::size_t>(d) || counts[1].size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("JointHistogram: counts shape mismatch");
  }
  std::int64_t total = 0;
  for (const auto& row : counts) {
    for (std::int64_t c : row) {
      if (c < 0) throw std::invalid_argument("JointHistogram: negative count");
      total += c;
    }
  }
  if (total != n || n < 1) throw std::invalid_argument("JointHistogram: n must equal the sum of counts and be positive");
}

void JointPMF::validate() const {
  if (d < 1) throw std::invalid_argument("JointPMF: d must be positive");
  if (probs[0].size() != static_cast<std::size_t>(d) || probs[1].size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("JointPMF: shape mismatch");
  }
  double total = 0.0;
  for (const auto& row : probs) {
    for (double p : row) {
      if (!(p >= 0.0)) throw std::invalid_argument("JointPMF: negative probability");
      total += p;
    }
  }
  if (std::fabs(total - 1.0) > 1e-12) throw std::invalid_argument("JointPMF: probabilities must sum to 1");
}

JointHistogram histogram(const Dataset& ds) {
  ds.validate();
  if (ds.setting != Setting::classification) {
    throw std::invalid_argument("histogram: classification-setting dataset required");
  }
  JointHistogram h;
  h.d = ds.d;
  h.counts[0].assign(ds.d, 0);
  h.counts[1].assign(ds.d, 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto symbol = static_cast<std::int64_t>(ds.t[i]);
    if (symbol < 1 || symbol > ds.d) throw std::invalid_argument("histogram: symbol outside 1..d");
    ++h.counts[ds.s[i] > 0 ? 1 : 0][static_cast<std::size_t>(symbol - 1)];
  }
  h.n = static_cast<std::int64_t>(ds.size());
  return h;
}

JointPMF normalize(const JointHistogram& h) {
  h.validate();
  JointPMF pmf;
  pmf.d = h.d;
  for (int row = 0; row < 2; ++row) {
    pmf.probs[row].resize(h.d);
    for (int j = 0; j < h.d; ++j) {
      pmf.probs[row][j] = static_cast<double>(h.counts[row][j]) / static_cast<double>(h.n);
    }
  }
  return pmf;
}

double plugin_conditional_entropy(const JointPMF& pmf) {
  pmf.validate();
  double entropy = 0.0;
  for (int j = 0; j < pmf.d; ++j) {
    const double p_minus = pmf.probs[0][j];
    const double p_plus = pmf.probs[1][j];
    const double p_t = p_minus + p_plus;
    if (p_t <= 0.0) continue;
    if (p_minus > 0.0) entropy -= p_minus * std::log(p_minus / p_t);
    if (p_plus > 0.0) entropy -= p_plus * std::log(p_plus / p_t);
  }
  return entropy;
}

double plugin_conditional_entropy(const JointHistogram& h) {
  return plugin_conditional_entropy(normalize(h));
}

double tv_distance(const JointPMF& p, const JointPMF& q) {
  p.validate();
  q.validate();
  if (p.d != q.d) throw std::invalid_argument("tv_distance: shape mismatch");
  double sum = 0.0;
  for (int row = 0; row < 2; ++row) {
    for (int j = 0; j < p.d; ++j) sum += std::fabs(p.probs[row][j] - q.probs[row][j]);
  }
  return 0.5 * sum;
}

ClassificationErm min_empirical_loss_classification(const JointHistogram& h, Loss loss) {
  h.validate();
  ClassificationErm result;
  result.argmin.resize(h.d);

  if (loss == Loss::squared) {
    double weighted = 0.0;
    for (int j = 0; j < h.d; ++j) {
      const double c_minus = static_cast<double>(h.counts[0][j]);
      const double c_plus = static_cast<double>(h.counts[1][j]);
      const double n_t = c_minus + c_plus;
      if (n_t <= 0.0) {
        result.argmin[j] = 0.0;
        continue;
      }
      const double mean = (c_plus - c_minus) / n_t;
      result.argmin[j] = mean;
      weighted += c_plus * (1.0 - mean) * (1.0 - mean) + c_minus * (-1.0 - mean) * (-1.0 - mean);
    }
    result.value = weighted / static_cast<double>(h.n);
  } else {
    for (int j = 0; j < h.d; ++j) {
      const double c_minus = static_cast<double>(h.counts[0][j]);
      const double c_plus = static_cast<double>(h.counts[1][j]);
      const double n_t = c_minus + c_plus;
      result.argmin[j] = n_t > 0.0 ? 0.5 * (1.0 + (c_plus - c_minus) / n_t) : 0.5;
    }
    result.value = plugin_conditional_entropy(h);
  }
  return result;
}

void JointHistogram::save_json(const std::string& path) const {
  validate();
  nlohmann::json doc{{"d", d}, {"counts", {counts[0], counts[1]}}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open histogram file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failure: " + path);
}

JointHistogram JointHistogram::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open histogram file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  JointHistogram h;
  h.d = doc.at("d").get<int>();
  h.counts[0] = doc.at("counts").at(0).get<std::vector<std::int64_t>>();
  h.counts[1] = doc.at("counts").at(1).get<std::vector<std::int64_t>>();
  h.n = 0;
  for (const auto& row : h.counts) {
    for (std::int64_t c : row) h.n += c;
  }
  h.validate();
  return h;
}

}  // namespace leakaudit::finitealpha
