#include "leakaudit/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "leakaudit/analytic.hpp"
#include "leakaudit/audit.hpp"
#include "leakaudit/numformat.hpp"
#include "leakaudit/rng.hpp"
#include "leakaudit/synthdata.hpp"

namespace leakaudit::cli {

void SweepConfig::validate() const {
  if (mu_grid.empty()) throw std::invalid_argument("SweepConfig: mu grid must be non-empty");
  for (double mu : mu_grid) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("SweepConfig: grid values must lie in [0,1]");
  }
  if (n < 1 || k < 1) throw std::invalid_argument("SweepConfig: n and k must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("SweepConfig: delta must be in (0,1)");
  train.validate();
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows(cfg.mu_grid.size());
  for (std::size_t i = 0; i < cfg.mu_grid.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const double mu = cfg.mu_grid[i];

    const std::uint64_t scenario_seed = StreamRng(cfg.seed, 2 * i).next_u64();
    const std::uint64_t train_seed = StreamRng(cfg.seed, 2 * i + 1).next_u64();

    synthdata::Scenario scn = synthdata::Scenario::with_mu(mu, scenario_seed);
    const Dataset ds = synthdata::sample_dataset(scn, cfg.n);

    adversary::TrainConfig train = cfg.train;
    train.seed = train_seed;
    train.loss = Loss::squared;

    const double c_eta = analytic::barron_constant_tanh(mu);
    const double diam = 2.0 * scn.r;
    const audit::AuditReport report = audit::certify_representation(
        ds, static_cast<int>(cfg.k), train, c_eta, diam, cfg.delta,
        audit::VerdictPolicy::default_for(Loss::squared));

    SweepRow& row = rows[i];
    row.mu = mu;
    row.n = cfg.n;
    row.k = cfg.k;
    row.delta = cfg.delta;
    row.empirical_loss = report.empirical_loss;
    row.true_loss = audit::reference_truth(scn);
    row.lower_bound = report.certified_lower_bound;
    row.ratio = report.empirical_loss > 0.0 ? report.certified_lower_bound / report.empirical_loss : 0.0;
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "mu,n,k,delta,empirical_loss,true_loss,lower_bound,ratio,wall_seconds\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.mu) << ',' << r.n << ',' << r.k << ',' << format_double(r.delta) << ','
        << format_double(r.empirical_loss) << ',' << format_double(r.true_loss) << ','
        << format_double(r.lower_bound) << ',' << format_double(r.ratio) << ','
        << format_double(r.wall_seconds) << '\n';
  }
  if (!out) throw std::runtime_error("write failure: " + path);
}

void write_sweep_json(const SweepConfig& cfg, const std::vector<SweepRow>& rows, const std::string& path) {
  nlohmann::json doc;
  doc["config"] = {{"mu_grid", cfg.mu_grid}, {"n", cfg.n},          {"k", cfg.k},
                   {"delta", cfg.delta},     {"seed", cfg.seed},    {"restarts", cfg.train.restarts},
                   {"epochs", cfg.train.epochs}};
  doc["rows"] = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    // Wall time stays out of the JSON so identical seeds give identical bytes.
    doc["rows"].push_back({{"mu", r.mu},
                           {"empirical_loss", r.empirical_loss},
                           {"true_loss", r.true_loss},
                           {"lower_bound", r.lower_bound},
                           {"ratio", r.ratio}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failure: " + path);
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_sweep_svg(const std::vector<SweepRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("write_sweep_svg: no rows");
  const double width = 640.0, height = 440.0;
  const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = rows.front().mu, xmax = rows.front().mu;
  double ymin = 1e300, ymax = -1e300;
  for (const SweepRow& r : rows) {
    xmin = std::min(xmin, r.mu);
    xmax = std::max(xmax, r.mu);
    for (double y : {r.empirical_loss, r.true_loss, r.lower_bound}) {
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) xmax = xmin + 1e-9;
  const double pad = 0.05 * (ymax - ymin == 0.0 ? 1.0 : ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << (mt + ph)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << (mt + ph) << "\" x2=\"" << (ml + pw) << "\" y2=\""
      << (mt + ph) << "\" stroke=\"black\"/>\n";

  const int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / n_ticks;
    const double px = sx(fx);
    out << "<line x1=\"" << fixed2(px) << "\" y1=\"" << (mt + ph) << "\" x2=\"" << fixed2(px)
        << "\" y2=\"" << (mt + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed2(px) << "\" y=\"" << (mt + ph + 20)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fixed2(fx) << "</text>\n";
    const double fy = ymin + (ymax - ymin) * i / n_ticks;
    const double py = sy(fy);
    out << "<line x1=\"" << (ml - 5) << "\" y1=\"" << fixed2(py) << "\" x2=\"" << ml << "\" y2=\""
        << fixed2(py) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml - 8) << "\" y=\"" << fixed2(py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fixed2(fy) << "</text>\n";
  }
  out << "<text x=\"" << (ml + pw / 2) << "\" y=\"" << (height - 10)
      << "\" font-size=\"13\" text-anchor=\"middle\">mu</text>\n";

  struct Series {
    const char* name;
    const char* color;
    double SweepRow::* field;
  };
  const Series series[] = {
      {"true loss", "#1f77b4", &SweepRow::true_loss},
      {"empirical loss", "#2ca02c", &SweepRow::empirical_loss},
      {"certified lower bound", "#d62728", &SweepRow::lower_bound},
  };
  for (const Series& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const SweepRow& r : rows) out << fixed2(sx(r.mu)) << ',' << fixed2(sy(r.*s.field)) << ' ';
    out << "\"/>\n";
    for (const SweepRow& r : rows) {
      out << "<circle cx=\"" << fixed2(sx(r.mu)) << "\" cy=\"" << fixed2(sy(r.*s.field))
          << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    }
  }

  // legend
  double ly = mt + 14;
  for (const Series& s : series) {
    out << "<line x1=\"" << (ml + 12) << "\" y1=\"" << fixed2(ly - 4) << "\" x2=\"" << (ml + 36)
        << "\" y2=\"" << fixed2(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << (ml + 42) << "\" y=\"" << fixed2(ly) << "\" font-size=\"12\">" << s.name
        << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failure: " + path);
}

namespace {

bool report_check(std::ostream& out, const char* name, bool ok, const std::string& detail = "") {
  out << (ok ? "[pass] " : "[FAIL] ") << name;
  if (!detail.empty()) out << " (" << detail << ")";
  out << '\n';
  return ok;
}

}  // namespace

bool selftest(std::ostream& out) {
  bool ok = true;

  // Quadrature / special-function oracle checks.
  ok &= report_check(out, "normal cdf symmetry",
                     std::fabs(analytic::std_normal_cdf(0.0) - 0.5) < 1e-15 &&
                         std::fabs(analytic::std_normal_cdf(3.0) + analytic::std_normal_cdf(-3.0) - 1.0) < 1e-15);
  ok &= report_check(out, "normal cdf value",
                     std::fabs(analytic::std_normal_cdf(3.0) - 0.99865010196836991) < 1e-12);
  for (double mu : {0.01, 0.1, 1.0}) {
    const double numeric = analytic::barron_constant_numeric(mu);
    ok &= report_check(out, "barron constant cross-check",
                       std::fabs(numeric - analytic::barron_constant_tanh(mu)) <= 1e-6 * mu,
                       "mu=" + format_double(mu));
  }
  ok &= report_check(out, "minimal true loss at mu=0",
                     std::fabs(analytic::minimal_true_loss({0.0, 3.0}) - 1.0) < 1e-8);
  ok &= report_check(out, "minimal true loss at mu=0.1",
                     std::fabs(analytic::minimal_true_loss({0.1, 3.0}) - 0.99035738544870459) < 1e-8);

  // Gradient check against central finite differences.
  {
    StreamRng rng(20240117, 9);
    double max_rel = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int k = 1 + static_cast<int>(rng.next_u64() % 6);
      adversary::TwoLayerNet net = adversary::TwoLayerNet::zeros(k);
      for (auto* vec : {&net.a, &net.b, &net.c}) {
        for (double& p : *vec) p = rng.next_gaussian();
      }
      net.c0 = rng.next_gaussian();

      Dataset ds;
      ds.setting = Setting::representation;
      const std::size_t m = 4;
      std::vector<std::size_t> batch;
      for (std::size_t i = 0; i < m; ++i) {
        ds.s.push_back((rng.next_u64() & 1) ? 1 : -1);
        ds.t.push_back(3.0 * (2.0 * rng.next_double() - 1.0));
        batch.push_back(i);
      }
      const Loss loss = (trial % 2 == 0) ? Loss::squared : Loss::log_loss;
      const adversary::NetGradient g = adversary::gradient(net, ds, batch, loss);

      auto batch_loss = [&](adversary::TwoLayerNet& w) {
        double acc = 0.0;
        for (std::size_t i : batch) {
          const double h = w.forward_scalar(ds.t[i]);
          if (loss == Loss::squared) {
            acc += (h - ds.s[i]) * (h - ds.s[i]);
          } else {
            const double hc = std::clamp(h, -(1.0 - 1e-6), 1.0 - 1e-6);
            const double p = 0.5 * (1.0 + hc);
            acc += -0.5 * (1.0 + ds.s[i]) * std::log(p) - 0.5 * (1.0 - ds.s[i]) * std::log(1.0 - p);
          }
        }
        return acc / static_cast<double>(batch.size());
      };
      const double step = 1e-6;
      auto check_param = [&](double* p, double analytic_g) {
        const double orig = *p;
        *p = orig + step;
        const double up = batch_loss(net);
        *p = orig - step;
        const double down = batch_loss(net);
        *p = orig;
        const double fd = (up - down) / (2.0 * step);
        const double rel = std::fabs(analytic_g - fd) / std::max({std::fabs(fd), std::fabs(analytic_g), 1e-4});
        max_rel = std::max(max_rel, rel);
      };
      for (int i = 0; i < k; ++i) {
        check_param(&net.a[i], g.a[i]);
        check_param(&net.b[i], g.b[i]);
        check_param(&net.c[i], g.c[i]);
      }
      check_param(&net.c0, g.c0);
    }
    ok &= report_check(out, "gradient vs central differences", max_rel < 1e-5,
                       "max rel err " + format_double(max_rel));
  }

  // Monte-Carlo coverage of the certificate on a known scenario.
  {
    const double delta = 0.05;
    const int runs = 60;
    const double true_loss = analytic::minimal_true_loss({0.1, 3.0});
    int violations = 0;
    for (int run = 0; run < runs; ++run) {
      synthdata::Scenario scn = synthdata::Scenario::with_mu(0.1, 777000 + run);
      const Dataset ds = synthdata::sample_dataset(scn, 2000);
      adversary::TrainConfig cfg;
      cfg.restarts = 1;
      cfg.epochs = 5;
      cfg.seed = 888000 + run;
      const audit::AuditReport report = audit::certify_representation(
          ds, 32, cfg, 0.1, 6.0, delta, audit::VerdictPolicy::default_for(Loss::squared));
      if (report.certified_lower_bound > true_loss) ++violations;
    }
    const double limit = delta + 3.0 * std::sqrt(delta * (1.0 - delta) / runs);
    ok &= report_check(out, "certificate coverage", violations <= limit * runs,
                       std::to_string(violations) + "/" + std::to_string(runs) + " violations");
  }

  return ok;
}

}  // namespace leakaudit::cli
