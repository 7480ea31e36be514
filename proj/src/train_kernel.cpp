#include "train_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>

#include "leakaudit/rng.hpp"

namespace leakaudit::adversary::detail {

namespace {

// tanh(z/2) = 1 - 2/(1 + e^z), branchless so the loops vectorize.
inline float sigma_fast(float z) {
  float x = z < 30.0f ? z : 30.0f;
  x = x > -30.0f ? x : -30.0f;
  const float inv_ln2 = 1.44269504f;
  const float ln2_hi = 0.693359375f;
  const float ln2_lo = -2.12194440e-4f;
  const float nd = __builtin_nearbyintf(x * inv_ln2);
  float r = x - nd * ln2_hi;
  r -= nd * ln2_lo;
  float p = 1.9875691500e-4f;
  p = p * r + 1.3981999507e-3f;
  p = p * r + 8.3334519073e-3f;
  p = p * r + 4.1665795894e-2f;
  p = p * r + 1.6666665459e-1f;
  p = p * r + 5.0000001201e-1f;
  p = p * r + 1.0f;
  p = p * r + 1.0f;
  const std::int32_t n = static_cast<std::int32_t>(nd);
  std::int32_t bits;
  std::memcpy(&bits, &p, 4);
  bits += n << 23;
  std::memcpy(&p, &bits, 4);
  return 1.0f - 2.0f / (1.0f + p);
}

constexpr float kLogClamp = 1.0f - 1e-6f;

inline float loss_grad(float h, float s, Loss loss) {
  if (loss == Loss::squared) return 2.0f * (h - s);
  if (h <= -kLogClamp || h >= kLogClamp) return 0.0f;
  const float p = 0.5f * (1.0f + h);
  return 0.25f * (-(1.0f + s) / p + (1.0f - s) / (1.0f - p));
}

inline double loss_value(float h, float s, Loss loss) {
  if (loss == Loss::squared) {
    const double dlt = static_cast<double>(h) - s;
    return dlt * dlt;
  }
  float hc = h < kLogClamp ? h : kLogClamp;
  hc = hc > -kLogClamp ? hc : -kLogClamp;
  const double p = 0.5 * (1.0 + static_cast<double>(hc));
  return -0.5 * (1.0 + s) * std::log(p) - 0.5 * (1.0 - s) * std::log(1.0 - p);
}

struct Params {
  std::vector<float> a, b, c;
  float c0 = 0.0f;
};

double full_dataset_loss(const Params& w, std::span<const float> t, std::span<const float> s,
                         int k, Loss loss) {
  const float* __restrict a_ = w.a.data();
  const float* __restrict b_ = w.b.data();
  const float* __restrict c_ = w.c.data();
  double acc = 0.0;
  for (std::size_t si = 0; si < t.size(); ++si) {
    const float ts = t[si];
    float h = w.c0;
#pragma omp simd reduction(+ : h)
    for (int i = 0; i < k; ++i) h += c_[i] * sigma_fast(a_[i] * ts + b_[i]);
    acc += loss_value(h, s[si], loss);
  }
  return acc / static_cast<double>(t.size());
}

}  // namespace

RestartOutcome run_restart(std::span<const float> t, std::span<const float> s,
                           int k, const TrainConfig& cfg, std::uint64_t restart_index) {
  const std::size_t n = t.size();
  StreamRng rng(cfg.seed, restart_index);

  Params w;
  w.a.resize(k);
  w.b.resize(k);
  w.c.resize(k);
  const double scale = cfg.init_scale > 0.0 ? cfg.init_scale : 0.5 / std::sqrt(static_cast<double>(k));
  for (int i = 0; i < k; ++i) w.a[i] = static_cast<float>(rng.next_gaussian());
  for (int i = 0; i < k; ++i) w.b[i] = static_cast<float>(rng.next_gaussian());
  for (int i = 0; i < k; ++i) w.c[i] = static_cast<float>(scale * rng.next_gaussian());
  w.c0 = 0.0f;

  // Adam first/second moments; layout [a | b | c | c0].
  const std::size_t n_params = 3 * static_cast<std::size_t>(k) + 1;
  std::vector<float> m(cfg.optimizer == Optimizer::adam ? n_params : 0, 0.0f);
  std::vector<float> v(m.size(), 0.0f);
  const float beta1 = static_cast<float>(cfg.adam_betas.first);
  const float beta2 = static_cast<float>(cfg.adam_betas.second);
  const float lr = static_cast<float>(cfg.learn_rate);
  double beta1_pow = 1.0, beta2_pow = 1.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<float> sig(k), ga(k), gb(k), gc(k);

  RestartOutcome out;
  out.tracked_loss = std::numeric_limits<double>::infinity();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates reshuffle each epoch.
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = rng.next_u64() % (i + 1);
      std::swap(order[i], order[j]);
    }

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const float inv_batch = 1.0f / static_cast<float>(end - start);
      std::fill(ga.begin(), ga.end(), 0.0f);
      std::fill(gb.begin(), gb.end(), 0.0f);
      std::fill(gc.begin(), gc.end(), 0.0f);
      float gc0 = 0.0f;

      const float* __restrict a_ = w.a.data();
      const float* __restrict b_ = w.b.data();
      const float* __restrict c_ = w.c.data();
      float* __restrict sg_ = sig.data();
      float* __restrict ga_ = ga.data();
      float* __restrict gb_ = gb.data();
      float* __restrict gc_ = gc.data();

      for (std::size_t pos = start; pos < end; ++pos) {
        const std::size_t si = order[pos];
        const float ts = t[si];
        float h = w.c0;
#pragma omp simd reduction(+ : h)
        for (int i = 0; i < k; ++i) {
          const float sg = sigma_fast(a_[i] * ts + b_[i]);
          sg_[i] = sg;
          h += c_[i] * sg;
        }
        const float g = loss_grad(h, s[si], cfg.loss) * inv_batch;
        gc0 += g;
#pragma omp simd
        for (int i = 0; i < k; ++i) {
          const float sg = sg_[i];
          gc_[i] += g * sg;
          // d sigma / d z = (1 - sigma^2) / 2
          const float dw = g * c_[i] * 0.5f * (1.0f - sg * sg);
          gb_[i] += dw;
          ga_[i] += dw * ts;
        }
      }

      if (cfg.optimizer == Optimizer::sgd) {
        float* __restrict pa = w.a.data();
        float* __restrict pb = w.b.data();
        float* __restrict pc = w.c.data();
#pragma omp simd
        for (int i = 0; i < k; ++i) {
          pa[i] -= lr * ga_[i];
          pb[i] -= lr * gb_[i];
          pc[i] -= lr * gc_[i];
        }
        w.c0 -= lr * gc0;
      } else {
        beta1_pow *= beta1;
        beta2_pow *= beta2;
        const float corr = static_cast<float>(std::sqrt(1.0 - beta2_pow) / (1.0 - beta1_pow));
        const float eps = 1e-8f;
        auto adam_update = [&](float* p, const float* g, float* mi, float* vi, int count) {
#pragma omp simd
          for (int i = 0; i < count; ++i) {
            mi[i] = beta1 * mi[i] + (1.0f - beta1) * g[i];
            vi[i] = beta2 * vi[i] + (1.0f - beta2) * g[i] * g[i];
            p[i] -= lr * corr * mi[i] / (std::sqrt(vi[i]) + eps);
          }
        };
        adam_update(w.a.data(), ga_, m.data(), v.data(), k);
        adam_update(w.b.data(), gb_, m.data() + k, v.data() + k, k);
        adam_update(w.c.data(), gc_, m.data() + 2 * k, v.data() + 2 * k, k);
        adam_update(&w.c0, &gc0, m.data() + 3 * k, v.data() + 3 * k, 1);
      }
    }

    const double loss = full_dataset_loss(w, t, s, k, cfg.loss);
    if (loss < out.tracked_loss) {  // NaN compares false, so divergence never wins
      out.tracked_loss = loss;
      out.a = w.a;
      out.b = w.b;
      out.c = w.c;
      out.c0 = w.c0;
      out.has_snapshot = true;
    }
  }

  return out;
}

}  // namespace leakaudit::adversary::detail
