#include "noisediff/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "noisediff/errors.hpp"

namespace noisediff {

namespace {

inline double activate(double z, Activation act) {
  return act == Activation::kRelu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

// Derivative expressed through the pre-activation z and output a.
inline double activate_grad(double z, double a, Activation act) {
  return act == Activation::kRelu ? (z > 0.0 ? 1.0 : 0.0) : 1.0 - a * a;
}

}  // namespace

std::string_view activation_name(Activation a) {
  return a == Activation::kRelu ? "relu" : "tanh";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw ConfigError("activation", "unknown activation '" + std::string(name) + "' (relu|tanh)");
}

bool MlpParams::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

MlpParams init_params(RngStream& g) {
  MlpParams p;
  const double bound1 = std::sqrt(6.0 / static_cast<double>(kInputs + kHidden));
  const double bound2 = std::sqrt(6.0 / static_cast<double>(kHidden + 1));
  for (std::size_t i = 0; i < kHidden * kInputs; ++i) {
    p.values[MlpParams::kW1 + i] = bound1 * (2.0 * g.next_uniform01() - 1.0);
  }
  for (std::size_t i = 0; i < kHidden; ++i) {
    p.w2(i) = bound2 * (2.0 * g.next_uniform01() - 1.0);
  }
  return p;
}

double forward(const MlpParams& p, double x_t, double t_norm, Activation act) {
  if (!std::isfinite(x_t) || !std::isfinite(t_norm)) {
    throw std::domain_error("forward: non-finite network input");
  }
  double out = p.b2();
  for (std::size_t j = 0; j < kHidden; ++j) {
    const double z = p.w1(j, 0) * x_t + p.w1(j, 1) * t_norm + p.b1(j);
    out += p.w2(j) * activate(z, act);
  }
  return out;
}

LossAndGrad loss_and_grad(const MlpParams& p, const TrainBatch& batch, Activation act) {
  if (batch.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  if (batch.x_t.size() != batch.size() || batch.t_norm.size() != batch.size()) {
    throw std::invalid_argument("loss_and_grad: ragged batch");
  }

  LossAndGrad out;
  MlpParams& g = out.grad;
  const double scale = 1.0 / static_cast<double>(batch.size());
  std::array<double, kHidden> z{};
  std::array<double, kHidden> a{};

  for (std::size_t n = 0; n < batch.size(); ++n) {
    const double x = batch.x_t[n];
    const double t = batch.t_norm[n];
    double pred = p.b2();
    for (std::size_t j = 0; j < kHidden; ++j) {
      z[j] = p.w1(j, 0) * x + p.w1(j, 1) * t + p.b1(j);
      a[j] = activate(z[j], act);
      pred += p.w2(j) * a[j];
    }
    const double resid = pred - batch.target[n];
    out.loss += resid * resid;

    const double d_pred = 2.0 * resid * scale;
    g.b2() += d_pred;
    for (std::size_t j = 0; j < kHidden; ++j) {
      g.w2(j) += d_pred * a[j];
      const double d_z = d_pred * p.w2(j) * activate_grad(z[j], a[j], act);
      g.b1(j) += d_z;
      g.w1(j, 0) += d_z * x;
      g.w1(j, 1) += d_z * t;
    }
  }
  out.loss *= scale;
  return out;
}

namespace {

// Loss evaluated in extended precision so the central differences are not
// swamped by rounding when a gradient component is small.
long double batch_loss_extended(const MlpParams& p, const TrainBatch& batch, Activation act) {
  long double total = 0.0L;
  for (std::size_t n = 0; n < batch.size(); ++n) {
    const long double x = batch.x_t[n];
    const long double t = batch.t_norm[n];
    long double pred = p.b2();
    for (std::size_t j = 0; j < kHidden; ++j) {
      const long double z = p.w1(j, 0) * x + p.w1(j, 1) * t + p.b1(j);
      const long double a = act == Activation::kRelu ? (z > 0.0L ? z : 0.0L) : std::tanh(z);
      pred += p.w2(j) * a;
    }
    const long double r = pred - batch.target[n];
    total += r * r;
  }
  return total / static_cast<long double>(batch.size());
}

}  // namespace

double finite_diff_check(const MlpParams& p, const TrainBatch& batch, double h, Activation act) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_check: h must be positive");
  const MlpParams analytic = loss_and_grad(p, batch, act).grad;
  MlpParams probe = p;
  double worst = 0.0;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const double saved = probe.values[i];
    probe.values[i] = saved + h;
    const double h_up = probe.values[i] - saved;  // exact representable steps
    const long double up = batch_loss_extended(probe, batch, act);
    probe.values[i] = saved - h;
    const double h_down = saved - probe.values[i];
    const long double down = batch_loss_extended(probe, batch, act);
    probe.values[i] = saved;
    const double numeric = static_cast<double>((up - down) / (static_cast<long double>(h_up) + h_down));
    const double denom = std::max({std::abs(analytic.values[i]), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic.values[i] - numeric) / denom);
  }
  return worst;
}

void adam_update(std::span<double> params, std::span<double> m, std::span<double> v,
                 std::span<const double> grad, long step, double lr, double beta1,
                 double beta2, double epsilon) {
  if (params.size() != m.size() || params.size() != v.size() || params.size() != grad.size()) {
    throw std::invalid_argument("adam_update: shape mismatch");
  }
  const double m_corr = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double v_corr = 1.0 - std::pow(beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
    params[i] -= lr * (m[i] / m_corr) / (std::sqrt(v[i] / v_corr) + epsilon);
  }
}

void adam_step(MlpParams& p, AdamState& s, const MlpParams& grad, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("adam_step: lr must be positive");
  ++s.step_count;
  adam_update(p.values, s.m.values, s.v.values, grad.values, s.step_count, lr, s.beta1,
              s.beta2, s.epsilon);
}

void sgd_step(MlpParams& p, const MlpParams& grad, double lr) {
  for (std::size_t i = 0; i < kParamCount; ++i) p.values[i] -= lr * grad.values[i];
}

}  // namespace noisediff
