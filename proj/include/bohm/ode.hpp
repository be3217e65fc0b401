#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control and
// the fourth-order continuous extension for dense output.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace bohm::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 1.0;
  double min_step = 1e-12;
  double initial_step = 0.0;  // 0 selects a step from the local derivative
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

enum class StepResult { Accepted, Rejected, Underflow };

template <std::size_t N>
class DormandPrince45 {
 public:
  DormandPrince45(StepControl control, double direction = 1.0)
      : control_(control), dir_(direction >= 0.0 ? 1.0 : -1.0) {}

  template <class Rhs>
  void start(Rhs& f, double t0, const State<N>& y0) {
    t_ = t0;
    y_ = y0;
    f(t_, y_, k1_);
    ++stats_.evaluations;
    h_ = control_.initial_step > 0.0 ? control_.initial_step
                                     : initial_step(f);
    h_ = std::min(h_, control_.max_step);
    err_prev_ = 1e-4;
    rejected_last_ = false;
  }

  /// Attempt one step, never past t_limit. On acceptance the dense output
  /// covers [t_prev(), t()].
  template <class Rhs>
  StepResult try_step(Rhs& f, double t_limit) {
    double h = std::min(h_, std::abs(t_limit - t_));
    if (h < control_.min_step && std::abs(t_limit - t_) > control_.min_step) {
      return StepResult::Underflow;
    }
    const double hs = dir_ * h;

    State<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + hs * (a21 * k1_[i]);
    f(t_ + c2 * hs, tmp, k2_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + hs * (a31 * k1_[i] + a32 * k2_[i]);
    f(t_ + c3 * hs, tmp, k3_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + hs * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    f(t_ + c4 * hs, tmp, k4_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + hs * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] +
                             a54 * k4_[i]);
    f(t_ + c5 * hs, tmp, k5_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + hs * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                             a64 * k4_[i] + a65 * k5_[i]);
    f(t_ + hs, tmp, k6_);
    State<N> y_new;
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y_[i] + hs * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] +
                               b5 * k5_[i] + b6 * k6_[i]);
    f(t_ + hs, y_new, k7_);
    stats_.evaluations += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = hs * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] +
                             e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double scale =
          control_.abs_tol +
          control_.rel_tol * std::max(std::abs(y_[i]), std::abs(y_new[i]));
      err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / static_cast<double>(N));
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      // PI controller (Gustafsson), exponents as in Hairer's dopri5.
      double fac = std::pow(err, -0.7 / 5.0) * std::pow(err_prev_, 0.4 / 5.0);
      fac = std::clamp(0.9 * fac, 0.2, 10.0);
      if (rejected_last_) fac = std::min(fac, 1.0);
      err_prev_ = std::max(err, 1e-4);

      y_prev_ = y_;
      t_prev_ = t_;
      h_last_ = hs;
      t_ = (h == std::abs(t_limit - t_prev_)) ? t_limit : t_ + hs;
      y_ = y_new;
      k1_prev_ = k1_;
      k1_ = k7_;
      h_ = std::min(h * fac, control_.max_step);
      rejected_last_ = false;
      ++stats_.accepted;
      return StepResult::Accepted;
    }

    const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
    h_ = h * fac;
    rejected_last_ = true;
    ++stats_.rejected;
    if (h_ < control_.min_step) return StepResult::Underflow;
    return StepResult::Rejected;
  }

  /// Continuous extension on the last accepted step.
  State<N> dense(double t) const {
    const double theta = (t - t_prev_) / h_last_;
    const double tm1 = theta - 1.0;
    const double th2 = theta * theta;
    const double A = th2 * (3.0 - 2.0 * theta);
    const double B = th2 * tm1;
    const double C = th2 * tm1 * tm1;
    const double D = theta * tm1 * tm1;
    const double X1 = 5.0 * (2558722523.0 - 31403016.0 * theta) / 11282082432.0;
    const double X3 = 100.0 * (882725551.0 - 15701508.0 * theta) / 32700410799.0;
    const double X4 = 25.0 * (443332067.0 - 31403016.0 * theta) / 1880347072.0;
    const double X5 = 32805.0 * (23143187.0 - 3489224.0 * theta) / 199316789632.0;
    const double X6 = 55.0 * (29972135.0 - 7076736.0 * theta) / 822651844.0;
    const double X7 = 10.0 * (7414447.0 - 829305.0 * theta) / 29380423.0;
    const double w1 = A * b1 - C * X1 + D;
    const double w3 = A * b3 + C * X3;
    const double w4 = A * b4 - C * X4;
    const double w5 = A * b5 + C * X5;
    const double w6 = A * b6 - C * X6;
    const double w7 = B + C * X7;
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = y_prev_[i] + h_last_ * (w1 * k1_prev_[i] + w3 * k3_[i] +
                                       w4 * k4_[i] + w5 * k5_[i] +
                                       w6 * k6_[i] + w7 * k1_[i]);
    }
    return out;
  }

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  const State<N>& y() const { return y_; }
  const State<N>& derivative() const { return k1_; }
  double step_size() const { return h_; }
  const StepStats& stats() const { return stats_; }

 private:
  template <class Rhs>
  double initial_step(Rhs& f) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = control_.abs_tol + control_.rel_tol * std::abs(y_[i]);
      d0 += (y_[i] / sk) * (y_[i] / sk);
      d1 += (k1_[i] / sk) * (k1_[i] / sk);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, control_.max_step);
    State<N> y1, f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y_[i] + dir_ * h0 * k1_[i];
    f(t_ + dir_ * h0, y1, f1);
    ++stats_.evaluations;
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = control_.abs_tol + control_.rel_tol * std::abs(y_[i]);
      d2 += ((f1[i] - k1_[i]) / sk) * ((f1[i] - k1_[i]) / sk);
    }
    d2 = std::sqrt(d2 / N) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dm, 1.0 / 5.0);
    return std::max(std::min(100.0 * h0, h1), control_.min_step * 10.0);
  }

  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                          c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                          a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                          b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                          b6 = 11.0 / 84.0;
  // Fifth- minus fourth-order weights.
  static constexpr double e1 = b1 - 5179.0 / 57600.0,
                          e3 = b3 - 7571.0 / 16695.0,
                          e4 = b4 - 393.0 / 640.0,
                          e5 = b5 + 92097.0 / 339200.0,
                          e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;

  StepControl control_;
  double dir_;
  double t_ = 0.0, t_prev_ = 0.0, h_ = 0.0, h_last_ = 0.0;
  double err_prev_ = 1e-4;
  bool rejected_last_ = false;
  State<N> y_{}, y_prev_{};
  State<N> k1_{}, k1_prev_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
  StepStats stats_;
};

}  // namespace bohm::ode
