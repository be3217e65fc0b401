#include <algorithm>
#include <functional>
#include <cmath>
#include <random>
#include <sstream>

#include "bohm/commands.hpp"
#include "bohm/energy.hpp"
#include "bohm/pilot.hpp"
#include "bohm/trajectory.hpp"
#include "bohm/wavefield.hpp"

namespace bohm {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

VerifyItem item(std::string name, bool pass, std::string detail) {
  return {std::move(name), pass, std::move(detail)};
}

// Default drive for all checks: the figure runs' parameters.
DriveParameters reference_drive() { return drive_from_config(preset_config("fig1")); }

// Fourth-order central difference.
template <class F>
double diff4(F&& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

double rel_err(double a, double b, double scale) {
  return std::abs(a - b) / std::max(scale, 1e-300);
}

struct RandomPoint {
  SpatialPoint p;
  double tau;
};

std::vector<RandomPoint> random_points(std::uint64_t seed, int n, double tau_max,
                                       const DriveParameters& drive, double min_rho) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> xi(0.2, 12.0), th(0.05, kPi - 0.05),
      ph(0.0, 2 * kPi), tau(0.0, tau_max);
  std::vector<RandomPoint> out;
  while (static_cast<int>(out.size()) < n) {
    RandomPoint r{{xi(gen), th(gen), ph(gen)}, tau(gen)};
    if (eval_wave(r.p, coefficients(r.tau, drive)).rho > min_rho) out.push_back(r);
  }
  return out;
}

VerifyItem check_coefficient_oracle(const DriveParameters& drive) {
  const auto numeric = solve_coefficients_numeric(2e4, drive, 1e-12, 10.0);
  double worst = 0.0;
  for (const auto& n : numeric) {
    const CoefficientState c = coefficients(n.tau, drive);
    worst = std::max({worst, std::abs(c.c_a.real() - n.c_a.real()),
                      std::abs(c.c_a.imag() - n.c_a.imag()),
                      std::abs(c.c_b.real() - n.c_b.real()),
                      std::abs(c.c_b.imag() - n.c_b.imag())});
  }
  return item("coefficient oracle: closed form vs numerical rate equations on [0, 2e4]",
              worst < 1e-6, "max componentwise deviation " + fmt(worst));
}

VerifyItem check_unitarity(const DriveParameters& drive) {
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    worst = std::max(worst, std::abs(coefficients(2.0 * i, drive).norm() - 1.0));
  }
  return item("unitarity |c_a|^2 + |c_b|^2 = 1 at 1e4 times", worst < 1e-12,
              "max deviation " + fmt(worst));
}

VerifyItem check_printed_conjugate(const DriveParameters& drive) {
  double worst = 0.0, cb = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double tau = 100.0 * i;
    const CoefficientState e = coefficients(tau, drive);
    const CoefficientState p = coefficients_printed(tau, drive);
    worst = std::max(worst, std::abs(p.c_a - std::conj(e.c_a)));
    cb = std::max(cb, std::abs(p.c_b - e.c_b));
  }
  return item("printed closed-form c_a is the complex conjugate of the exact solution",
              worst < 1e-12 && cb < 1e-12,
              "max |c_a,printed - conj(c_a)| " + fmt(worst) + ", c_b deviation " + fmt(cb));
}

VerifyItem check_envelopes(const DriveParameters& drive, bool analytic) {
  const double k = drive.nu_s / (2.0 * drive.sigma_s);
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double tau = 10.0 * i + 0.37;
    const CoefficientState c =
        analytic ? coefficients(tau, drive) : coefficients_printed(tau, drive);
    const cplx w = coherence(c);
    const double T = analytic ? envelope_T_analytic(tau, drive) : envelope_T(tau, drive);
    const double Tp =
        analytic ? envelope_Tprime_analytic(tau, drive) : envelope_Tprime(tau, drive);
    worst = std::max({worst, std::abs(w.real() - Tp), std::abs(w.imag() - k * T)});
  }
  return item(analytic ? "envelope identities Re W = T', Im W = (nu/2 sigma) T (exact coefficients)"
                       : "envelope identities Re W = T', Im W = (nu/2 sigma) T (printed coefficients)",
              worst < 1e-12, "max deviation " + fmt(worst));
}

VerifyItem check_transition_peak(const DriveParameters& drive) {
  const double depth = std::pow(drive.nu_s / drive.sigma_s, 2);
  const double t_peak = kPi / drive.sigma_s;
  double best = 0.0, at = 0.0;
  for (double tau = 0.0; tau <= 2e4; tau += 0.25) {
    const double p = std::norm(coefficients(tau, drive).c_b);
    if (p > best) {
      best = p;
      at = tau;
    }
  }
  return item("transition peak |c_b|^2 = (nu/sigma)^2 at tau = pi/sigma",
              std::abs(best - depth) < 1e-6 && std::abs(at - t_peak) < 1.0,
              "peak " + fmt(best) + " at tau " + fmt(at) + " (expected " + fmt(depth) + " at " +
                  fmt(t_peak) + ")");
}

std::vector<VerifyItem> check_gradients(const DriveParameters& drive, std::uint64_t seed) {
  const auto pts = random_points(seed, 1000, 2e4, drive, 1e-8);
  double worst_s = 0.0, worst_l = 0.0;
  const double h = 1e-4;
  for (const auto& r : pts) {
    const CoefficientState c = coefficients(r.tau, drive);
    const cplx psi0 = eval_wave(r.p, c).psi;
    auto phase_xi = [&](double x) {
      return std::arg(eval_wave({x, r.p.theta, 0}, c).psi / psi0);
    };
    auto phase_th = [&](double t) {
      return std::arg(eval_wave({r.p.xi, t, 0}, c).psi / psi0);
    };
    auto lr_xi = [&](double x) { return std::log(eval_wave({x, r.p.theta, 0}, c).rho); };
    auto lr_th = [&](double t) { return std::log(eval_wave({r.p.xi, t, 0}, c).rho); };

    const ScaledGradient gs = grad_S(r.p, c);
    const double fs_r = diff4(phase_xi, r.p.xi, h);
    const double fs_t = diff4(phase_th, r.p.theta, h) / r.p.xi;
    const double ns = std::hypot(fs_r, fs_t);
    worst_s = std::max({worst_s, rel_err(gs.radial, fs_r, ns), rel_err(gs.polar, fs_t, ns)});

    const ScaledGradient gl = grad_log_rho(r.p, c);
    const double fl_r = diff4(lr_xi, r.p.xi, h);
    const double fl_t = diff4(lr_th, r.p.theta, h) / r.p.xi;
    const double nl = std::hypot(fl_r, fl_t);
    worst_l = std::max({worst_l, rel_err(gl.radial, fl_r, nl), rel_err(gl.polar, fl_t, nl)});
  }
  return {item("grad_S vs finite differences of arg psi at 1e3 points", worst_s < 1e-6,
               "max relative error " + fmt(worst_s)),
          item("grad_log_rho vs finite differences of ln rho at 1e3 points", worst_l < 1e-6,
               "max relative error " + fmt(worst_l))};
}

std::vector<VerifyItem> check_eigenstates(FieldOptions field, std::uint64_t seed) {
  // The limits are analytic wherever rho > 0, so the floor is not applied.
  field.rho_floor = 0.0;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> xi(0.3, 15.0), th(0.05, kPi - 0.05), tau(0.0, 2e4);
  double g_static = 0.0, g_rate = 0.0, e_rate = 0.0, ratio = 0.0, min_dphi = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const SpatialPoint p{xi(gen), th(gen), 0.0};
    const double t = tau(gen);
    const ScaledVelocity g = velocity_field(p, {{1.0, 0.0}, {0.0, 0.0}, t}, field);
    const ScaledVelocity e = velocity_field(p, {{0.0, 0.0}, {1.0, 0.0}, t}, field);
    const double g_expect = eigenstate_angular_velocity(Eigenstate::Ground1s, p.xi);
    const double e_expect = eigenstate_angular_velocity(Eigenstate::Excited2p0, p.xi);
    g_static = std::max({g_static, std::abs(g.dxi), std::abs(g.dtheta)});
    g_rate = std::max(g_rate, std::abs(g.dphi - g_expect));
    e_rate = std::max(e_rate, std::abs(e.dphi - e_expect));
    ratio = std::max(ratio, std::abs(e.dphi / g.dphi - 0.5));
    min_dphi = std::min(min_dphi, g.dphi);
  }
  return {item("1s limit: dxi/dtau = dtheta/dtau = 0", g_static < 1e-14,
               "max |rate| " + fmt(g_static)),
          item("1s limit: dphi/dtau = 8/(3 xi)", g_rate < 1e-12, "max deviation " + fmt(g_rate)),
          item("2p0 limit: dphi/dtau = 4/(3 xi), ratio to 1s exactly 1/2",
               e_rate < 1e-12 && ratio < 1e-12,
               "max deviation " + fmt(e_rate) + ", ratio deviation " + fmt(ratio)),
          item("positive revolution about +z in the 1s limit", min_dphi > 0.0,
               "min dphi/dtau " + fmt(min_dphi))};
}

VerifyItem check_normalization(const DriveParameters& drive) {
  // Gauss-Legendre on 40 panels in xi and 16 in cos(theta).
  static const double x8[] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                              0.9602898564975363};
  static const double w8[] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                              0.1012285362903763};
  auto gl = [&](auto&& f, double a, double b) {
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += w8[i] * (f(m - r * x8[i]) + f(m + r * x8[i]));
    return s * r;
  };
  double worst = 0.0;
  for (double tau : {0.0, 3333.3, 9148.0, 15000.0}) {
    const CoefficientState c = coefficients(tau, drive);
    double total = 0.0;
    for (int i = 0; i < 160; ++i) {
      total += gl(
          [&](double xi) {
            double ang = 0.0;
            for (int j = 0; j < 8; ++j) {
              ang += gl([&](double mu) { return eval_wave({xi, std::acos(mu), 0}, c).rho; },
                        -1.0 + 0.25 * j, -0.75 + 0.25 * j);
            }
            return 2.0 * kPi * xi * xi * ang;
          },
          0.25 * i, 0.25 * (i + 1));
    }
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return item("normalization: quadrature of rho over xi in (0, 40] equals 1", worst < 1e-6,
              "max deviation " + fmt(worst));
}

// d rho/d tau + div j, using the coordinate-rate current of pauli_current.
double continuity_residual(const SpatialPoint& p, double tau,
                           const std::function<CoefficientState(double)>& coeff) {
  const double h_t = 1e-3, h_x = 1e-4;
  const double drho = diff4([&](double t) { return eval_wave(p, coeff(t)).rho; }, tau, h_t);
  const CoefficientState c = coeff(tau);
  auto flux_xi = [&](double x) {
    return x * x * pauli_current({x, p.theta, p.phi}, c).xi * 1.0;
  };
  auto flux_th = [&](double t) {
    return std::sin(t) * p.xi * pauli_current({p.xi, t, p.phi}, c).theta;
  };
  // Physical components: j_xi = rho dxi/dtau, j_theta = rho xi dtheta/dtau.
  const double div = diff4(flux_xi, p.xi, h_x) / (p.xi * p.xi) +
                     diff4(flux_th, p.theta, h_x) / (p.xi * std::sin(p.theta));
  return drho + div;
}

std::vector<VerifyItem> check_continuity(const DriveParameters& drive, std::uint64_t seed) {
  const auto pts = random_points(seed + 7, 1000, 2e4, drive, 1e-8);
  const cplx c1(std::sqrt(0.5), 0.0), c2(0.0, std::sqrt(0.5));
  double frozen = 0.0, driven = 0.0, raw = 0.0;
  for (const auto& r : pts) {
    frozen = std::max(frozen, std::abs(continuity_residual(r.p, r.tau, [&](double t) {
      return CoefficientState{c1, c2, t};
    })));
    auto exact = [&](double t) { return coefficients(t, drive); };
    const double res = continuity_residual(r.p, r.tau, exact);
    raw = std::max(raw, std::abs(res));
    driven = std::max(driven, std::abs(res - continuity_source(r.p, exact(r.tau), drive)));
  }
  return {item("continuity: frozen superposition, d rho/d tau + div j = 0", frozen < 1e-6,
               "max residual " + fmt(frozen)),
          item("continuity: driven state, d rho/d tau + div j equals the two-level source term",
               driven < 1e-6,
               "max residual after source " + fmt(driven) + " (raw imbalance up to " + fmt(raw) +
                   ")")};
}

std::vector<VerifyItem> check_surfaces() {
  std::vector<VerifyItem> out;
  for (const char* name : {"fig1", "fig2"}) {
    const RunConfig cfg = preset_config(name);
    const Trajectory tr = integrate(cfg.initial, cfg.integrate.tau_max, drive_from_config(cfg),
                                    source_from_config(cfg), integrator_from_config(cfg));
    double worst = 0.0;
    bool finite = true;
    for (const auto& s : tr.samples) {
      if (!std::isfinite(s.surface_residual)) finite = false;
      worst = std::max(worst, std::abs(s.surface_residual) / s.point.xi);
    }
    out.push_back(item(std::string("surface confinement on the ") + name +
                           " run (max |residual| / xi < 1e-6)",
                       finite && worst < 1e-6, "max " + fmt(worst)));
  }
  return out;
}

std::vector<VerifyItem> check_printed_forms(const DriveParameters& drive, std::uint64_t seed) {
  std::mt19937_64 gen(seed + 11);
  std::uniform_real_distribution<double> xi(0.5, 10.0), th(0.1, kPi - 0.1), tau(1.0, 2e4);
  double d_err = 0.0, pr = 0.0, pt_same = 0.0, pt_flip = 0.0, pp_corr = 0.0, dphi_corr = 0.0;
  double pp_sign = 0.0;
  int n = 0;
  while (n < 1000) {
    const SpatialPoint p{xi(gen), th(gen), 0.0};
    const double t = tau(gen);
    const CoefficientState c = coefficients_printed(t, drive);
    const WaveAmplitude w = eval_wave(p, c);
    if (w.rho < 1e-8) continue;
    ++n;
    const ScaledVelocity v = velocity_field(p, c);
    const PrintedFormCheck f = printed_momentum_check(p, t, drive, kBetaNormalized);
    const double p_r = v.dxi / kVelocityScale;
    const double p_t = v.dtheta * p.xi / kVelocityScale;
    const double p_p = v.dphi * p.xi * std::sin(p.theta) / kVelocityScale;
    const double scale_rt = std::hypot(p_r, p_t);
    d_err = std::max(d_err, std::abs(f.D / (kPi * w.rho) - 1.0));
    pr = std::max(pr, rel_err(f.p_r, p_r, scale_rt));
    pt_same = std::max(pt_same, rel_err(f.p_theta, p_t, scale_rt));
    pt_flip = std::max(pt_flip, rel_err(-f.p_theta, p_t, scale_rt));
    pp_sign = std::max(pp_sign, std::min(rel_err(f.p_phi, p_p, std::abs(p_p)),
                                         rel_err(-f.p_phi, p_p, std::abs(p_p))));
    pp_corr = std::max(pp_corr, rel_err(f.p_phi_corrected, p_p, std::abs(p_p)));
    dphi_corr = std::max(dphi_corr, rel_err(f.dphi_dtau_corrected, v.dphi, std::abs(v.dphi)));
  }
  // Pure 1s limit (tau = 0, c_b = 0) of the azimuthal forms.
  const SpatialPoint q{4.0, 1.0, 0.0};
  const PrintedFormCheck at0 = printed_momentum_check(q, 0.0, drive, kBetaNormalized);
  const ScaledVelocity v0 = velocity_field(q, coefficients_printed(0.0, drive));
  const double p_p0 = v0.dphi * q.xi * std::sin(q.theta) / kVelocityScale;
  const double limit_sign = rel_err(-at0.p_phi, p_p0, std::abs(p_p0));
  const double dphi_1s = eigenstate_angular_velocity(Eigenstate::Ground1s, q.xi);

  return {
      item("printed density D equals pi rho with beta = 1/(4 sqrt 2)", d_err < 1e-10,
           "max relative deviation " + fmt(d_err)),
      item("printed radial momentum matches the derived component", pr < 1e-8,
           "max relative error " + fmt(pr)),
      item("printed polar momentum equals the derived component with reversed sign",
           pt_flip < 1e-8,
           "reversed-sign error " + fmt(pt_flip) + "; same-sign error " + fmt(pt_same)),
      item("printed azimuthal momentum equals minus the derived value in the 1s limit",
           limit_sign < 1e-8,
           "1s-limit error " + fmt(limit_sign) + "; off the limit no overall sign fits (error " +
               fmt(pp_sign) + ")"),
      item("azimuthal forms with the |c_a|^2 term of chi_r sign-reversed equal the derived spin term",
           pp_corr < 1e-8 && dphi_corr < 1e-8,
           "p_phi " + fmt(pp_corr) + ", dphi/dtau with prefactor sqrt(2)/3 " + fmt(dphi_corr)),
      item("printed scaled dphi/dtau prefactor nu/(3 sqrt 2 sigma) misses the 1s limit; sqrt(2)/3 restores it",
           std::abs(at0.dphi_dtau - dphi_1s) > 1e-3 &&
               std::abs(at0.dphi_dtau_corrected - dphi_1s) < 1e-10,
           "printed " + fmt(at0.dphi_dtau) + ", corrected " + fmt(at0.dphi_dtau_corrected) +
               ", 8/(3 xi) = " + fmt(dphi_1s))};
}

std::vector<VerifyItem> check_energy(const DriveParameters& drive, std::uint64_t seed) {
  std::mt19937_64 gen(seed + 23);
  std::uniform_real_distribution<double> xi(0.2, 12.0), th(0.05, kPi - 0.05), tau(0.0, 2e4);
  double e1 = 0.0, e2 = 0.0, tprime = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SpatialPoint p{xi(gen), th(gen), 0.0};
    const double t = tau(gen);
    e1 = std::max(e1, std::abs(local_energy(p, {{1, 0}, {0, 0}, t}, drive, false).total_eV -
                               drive.E1_eV));
    e2 = std::max(e2, std::abs(local_energy(p, {{0, 0}, {1, 0}, t}, drive, false).total_eV -
                               drive.E2_eV()));
    const LocalEnergy direct = local_energy(p, coefficients_printed(t, drive), drive, true);
    const LocalEnergy printed = local_energy_printed(p, t, drive);
    if (!direct.clipped) {
      tprime = std::max(tprime, rel_err(printed.total_eV, direct.total_eV,
                                        std::abs(direct.total_eV)));
    }
  }
  return {item("frozen 1s local energy equals E1 everywhere", e1 < 1e-10,
               "max deviation " + fmt(e1) + " eV"),
          item("frozen 2p0 local energy equals E2 everywhere", e2 < 1e-10,
               "max deviation " + fmt(e2) + " eV"),
          item("printed T' energy form equals the direct complex form", tprime < 1e-10,
               "max relative deviation " + fmt(tprime))};
}

template <class V>
void append(std::vector<VerifyItem>& out, V&& more) {
  for (auto& i : more) out.push_back(std::move(i));
}

}  // namespace

std::vector<VerifyItem> run_verify_suite(const VerifyOptions& options) {
  const DriveParameters drive = reference_drive();
  std::vector<VerifyItem> out;
  out.push_back(check_coefficient_oracle(drive));
  out.push_back(check_unitarity(drive));
  out.push_back(check_transition_peak(drive));
  out.push_back(check_printed_conjugate(drive));
  out.push_back(check_envelopes(drive, false));
  out.push_back(check_envelopes(drive, true));
  append(out, check_gradients(drive, options.seed));
  append(out, check_eigenstates(options.field, options.seed));
  out.push_back(check_normalization(drive));
  append(out, check_continuity(drive, options.seed));
  append(out, check_surfaces());
  append(out, check_printed_forms(drive, options.seed));
  append(out, check_energy(drive, options.seed));
  return out;
}

}  // namespace bohm
