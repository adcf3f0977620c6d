#include "sphspec/volterra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "sphspec/errors.hpp"

namespace sphspec {

namespace {

constexpr int kP = PanelRule::kPoints;

std::string history_text(const std::vector<double>& h) {
  std::ostringstream os;
  os.precision(3);
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? " " : "") << h[i];
  return os.str();
}

}  // namespace

class VolterraBuilder {
 public:
  VolterraBuilder(const AngularMomentum& am, const PotentialSpec& p, double z, const SolverOptions& opts,
                  bool forward, double a, double b, SolutionKind kind)
      : am_(am), p_(p), z_(z), opts_(opts), forward_(forward), a_(a), b_(b), kind_(kind) {}

  VolterraSolution run();

 private:
  void setup();
  // One Picard step applied to `cur`; writes the increment and its derivative.
  void sweep(const std::vector<double>& cur, std::vector<double>& out, std::vector<double>& outp, bool store);

  const AngularMomentum& am_;
  const PotentialSpec& p_;
  double z_;
  SolverOptions opts_;
  bool forward_;
  double a_, b_;
  SolutionKind kind_;

  double s_ = 0.0;
  double c1_ = 0.0, c2_ = 0.0;
  std::vector<Panel> panels_;
  std::vector<double> y_, u1_, u1p_, u2_, u2p_, q_, w_, ein_, eout_, decay_;
  std::vector<double> init_, initp_;
  std::vector<double> coef_a_, coef_b_, run_a_, run_b_;
};

void VolterraBuilder::setup() {
  if (!std::isfinite(z_)) throw DomainError("spectral parameter must be finite");
  const double k = std::sqrt(std::fabs(z_));
  s_ = z_ < 0 ? k : 0.0;
  const double l = am_.l();
  const double h_max = std::min(opts_.max_panel, opts_.panel_factor / (1 + k));
  // Keep x^{-2l-1} representable on the innermost panel.
  const double floor = std::max(opts_.dyadic_floor, std::pow(10.0, -200.0 / (2 * l + 2)));
  panels_ = graded_panels(h_max, p_.breakpoints(), floor);

  const auto& rule = PanelRule::instance();
  const std::size_t n = panels_.size() * kP;
  y_.resize(n);
  u1_.resize(n);
  u1p_.resize(n);
  u2_.resize(n);
  u2p_.resize(n);
  q_.resize(n);
  w_.resize(n);
  ein_.resize(n);
  eout_.resize(n);
  decay_.resize(panels_.size());
  for (std::size_t pi = 0; pi < panels_.size(); ++pi) {
    const Panel& pn = panels_[pi];
    const double h2 = 0.5 * (pn.b - pn.a), m = 0.5 * (pn.a + pn.b);
    decay_[pi] = std::exp(-4 * s_ * h2);
    for (int j = 0; j < kP; ++j) {
      const std::size_t i = pi * kP + j;
      const double y = m + h2 * rule.nodes()[j];
      y_[i] = y;
      const BasisEval e = basis_eval(am_, z_, y);
      u1_[i] = e.phi;
      u1p_[i] = e.phi_x;
      u2_[i] = e.chi;
      u2p_[i] = e.chi_x;
      q_[i] = p_(y);
      if (forward_) {
        w_[i] = std::pow(y / (1 + k * y), l + 1);
        ein_[i] = std::exp(2 * s_ * (y - pn.a));
        eout_[i] = 1 / ein_[i];
      } else {
        double w = std::pow((1 + k * y) / (y + k * y), l);
        if (am_.log_case()) w *= 1 - std::log(y);
        w_[i] = w;
        ein_[i] = std::exp(2 * s_ * (pn.b - y));
        eout_[i] = 1 / ein_[i];
      }
    }
  }

  init_.resize(n);
  initp_.resize(n);
  if (forward_) {
    init_ = u1_;
    initp_ = u1p_;
  } else {
    const BasisEval e1 = basis_eval(am_, z_, 1.0);
    c1_ = b_ * e1.chi - a_ * e1.chi_x;
    c2_ = a_ * e1.phi_x - b_ * e1.phi;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = std::exp(2 * s_ * (y_[i] - 1));
      init_[i] = c1_ * u1_[i] * g + c2_ * u2_[i];
      initp_[i] = c1_ * u1p_[i] * g + c2_ * u2p_[i];
    }
  }
}

void VolterraBuilder::sweep(const std::vector<double>& cur, std::vector<double>& out, std::vector<double>& outp,
                            bool store) {
  const auto& rule = PanelRule::instance();
  const std::size_t np = panels_.size();
  if (store) {
    coef_a_.assign(np * kP, 0.0);
    coef_b_.assign(np * kP, 0.0);
    run_a_.assign(np, 0.0);
    run_b_.assign(np, 0.0);
  }
  std::array<double, kP> fa, fb;
  double ra = 0.0, rb = 0.0;
  for (std::size_t step = 0; step < np; ++step) {
    const std::size_t pi = forward_ ? step : np - 1 - step;
    const Panel& pn = panels_[pi];
    const double h2 = 0.5 * (pn.b - pn.a);
    const std::size_t o = pi * kP;
    double ta = 0.0, tb = 0.0;
    for (int j = 0; j < kP; ++j) {
      const double qc = q_[o + j] * cur[o + j];
      if (forward_) {
        fa[j] = u2_[o + j] * qc;
        fb[j] = u1_[o + j] * qc * ein_[o + j];
      } else {
        fa[j] = u2_[o + j] * qc * ein_[o + j];
        fb[j] = u1_[o + j] * qc;
      }
      ta += rule.weights()[j] * fa[j];
      tb += rule.weights()[j] * fb[j];
    }
    for (int i = 0; i < kP; ++i) {
      double sa = 0.0, sb = 0.0;
      for (int j = 0; j < kP; ++j) {
        sa += rule.cumulative(i, j) * fa[j];
        sb += rule.cumulative(i, j) * fb[j];
      }
      const std::size_t n = o + i;
      if (forward_) {
        const double av = ra + h2 * sa;
        const double bv = eout_[n] * (rb + h2 * sb);
        out[n] = u1_[n] * av - u2_[n] * bv;
        outp[n] = u1p_[n] * av - u2p_[n] * bv;
      } else {
        const double av = eout_[n] * (ra + h2 * (ta - sa));
        const double bv = rb + h2 * (tb - sb);
        out[n] = -u1_[n] * av + u2_[n] * bv;
        outp[n] = -u1p_[n] * av + u2p_[n] * bv;
      }
    }
    if (store) {
      rule.legendre_coefficients(fa.data(), &coef_a_[o]);
      rule.legendre_coefficients(fb.data(), &coef_b_[o]);
      run_a_[pi] = ra;
      run_b_[pi] = rb;
    }
    if (forward_) {
      ra += h2 * ta;
      rb = decay_[pi] * (rb + h2 * tb);
    } else {
      ra = decay_[pi] * (ra + h2 * ta);
      rb += h2 * tb;
    }
  }
}

VolterraSolution VolterraBuilder::run() {
  setup();
  const std::size_t n = y_.size();
  std::vector<double> total = init_, cur = init_, inc(n), incp(n);
  std::vector<double> history;
  int iterations = 0;
  if (!p_.is_zero()) {
    bool converged = false;
    for (int it = 1; it <= opts_.max_iterations; ++it) {
      sweep(cur, inc, incp, false);
      double ni = 0.0, nt = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        total[i] += inc[i];
        ni = std::max(ni, std::fabs(inc[i]) / w_[i]);
        nt = std::max(nt, std::fabs(total[i]) / w_[i]);
      }
      if (!std::isfinite(ni) || !std::isfinite(nt)) {
        throw NonConvergence("Picard iteration overflowed; increments: " + history_text(history));
      }
      const double rel = nt > 0 ? ni / nt : 0.0;
      history.push_back(rel);
      iterations = it;
      if (rel <= opts_.tol) {
        converged = true;
        break;
      }
      cur.swap(inc);
    }
    if (!converged) {
      throw NonConvergence("Picard iteration did not reach tol " + std::to_string(opts_.tol) + " in " +
                           std::to_string(opts_.max_iterations) + " steps; increments: " + history_text(history));
    }
  }

  // Final pass with the converged sum; its integrands serve evaluation anywhere.
  std::vector<double> value(n), deriv(n);
  sweep(total, value, deriv, true);
  for (std::size_t i = 0; i < n; ++i) value[i] += init_[i];

  VolterraSolution sol;
  sol.am_ = am_;
  sol.kind_ = kind_;
  sol.z_ = z_;
  sol.s_ = s_;
  sol.forward_ = forward_;
  sol.c1_ = c1_;
  sol.c2_ = c2_;
  sol.iterations_ = iterations;
  sol.history_ = std::move(history);
  sol.panels_ = std::move(panels_);
  sol.y_ = std::move(y_);
  sol.coef_a_ = std::move(coef_a_);
  sol.coef_b_ = std::move(coef_b_);
  sol.run_a_ = std::move(run_a_);
  sol.run_b_ = std::move(run_b_);

  // Sign changes along the nodes (and x = 1).
  std::vector<double> samples = value;
  samples.push_back(sol.at(1.0).value);
  int changes = 0, last = -1;
  int prev_sign = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const int sg = samples[i] > 0 ? 1 : (samples[i] < 0 ? -1 : 0);
    if (sg == 0) continue;
    if (prev_sign != 0 && sg != prev_sign) {
      ++changes;
      if (last >= 0) sol.min_gap_ = std::min(sol.min_gap_, static_cast<int>(i) - last);
      last = static_cast<int>(i);
    }
    prev_sign = sg;
  }
  sol.sign_changes_ = changes;
  sol.value_ = std::move(value);
  return sol;
}

double VolterraSolution::Point::true_value() const { return value * std::exp(log_scale); }
double VolterraSolution::Point::true_deriv() const { return deriv * std::exp(log_scale); }

VolterraSolution::Point VolterraSolution::at(double x) const {
  if (!(x > 0.0) || !(x <= 1.0)) throw DomainError("solution evaluation requires x in (0, 1]");
  auto it = std::upper_bound(panels_.begin(), panels_.end(), x, [](double v, const Panel& p) { return v < p.a; });
  std::size_t pi = it == panels_.begin() ? 0 : static_cast<std::size_t>(it - panels_.begin()) - 1;
  const Panel& pn = panels_[pi];
  const double h2 = 0.5 * (pn.b - pn.a);
  const double tau = std::clamp((2 * x - pn.a - pn.b) / (pn.b - pn.a), -1.0, 1.0);
  const double* ca = &coef_a_[pi * kP];
  const double* cb = &coef_b_[pi * kP];
  const BasisEval e = basis_eval(am_, z_, x);
  Point pt;
  if (forward_) {
    const double av = run_a_[pi] + h2 * PanelRule::integral_to(ca, tau);
    const double bv = std::exp(-2 * s_ * (x - pn.a)) * (run_b_[pi] + h2 * PanelRule::integral_to(cb, tau));
    pt.delta = e.phi * av - e.chi * bv;
    pt.delta_deriv = e.phi_x * av - e.chi_x * bv;
    pt.value = e.phi + pt.delta;
    pt.deriv = e.phi_x + pt.delta_deriv;
    pt.log_scale = s_ * x;
  } else {
    const double ta = PanelRule::integral_to(ca, 1.0), tb = PanelRule::integral_to(cb, 1.0);
    const double av =
        std::exp(-2 * s_ * (pn.b - x)) * (run_a_[pi] + h2 * (ta - PanelRule::integral_to(ca, tau)));
    const double bv = run_b_[pi] + h2 * (tb - PanelRule::integral_to(cb, tau));
    pt.delta = -e.phi * av + e.chi * bv;
    pt.delta_deriv = -e.phi_x * av + e.chi_x * bv;
    const double g = std::exp(2 * s_ * (x - 1));
    pt.value = c1_ * e.phi * g + c2_ * e.chi + pt.delta;
    pt.deriv = c1_ * e.phi_x * g + c2_ * e.chi_x + pt.delta_deriv;
    pt.log_scale = s_ * (1 - x);
  }
  return pt;
}

double VolterraSolution::square_integral_scaled() const {
  const auto& rule = PanelRule::instance();
  const double end_scale = forward_ ? s_ : 0.0;
  double total = 0.0;
  for (std::size_t pi = 0; pi < panels_.size(); ++pi) {
    const double h2 = 0.5 * (panels_[pi].b - panels_[pi].a);
    double sum = 0.0;
    for (int j = 0; j < kP; ++j) {
      const std::size_t i = pi * kP + j;
      const double ls = forward_ ? s_ * y_[i] : s_ * (1 - y_[i]);
      const double v = value_[i] * std::exp(ls - end_scale);
      sum += rule.weights()[j] * v * v;
    }
    total += h2 * sum;
  }
  return total;
}

VolterraSolution solve_phi_full(const AngularMomentum& am, const PotentialSpec& p, double z,
                                const SolverOptions& opts) {
  return VolterraBuilder(am, p, z, opts, true, 0.0, 0.0, SolutionKind::phi).run();
}

VolterraSolution solve_psi_full(const AngularMomentum& am, const PotentialSpec& p, double a, double b, double z,
                                const SolverOptions& opts, SolutionKind kind) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("endpoint data must be finite");
  return VolterraBuilder(am, p, z, opts, false, a, b, kind).run();
}

VolterraSolution solve_psi_beta(const AngularMomentum& am, const PotentialSpec& p, double beta, double z,
                                const SolverOptions& opts) {
  if (std::isinf(beta)) return solve_psi_full(am, p, 0.0, 1.0, z, opts, SolutionKind::psi_infinity);
  if (std::isnan(beta)) throw DomainError("beta must be a real number or infinity");
  return solve_psi_full(am, p, 1.0, -beta, z, opts, SolutionKind::psi_beta);
}

double SolutionGrid::true_value(std::size_t k) const { return values.at(k) * std::exp(log_scale.at(k)); }
double SolutionGrid::true_deriv(std::size_t k) const { return deriv.at(k) * std::exp(log_scale.at(k)); }

void SolutionGrid::write_csv(std::ostream& out) const {
  out << "x,value,deriv\n";
  char buf[128];
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", mesh[k], true_value(k), true_deriv(k));
    out << buf;
  }
}

SolutionGrid sample(const VolterraSolution& sol, int mesh_size, double grading) {
  if (mesh_size < 3) throw DomainError("mesh size must be at least 3");
  if (!(grading >= 2.0)) throw DomainError("grading exponent must be >= 2");
  SolutionGrid g;
  g.z = sol.z();
  g.kind = sol.kind();
  g.iterations_used = sol.iterations();
  g.increment_norm = sol.increment_norm();
  g.grading = grading;
  g.mesh.reserve(mesh_size);
  for (int k = 1; k <= mesh_size; ++k) {
    const double x = k == mesh_size ? 1.0 : std::pow(static_cast<double>(k) / mesh_size, grading);
    const auto pt = sol.at(x);
    g.mesh.push_back(x);
    g.values.push_back(pt.value);
    g.deriv.push_back(pt.deriv);
    g.log_scale.push_back(pt.log_scale);
  }
  return g;
}

SolutionGrid solve_phi(const AngularMomentum& am, const PotentialSpec& p, double z, int mesh_size, double tol) {
  weighted_norm(p, am);
  SolverOptions opts;
  opts.tol = tol;
  return sample(solve_phi_full(am, p, z, opts), mesh_size);
}

SolutionGrid solve_psi(const AngularMomentum& am, const PotentialSpec& p, double beta, double z, int mesh_size,
                       double tol) {
  weighted_norm(p, am);
  SolverOptions opts;
  opts.tol = tol;
  SolutionGrid g = sample(solve_psi_beta(am, p, beta, z, opts), mesh_size);
  g.beta = beta;
  return g;
}

double ode_residual(const SolutionGrid& s, const AngularMomentum& am, const PotentialSpec& p, double x_cutoff) {
  const double ll = am.l() * (am.l() + 1);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < s.mesh.size(); ++k) {
    const double x = s.mesh[k];
    if (x < x_cutoff) continue;
    const double hm = x - s.mesh[k - 1], hp = s.mesh[k + 1] - x;
    const double ls = s.log_scale[k];
    const double um = s.values[k - 1] * std::exp(s.log_scale[k - 1] - ls);
    const double up = s.values[k + 1] * std::exp(s.log_scale[k + 1] - ls);
    const double u = s.values[k];
    const double d2 = 2 * ((up - u) / hp - (u - um) / hm) / (hp + hm);
    const double r = std::fabs(-d2 + (ll / (x * x) + p(x) - s.z) * u) / (1 + std::fabs(s.z));
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace sphspec
