#include "sphspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphspec/errors.hpp"
#include "sphspec/volterra.hpp"

namespace sphspec {

namespace {

// Symmetric tridiagonal pencil A - lambda D with constant off-diagonal.
struct Pencil {
  std::vector<double> diag;
  std::vector<double> mass;
  double off = 0.0;

  int count_below(double lambda) const {
    int neg = 0;
    double d = 1.0;
    const double off2 = off * off;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      d = diag[i] - lambda * mass[i] - (i ? off2 / d : 0.0);
      if (d == 0.0) d = -std::numeric_limits<double>::min();
      if (d < 0) ++neg;
    }
    return neg;
  }

  double lower_bound() const {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < diag.size(); ++i) {
      double r = 0.0;
      if (i > 0) r += std::fabs(off) / std::sqrt(mass[i] * mass[i - 1]);
      if (i + 1 < diag.size()) r += std::fabs(off) / std::sqrt(mass[i] * mass[i + 1]);
      lo = std::min(lo, diag[i] / mass[i] - r);
    }
    return lo;
  }
};

// Mean of gamma / x over [a, b].
double coulomb_mean(double gamma, double a, double b) { return gamma * std::log(b / a) / (b - a); }

Pencil assemble(const AngularMomentum& am, const PotentialSpec& p, const FdConfig& cfg, const BoundaryCondition& bc) {
  const double h = cfg.h(), d = cfg.delta, ih2 = 1 / (h * h);
  const double ll = am.l() * (am.l() + 1), g = p.coulomb_gamma();
  const bool frob = cfg.left_bc == LeftBoundary::frobenius_ratio;
  const bool robin = !bc.is_dirichlet();
  // node index range in x_i = delta + i h, i = 0..M+1
  const int first = frob ? 0 : 1;
  const int last = robin ? cfg.M + 1 : cfg.M;
  Pencil pc;
  pc.off = -ih2;
  for (int i = first; i <= last; ++i) {
    const double x = i == cfg.M + 1 ? 1.0 : d + i * h;
    double a, b;
    if (i == 0) {
      a = x;
      b = x + h / 2;
    } else if (i == cfg.M + 1) {
      a = x - h / 2;
      b = x;
    } else {
      a = x - h / 2;
      b = x + h / 2;
    }
    const double v = ll / (x * x) + p.regular(x) + (g != 0 ? coulomb_mean(g, a, b) : 0.0);
    if (i == 0) {
      pc.diag.push_back((1 + h * (am.l() + 1) / d) * ih2 + v / 2);
      pc.mass.push_back(0.5);
    } else if (i == cfg.M + 1) {
      pc.diag.push_back((1 + h * bc.beta) * ih2 + v / 2);
      pc.mass.push_back(0.5);
    } else {
      pc.diag.push_back(2 * ih2 + v);
      pc.mass.push_back(1.0);
    }
  }
  return pc;
}

}  // namespace

FdConfig FdConfig::from_step(double h, double delta, LeftBoundary left) {
  FdConfig c;
  c.delta = delta;
  c.M = static_cast<int>(std::lround((1 - delta) / h)) - 1;
  c.left_bc = left;
  return c;
}

std::vector<double> fd_eigenvalues(const AngularMomentum& am, const PotentialSpec& p, const FdConfig& cfg,
                                   const BoundaryCondition& bc, int n_max) {
  if (!(cfg.delta > 0 && cfg.delta <= 0.05)) throw DomainError("delta must lie in (0, 0.05]");
  if (cfg.M < 100) throw DomainError("M must be at least 100");
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  if (cfg.M < 20 * n_max) throw DomainError("M too small for n_max: need M >= 20 n_max");
  // The ratio condition samples x^{l+1} at delta; it needs several cells inside delta.
  if (cfg.left_bc == LeftBoundary::frobenius_ratio && cfg.h() > cfg.delta / 2) {
    throw DomainError("frobenius_ratio needs h <= delta / 2");
  }
  const Pencil pc = assemble(am, p, cfg, bc);
  std::vector<double> out;
  double lo = pc.lower_bound();
  for (int k = 1; k <= n_max; ++k) {
    double a = lo, b = std::max(1.0, std::fabs(lo));
    while (pc.count_below(b) < k) b *= 2;
    for (int it = 0; it < 200 && b - a > 4e-16 * std::max(1.0, std::fabs(b)); ++it) {
      const double m = 0.5 * (a + b);
      if (pc.count_below(m) >= k)
        b = m;
      else
        a = m;
    }
    out.push_back(0.5 * (a + b));
    lo = a;
  }
  return out;
}

double RefinementFit::budget(double h, double delta) const {
  return std::fabs(c1) * h * h + std::fabs(c2) * delta + 3 * rms;
}

std::vector<RefinementFit> fd_refinement(const AngularMomentum& am, const PotentialSpec& p,
                                         const BoundaryCondition& bc, int n_max, const std::vector<double>& steps,
                                         const std::vector<double>& deltas, LeftBoundary left) {
  const std::size_t rows = steps.size() * deltas.size();
  if (rows < 4) throw DomainError("refinement needs at least four (h, delta) pairs");
  std::vector<std::vector<double>> lam;
  std::vector<double> hh, dd;
  for (double h : steps) {
    for (double d : deltas) {
      const FdConfig cfg = FdConfig::from_step(h, d, left);
      lam.push_back(fd_eigenvalues(am, p, cfg, bc, n_max));
      hh.push_back(cfg.h());
      dd.push_back(d);
    }
  }
  // Normal equations for three unknowns.
  std::vector<RefinementFit> out;
  for (int n = 0; n < n_max; ++n) {
    double m[3][4] = {};
    for (std::size_t r = 0; r < rows; ++r) {
      const double row[3] = {1.0, hh[r] * hh[r], dd[r]};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] += row[i] * row[j];
        m[i][3] += row[i] * lam[r][n];
      }
    }
    for (int c = 0; c < 3; ++c) {
      int piv = c;
      for (int r = c + 1; r < 3; ++r)
        if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
      std::swap(m[c], m[piv]);
      for (int r = 0; r < 3; ++r) {
        if (r == c) continue;
        const double f = m[r][c] / m[c][c];
        for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
      }
    }
    RefinementFit f;
    f.n = n;
    f.lambda_star = m[0][3] / m[0][0];
    f.c1 = m[1][3] / m[1][1];
    f.c2 = m[2][3] / m[2][2];
    double ss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double e = lam[r][n] - (f.lambda_star + f.c1 * hh[r] * hh[r] + f.c2 * dd[r]);
      ss += e * e;
    }
    f.rms = std::sqrt(ss / rows);
    out.push_back(f);
  }
  return out;
}

OscillationCount oscillation_count(const AngularMomentum& am, const PotentialSpec& p, double z, int mesh_size) {
  const SolutionGrid g = solve_phi(am, p, z, mesh_size, 1e-12);
  OscillationCount oc;
  int prev = 0;
  long last = -1;
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const double v = g.values[k];
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) {
      ++oc.count;
      if (last >= 0 && static_cast<long>(k) - last < 3) oc.resolution_warning = true;
      last = static_cast<long>(k);
    }
    prev = s;
  }
  return oc;
}

}  // namespace sphspec
