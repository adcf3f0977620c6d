#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "sphspec/basis.hpp"
#include "sphspec/potential.hpp"
#include "sphspec/quadrature.hpp"

namespace sphspec {

struct SolverOptions {
  int max_iterations = 60;
  // Picard stops once the weighted sup norm of an increment is below tol times
  // the weighted sup norm of the running sum.
  double tol = 1e-10;
  // Panel width at most panel_factor / (1 + |z|^{1/2}), and at most max_panel.
  double panel_factor = 3.0;
  double max_panel = 0.125;
  // Width of the innermost dyadic panel at x = 0.
  double dyadic_floor = 1e-15;
};

enum class SolutionKind { phi, psi_beta, psi_infinity, psi_data };

// A converged Picard solution, evaluable at any x in (0, 1].
//
// Values are returned scaled: the true value is value * exp(log_scale), with
// log_scale = |Im sqrt z| x for phi and |Im sqrt z| (1 - x) for psi.
class VolterraSolution {
 public:
  struct Point {
    double value = 0.0;
    double deriv = 0.0;
    // solution minus its unperturbed counterpart, same scale
    double delta = 0.0;
    double delta_deriv = 0.0;
    double log_scale = 0.0;

    double true_value() const;
    double true_deriv() const;
  };

  Point at(double x) const;
  Point at_one() const { return at(1.0); }

  SolutionKind kind() const { return kind_; }
  double z() const { return z_; }
  int iterations() const { return iterations_; }
  // Relative increment norms, one per Picard step.
  const std::vector<double>& increment_history() const { return history_; }
  double increment_norm() const { return history_.empty() ? 0.0 : history_.back(); }
  // Sign changes of the solution on the quadrature nodes and x = 1.
  int sign_changes() const { return sign_changes_; }
  // Smallest number of nodes separating consecutive sign changes.
  int min_sign_change_gap() const { return min_gap_; }
  // integral of u(x)^2 over (0, 1), divided by exp(2 * log_scale at x = 1)
  double square_integral_scaled() const;
  std::size_t node_count() const { return y_.size(); }

 private:
  friend class VolterraBuilder;

  AngularMomentum am_{0.0};
  SolutionKind kind_ = SolutionKind::phi;
  double z_ = 0.0;
  double s_ = 0.0;
  bool forward_ = true;
  // psi initial data coefficients on the scaled basis
  double c1_ = 0.0;
  double c2_ = 0.0;
  int iterations_ = 0;
  std::vector<double> history_;
  int sign_changes_ = 0;
  int min_gap_ = std::numeric_limits<int>::max();

  std::vector<Panel> panels_;
  std::vector<double> y_;
  std::vector<double> value_;
  // Legendre coefficients of the final integrands and running integrals at the
  // panel start (forward) or end (backward)
  std::vector<double> coef_a_;
  std::vector<double> coef_b_;
  std::vector<double> run_a_;
  std::vector<double> run_b_;
};

VolterraSolution solve_phi_full(const AngularMomentum& am, const PotentialSpec& p, double z,
                                const SolverOptions& opts = {});
// Backward solution with u(1) = a, u'(1) = b.
VolterraSolution solve_psi_full(const AngularMomentum& am, const PotentialSpec& p, double a, double b, double z,
                                const SolverOptions& opts = {}, SolutionKind kind = SolutionKind::psi_data);
// psi^beta with (1, -beta), or psi^infinity with (0, 1) when beta is infinite.
VolterraSolution solve_psi_beta(const AngularMomentum& am, const PotentialSpec& p, double beta, double z,
                                const SolverOptions& opts = {});

// Sampled solution on the graded mesh x_k = (k/M)^p, k = 1..M.
struct SolutionGrid {
  std::vector<double> mesh;
  std::vector<double> values;  // scaled, see log_scale
  std::vector<double> deriv;
  std::vector<double> log_scale;
  double z = 0.0;
  SolutionKind kind = SolutionKind::phi;
  double beta = std::numeric_limits<double>::infinity();
  int iterations_used = 0;
  double increment_norm = 0.0;
  double grading = 2.0;

  double true_value(std::size_t k) const;
  double true_deriv(std::size_t k) const;
  // CSV with columns x,value,deriv (true values)
  void write_csv(std::ostream& out) const;
};

SolutionGrid sample(const VolterraSolution& sol, int mesh_size, double grading = 2.0);

SolutionGrid solve_phi(const AngularMomentum& am, const PotentialSpec& p, double z, int mesh_size, double tol);
SolutionGrid solve_psi(const AngularMomentum& am, const PotentialSpec& p, double beta, double z, int mesh_size,
                       double tol);

// Scaled three-point residual of -u'' + (l(l+1)/x^2 + q - z) u over nodes x >= x_cutoff.
double ode_residual(const SolutionGrid& s, const AngularMomentum& am, const PotentialSpec& p, double x_cutoff = 1e-2);

}  // namespace sphspec
