#pragma once

#include <vector>

#include "sphspec/basis.hpp"
#include "sphspec/potential.hpp"

namespace sphspec {

enum class LeftBoundary { dirichlet_at_delta, frobenius_ratio };

// Three-point finite differences on [delta, 1] with step h = (1 - delta) / (M + 1).
struct FdConfig {
  double delta = 1e-4;
  int M = 20000;
  LeftBoundary left_bc = LeftBoundary::dirichlet_at_delta;

  double h() const { return (1 - delta) / (M + 1); }
  // Config with step close to h.
  static FdConfig from_step(double h, double delta, LeftBoundary left = LeftBoundary::dirichlet_at_delta);
};

// Lowest n_max eigenvalues of the discretization, by Sturm-sequence bisection.
std::vector<double> fd_eigenvalues(const AngularMomentum& am, const PotentialSpec& p, const FdConfig& cfg,
                                   const BoundaryCondition& bc, int n_max);

// Per-eigenvalue fit lambda(h, delta) = lambda* + c1 h^2 + c2 delta.
struct RefinementFit {
  int n = 0;
  double lambda_star = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  // residual rms of the fit
  double rms = 0.0;

  double budget(double h, double delta) const;
};

std::vector<RefinementFit> fd_refinement(const AngularMomentum& am, const PotentialSpec& p,
                                         const BoundaryCondition& bc, int n_max, const std::vector<double>& steps,
                                         const std::vector<double>& deltas,
                                         LeftBoundary left = LeftBoundary::dirichlet_at_delta);

struct OscillationCount {
  int count = 0;
  // two sign changes closer than 3 mesh cells
  bool resolution_warning = false;
};

// Sign changes of phi(z, .) on a sampled graded mesh of mesh_size points.
OscillationCount oscillation_count(const AngularMomentum& am, const PotentialSpec& p, double z,
                                   int mesh_size = 4000);

}  // namespace sphspec
