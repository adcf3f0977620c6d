#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "sphspec/basis.hpp"
#include "sphspec/potential.hpp"
#include "sphspec/volterra.hpp"

namespace sphspec {

struct SpectrumOptions {
  SolverOptions solver = [] {
    SolverOptions o;
    o.tol = 1e-12;
    return o;
  }();
  // Search window half-width in sqrt z: max(8 C eps(j^2), window_floor (1 + |j|)).
  double window_constant = 1.0;
  double window_floor = 1e-8;
  int max_doublings = 4;
  // Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct EigenvalueRecord {
  // 1-based for Dirichlet, 0-based for Robin
  int n = 0;
  double lambda = 0.0;
  // sign(lambda) sqrt|lambda|
  double sqrt_lambda = 0.0;
  // Signed square root of the unperturbed eigenvalue: j_{nu,n} or its Robin analogue.
  double bessel_zero = 0.0;
  double eps_n = 0.0;
  // Final bracket in sqrt z.
  double lo = 0.0;
  double hi = 0.0;
  double boundary_residual = 0.0;
  double window = 0.0;
  int doublings = 0;
};

// phi(z,1) for Dirichlet, phi'(z,1) + beta phi(z,1) for Robin.
double boundary_function(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc, double z,
                         const SolverOptions& opts = {});

// Lowest n_max eigenvalues, found near the unperturbed ones and isolated with the
// oscillation count.  tol is the relative tolerance on sqrt z.
std::vector<EigenvalueRecord> eigenvalues(const AngularMomentum& am, const PotentialSpec& p,
                                          const BoundaryCondition& bc, int n_max, double tol = 1e-13,
                                          const SpectrumOptions& opts = {});

// Number of eigenvalues strictly below z.
int eigenvalue_count(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc, double z,
                     const SolverOptions& opts = {});

struct EpsEntry {
  int n = 0;
  double eps = 0.0;
  // eps(j_n^2)
  double bound = 0.0;
  double ratio = 0.0;
};

std::vector<EpsEntry> eps_sequence(const AngularMomentum& am, const PotentialSpec& p,
                                   const std::vector<EigenvalueRecord>& records);

// d/dz of the boundary function by fourth-order central differences with one
// Richardson step; h = h_rel (1 + |z|).
double boundary_z_derivative(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc, double z,
                             double h_rel = 1e-4, const SolverOptions& opts = {});
// d/dz phi(z, 1)
double phi_z_derivative(const AngularMomentum& am, const PotentialSpec& p, double z, double h_rel = 1e-4,
                        const SolverOptions& opts = {});

struct NormingRecord {
  int n = 0;
  double lambda = 0.0;
  // from the integral of phi^2 (authoritative)
  double gamma = 0.0;
  // from the z-derivative of the boundary function, in magnitude
  double gamma_derivative = 0.0;
  // |gamma^-1 - |derivative form|| / gamma^-1
  double rel_diff = 0.0;
  bool flagged = false;
};

std::vector<NormingRecord> norming_constants(const AngularMomentum& am, const PotentialSpec& p,
                                             const BoundaryCondition& bc,
                                             const std::vector<EigenvalueRecord>& records,
                                             const SpectrumOptions& opts = {});

// m_beta(z) = (phi - beta phi') / (phi' + beta phi) at x = 1; beta = infinity gives -phi'/phi.
double weyl_m(const AngularMomentum& am, const PotentialSpec& p, double beta, double z,
              const SolverOptions& opts = {});

enum class LimitType { limit_circle, limit_point };
LimitType limit_classification(const AngularMomentum& am);
std::string_view to_string(LimitType t);

struct CounterexampleResult {
  double c = 0.0;
  double z_star = 0.0;
  // first unperturbed Dirichlet eigenvalue
  double mu1 = 0.0;
  // max |W(psi~, phi)| over interior sample points for q = c at z*
  double wronskian = 0.0;
  // W(psi~, phi) for q = 0 at z*
  double wronskian_unperturbed = 0.0;
};

// Constant potential c placing the first Dirichlet eigenvalue on the first zero of
// theta_l(., 1) above it.
CounterexampleResult counterexample_wronskian(const AngularMomentum& am, const SolverOptions& opts = {});

enum class DatasetKind { two_spectra, spectrum_plus_norming, spectrum_plus_boundary };
enum class BoundaryDatum { value, derivative };

std::string_view to_string(DatasetKind k);
std::string_view to_string(BoundaryDatum d);

struct DatasetRequest {
  DatasetKind kind = DatasetKind::two_spectra;
  // infinity means Dirichlet
  double alpha = std::numeric_limits<double>::infinity();
  double beta = 0.0;
  BoundaryDatum which = BoundaryDatum::value;
};

struct SpectralDataset {
  DatasetKind kind = DatasetKind::two_spectra;
  std::string l;
  std::string potential_label;
  int n_max = 0;
  double tol = 0.0;
  // boundary parameters as text: decimal or "inf"
  std::string alpha;
  std::string beta;
  BoundaryDatum which = BoundaryDatum::value;
  // two spectra: lambda^alpha and lambda^beta; otherwise the spectrum for beta and
  // the norming constants or boundary values.
  std::vector<double> first;
  std::vector<double> second;

  std::string to_json() const;
  static SpectralDataset from_json(std::string_view text);
  // columns index,first,second
  void write_csv(std::ostream& out) const;
  bool operator==(const SpectralDataset&) const = default;
};

SpectralDataset export_spectral_data(const DatasetRequest& req, const AngularMomentum& am, const PotentialSpec& p,
                                     int n_max, double tol = 1e-13, const SpectrumOptions& opts = {});

// Shortest round-trip text for a double, or "inf" / "-inf".
std::string format_real(double v);
// Decimal text or "inf"; throws DomainError otherwise.
double parse_real(std::string_view text);

}  // namespace sphspec
