#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphspec/basis.hpp"
#include "sphspec/potential.hpp"

namespace sphspec {

// Unperturbed: phi_l, G_l, G_{-1/2} and their x-derivatives.
// Perturbed: phi - phi_l, phi' - phi_l', psi^infinity - psi_l^infinity, psi^beta - psi_l^beta.
enum class BoundId { estphil, estGl, a8, estphilp, estGlp, a21, estphi, estphi_prime, estpsi_B, estpsi };

std::string_view to_string(BoundId id);
BoundId parse_bound_id(std::string_view text);
bool is_perturbed(BoundId id);

struct GridSpec {
  std::vector<double> ls = {-0.5, -0.3, 0.0, 0.5, 1.0, 2.5};
  // |z| log-spaced on [z_min, z_max], both signs when with_negative
  double z_min = 1e-2;
  double z_max = 1e6;
  int z_per_decade = 2;
  bool with_negative = true;
  // x log-spaced on [x_min, 1]; y taken from the same points with y <= x
  double x_min = 1e-4;
  int x_per_decade = 3;
  // Green-kernel samples keep y >= y_floor.
  double y_floor = 0.0;
  // Drop the (1 - log y) factor from the l = -1/2 kernel envelopes.
  bool drop_log_factor = false;
  // Robin parameter for estpsi.
  double beta = 1.0;

  std::vector<double> z_values() const;
  std::vector<double> x_values() const;
  std::string describe() const;
};

struct BoundSample {
  double l = 0.0;
  double z = 0.0;
  double x = 0.0;
  double y = 0.0;  // 0 when unused
  double ratio = 0.0;
};

struct BoundReport {
  BoundId bound_id = BoundId::estphil;
  std::string sample_grid;
  double max_ratio = 0.0;
  double fitted_C = 0.0;
  // top |z| decade maximum exceeds twice the median of the per-decade maxima
  bool growth_flag = false;
  double median_decade_max = 0.0;
  double top_decade_max = 0.0;
  int samples = 0;
  // samples dropped because the envelope under- or overflowed
  int excluded = 0;
  std::vector<BoundSample> table;

  std::string to_json() const;
  // columns l,z,x,y,ratio
  void write_csv(std::ostream& out) const;
};

BoundReport verify_basis_bound(BoundId id, const GridSpec& grid = {});
// Uses grid.ls unless am is given.
BoundReport verify_perturbed_bound(BoundId id, const PotentialSpec& p, const GridSpec& grid = {},
                                   std::optional<AngularMomentum> am = std::nullopt);

// Default grid for perturbed bounds: fewer z values, real z in [1, 1e6] of both signs.
GridSpec perturbed_grid();

enum class DecayModel { power, power_log };

struct DecayFit {
  // Both statistics are always filled; model records which one the caller asked for.
  DecayModel model = DecayModel::power;
  // power: least-squares slope of log|eps_n| against log n
  double slope = 0.0;
  double r2 = 0.0;
  // sup of |eps_n| n / log n
  double ratio_sup = 0.0;
  // max over median of |eps_n| n / log n
  double ratio_spread = 0.0;
  bool slope_defined = true;
};

// entries (n, eps_n); needs at least 30 with n >= 20, only those are used
DecayFit fit_decay(const std::vector<std::pair<int, double>>& eps, DecayModel model);

struct LogNecessity {
  double ratio_coarse = 0.0;  // y floor 1e-2
  double ratio_fine = 0.0;    // y floor 1e-6
  double growth = 0.0;
  double with_factor_coarse = 0.0;
  double with_factor_fine = 0.0;
  bool passes = false;
};

// Max ratio of |G_{-1/2}| over the a8 envelope without (1 - log y), y floor 1e-2 against 1e-6.
LogNecessity log_factor_necessity(double required_growth = 10.0);

}  // namespace sphspec
