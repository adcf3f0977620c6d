#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphspec/basis.hpp"

namespace sphspec {

struct PolyTerm {
  double coef = 0.0;
  double power = 0.0;  // real, > -2 on a piece touching 0
};

// sum of coef * x^power on [from, to)
struct PolyPiece {
  double from = 0.0;
  double to = 1.0;
  std::vector<PolyTerm> terms;
};

// q(x) = coulomb_gamma / x + regular(x) on (0, 1].
class PotentialSpec {
 public:
  enum class RegularKind { poly, table };

  PotentialSpec();  // q = 0

  static PotentialSpec zero() { return PotentialSpec(); }
  static PotentialSpec constant(double c);
  static PotentialSpec coulomb(double gamma);
  static PotentialSpec power_law(double coef, double power);
  static PotentialSpec piecewise(double gamma, std::vector<PolyPiece> pieces, std::string label);
  static PotentialSpec table(double gamma, std::vector<double> nodes, std::vector<double> values, std::string label);

  // JSON document: {"label", "coulomb_gamma", "regular": {"type": "poly"|"table", ...}}.
  static PotentialSpec from_json(std::string_view text);
  static PotentialSpec load(const std::filesystem::path& path);
  std::string to_json() const;

  double operator()(double x) const;
  double regular(double x) const;
  double coulomb_gamma() const { return gamma_; }
  const std::string& label() const { return label_; }
  RegularKind regular_kind() const { return kind_; }
  const std::vector<PolyPiece>& pieces() const { return pieces_; }
  // Interior points where the regular part changes formula or has a kink.
  const std::vector<double>& breakpoints() const { return breaks_; }
  bool is_zero() const { return zero_; }
  // c when q is identically the constant c.
  std::optional<double> constant_value() const;

 private:
  void finalize();

  double gamma_ = 0.0;
  RegularKind kind_ = RegularKind::poly;
  std::vector<PolyPiece> pieces_;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::string label_ = "zero";
  std::vector<double> breaks_;
  bool zero_ = true;
};

double q_eval(const PotentialSpec& p, double x);
// |q(x)|, with the extra factor (1 - log x) for l = -1/2.
double q_tilde(const PotentialSpec& p, const AngularMomentum& am, double x);
// integral of x q~(x) over (0, 1)
double weighted_norm(const PotentialSpec& p, const AngularMomentum& am);
// eps(z) = integral over (0,1) of y q~(y) / (1 + s y),  s = |z|^{1/2}
double eps_of_z(const PotentialSpec& p, const AngularMomentum& am, double z_abs_sqrt);
// the same integral over (a, b), 0 <= a <= b <= 1
double eps_partial(const PotentialSpec& p, const AngularMomentum& am, double z_abs_sqrt, double a, double b);

}  // namespace sphspec
