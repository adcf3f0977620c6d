#include "sphspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "sphspec/errors.hpp"
#include "sphspec/volterra.hpp"

namespace sphspec {

namespace {

constexpr BoundId kAll[] = {BoundId::estphil,  BoundId::estGl,        BoundId::a8,       BoundId::estphilp,
                            BoundId::estGlp,   BoundId::a21,          BoundId::estphi,   BoundId::estphi_prime,
                            BoundId::estpsi_B, BoundId::estpsi};

std::vector<double> log_spaced(double lo, double hi, int per_decade) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= n; ++i) out.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
  out.back() = hi;
  return out;
}

bool applies(BoundId id, double l) {
  const bool half = std::fabs(l + 0.5) < 1e-12;
  switch (id) {
    case BoundId::estGl:
    case BoundId::estGlp:
      return !half;
    case BoundId::a8:
    case BoundId::a21:
      return half;
    default:
      return true;
  }
}

// Accumulates samples and derives the summary.
class Collector {
 public:
  void add(const BoundSample& s, double quantity, double envelope) {
    if (!(envelope > 1e-300) || !std::isfinite(envelope) || !std::isfinite(quantity)) {
      ++excluded_;
      return;
    }
    BoundSample t = s;
    t.ratio = std::fabs(quantity) / envelope;
    table_.push_back(t);
  }

  BoundReport finish(BoundId id, const std::string& grid) const {
    BoundReport r;
    r.bound_id = id;
    r.sample_grid = grid;
    r.excluded = excluded_;
    r.samples = static_cast<int>(table_.size());
    std::map<int, double> decade;
    for (const auto& s : table_) {
      r.max_ratio = std::max(r.max_ratio, s.ratio);
      const int d = static_cast<int>(std::floor(std::log10(std::fabs(s.z)) + 1e-9));
      auto [it, fresh] = decade.emplace(d, s.ratio);
      if (!fresh) it->second = std::max(it->second, s.ratio);
    }
    r.fitted_C = r.max_ratio;
    if (!decade.empty()) {
      std::vector<double> m;
      for (const auto& [d, v] : decade) m.push_back(v);
      r.top_decade_max = decade.rbegin()->second;
      std::vector<double> sorted = m;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t k = sorted.size();
      r.median_decade_max = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
      r.growth_flag = r.top_decade_max > 2 * r.median_decade_max;
    }
    r.table = table_;
    return r;
  }

 private:
  std::vector<BoundSample> table_;
  int excluded_ = 0;
};

}  // namespace

std::string_view to_string(BoundId id) {
  switch (id) {
    case BoundId::estphil:
      return "estphil";
    case BoundId::estGl:
      return "estGl";
    case BoundId::a8:
      return "a8";
    case BoundId::estphilp:
      return "estphilp";
    case BoundId::estGlp:
      return "estGlp";
    case BoundId::a21:
      return "a21";
    case BoundId::estphi:
      return "estphi";
    case BoundId::estphi_prime:
      return "estphi_prime";
    case BoundId::estpsi_B:
      return "estpsi_B";
    case BoundId::estpsi:
      return "estpsi";
  }
  return "";
}

BoundId parse_bound_id(std::string_view text) {
  for (BoundId id : kAll)
    if (to_string(id) == text) return id;
  throw DomainError("unknown bound id '" + std::string(text) + "'");
}

bool is_perturbed(BoundId id) {
  return id == BoundId::estphi || id == BoundId::estphi_prime || id == BoundId::estpsi_B || id == BoundId::estpsi;
}

std::vector<double> GridSpec::z_values() const {
  std::vector<double> out;
  for (double z : log_spaced(z_min, z_max, z_per_decade)) {
    out.push_back(z);
    if (with_negative) out.push_back(-z);
  }
  return out;
}

std::vector<double> GridSpec::x_values() const { return log_spaced(x_min, 1.0, x_per_decade); }

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << "l in {";
  for (std::size_t i = 0; i < ls.size(); ++i) os << (i ? "," : "") << ls[i];
  os << "}; |z| in [" << z_min << ", " << z_max << "] x" << z_per_decade << "/decade"
     << (with_negative ? " both signs" : " positive") << "; x in [" << x_min << ", 1] x" << x_per_decade
     << "/decade";
  if (y_floor > 0) os << "; y >= " << y_floor;
  if (drop_log_factor) os << "; without (1 - log y)";
  return os.str();
}

BoundReport verify_basis_bound(BoundId id, const GridSpec& grid) {
  if (is_perturbed(id)) throw DomainError("bound " + std::string(to_string(id)) + " needs a potential");
  Collector col;
  const auto xs = grid.x_values();
  const bool kernel = id == BoundId::estGl || id == BoundId::a8 || id == BoundId::estGlp || id == BoundId::a21;
  const bool deriv = id == BoundId::estphilp || id == BoundId::estGlp || id == BoundId::a21;
  for (double lv : grid.ls) {
    if (!applies(id, lv)) continue;
    const AngularMomentum am(lv);
    const double l = am.l();
    for (double z : grid.z_values()) {
      const double k = std::sqrt(std::fabs(z));
      std::vector<BasisEval> at;
      for (double x : xs) at.push_back(basis_eval(am, z, x));
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (!kernel) {
          // exp(|Im sqrt z| x) cancels against the scaling of phi
          const double q = deriv ? at[i].phi_x : at[i].phi;
          const double env = std::pow(x / (1 + k * x), deriv ? l : l + 1);
          col.add({l, z, x, 0.0, 0.0}, q, env);
          continue;
        }
        for (std::size_t j = 0; j <= i; ++j) {
          const double y = xs[j];
          if (y < grid.y_floor) continue;
          const GreenEval g = green_from(at[i], at[j], x, y, z);
          const double q = deriv ? g.g_x : g.g;
          const double logf = grid.drop_log_factor ? 1.0 : 1 - std::log(y);
          double env;
          switch (id) {
            case BoundId::estGl:
              env = std::pow(x / (1 + k * x), l + 1) * std::pow((1 + k * y) / y, l);
              break;
            case BoundId::estGlp:
              env = std::pow(x / (1 + k * x), l) * std::pow((1 + k * y) / y, l);
              break;
            case BoundId::a8:
              env = std::sqrt(x * y / ((1 + k * x) * (1 + k * y))) * logf;
              break;
            default:  // a21
              env = std::sqrt((y + k * x * y) / (x + k * x * y)) * logf;
              break;
          }
          col.add({l, z, x, y, 0.0}, q, env);
        }
      }
    }
  }
  return col.finish(id, grid.describe());
}

GridSpec perturbed_grid() {
  GridSpec g;
  g.z_min = 1.0;
  g.z_max = 1e6;
  g.z_per_decade = 1;
  g.x_min = 1e-4;
  g.x_per_decade = 2;
  return g;
}

BoundReport verify_perturbed_bound(BoundId id, const PotentialSpec& p, const GridSpec& grid,
                                   std::optional<AngularMomentum> am_opt) {
  if (!is_perturbed(id)) throw DomainError("bound " + std::string(to_string(id)) + " has no potential");
  weighted_norm(p, am_opt ? *am_opt : AngularMomentum(0.0));
  Collector col;
  std::vector<AngularMomentum> ams;
  if (am_opt)
    ams.push_back(*am_opt);
  else
    for (double l : grid.ls) ams.emplace_back(l);
  const auto xs = grid.x_values();
  for (const auto& am : ams) {
    const double l = am.l();
    for (double z : grid.z_values()) {
      const double k = std::sqrt(std::fabs(z));
      if (id == BoundId::estphi || id == BoundId::estphi_prime) {
        const VolterraSolution sol = solve_phi_full(am, p, z);
        for (double x : xs) {
          const auto pt = sol.at(x);
          const double eps = eps_partial(p, am, k, 0.0, x);
          if (id == BoundId::estphi)
            col.add({l, z, x, 0.0, 0.0}, pt.delta, std::pow(x / (1 + k * x), l + 1) * eps);
          else
            col.add({l, z, x, 0.0, 0.0}, pt.delta_deriv, std::pow(x / (1 + k * x), l) * eps);
        }
      } else {
        const bool inf = id == BoundId::estpsi_B;
        const VolterraSolution sol =
            solve_psi_beta(am, p, inf ? std::numeric_limits<double>::infinity() : grid.beta, z);
        for (double x : xs) {
          if (x >= 1.0) continue;  // both sides vanish at x = 1
          const auto pt = sol.at(x);
          double env = std::pow((1 + k * x) / (x + k * x), l) * eps_partial(p, am, k, x, 1.0);
          if (inf) env /= 1 + k;
          if (am.log_case()) env *= 1 - std::log(x);
          col.add({l, z, x, 0.0, 0.0}, pt.delta, env);
        }
      }
    }
  }
  std::string desc = grid.describe();
  if (am_opt) desc += "; l = " + am_opt->text();
  desc += "; q = " + p.label();
  return col.finish(id, desc);
}

std::string BoundReport::to_json() const {
  nlohmann::json j;
  j["bound_id"] = std::string(to_string(bound_id));
  j["sample_grid"] = sample_grid;
  j["max_ratio"] = max_ratio;
  j["fitted_C"] = fitted_C;
  j["growth_flag"] = growth_flag;
  j["median_decade_max"] = median_decade_max;
  j["top_decade_max"] = top_decade_max;
  j["samples"] = samples;
  j["excluded"] = excluded;
  return j.dump(2) + "\n";
}

void BoundReport::write_csv(std::ostream& out) const {
  out << "l,z,x,y,ratio\n";
  char buf[160];
  for (const auto& s : table) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.l, s.z, s.x, s.y, s.ratio);
    out << buf;
  }
}

DecayFit fit_decay(const std::vector<std::pair<int, double>>& eps, DecayModel model) {
  std::vector<std::pair<int, double>> use;
  for (const auto& e : eps)
    if (e.first >= 20) use.push_back(e);
  if (use.size() < 30) throw DomainError("fit_decay needs at least 30 entries with n >= 20");
  DecayFit f;
  f.model = model;
  std::vector<double> v;
  for (const auto& [n, e] : use) v.push_back(std::fabs(e) * n / std::log(static_cast<double>(n)));
  f.ratio_sup = *std::max_element(v.begin(), v.end());
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double med = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  f.ratio_spread = med > 0 ? f.ratio_sup / med : 0.0;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int m = 0;
  for (const auto& [n, e] : use) {
    if (e == 0) continue;
    const double x = std::log(static_cast<double>(n)), y = std::log(std::fabs(e));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++m;
  }
  if (m < 2 || f.ratio_sup == 0) {
    f.slope_defined = false;
    f.slope = std::numeric_limits<double>::quiet_NaN();
    return f;
  }
  const double cxx = sxx - sx * sx / m, cxy = sxy - sx * sy / m, cyy = syy - sy * sy / m;
  f.slope = cxy / cxx;
  f.r2 = cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0;
  return f;
}

LogNecessity log_factor_necessity(double required_growth) {
  GridSpec g;
  g.ls = {-0.5};
  g.x_per_decade = 4;
  g.x_min = 1e-6;
  LogNecessity r;
  auto run = [&](double floor, bool drop) {
    GridSpec h = g;
    h.y_floor = floor * (1 - 1e-12);
    h.drop_log_factor = drop;
    return verify_basis_bound(BoundId::a8, h).max_ratio;
  };
  r.ratio_coarse = run(1e-2, true);
  r.ratio_fine = run(1e-6, true);
  r.with_factor_coarse = run(1e-2, false);
  r.with_factor_fine = run(1e-6, false);
  r.growth = r.ratio_fine / r.ratio_coarse;
  r.passes = r.growth >= required_growth;
  return r;
}

}  // namespace sphspec
