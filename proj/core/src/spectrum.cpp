#include "sphspec/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "json.hpp"
#include "sphspec/errors.hpp"

namespace sphspec {

namespace {

using json = nlohmann::json;

double z_of(double sigma) { return sigma * std::fabs(sigma); }
double sigma_of(double z) { return std::copysign(std::sqrt(std::fabs(z)), z); }

// One solve of phi at z, reduced to what the eigenvalue search needs.
struct Probe {
  double sigma = 0.0;
  int count = 0;      // eigenvalues strictly below z
  double f = 0.0;     // boundary function, scaled by exp(-|Im sqrt z|)
  double scale = 0.0; // log of that scale
};

Probe probe(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc, double sigma,
            const SolverOptions& opts) {
  const VolterraSolution sol = solve_phi_full(am, p, z_of(sigma), opts);
  const auto pt = sol.at_one();
  Probe r;
  r.sigma = sigma;
  r.scale = pt.log_scale;
  const int m = sol.sign_changes();
  if (bc.is_dirichlet()) {
    r.count = m;
    r.f = pt.value;
  } else {
    // Pruefer angle at x = 1 is m pi + frac; the k-th Robin eigenvalue sits at alpha + k pi.
    const double sg = (m % 2 == 0) ? 1.0 : -1.0;
    const double frac = std::atan2(sg * pt.value, sg * pt.deriv);
    const double alpha = std::atan2(1.0, -bc.beta);
    r.count = m + (frac > alpha ? 1 : 0);
    r.f = pt.deriv + bc.beta * pt.value;
  }
  return r;
}

double lowest_admissible(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc) {
  const double b = bc.is_dirichlet() ? 1.0 : std::max(std::fabs(bc.beta), 1.0);
  double qn = weighted_norm(p, am);
  // a crude sup bound matters for bounded negative potentials
  if (auto c = p.constant_value()) qn = std::max(qn, std::fabs(*c));
  const double r = b + qn + am.l() * (am.l() + 1) + 10;
  return -r * r;
}

EigenvalueRecord locate(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc, int n,
                        int target, double center, double sigma_min, double tol, const SpectrumOptions& opts) {
  auto eval = [&](double s) { return probe(am, p, bc, s, opts.solver); };
  const double eps = eps_of_z(p, am, std::fabs(center));
  double w = std::max(8 * opts.window_constant * eps, opts.window_floor * (1 + std::fabs(center)));
  EigenvalueRecord rec;
  rec.n = n;
  rec.bessel_zero = center;
  rec.window = w;

  double lo = 0, hi = 0;
  Probe plo, phi;
  for (int d = 0;; ++d) {
    lo = std::max(center - w, sigma_min);
    hi = center + w;
    plo = eval(lo);
    phi = eval(hi);
    if (plo.count <= target && phi.count >= target + 1) {
      rec.doublings = d;
      break;
    }
    if (d == opts.max_doublings) {
      std::ostringstream os;
      os << "no eigenvalue " << n << " in window [" << lo << ", " << hi << "] (sqrt z) after " << d
         << " doublings; counts " << plo.count << " and " << phi.count << ", expected " << target << " and "
         << target + 1;
      throw BracketFailure(os.str());
    }
    w *= 2;
  }
  for (int guard = 0; plo.count != target || phi.count != target + 1; ++guard) {
    if (guard > 200) throw NumericalError("eigenvalue " + std::to_string(n) + " could not be isolated");
    const Probe pm = eval(0.5 * (lo + hi));
    if (pm.count <= target) {
      lo = pm.sigma;
      plo = pm;
    } else {
      hi = pm.sigma;
      phi = pm;
    }
  }
  if ((plo.f > 0) == (phi.f > 0) && plo.f != 0 && phi.f != 0) {
    std::ostringstream os;
    os << "boundary function has no sign change on isolated bracket [" << lo << ", " << hi << "] for n = " << n;
    throw BracketFailure(os.str());
  }

  double root;
  if (plo.f == 0) {
    root = lo;
  } else if (phi.f == 0) {
    root = hi;
  } else {
    auto f = [&](double s) { return eval(s).f; };
    auto stop = [tol](double a, double b) { return std::fabs(b - a) <= tol * std::max(1.0, std::fabs(a)); };
    std::uintmax_t it = 100;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, plo.f, phi.f, stop, it);
    lo = r.first;
    hi = r.second;
    root = 0.5 * (lo + hi);
  }
  const Probe at = eval(root);
  rec.sqrt_lambda = root;
  rec.lambda = z_of(root);
  rec.eps_n = root - center;
  rec.lo = lo;
  rec.hi = hi;
  rec.boundary_residual = std::fabs(at.f) * std::exp(at.scale);
  return rec;
}

template <class F>
void parallel_for(int count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

double boundary_function(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc, double z,
                         const SolverOptions& opts) {
  const auto pt = solve_phi_full(am, p, z, opts).at_one();
  const double f = bc.is_dirichlet() ? pt.value : pt.deriv + bc.beta * pt.value;
  return f * std::exp(pt.log_scale);
}

int eigenvalue_count(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc, double z,
                     const SolverOptions& opts) {
  return probe(am, p, bc, sigma_of(z), opts).count;
}

std::vector<EigenvalueRecord> eigenvalues(const AngularMomentum& am, const PotentialSpec& p,
                                          const BoundaryCondition& bc, int n_max, double tol,
                                          const SpectrumOptions& opts) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  if (!(tol > 0)) throw DomainError("tol must be positive");
  weighted_norm(p, am);
  const std::vector<double> base = unperturbed_spectrum(am, bc, n_max);
  const double z_min = lowest_admissible(am, p, bc);
  const double sigma_min = sigma_of(z_min);
  if (probe(am, p, bc, sigma_min, opts.solver).count != 0) {
    throw CountMismatch("eigenvalues found below the search floor z = " + std::to_string(z_min));
  }
  const int first = bc.is_dirichlet() ? 1 : 0;
  std::vector<EigenvalueRecord> out(n_max);
  parallel_for(n_max, opts.threads, [&](int i) {
    out[i] = locate(am, p, bc, first + i, i, sigma_of(base[i]), sigma_min, tol, opts);
  });
  for (int i = 1; i < n_max; ++i) {
    if (!(out[i].lambda > out[i - 1].lambda)) {
      throw CountMismatch("eigenvalues " + std::to_string(out[i - 1].n) + " and " + std::to_string(out[i].n) +
                          " are not strictly increasing");
    }
  }
  return out;
}

std::vector<EpsEntry> eps_sequence(const AngularMomentum& am, const PotentialSpec& p,
                                   const std::vector<EigenvalueRecord>& records) {
  std::vector<EpsEntry> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    EpsEntry e;
    e.n = r.n;
    e.eps = r.eps_n;
    e.bound = eps_of_z(p, am, std::fabs(r.bessel_zero));
    e.ratio = e.bound > 0 ? e.eps / e.bound : 0.0;
    out.push_back(e);
  }
  return out;
}

double boundary_z_derivative(const AngularMomentum& am, const PotentialSpec& p, const BoundaryCondition& bc, double z,
                             double h_rel, const SolverOptions& opts) {
  if (!(h_rel > 0)) throw DomainError("h_rel must be positive");
  auto f = [&](double t) { return boundary_function(am, p, bc, t, opts); };
  auto diff = [&](double h) {
    return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h);
  };
  const double h = h_rel * (1 + std::fabs(z));
  const double d1 = diff(h), d2 = diff(h / 2);
  const double r = (16 * d2 - d1) / 15;
  if (!std::isfinite(r) || std::fabs(d1 - d2) > 1e-2 * std::fabs(r) + 1e-300) {
    std::ostringstream os;
    os << "z-derivative at z = " << z << " unstable: levels " << d1 << " and " << d2;
    throw NumericalError(os.str());
  }
  return r;
}

double phi_z_derivative(const AngularMomentum& am, const PotentialSpec& p, double z, double h_rel,
                        const SolverOptions& opts) {
  return boundary_z_derivative(am, p, BoundaryCondition::dirichlet(), z, h_rel, opts);
}

std::vector<NormingRecord> norming_constants(const AngularMomentum& am, const PotentialSpec& p,
                                             const BoundaryCondition& bc,
                                             const std::vector<EigenvalueRecord>& records,
                                             const SpectrumOptions& opts) {
  std::vector<NormingRecord> out(records.size());
  parallel_for(static_cast<int>(records.size()), opts.threads, [&](int i) {
    const auto& r = records[i];
    const VolterraSolution sol = solve_phi_full(am, p, r.lambda, opts.solver);
    const auto pt = sol.at_one();
    const double sq = sol.square_integral_scaled();
    double inv, deriv_form;
    const double dot = boundary_z_derivative(am, p, bc, r.lambda, 1e-4, opts.solver);
    if (bc.is_dirichlet()) {
      inv = sq / (pt.deriv * pt.deriv);
      deriv_form = dot / pt.true_deriv();
    } else {
      const double w = 1 + bc.beta * bc.beta;
      inv = sq / (w * pt.value * pt.value);
      deriv_form = dot / (w * pt.true_value());
    }
    NormingRecord nr;
    nr.n = r.n;
    nr.lambda = r.lambda;
    nr.gamma = 1 / inv;
    nr.gamma_derivative = 1 / std::fabs(deriv_form);
    nr.rel_diff = std::fabs(inv - std::fabs(deriv_form)) / inv;
    nr.flagged = nr.rel_diff > 1e-4;
    if (!(nr.gamma > 0) || !std::isfinite(nr.gamma)) {
      throw NumericalError("norming constant " + std::to_string(r.n) + " is not positive");
    }
    out[i] = nr;
  });
  return out;
}

double weyl_m(const AngularMomentum& am, const PotentialSpec& p, double beta, double z, const SolverOptions& opts) {
  if (std::isnan(beta)) throw DomainError("beta must be a real number or infinity");
  const auto pt = solve_phi_full(am, p, z, opts).at_one();
  double num, den;
  if (std::isinf(beta)) {
    num = -pt.deriv;
    den = pt.value;
  } else {
    num = pt.value - beta * pt.deriv;
    den = pt.deriv + beta * pt.value;
  }
  const double size = std::fabs(pt.value) + std::fabs(pt.deriv);
  if (std::fabs(den) <= 1e-13 * size) {
    std::ostringstream os;
    os << "z = " << z << " is numerically at a pole of m (an eigenvalue for beta = " << format_real(beta) << ")";
    throw NumericalError(os.str());
  }
  return num / den;
}

LimitType limit_classification(const AngularMomentum& am) {
  return am.l() < 0.5 ? LimitType::limit_circle : LimitType::limit_point;
}

std::string_view to_string(LimitType t) { return t == LimitType::limit_circle ? "limit_circle" : "limit_point"; }

CounterexampleResult counterexample_wronskian(const AngularMomentum& am, const SolverOptions& opts) {
  CounterexampleResult res;
  const double j1 = bessel_zero(am.order(), 1);
  res.mu1 = j1 * j1;
  auto theta1 = [&](double s) { return basis_eval(am, s * s, 1.0).theta(); };
  // theta_l(., 1) oscillates with period about pi in sqrt z; scan finely.
  const double step = 0.05;
  double a = j1, fa = theta1(a), b = a, fb = fa;
  bool found = false;
  for (int k = 0; k < 2000; ++k) {
    b = a + step;
    fb = theta1(b);
    if (fa == 0 || (fa > 0) != (fb > 0)) {
      found = true;
      break;
    }
    a = b;
    fa = fb;
  }
  if (!found) throw BracketFailure("no zero of theta_l(., 1) found above the first eigenvalue");
  double s_star = a;
  if (fa != 0) {
    std::uintmax_t it = 100;
    auto stop = [](double x, double y) { return std::fabs(y - x) <= 1e-15 * std::fabs(x); };
    auto r = boost::math::tools::toms748_solve(theta1, a, b, fa, fb, stop, it);
    s_star = 0.5 * (r.first + r.second);
  }
  res.z_star = s_star * s_star;
  res.c = res.z_star - res.mu1;

  const BasisEval e1 = basis_eval(am, res.z_star, 1.0);
  const double t0 = e1.theta(), t1 = e1.theta_x();
  auto wronskian = [&](const PotentialSpec& q, double x) {
    const auto ph = solve_phi_full(am, q, res.z_star, opts).at(x);
    const auto ps = solve_psi_full(am, q, t0, t1, res.z_star, opts).at(x);
    return (ps.value * ph.deriv - ps.deriv * ph.value) * std::exp(ps.log_scale + ph.log_scale);
  };
  const PotentialSpec shifted = PotentialSpec::constant(res.c);
  for (double x : {0.25, 0.5, 0.75}) res.wronskian = std::max(res.wronskian, std::fabs(wronskian(shifted, x)));
  res.wronskian_unperturbed = wronskian(PotentialSpec::zero(), 0.5);
  return res;
}

std::string_view to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::two_spectra:
      return "two_spectra";
    case DatasetKind::spectrum_plus_norming:
      return "spectrum_plus_norming";
    case DatasetKind::spectrum_plus_boundary:
      return "spectrum_plus_boundary";
  }
  return "";
}

std::string_view to_string(BoundaryDatum d) { return d == BoundaryDatum::value ? "value" : "derivative"; }

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_real(std::string_view text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  std::string_view t = text;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0;
  auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || r.ec != std::errc() || r.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw DomainError("not a decimal number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

std::pair<const char*, const char*> array_names(DatasetKind k) {
  switch (k) {
    case DatasetKind::two_spectra:
      return {"eigenvalues_alpha", "eigenvalues_beta"};
    case DatasetKind::spectrum_plus_norming:
      return {"eigenvalues", "norming_constants"};
    case DatasetKind::spectrum_plus_boundary:
      return {"eigenvalues", "boundary_values"};
  }
  return {"", ""};
}

BoundaryCondition bc_of(double beta) {
  return std::isinf(beta) ? BoundaryCondition::dirichlet() : BoundaryCondition::robin(beta);
}

std::vector<double> lambdas(const std::vector<EigenvalueRecord>& r) {
  std::vector<double> out;
  for (const auto& e : r) out.push_back(e.lambda);
  return out;
}

}  // namespace

std::string SpectralDataset::to_json() const {
  const auto [a, b] = array_names(kind);
  json j;
  j["kind"] = std::string(to_string(kind));
  j["l"] = l;
  j["potential_label"] = potential_label;
  j["n_max"] = n_max;
  j["tol"] = tol;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["which"] = std::string(to_string(which));
  j[a] = first;
  j[b] = second;
  return j.dump(2) + "\n";
}

SpectralDataset SpectralDataset::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("dataset is not valid JSON: ") + e.what());
  }
  SpectralDataset d;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "two_spectra")
      d.kind = DatasetKind::two_spectra;
    else if (kind == "spectrum_plus_norming")
      d.kind = DatasetKind::spectrum_plus_norming;
    else if (kind == "spectrum_plus_boundary")
      d.kind = DatasetKind::spectrum_plus_boundary;
    else
      throw DomainError("unknown dataset kind '" + kind + "'");
    d.l = j.at("l").get<std::string>();
    d.potential_label = j.at("potential_label").get<std::string>();
    d.n_max = j.at("n_max").get<int>();
    d.tol = j.at("tol").get<double>();
    d.alpha = j.at("alpha").get<std::string>();
    d.beta = j.at("beta").get<std::string>();
    const std::string which = j.at("which").get<std::string>();
    if (which != "value" && which != "derivative") throw DomainError("unknown boundary datum '" + which + "'");
    d.which = which == "value" ? BoundaryDatum::value : BoundaryDatum::derivative;
    const auto [a, b] = array_names(d.kind);
    d.first = j.at(a).get<std::vector<double>>();
    d.second = j.at(b).get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed dataset: ") + e.what());
  }
  if (static_cast<int>(d.first.size()) != d.n_max || static_cast<int>(d.second.size()) != d.n_max) {
    throw DomainError("dataset arrays do not match n_max");
  }
  return d;
}

void SpectralDataset::write_csv(std::ostream& out) const {
  const auto [a, b] = array_names(kind);
  out << "index," << a << "," << b << "\n";
  for (std::size_t i = 0; i < first.size(); ++i) {
    out << i << "," << format_real(first[i]) << "," << format_real(i < second.size() ? second[i] : 0.0) << "\n";
  }
}

SpectralDataset export_spectral_data(const DatasetRequest& req, const AngularMomentum& am, const PotentialSpec& p,
                                     int n_max, double tol, const SpectrumOptions& opts) {
  SpectralDataset d;
  d.kind = req.kind;
  d.l = am.text();
  d.potential_label = p.label();
  d.n_max = n_max;
  d.tol = tol;
  d.beta = format_real(req.beta);
  d.which = req.which;
  const BoundaryCondition bc = bc_of(req.beta);
  switch (req.kind) {
    case DatasetKind::two_spectra: {
      if (req.alpha == req.beta) throw DomainError("two spectra require alpha != beta");
      d.alpha = format_real(req.alpha);
      d.first = lambdas(eigenvalues(am, p, bc_of(req.alpha), n_max, tol, opts));
      d.second = lambdas(eigenvalues(am, p, bc, n_max, tol, opts));
      break;
    }
    case DatasetKind::spectrum_plus_norming: {
      d.alpha = "";
      const auto recs = eigenvalues(am, p, bc, n_max, tol, opts);
      d.first = lambdas(recs);
      for (const auto& nr : norming_constants(am, p, bc, recs, opts)) d.second.push_back(nr.gamma);
      break;
    }
    case DatasetKind::spectrum_plus_boundary: {
      d.alpha = "";
      if (req.which == BoundaryDatum::value && bc.is_dirichlet()) {
        throw DomainError("phi(lambda, 1) vanishes for Dirichlet eigenvalues; use the derivative");
      }
      if (req.which == BoundaryDatum::derivative && !bc.is_dirichlet() && req.beta == 0) {
        throw DomainError("phi'(lambda, 1) vanishes for beta = 0; use the value");
      }
      const auto recs = eigenvalues(am, p, bc, n_max, tol, opts);
      d.first = lambdas(recs);
      for (const auto& r : recs) {
        const auto pt = solve_phi_full(am, p, r.lambda, opts.solver).at_one();
        d.second.push_back(req.which == BoundaryDatum::value ? pt.true_value() : pt.true_deriv());
      }
      break;
    }
  }
  return d;
}

}  // namespace sphspec
