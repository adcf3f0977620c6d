#include "run.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "sphspec/bounds.hpp"
#include "sphspec/errors.hpp"
#include "sphspec/oracle.hpp"
#include "sphspec/spectrum.hpp"

namespace sphspec::cli {

const std::vector<std::string> kCommands = {"eigs",           "asym",           "mfun",
                                            "norming",        "verify-bounds",  "counterexample",
                                            "oracle-compare", "export-data"};

namespace {

using json = nlohmann::json;

// Malformed configuration, reported with the offending field.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& field, const std::string& what) : std::runtime_error(field + ": " + what) {}
};

// Validation failure found by a command (not an exception from the library).
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double real_field(const std::string& field, const std::string& text) {
  try {
    return parse_real(text);
  } catch (const DomainError& e) {
    throw ConfigError(field, e.what());
  }
}

struct Inputs {
  AngularMomentum am{0.0};
  PotentialSpec p;
  BoundaryCondition bc;
  double tol = 1e-13;
};

BoundaryCondition parse_bc(const std::string& text) {
  if (text == "dirichlet") return BoundaryCondition::dirichlet();
  if (text.rfind("robin:", 0) == 0) {
    const double b = real_field("--bc", text.substr(6));
    if (std::isinf(b)) return BoundaryCondition::dirichlet();
    return BoundaryCondition::robin(b);
  }
  throw ConfigError("--bc", "expected dirichlet or robin:BETA, got '" + text + "'");
}

Inputs read_inputs(const RunConfig& cfg) {
  Inputs in;
  // unreadable text is a config error; a readable l below -1/2 is a validation failure
  if (!std::regex_match(cfg.l, std::regex(R"(-?(\d+\.?\d*|\.\d+))")))
    throw ConfigError("--l", "not a plain decimal number: '" + cfg.l + "'");
  in.am = AngularMomentum::parse(cfg.l);
  if (!cfg.potential.empty()) {
    try {
      in.p = PotentialSpec::load(cfg.potential);
    } catch (const HypothesisViolation&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("--potential", e.what());
    }
  }
  in.bc = parse_bc(cfg.bc);
  in.tol = real_field("--tol", cfg.tol);
  if (!(in.tol > 0)) throw ConfigError("--tol", "must be positive");
  if (cfg.n_max < 1) throw ConfigError("--n-max", "must be at least 1");
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("--format", "expected csv or json");
  weighted_norm(in.p, in.am);  // Hypothesis check before any work
  return in;
}

std::string num(double v) { return format_real(v); }

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_eigs(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const auto recs = eigenvalues(in.am, in.p, in.bc, cfg.n_max, in.tol);
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : recs) {
      arr.push_back({{"n", r.n},
                     {"lambda", r.lambda},
                     {"sqrt_lambda", r.sqrt_lambda},
                     {"bessel_zero", r.bessel_zero},
                     {"eps_n", r.eps_n},
                     {"bracket", {r.lo, r.hi}},
                     {"boundary_residual", r.boundary_residual}});
    }
    emit_json(out, {{"l", in.am.text()}, {"potential_label", in.p.label()}, {"eigenvalues", arr}});
    return ok;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : recs)
    rows.push_back({std::to_string(r.n), num(r.lambda), num(r.sqrt_lambda), num(r.bessel_zero), num(r.eps_n)});
  write_csv(out, {"n", "lambda", "sqrt_lambda", "bessel_zero", "eps_n"}, rows);
  return ok;
}

int cmd_asym(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const auto recs = eigenvalues(in.am, in.p, in.bc, cfg.n_max, in.tol);
  const auto seq = eps_sequence(in.am, in.p, recs);
  std::vector<std::pair<int, double>> pairs;
  for (const auto& e : seq) pairs.emplace_back(e.n, e.eps);
  DecayFit fit;
  bool fitted = true;
  try {
    fit = fit_decay(pairs, DecayModel::power);
  } catch (const DomainError&) {
    fitted = false;  // too few entries for a fit; the table is still useful
  }
  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : seq) rows.push_back({std::to_string(e.n), num(e.eps), num(e.bound), num(e.ratio)});
    write_csv(out, {"n", "eps_n", "bound", "ratio"}, rows);
    return ok;
  }
  json per = json::array();
  for (const auto& e : seq) per.push_back({{"n", e.n}, {"eps_n", e.eps}, {"bound", e.bound}, {"ratio", e.ratio}});
  json j = {{"l", in.am.text()}, {"potential_label", in.p.label()}, {"per_n", per}};
  if (fitted && fit.slope_defined) {
    j["slope"] = fit.slope;
    j["r2"] = fit.r2;
  } else {
    j["slope"] = nullptr;
    j["r2"] = nullptr;
  }
  j["ratio_sup"] = fitted ? json(fit.ratio_sup) : json(nullptr);
  j["ratio_spread"] = fitted ? json(fit.ratio_spread) : json(nullptr);
  emit_json(out, j);
  return ok;
}

int cmd_mfun(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const double a = real_field("--z-from", cfg.z_from), b = real_field("--z-to", cfg.z_to);
  if (cfg.points < 2) throw ConfigError("--points", "must be at least 2");
  const double beta = in.bc.beta_or_inf();
  std::vector<std::pair<double, double>> vals;
  for (int i = 0; i < cfg.points; ++i) {
    const double z = a + (b - a) * i / (cfg.points - 1);
    vals.emplace_back(z, weyl_m(in.am, in.p, beta, z));
  }
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& [z, m] : vals) arr.push_back({{"z", z}, {"m", m}});
    emit_json(out, {{"l", in.am.text()}, {"beta", num(beta)}, {"potential_label", in.p.label()}, {"values", arr}});
    return ok;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [z, m] : vals) rows.push_back({num(z), num(m)});
  write_csv(out, {"z", "m"}, rows);
  return ok;
}

int cmd_norming(const RunConfig& cfg, const Inputs& in, std::ostream& out, std::ostream& err) {
  const auto recs = eigenvalues(in.am, in.p, in.bc, cfg.n_max, in.tol);
  const auto nc = norming_constants(in.am, in.p, in.bc, recs);
  for (const auto& r : nc)
    if (r.flagged) err << "warning: norming formulas disagree at n = " << r.n << " (rel " << r.rel_diff << ")\n";
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : nc) {
      arr.push_back({{"n", r.n},
                     {"lambda", r.lambda},
                     {"gamma", r.gamma},
                     {"gamma_derivative", r.gamma_derivative},
                     {"rel_diff", r.rel_diff},
                     {"flagged", r.flagged}});
    }
    emit_json(out, {{"l", in.am.text()}, {"potential_label", in.p.label()}, {"norming", arr}});
    return ok;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : nc)
    rows.push_back({std::to_string(r.n), num(r.lambda), num(r.gamma), num(r.gamma_derivative), num(r.rel_diff)});
  write_csv(out, {"n", "lambda", "gamma", "gamma_derivative", "rel_diff"}, rows);
  return ok;
}

int cmd_verify_bounds(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  std::vector<BoundId> ids;
  if (cfg.bound == "all") {
    ids = {BoundId::estphil, BoundId::estGl,  BoundId::a8,           BoundId::estphilp, BoundId::estGlp,
           BoundId::a21,     BoundId::estphi, BoundId::estphi_prime, BoundId::estpsi_B, BoundId::estpsi};
  } else {
    try {
      ids.push_back(parse_bound_id(cfg.bound));
    } catch (const DomainError& e) {
      throw ConfigError("--bound", e.what());
    }
  }
  const bool custom_l = cfg.l != "0" || !cfg.potential.empty();
  std::vector<BoundReport> reports;
  for (BoundId id : ids) {
    if (!is_perturbed(id)) {
      reports.push_back(verify_basis_bound(id));
    } else {
      const PotentialSpec p = cfg.potential.empty() ? PotentialSpec::coulomb(1.0) : in.p;
      reports.push_back(custom_l ? verify_perturbed_bound(id, p, perturbed_grid(), in.am)
                                 : verify_perturbed_bound(id, p, perturbed_grid()));
    }
  }
  std::optional<LogNecessity> ln;
  if (cfg.bound == "all" || cfg.bound == "a8") ln = log_factor_necessity();

  bool failed = false;
  for (const auto& r : reports) failed |= r.growth_flag;
  if (ln) failed |= !ln->passes;

  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(json::parse(r.to_json()));
    json j = {{"reports", arr}};
    if (ln) {
      j["log_factor_necessity"] = {{"ratio_coarse", ln->ratio_coarse},
                                   {"ratio_fine", ln->ratio_fine},
                                   {"growth", ln->growth},
                                   {"with_factor_coarse", ln->with_factor_coarse},
                                   {"with_factor_fine", ln->with_factor_fine},
                                   {"passes", ln->passes}};
    }
    emit_json(out, j);
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
      rows.push_back({std::string(to_string(r.bound_id)), num(r.max_ratio), num(r.top_decade_max),
                      num(r.median_decade_max), r.growth_flag ? "1" : "0", std::to_string(r.samples)});
    }
    if (ln) rows.push_back({"a8_log_necessity", num(ln->growth), num(ln->ratio_fine), num(ln->ratio_coarse),
                            ln->passes ? "0" : "1", "0"});
    write_csv(out, {"bound_id", "max_ratio", "top_decade_max", "median_decade_max", "growth_flag", "samples"},
              rows);
  }
  if (failed) throw ValidationFailure("at least one bound check failed (see growth_flag)");
  return ok;
}

int cmd_counterexample(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const auto r = counterexample_wronskian(in.am);
  if (cfg.format == "csv") {
    write_csv(out, {"c", "z_star", "mu1", "wronskian", "wronskian_unperturbed"},
              {{num(r.c), num(r.z_star), num(r.mu1), num(r.wronskian), num(r.wronskian_unperturbed)}});
  } else {
    emit_json(out, {{"l", in.am.text()},
                    {"c", r.c},
                    {"z_star", r.z_star},
                    {"mu1", r.mu1},
                    {"wronskian", r.wronskian},
                    {"wronskian_unperturbed", r.wronskian_unperturbed}});
  }
  if (!(r.wronskian <= 1e-6)) throw ValidationFailure("counterexample Wronskian does not vanish");
  return ok;
}

int cmd_oracle_compare(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  const double delta = real_field("--delta", cfg.delta);
  FdConfig fd = cfg.mesh > 0 ? FdConfig{delta, cfg.mesh, LeftBoundary::dirichlet_at_delta}
                             : FdConfig::from_step(5e-5, delta);
  const double h = fd.h();
  const auto fits = fd_refinement(in.am, in.p, in.bc, cfg.n_max, {4 * h, 2 * h, h}, {4 * delta, 2 * delta, delta});
  const auto lam_fd = fd_eigenvalues(in.am, in.p, fd, in.bc, cfg.n_max);
  const auto shoot = eigenvalues(in.am, in.p, in.bc, cfg.n_max, in.tol);
  bool failed = false;
  json arr = json::array();
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < cfg.n_max; ++i) {
    const double diff = shoot[i].lambda - lam_fd[i];
    const double budget = fits[i].budget(h, delta);
    const bool within = std::fabs(diff) <= budget;
    failed |= !within;
    arr.push_back({{"n", shoot[i].n},
                   {"shooting", shoot[i].lambda},
                   {"fd", lam_fd[i]},
                   {"difference", diff},
                   {"budget", budget},
                   {"within", within}});
    rows.push_back({std::to_string(shoot[i].n), num(shoot[i].lambda), num(lam_fd[i]), num(diff), num(budget),
                    within ? "1" : "0"});
  }
  if (cfg.format == "json")
    emit_json(out, {{"h", h}, {"delta", delta}, {"M", fd.M}, {"comparison", arr}});
  else
    write_csv(out, {"n", "shooting", "fd", "difference", "budget", "within"}, rows);
  if (failed) throw ValidationFailure("shooting and finite differences disagree beyond the fitted budget");
  return ok;
}

int cmd_export(const RunConfig& cfg, const Inputs& in, std::ostream& out) {
  DatasetRequest req;
  if (cfg.kind == "two-spectra")
    req.kind = DatasetKind::two_spectra;
  else if (cfg.kind == "norming")
    req.kind = DatasetKind::spectrum_plus_norming;
  else if (cfg.kind == "boundary")
    req.kind = DatasetKind::spectrum_plus_boundary;
  else
    throw ConfigError("--kind", "expected two-spectra, norming or boundary");
  req.alpha = real_field("--alpha", cfg.alpha);
  req.beta = real_field("--beta", cfg.beta);
  if (cfg.which.empty())
    req.which = std::isinf(req.beta) ? BoundaryDatum::derivative : BoundaryDatum::value;
  else if (cfg.which == "value")
    req.which = BoundaryDatum::value;
  else if (cfg.which == "derivative")
    req.which = BoundaryDatum::derivative;
  else
    throw ConfigError("--which", "expected value or derivative");
  if (req.kind == DatasetKind::two_spectra && req.alpha == req.beta)
    throw ConfigError("--alpha", "must differ from --beta");
  const SpectralDataset d = export_spectral_data(req, in.am, in.p, cfg.n_max, in.tol);
  if (cfg.format == "json")
    out << d.to_json();
  else
    d.write_csv(out);
  return ok;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Inputs in = read_inputs(cfg);
  if (cfg.command == "eigs") return cmd_eigs(cfg, in, out);
  if (cfg.command == "asym") return cmd_asym(cfg, in, out);
  if (cfg.command == "mfun") return cmd_mfun(cfg, in, out);
  if (cfg.command == "norming") return cmd_norming(cfg, in, out, err);
  if (cfg.command == "verify-bounds") return cmd_verify_bounds(cfg, in, out);
  if (cfg.command == "counterexample") return cmd_counterexample(cfg, in, out);
  if (cfg.command == "oracle-compare") return cmd_oracle_compare(cfg, in, out);
  if (cfg.command == "export-data") return cmd_export(cfg, in, out);
  throw ConfigError("command", "unknown command '" + cfg.command + "'");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: malformed config: " << e.what() << "\n";
    return malformed_config;
  } catch (const ValidationFailure& e) {
    err << "validation failure: " << e.what() << "\n";
    return validation_failure;
  } catch (const HypothesisViolation& e) {
    err << "validation failure: " << e.what() << "\n";
    return validation_failure;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return numerical_failure;
  } catch (const DomainError& e) {
    err << "validation failure: " << e.what() << "\n";
    return validation_failure;
  }
}

int run(const RunConfig& cfg, std::ostream& err) {
  if (cfg.out.empty()) return run(cfg, std::cout, err);
  // Buffer so that a failed run leaves no partial file behind.
  std::ostringstream buf;
  const int code = run(cfg, buf, err);
  if (code == ok || code == validation_failure) {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "error: malformed config: --out: cannot open '" << cfg.out << "' for writing\n";
      return malformed_config;
    }
    f << buf.str();
  }
  return code;
}

}  // namespace sphspec::cli
