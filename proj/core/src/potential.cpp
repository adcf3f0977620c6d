#include "sphspec/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sphspec/errors.hpp"
#include "sphspec/quadrature.hpp"

namespace sphspec {

namespace {

using nlohmann::json;

constexpr double kTailFloor = 0x1p-60;

double parse_decimal(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw DomainError("potential file: field '" + field + "' must be a decimal string");
  const std::string s = v.get<std::string>();
  double out = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(out)) {
    throw DomainError("potential file: field '" + field + "' is not a decimal number: '" + s + "'");
  }
  return out;
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw DomainError("potential file: missing field '" + where + key + "'");
  }
  return obj.at(key);
}

std::string text_of(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Integral of y q~(y) / (1 + s y) over [a, b]; for a = 0 the innermost panel is
// replaced by a geometric extrapolation of the dyadic panel contributions.
double weighted_integral(const PotentialSpec& p, const AngularMomentum& am, double s, double a, double b) {
  if (!(a >= 0.0) || !(b <= 1.0) || a > b) throw DomainError("integration range must satisfy 0 <= a <= b <= 1");
  if (a == b || p.is_zero()) return 0.0;
  std::vector<double> cuts = p.breakpoints();
  cuts.push_back(a);
  cuts.push_back(b);
  const auto panels = graded_panels(0.125, cuts, kTailFloor);
  const auto& rule = PanelRule::instance();
  double total = 0.0;
  double inner = 0.0, next = 0.0;  // contributions of the two innermost dyadic panels
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const Panel& pn = panels[k];
    if (pn.b <= a || pn.a >= b) continue;
    if (pn.a == 0.0) continue;  // handled by the tail estimate
    const double h = 0.5 * (pn.b - pn.a), m = 0.5 * (pn.b + pn.a);
    double sum = 0.0;
    for (int j = 0; j < PanelRule::kPoints; ++j) {
      const double y = m + h * rule.nodes()[j];
      sum += rule.weights()[j] * y * q_tilde(p, am, y) / (1 + s * y);
    }
    sum *= h;
    if (k == 1) inner = sum;
    if (k == 2) next = sum;
    total += sum;
  }
  if (a == 0.0 && next != 0.0) {
    const double r = inner / next;
    if (!(r < 0.999)) {
      throw HypothesisViolation("x q~(x) is not integrable at 0: graded-mesh tail does not converge");
    }
    total += inner * r / (1 - r);
  }
  return total;
}

}  // namespace

PotentialSpec::PotentialSpec() { finalize(); }

PotentialSpec PotentialSpec::constant(double c) {
  return piecewise(0.0, {PolyPiece{0.0, 1.0, {{c, 0.0}}}}, "constant " + text_of(c));
}

PotentialSpec PotentialSpec::coulomb(double gamma) { return piecewise(gamma, {}, "coulomb " + text_of(gamma)); }

PotentialSpec PotentialSpec::power_law(double coef, double power) {
  return piecewise(0.0, {PolyPiece{0.0, 1.0, {{coef, power}}}}, "power " + text_of(coef) + "*x^" + text_of(power));
}

PotentialSpec PotentialSpec::piecewise(double gamma, std::vector<PolyPiece> pieces, std::string label) {
  PotentialSpec p;
  p.gamma_ = gamma;
  p.kind_ = RegularKind::poly;
  p.pieces_ = std::move(pieces);
  p.label_ = std::move(label);
  p.finalize();
  return p;
}

PotentialSpec PotentialSpec::table(double gamma, std::vector<double> nodes, std::vector<double> values,
                                   std::string label) {
  PotentialSpec p;
  p.gamma_ = gamma;
  p.kind_ = RegularKind::table;
  p.nodes_ = std::move(nodes);
  p.values_ = std::move(values);
  p.label_ = std::move(label);
  p.finalize();
  return p;
}

void PotentialSpec::finalize() {
  if (!std::isfinite(gamma_)) throw DomainError("coulomb_gamma must be finite");
  breaks_.clear();
  bool zero = gamma_ == 0.0;
  if (kind_ == RegularKind::poly) {
    std::sort(pieces_.begin(), pieces_.end(), [](const PolyPiece& x, const PolyPiece& y) { return x.from < y.from; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const PolyPiece& pc = pieces_[i];
      if (!(pc.from >= 0.0) || !(pc.to <= 1.0) || !(pc.from < pc.to)) {
        throw DomainError("polynomial piece must satisfy 0 <= from < to <= 1");
      }
      if (i > 0 && pc.from < pieces_[i - 1].to) throw DomainError("polynomial pieces overlap");
      for (const PolyTerm& t : pc.terms) {
        if (!std::isfinite(t.coef) || !std::isfinite(t.power)) throw DomainError("polynomial term must be finite");
        if (t.coef != 0.0) zero = false;
        if (pc.from == 0.0 && t.coef != 0.0 && !(t.power > -2.0)) {
          throw HypothesisViolation("term x^" + text_of(t.power) + " near 0 violates x q(x) in L^1 (power must be > -2)");
        }
      }
      if (pc.from > 0.0) breaks_.push_back(pc.from);
      if (pc.to < 1.0) breaks_.push_back(pc.to);
    }
  } else {
    if (nodes_.size() != values_.size() || nodes_.size() < 2) {
      throw DomainError("table potential needs matching nodes and values, at least two");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i])) throw DomainError("table entries must be finite");
      if (i > 0 && !(nodes_[i] > nodes_[i - 1])) throw DomainError("table nodes must be strictly increasing");
      if (values_[i] != 0.0) zero = false;
      if (nodes_[i] > 0.0 && nodes_[i] < 1.0) breaks_.push_back(nodes_[i]);
    }
  }
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
  zero_ = zero;
  // Numerical check of the weighted class; throws HypothesisViolation on divergence.
  if (!zero_) weighted_integral(*this, AngularMomentum(0.0), 0.0, 0.0, 1.0);
}

std::optional<double> PotentialSpec::constant_value() const {
  if (zero_) return 0.0;
  if (gamma_ != 0.0 || kind_ != RegularKind::poly || pieces_.size() != 1) return std::nullopt;
  const PolyPiece& pc = pieces_[0];
  if (pc.from != 0.0 || pc.to != 1.0) return std::nullopt;
  double c = 0.0;
  for (const PolyTerm& t : pc.terms) {
    if (t.coef == 0.0) continue;
    if (t.power != 0.0) return std::nullopt;
    c += t.coef;
  }
  return c;
}

double PotentialSpec::regular(double x) const {
  if (kind_ == RegularKind::poly) {
    for (std::size_t i = pieces_.size(); i-- > 0;) {
      const PolyPiece& pc = pieces_[i];
      if (x >= pc.from && (x < pc.to || (pc.to == 1.0 && x <= 1.0))) {
        double s = 0.0;
        for (const PolyTerm& t : pc.terms) s += t.power == 0.0 ? t.coef : t.coef * std::pow(x, t.power);
        return s;
      }
    }
    return 0.0;
  }
  if (x <= nodes_.front()) return values_.front();
  if (x >= nodes_.back()) return values_.back();
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  const double t = (x - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
  return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

double PotentialSpec::operator()(double x) const {
  if (zero_) return 0.0;
  return gamma_ / x + regular(x);
}

PotentialSpec PotentialSpec::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("potential file: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("potential file: top level must be an object");
  const double gamma = doc.contains("coulomb_gamma") ? parse_decimal(doc.at("coulomb_gamma"), "coulomb_gamma") : 0.0;
  const std::string label = doc.contains("label") && doc.at("label").is_string() ? doc.at("label").get<std::string>() : "unnamed";
  if (!doc.contains("regular")) return piecewise(gamma, {}, label);
  const json& reg = doc.at("regular");
  const json& type = require(reg, "type", "regular.");
  if (!type.is_string()) throw DomainError("potential file: field 'regular.type' must be a string");
  const std::string kind = type.get<std::string>();
  if (kind == "poly") {
    const json& pieces = require(reg, "pieces", "regular.");
    if (!pieces.is_array()) throw DomainError("potential file: field 'regular.pieces' must be an array");
    std::vector<PolyPiece> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string where = "regular.pieces[" + std::to_string(i) + "].";
      const json& pc = pieces[i];
      PolyPiece piece;
      piece.from = parse_decimal(require(pc, "from", where), where + "from");
      piece.to = parse_decimal(require(pc, "to", where), where + "to");
      const json& terms = require(pc, "terms", where);
      if (!terms.is_array()) throw DomainError("potential file: field '" + where + "terms' must be an array");
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string tw = where + "terms[" + std::to_string(k) + "].";
        piece.terms.push_back({parse_decimal(require(terms[k], "coef", tw), tw + "coef"),
                               parse_decimal(require(terms[k], "power", tw), tw + "power")});
      }
      out.push_back(std::move(piece));
    }
    return piecewise(gamma, std::move(out), label);
  }
  if (kind == "table") {
    const json& nodes = require(reg, "nodes", "regular.");
    const json& values = require(reg, "values", "regular.");
    if (!nodes.is_array() || !values.is_array()) throw DomainError("potential file: table nodes/values must be arrays");
    std::vector<double> xs, vs;
    for (std::size_t i = 0; i < nodes.size(); ++i) xs.push_back(parse_decimal(nodes[i], "regular.nodes[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < values.size(); ++i) vs.push_back(parse_decimal(values[i], "regular.values[" + std::to_string(i) + "]"));
    return table(gamma, std::move(xs), std::move(vs), label);
  }
  throw DomainError("potential file: field 'regular.type' must be \"poly\" or \"table\"");
}

PotentialSpec PotentialSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read potential file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string PotentialSpec::to_json() const {
  json doc = json::object();
  doc["label"] = label_;
  doc["coulomb_gamma"] = text_of(gamma_);
  json reg = json::object();
  if (kind_ == RegularKind::poly) {
    reg["type"] = "poly";
    json arr = json::array();
    for (const PolyPiece& pc : pieces_) {
      json terms = json::array();
      for (const PolyTerm& t : pc.terms) terms.push_back({{"coef", text_of(t.coef)}, {"power", text_of(t.power)}});
      arr.push_back({{"from", text_of(pc.from)}, {"to", text_of(pc.to)}, {"terms", terms}});
    }
    reg["pieces"] = arr;
  } else {
    reg["type"] = "table";
    json xs = json::array(), vs = json::array();
    for (double v : nodes_) xs.push_back(text_of(v));
    for (double v : values_) vs.push_back(text_of(v));
    reg["nodes"] = xs;
    reg["values"] = vs;
  }
  doc["regular"] = reg;
  return doc.dump(2);
}

double q_eval(const PotentialSpec& p, double x) {
  if (!(x > 0.0) || !(x <= 1.0)) throw DomainError("q_eval requires x in (0, 1]");
  return p(x);
}

double q_tilde(const PotentialSpec& p, const AngularMomentum& am, double x) {
  if (!(x > 0.0) || !(x <= 1.0)) throw DomainError("q_tilde requires x in (0, 1]");
  const double v = std::fabs(p(x));
  return am.log_case() ? (1 - std::log(x)) * v : v;
}

double weighted_norm(const PotentialSpec& p, const AngularMomentum& am) {
  return weighted_integral(p, am, 0.0, 0.0, 1.0);
}

double eps_of_z(const PotentialSpec& p, const AngularMomentum& am, double s) {
  if (!(s >= 0.0)) throw DomainError("eps_of_z requires |z|^{1/2} >= 0");
  return weighted_integral(p, am, s, 0.0, 1.0);
}

double eps_partial(const PotentialSpec& p, const AngularMomentum& am, double s, double a, double b) {
  if (!(s >= 0.0)) throw DomainError("eps_partial requires |z|^{1/2} >= 0");
  return weighted_integral(p, am, s, a, b);
}

}  // namespace sphspec
