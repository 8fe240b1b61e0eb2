#include <cstdlib>
#include <iostream>
#include <iterator>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewnp/factorizer.hpp"
#include "skewnp/text.hpp"

using namespace skewnp;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kObstruction = 2 };

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string alpha;
  std::string delta = "0";
  std::optional<std::string> prec;
  unsigned bits = 128;
  std::int64_t ramification_cap = 256;
  bool json = false;
  std::optional<std::string> tol;
  std::optional<std::string> zero_threshold;
  bool seedless = false;
  bool quadratic = false;
  std::string ring = "puiseux";
  std::vector<std::string> args;
};

std::string read_arg(const std::string& s) {
  if (s != "-") return s;
  std::string all{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  while (!all.empty() && std::isspace(static_cast<unsigned char>(all.back()))) all.pop_back();
  return all;
}

// Scalar literal, or 2^e.
BigReal parse_magnitude(const std::string& s) {
  if (s.rfind("2^", 0) == 0) {
    try {
      return pow2(std::stol(s.substr(2)));
    } catch (const std::exception&) {
      throw UsageError("bad exponent in " + s);
    }
  }
  const GaussianRational v = parse_scalar(s);
  if (v.im != 0 || v.re < 0) throw UsageError("tolerances are non-negative reals: " + s);
  return v.to_complex().real();
}

Rational parse_order(const std::string& s) {
  const GaussianRational v = parse_scalar(s);
  if (v.im != 0) throw UsageError("--prec must be rational");
  return v.re;
}

PuiseuxRingPtr make_ring(const Options& o, bool allow_complex, std::int64_t L = 1) {
  if (o.alpha.empty()) throw UsageError("--alpha is required");
  Alpha a = parse_alpha(o.alpha);
  if (!a.is_positive_real() && !allow_complex)
    throw UsageError("complex --alpha is only accepted by sigma-zero and eval");
  return PuiseuxRing::make(std::move(a), L, parse_series(o.delta));
}

std::int64_t common_ramification(const std::vector<const PuiseuxPoly*>& ps) {
  std::int64_t L = 1;
  for (const PuiseuxPoly* p : ps)
    for (const auto& c : p->coeffs()) L = std::lcm(L, c.minimal_ramification());
  return L;
}

FactorConfig factor_config(const Options& o) {
  FactorConfig cfg;
  if (o.prec) cfg.target_order = parse_order(*o.prec);
  cfg.bits = o.bits;
  cfg.max_ramification = o.ramification_cap;
  if (o.tol) cfg.residual_tol = parse_magnitude(*o.tol);
  if (o.zero_threshold) cfg.zero_threshold = parse_magnitude(*o.zero_threshold);
  return cfg;
}

std::string linear_factor(const PuiseuxRingPtr& R, const PuiseuxSeries& c) {
  return format_poly(PuiseuxPoly(R, {-c, PuiseuxSeries(1)}));
}

std::string format_residue(const ResiduePoly& p) {
  return format_poly(lift_residue(PuiseuxRing::make(Alpha::from_rational(Rational(1))), p));
}

// C[[x, rho]] polynomials share the Puiseux text form with integer exponents.
SkewSeriesPoly to_skew_series(const PuiseuxPoly& p, const std::shared_ptr<const SkewSeriesRing>& S) {
  std::vector<SkewSeries> out;
  for (const auto& c : p.coeffs()) {
    if (c.minimal_ramification() != 1 || (!c.is_zero() && c.ord() < Valuation(0)))
      throw UsageError("skew-series coefficients need non-negative integer exponents");
    std::int64_t trunc = kExact;
    if (!c.is_exact()) {
      const Rational t = c.precision().value();
      if (denominator(t) != 1 || t < 0) throw UsageError("skew-series truncations need integer orders");
      trunc = numerator(t).convert_to<std::int64_t>();
    }
    std::vector<BigComplex> u;
    for (const auto& t : c.terms()) {
      const std::int64_t k = t.k / c.ramification();
      if (static_cast<std::int64_t>(u.size()) <= k) u.resize(static_cast<std::size_t>(k + 1));
      u[static_cast<std::size_t>(k)] = t.c;
    }
    out.emplace_back(std::move(u), trunc);
  }
  return SkewSeriesPoly(S, std::move(out));
}

std::string format_skew_series(const SkewSeriesPoly& p) {
  const auto R = PuiseuxRing::make(Alpha::from_rational(Rational(1)));
  std::vector<PuiseuxSeries> cs;
  for (const auto& c : p.coeffs()) {
    std::vector<PuiseuxSeries::Term> terms;
    for (std::size_t k = 0; k < c.coeffs().size(); ++k)
      if (c.coeffs()[k] != BigComplex(0)) terms.push_back({static_cast<std::int64_t>(k), c.coeffs()[k]});
    cs.push_back(PuiseuxSeries::from_terms(1, std::move(terms), c.trunc()));
  }
  return format_poly(PuiseuxPoly(R, std::move(cs)));
}

int expect_args(const Options& o, std::size_t lo, std::size_t hi, const char* usage) {
  if (o.args.size() < lo || o.args.size() > hi) throw UsageError(std::string("usage: ") + usage);
  return 0;
}

int cmd_factor(const Options& o, Json& out) {
  expect_args(o, 1, 1, "factor POLY");
  const auto R = make_ring(o, false);
  const PuiseuxPoly f = parse_poly(read_arg(o.args[0]), R);
  const FactorConfig cfg = factor_config(o);
  const Factorization fac = newton_puiseux_factor(f, cfg);
  out["factors"] = Json::array();
  for (const auto& c : fac.factors) out["factors"].push_back(linear_factor(R, c));
  out["leading_unit"] = format_series(fac.leading_unit);
  out["residual"] = format_real(fac.residual);
  out["order"] = format_rational(cfg.target_order);
  out["ramification"] = fac.ramification;
  out["bits"] = fac.bits;
  out["partial"] = fac.partial;
  out["iso_trail"] = Json::array();
  for (const auto& r : fac.iso_trail) out["iso_trail"].push_back(r.str());
  return kOk;
}

int cmd_sigma_zero(const Options& o, Json& out) {
  expect_args(o, 1, 1, "sigma-zero POLY");
  const auto R = make_ring(o, true);
  const PuiseuxPoly f = parse_poly(read_arg(o.args[0]), R);
  const FactorConfig cfg = factor_config(o);
  PuiseuxSeries z;
  if (o.quadratic || !R->alpha().is_positive_real()) {
    if (f.degree() != 2) throw UsageError("the quadratic recursion needs a degree 2 polynomial");
    QuadraticZero q = sigma_zero_quadratic(f, cfg);
    if (auto* ob = std::get_if<QuadraticObstruction>(&q)) {
      out["error"] = "obstruction";
      out["q"] = format_rational(ob->q);
      out["forcing"] = format_complex(ob->forcing);
      return kObstruction;
    }
    z = std::get<PuiseuxSeries>(q);
  } else {
    z = sigma_zero(f, cfg);
  }
  out["zero"] = format_series(z);
  out["check_ord"] = evaluate(f, z).valuation_bound().str();
  return kOk;
}

int cmd_eval(const Options& o, Json& out) {
  expect_args(o, 2, 2, "eval POLY SERIES");
  const auto R = make_ring(o, true);
  const PuiseuxPoly f = parse_poly(read_arg(o.args[0]), R);
  out["value"] = format_series(evaluate(f, parse_series(read_arg(o.args[1]))));
  return kOk;
}

int cmd_mul(const Options& o, Json& out) {
  expect_args(o, 2, 2, "mul POLY POLY");
  const auto R = make_ring(o, false);
  out["product"] = format_poly(parse_poly(read_arg(o.args[0]), R) * parse_poly(read_arg(o.args[1]), R));
  return kOk;
}

int cmd_divmod(const Options& o, Json& out) {
  expect_args(o, 2, 2, "divmod POLY DIVISOR");
  const auto R = make_ring(o, false);
  const auto [q, r] = left_divmod(parse_poly(read_arg(o.args[0]), R), parse_poly(read_arg(o.args[1]), R));
  out["quotient"] = format_poly(q);
  out["remainder"] = format_poly(r);
  return kOk;
}

template <class Ring>
int run_hensel(const SkewPoly<Ring>& f, const SkewPoly<Ring>& g, const SkewPoly<Ring>& h, long N, std::int64_t L,
               Json& out, std::string (*fmt)(const SkewPoly<Ring>&)) {
  try {
    const auto res = hensel_lift(f, g, h, N);
    out["g_hat"] = fmt(res.g_hat);
    out["h_hat"] = fmt(res.h_hat);
    out["achieved_order"] = format_rational(Rational(res.achieved, L));
    return kOk;
  } catch (const TwistCoprimeFailure& e) {
    out["error"] = "twist_coprime_failed";
    out["n"] = e.n();
    out["witness"] = format_residue(e.witness());
    return kObstruction;
  }
}

int cmd_hensel(const Options& o, Json& out) {
  expect_args(o, 3, 3, "hensel POLY G H");
  const Rational order = o.prec ? parse_order(*o.prec) : Rational(20);
  if (o.ring == "skew-series") {
    const auto P = PuiseuxRing::make(Alpha::from_rational(Rational(1)));
    const auto S = SkewSeriesRing::make();
    if (denominator(order) != 1) throw UsageError("--prec must be an integer over C[[x, rho]]");
    const long N = numerator(order).convert_to<long>();
    return run_hensel<SkewSeriesRing>(to_skew_series(parse_poly(read_arg(o.args[0]), P), S),
                                      to_skew_series(parse_poly(read_arg(o.args[1]), P), S),
                                      to_skew_series(parse_poly(read_arg(o.args[2]), P), S), N, 1, out,
                                      format_skew_series);
  }
  if (o.ring != "puiseux") throw UsageError("--ring is puiseux or skew-series");
  const auto R1 = make_ring(o, false);
  PuiseuxPoly f = parse_poly(read_arg(o.args[0]), R1);
  PuiseuxPoly g = parse_poly(read_arg(o.args[1]), R1);
  PuiseuxPoly h = parse_poly(read_arg(o.args[2]), R1);
  const std::int64_t L = common_ramification({&f, &g, &h});
  const auto R = make_ring(o, false, L);
  f = rehome(f, R);
  g = rehome(g, R);
  h = rehome(h, R);
  const Rational units = order * L;
  if (denominator(units) != 1) throw UsageError("--prec must be a multiple of 1/" + std::to_string(L));
  return run_hensel<PuiseuxRing>(f, g, h, numerator(units).convert_to<long>(), L, out, format_poly);
}

int cmd_verify(const Options& o, Json& out) {
  if (o.args.size() < 2) throw UsageError("usage: verify POLY ZERO...");
  const auto R = make_ring(o, false);
  const PuiseuxPoly f = parse_poly(read_arg(o.args[0]), R);
  Factorization fac;
  for (std::size_t i = 1; i < o.args.size(); ++i) fac.factors.push_back(parse_series(read_arg(o.args[i])));
  const BigReal tol = o.tol ? parse_magnitude(*o.tol) : pow2(-static_cast<long>(working_bits() / 2));
  const Valuation upto = o.prec ? Valuation(parse_order(*o.prec)) : Valuation::infinity();
  const VerifyReport rep = verify_factorization(f, fac, tol, upto);
  out["ok"] = rep.ok;
  out["deviation"] = format_real(rep.deviation);
  out["compared_to"] = rep.compared_to.str();
  out["zero_check"] = rep.zero_check.str();
  return rep.ok ? kOk : kObstruction;
}

void print_text(const Json& j) {
  for (const auto& [key, v] : j.items()) {
    if (v.is_array()) {
      std::cout << key << ":\n";
      for (const auto& e : v) std::cout << "  " << (e.is_string() ? e.get<std::string>() : e.dump()) << "\n";
    } else {
      std::cout << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skew polynomials over Puiseux series: factoring, sigma-zeros and Hensel lifting."};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("SKEWNP_BITS")) {
    try {
      o.bits = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "error: SKEWNP_BITS is not a number\n";
      return kUsage;
    }
  }
  app.add_option("--alpha", o.alpha, "sigma(x) = alpha x; a rational, or complex for sigma-zero and eval");
  app.add_option("--delta", o.delta, "parameter a of delta_a(b) = a (sigma(b) - b)")->capture_default_str();
  app.add_option("--prec", o.prec, "target x-adic order (default 20)");
  app.add_option("--bits", o.bits, "scalar precision in bits (default $SKEWNP_BITS or 128)")->capture_default_str();
  app.add_option("--ramification-cap", o.ramification_cap, "largest ramification index tried")->capture_default_str();
  app.add_flag("--json", o.json, "JSON output");
  app.add_option("--tol", o.tol, "residual tolerance, a real literal or 2^e");
  app.add_option("--zero-threshold", o.zero_threshold, "coefficients below this are dropped");
  app.add_flag("--seedless", o.seedless, "deterministic mode (always on)");

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Options&, Json&);
  };
  const Cmd cmds[] = {
      {"factor", "factor POLY into linear factors", cmd_factor},
      {"sigma-zero", "a sigma-zero of POLY", cmd_sigma_zero},
      {"eval", "remainder of POLY on left division by t - SERIES", cmd_eval},
      {"mul", "product of two polynomials", cmd_mul},
      {"divmod", "POLY = q DIVISOR + r", cmd_divmod},
      {"hensel", "lift G H with POLY = G H on residues", cmd_hensel},
      {"verify", "check POLY = (t - ZERO_1)...(t - ZERO_d)", cmd_verify},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const Cmd& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->add_option("args", o.args, "polynomials and series; - reads stdin")->required();
    if (std::string(c.name) == "hensel")
      sub->add_option("--ring", o.ring, "puiseux or skew-series")->capture_default_str();
    if (std::string(c.name) == "sigma-zero") sub->add_flag("--quadratic", o.quadratic, "use the degree 2 recursion");
    subs.emplace_back(sub, &c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Json out;
  int status = kOk;
  try {
    set_working_bits(o.bits);
    for (const auto& [sub, cmd] : subs)
      if (sub->parsed()) status = cmd->run(o, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MathObstruction& e) {
    out["error"] = e.what();
    status = kObstruction;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (o.json)
    std::cout << out.dump(2) << "\n";
  else
    print_text(out);
  return status;
}
