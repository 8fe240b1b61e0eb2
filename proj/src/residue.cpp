#include "skewnp/residue.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "skewnp/errors.hpp"

namespace skewnp {

namespace {

BigReal max_r(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

std::string complex_str(const BigComplex& c) {
  std::ostringstream os;
  os << c.real().str(12);
  if (c.imag() != 0) os << (c.imag() < 0 ? "-" : "+") << boost::multiprecision::abs(c.imag()).str(12) << "i";
  return os.str();
}

}  // namespace

BigReal default_cluster_tol() { return pow2(-static_cast<long>(working_bits() / 3)); }
BigReal default_orbit_tol() { return pow2(-static_cast<long>(working_bits() / 4)); }

ResiduePoly::ResiduePoly(std::vector<BigComplex> coeffs) : c_(std::move(coeffs)) { trim(); }

ResiduePoly ResiduePoly::t_power(int n) {
  std::vector<BigComplex> c(static_cast<std::size_t>(n) + 1);
  c.back() = BigComplex(1);
  return ResiduePoly(std::move(c));
}

ResiduePoly ResiduePoly::from_roots(const std::vector<BigComplex>& roots) {
  ResiduePoly r = constant(BigComplex(1));
  for (const auto& z : roots) r = r * ResiduePoly({-z, BigComplex(1)});
  return r;
}

void ResiduePoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

BigComplex ResiduePoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return BigComplex(0);
  return c_[static_cast<std::size_t>(i)];
}

const BigComplex& ResiduePoly::leading() const {
  if (c_.empty()) throw DomainError("zero polynomial has no leading coefficient");
  return c_.back();
}

BigComplex ResiduePoly::operator()(const BigComplex& z) const {
  BigComplex acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ResiduePoly ResiduePoly::derivative() const {
  if (c_.size() <= 1) return ResiduePoly();
  std::vector<BigComplex> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * BigComplex(static_cast<long>(i));
  return ResiduePoly(std::move(d));
}

ResiduePoly ResiduePoly::monic() const {
  if (c_.empty()) throw DomainError("zero polynomial cannot be made monic");
  BigComplex inv = BigComplex(1) / c_.back();
  std::vector<BigComplex> d = c_;
  for (auto& x : d) x *= inv;
  d.back() = BigComplex(1);
  return ResiduePoly(std::move(d));
}

ResiduePoly ResiduePoly::trimmed(const BigReal& tol) const {
  std::vector<BigComplex> d = c_;
  while (!d.empty() && d.back().abs() <= tol) d.pop_back();
  return ResiduePoly(std::move(d));
}

BigReal ResiduePoly::norm_inf() const {
  BigReal m(0);
  for (const auto& x : c_) m = max_r(m, x.abs());
  return m;
}

ResiduePoly operator+(const ResiduePoly& a, const ResiduePoly& b) {
  std::vector<BigComplex> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return ResiduePoly(std::move(r));
}

ResiduePoly operator-(const ResiduePoly& a, const ResiduePoly& b) {
  std::vector<BigComplex> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
  return ResiduePoly(std::move(r));
}

ResiduePoly operator*(const ResiduePoly& a, const ResiduePoly& b) {
  if (a.is_zero() || b.is_zero()) return ResiduePoly();
  std::vector<BigComplex> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return ResiduePoly(std::move(r));
}

ResiduePoly operator*(const BigComplex& s, const ResiduePoly& a) {
  std::vector<BigComplex> r = a.c_;
  for (auto& x : r) x = s * x;
  return ResiduePoly(std::move(r));
}

std::string ResiduePoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const auto& c = c_[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << complex_str(c) << ")";
    if (i > 0) os << "*t";
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

std::pair<ResiduePoly, ResiduePoly> divmod(const ResiduePoly& a, const ResiduePoly& b, const BigReal& tol) {
  if (b.is_zero()) throw ZeroDivision("division by the zero polynomial");
  std::vector<BigComplex> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {ResiduePoly(), a};
  std::vector<BigComplex> q(static_cast<std::size_t>(a.degree() - db + 1));
  const BigComplex inv = BigComplex(1) / b.leading();
  for (int k = a.degree(); k >= db; --k) {
    BigComplex c = r[static_cast<std::size_t>(k)] * inv;
    q[static_cast<std::size_t>(k - db)] = c;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k - db + i)] -= c * b.coeffs()[static_cast<std::size_t>(i)];
    r[static_cast<std::size_t>(k)] = BigComplex(0);
  }
  r.resize(static_cast<std::size_t>(db));
  ResiduePoly rem(std::move(r));
  if (tol > 0) rem = rem.trimmed(tol);
  return {ResiduePoly(std::move(q)), rem};
}

ResiduePoly substitute_affine(const ResiduePoly& p, const BigComplex& l, const BigComplex& m) {
  const ResiduePoly x({m, l});
  ResiduePoly acc;
  for (int i = p.degree(); i >= 0; --i) acc = acc * x + ResiduePoly::constant(p.coeffs()[static_cast<std::size_t>(i)]);
  return acc;
}

BigReal max_coefficient_deviation(const ResiduePoly& a, const ResiduePoly& b) {
  BigReal m(0);
  const int n = std::max(a.degree(), b.degree());
  for (int i = 0; i <= n; ++i) m = max_r(m, (a.coeff(i) - b.coeff(i)).abs());
  return m;
}

int RootsResult::total_multiplicity() const {
  int s = 0;
  for (const auto& c : clusters) s += c.multiplicity;
  return s;
}

std::vector<BigComplex> RootsResult::flat() const {
  std::vector<BigComplex> out;
  for (const auto& c : clusters)
    for (int i = 0; i < c.multiplicity; ++i) out.push_back(c.root);
  return out;
}

namespace {

// |p(z)| against the rounding scale sum |p_k| |z|^k.
bool backward_small(const ResiduePoly& p, const BigComplex& z, const BigReal& eps) {
  BigReal scale(0);
  BigReal az = z.abs();
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) scale = scale * az + it->abs();
  return p(z).abs() <= eps * scale;
}

ResiduePoly nth_derivative(const ResiduePoly& p, int m) {
  ResiduePoly d = p;
  for (int i = 0; i < m; ++i) d = d.derivative();
  return d;
}

std::vector<BigComplex> durand_kerner(const ResiduePoly& p, int max_iter, int& iterations) {
  const int n = p.degree();
  std::vector<BigComplex> z;
  const BigComplex seed(BigReal("0.4"), BigReal("0.9"));
  BigComplex w(1);
  for (int k = 0; k < n; ++k) {
    z.push_back(w);
    w *= seed;
  }
  const BigReal eps = pow2(-static_cast<long>(working_bits()) + 8);
  bool converged = false;
  int it = 0;
  for (; it < max_iter && !converged; ++it) {
    for (int i = 0; i < n; ++i) {
      BigComplex den(1);
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      if (den.is_zero()) den = BigComplex(pow2(-static_cast<long>(working_bits())));
      z[static_cast<std::size_t>(i)] -= p(z[static_cast<std::size_t>(i)]) / den;
    }
    converged = std::all_of(z.begin(), z.end(), [&](const BigComplex& v) { return backward_small(p, v, eps); });
  }
  iterations += it;
  if (!converged) {
    // Multiple roots converge linearly; accept a residual at the squared-root scale.
    const BigReal loose = pow2(-static_cast<long>(working_bits()) / 2);
    if (!std::all_of(z.begin(), z.end(), [&](const BigComplex& v) { return backward_small(p, v, loose); })) {
      std::ostringstream msg;
      msg << "Durand-Kerner did not converge after " << max_iter << " iterations; best iterate:";
      for (const auto& v : z) msg << " " << complex_str(v);
      throw ConvergenceError(msg.str());
    }
  }
  return z;
}

// Roots of the square-free part p / gcd(p, p') are simple, so they come out
// at full precision; each iterate of p then votes for its nearest one.
std::optional<std::vector<std::pair<BigComplex, int>>> squarefree_clusters(const ResiduePoly& p,
                                                                            const std::vector<BigComplex>& z,
                                                                            int max_iter, int& iterations) {
  const int n = p.degree();
  if (n < 2) return std::nullopt;
  const ResiduePoly g = ext_gcd(p, p.derivative()).g;
  if (g.degree() < 1) return std::nullopt;
  const BigReal scale = max_r(BigReal(1), p.norm_inf());
  auto [q, rem] = divmod(p, g, pow2(-static_cast<long>(working_bits() / 2)) * scale);
  q = q.monic();
  if (q.degree() < 1) return std::nullopt;
  std::vector<BigComplex> s = q.degree() == 1 ? std::vector<BigComplex>{-q.coeffs()[0]} : durand_kerner(q, max_iter, iterations);
  const ResiduePoly dq = q.derivative();
  for (auto& r : s)
    for (int k = 0; k < 4; ++k) {
      BigComplex den = dq(r);
      if (den.is_zero()) break;
      r -= q(r) / den;
    }
  std::vector<int> votes(s.size(), 0);
  for (const auto& v : z) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < s.size(); ++j)
      if ((v - s[j]).abs() < (v - s[best]).abs()) best = j;
    ++votes[best];
  }
  std::vector<std::pair<BigComplex, int>> out;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (votes[j] == 0) return std::nullopt;
    out.emplace_back(s[j], votes[j]);
  }
  return out;
}

}  // namespace

RootsResult roots(const ResiduePoly& p0, const std::optional<BigReal>& tol_cluster, int max_iter) {
  if (p0.degree() < 1) throw DomainError("root finding needs degree at least 1");
  const BigReal ctol = tol_cluster ? *tol_cluster : default_cluster_tol();
  RootsResult out;
  // Exact zero roots are peeled off first.
  std::size_t zeros = 0;
  while (p0.coeffs()[zeros].is_zero()) ++zeros;
  std::vector<BigComplex> shifted(p0.coeffs().begin() + static_cast<long>(zeros), p0.coeffs().end());
  const ResiduePoly p = ResiduePoly(std::move(shifted)).monic();
  const int n = p.degree();
  std::vector<BigComplex> z;
  if (n > 0) z = durand_kerner(p, max_iter, out.iterations);
  if (n > 0) {
    if (auto sf = squarefree_clusters(p, z, max_iter, out.iterations)) {
      if (zeros > 0) out.clusters.push_back({BigComplex(0), static_cast<int>(zeros)});
      for (const auto& [r, m] : *sf) out.clusters.push_back({r, m});
      out.max_residual = BigReal(0);
      for (const auto& c : out.clusters) out.max_residual = max_r(out.max_residual, p0(c.root).abs());
      return out;
    }
  }
  // Single-linkage clustering.
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& zi = z[static_cast<std::size_t>(i)];
      const auto& zj = z[static_cast<std::size_t>(j)];
      if ((zi - zj).abs() <= ctol * max_r(BigReal(1), zi.abs())) parent[static_cast<std::size_t>(find(i))] = find(j);
    }
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (group_of[static_cast<std::size_t>(r)] < 0) {
      group_of[static_cast<std::size_t>(r)] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(group_of[static_cast<std::size_t>(r)])].push_back(i);
  }
  if (zeros > 0) out.clusters.push_back({BigComplex(0), static_cast<int>(zeros)});
  for (const auto& g : groups) {
    BigComplex mean(0);
    for (int i : g) mean += z[static_cast<std::size_t>(i)];
    mean /= BigComplex(static_cast<long>(g.size()));
    const int m = static_cast<int>(g.size());
    const ResiduePoly d = nth_derivative(p, m - 1);
    const ResiduePoly dd = d.derivative();
    BigComplex r = mean;
    for (int k = 0; k < 8; ++k) {
      BigComplex den = dd(r);
      if (den.is_zero()) break;
      BigComplex step = d(r) / den;
      if (step.abs() > ctol * max_r(BigReal(1), r.abs())) break;
      r -= step;
      if (step.is_zero()) break;
    }
    out.clusters.push_back({r, m});
  }
  // A root cluster at zero merges with peeled exact zeros.
  if (zeros > 0) {
    for (std::size_t i = 1; i < out.clusters.size(); ++i) {
      if (out.clusters[i].root.abs() <= ctol) {
        out.clusters[0].multiplicity += out.clusters[i].multiplicity;
        out.clusters.erase(out.clusters.begin() + static_cast<long>(i));
        break;
      }
    }
  }
  out.max_residual = BigReal(0);
  for (const auto& c : out.clusters) out.max_residual = max_r(out.max_residual, p0(c.root).abs());
  return out;
}

GcdResult ext_gcd(const ResiduePoly& p, const ResiduePoly& q, const std::optional<BigReal>& tol_opt) {
  const BigReal tol = tol_opt ? *tol_opt : pow2(-static_cast<long>(working_bits() / 2));
  const BigReal scale = max_r(BigReal(1), max_r(p.norm_inf(), q.norm_inf()));
  ResiduePoly r0 = p, r1 = q.trimmed(tol * scale);
  ResiduePoly s0 = ResiduePoly::constant(BigComplex(1)), s1;
  ResiduePoly t0, t1 = ResiduePoly::constant(BigComplex(1));
  if (r0.is_zero() && r1.is_zero()) return {ResiduePoly(), ResiduePoly(), ResiduePoly(), BigReal(0)};
  while (!r1.is_zero()) {
    auto [quo, rem] = divmod(r0, r1, tol * scale);
    ResiduePoly s2 = s0 - quo * s1;
    ResiduePoly t2 = t0 - quo * t1;
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  const BigComplex inv = BigComplex(1) / r0.leading();
  GcdResult out;
  out.g = r0.degree() == 0 ? ResiduePoly::constant(BigComplex(1)) : r0.monic();
  out.a = inv * s0;
  out.b = inv * t0;
  out.condition = max_r(out.a.norm_inf(), out.b.norm_inf());
  return out;
}

BigComplex TMap::apply(const BigComplex& w, long n) const {
  auto [l, m] = affine(n);
  return l * w + m;
}

std::pair<BigComplex, BigComplex> TMap::affine(long n) const {
  if (alpha_is_one || n == 0) return {BigComplex(1), BigComplex(0)};
  BigComplex l = pow_int(alpha_eff, -n);
  return {l, a0 * (l - BigComplex(1))};
}

ResiduePoly twist_residue(const ResiduePoly& p, long n, const TMap& T) {
  if (n < 0) throw DomainError("twist exponent must be non-negative");
  if (n == 0) return p;
  auto [l, m] = T.affine(n);
  return substitute_affine(p, l, m);
}

std::optional<long> orbit_exponent(const BigComplex& c, const BigComplex& c1, const TMap& T, const BigReal& tol) {
  const BigReal scale = max_r(BigReal(1), c1.abs());
  if ((c - c1).abs() <= tol * scale) return 0;
  if (T.alpha_is_one) return std::nullopt;
  const BigComplex w1 = c1 + T.a0;
  if (w1.abs() <= tol * scale) return std::nullopt;  // c1 is the fixed point
  const BigComplex ratio = (c + T.a0) / w1;
  const bool real_alpha = T.alpha_eff.imag() == 0 && T.alpha_eff.real() > 0;
  if (!real_alpha) {
    for (long n = 1; n <= 256; ++n)
      if ((T.apply(c1, n) - c).abs() <= tol * scale) return n;
    return std::nullopt;
  }
  if (boost::multiprecision::abs(ratio.imag()) > tol * max_r(BigReal(1), ratio.abs())) return std::nullopt;
  if (ratio.real() <= 0) return std::nullopt;
  const BigReal n_real = -boost::multiprecision::log(ratio.real()) / boost::multiprecision::log(T.alpha_eff.real());
  const BigReal nr = boost::multiprecision::round(n_real);
  if (boost::multiprecision::abs(n_real - nr) >= 10 * tol) return std::nullopt;
  if (nr < 0) return std::nullopt;
  return nr.convert_to<long>();
}

OrbitPartition orbit_partition(const std::vector<BigComplex>& rts, const BigComplex& c1, const TMap& T,
                               const BigReal& tol) {
  OrbitPartition out;
  out.base = c1;
  for (const auto& c : rts) {
    if (auto n = orbit_exponent(c, c1, T, tol)) out.members.push_back({c, *n});
    else out.outsiders.push_back(c);
  }
  return out;
}

TwistCheck twist_coprime_check_affine(const ResiduePoly& g, const ResiduePoly& h, const TMap& T, const BigReal& tol) {
  if (g.degree() < 1 || h.degree() < 1) return CoprimeForAllN{};
  const auto rg = roots(g).clusters;
  const auto rh = roots(h).clusters;
  std::optional<long> best;
  for (const auto& cg : rg) {
    const BigReal scale = max_r(BigReal(1), cg.root.abs());
    const bool fixed = T.alpha_is_one || (cg.root + T.a0).abs() <= tol * scale;
    for (const auto& ch : rh) {
      std::optional<long> n;
      if ((ch.root - cg.root).abs() <= tol * scale) {
        if (fixed) n = 1;
      } else {
        n = orbit_exponent(ch.root, cg.root, T, tol);
      }
      if (n && *n >= 1 && (!best || *n < *best)) best = n;
    }
  }
  if (!best) return CoprimeForAllN{};
  return FailsAt{*best, twist_residue(h, *best, T)};
}

DeltaResult delta_set_member(const BigComplex& c, const BigComplex& a0, const BigReal& alpha, int d, int depth,
                             const std::optional<BigReal>& tol_opt) {
  if (d < 1) throw DomainError("delta set needs d >= 1");
  const BigReal tol = tol_opt ? *tol_opt : default_orbit_tol();
  const BigReal cscale = max_r(BigReal(1), max_r(c.abs(), a0.abs()));
  if (a0.abs() <= tol) {
    if (c.abs() <= tol * cscale) return DeltaMember{std::vector<long>(static_cast<std::size_t>(d), 0)};
    return DeltaNonMember{};
  }
  if ((c + a0).abs() <= tol * cscale) return DeltaNonMember{};
  const BigComplex sc = BigComplex(static_cast<long>(d)) * a0 / (c + a0);
  if (boost::multiprecision::abs(sc.imag()) > tol * max_r(BigReal(1), sc.abs())) return DeltaNonMember{};
  const BigReal s = sc.real();
  const BigReal stol = tol * max_r(BigReal(1), boost::multiprecision::abs(s));
  if (boost::multiprecision::abs(alpha - 1) <= pow2(-static_cast<long>(working_bits() / 4))) {
    if (boost::multiprecision::abs(s - d) <= stol) return DeltaMember{std::vector<long>(static_cast<std::size_t>(d), 0)};
    return DeltaNonMember{};
  }
  std::vector<BigReal> term(static_cast<std::size_t>(depth) + 1);
  for (int n = 0; n <= depth; ++n) term[static_cast<std::size_t>(n)] = boost::multiprecision::pow(alpha, -n);
  const bool decreasing = alpha > 1;
  bool depth_cut = false;
  std::vector<long> chosen;
  std::function<bool(int, const BigReal&)> dfs = [&](int n_min, const BigReal& rem) -> bool {
    const int left = d - static_cast<int>(chosen.size());
    if (left == 0) return boost::multiprecision::abs(rem) <= stol;
    const BigReal& a = term[static_cast<std::size_t>(n_min)];
    const BigReal& b = term[static_cast<std::size_t>(depth)];
    const BigReal lo = decreasing ? b : a;
    const BigReal hi = decreasing ? a : b;
    if (rem > left * hi + stol) {
      if (!decreasing) depth_cut = true;
      return false;
    }
    if (rem < left * lo - stol) {
      if (decreasing && rem > 0) depth_cut = true;
      return false;
    }
    for (int n = n_min; n <= depth; ++n) {
      chosen.push_back(n);
      if (dfs(n, rem - term[static_cast<std::size_t>(n)])) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (dfs(0, s)) return DeltaMember{chosen};
  if (depth_cut) return DeltaUnknown{};
  return DeltaNonMember{};
}

}  // namespace skewnp
