#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "enriques/algebra.hpp"

namespace enriques {

// Exponent pair with graded-lex order: lower total degree first,
// and within a degree higher x-exponent first (x^d, x^{d-1}y, ..., y^d).
struct Exp {
  int dx = 0, dy = 0;
  int grade() const { return dx + dy; }
  bool operator==(const Exp&) const = default;
  bool operator<(const Exp& o) const {
    if (grade() != o.grade()) return grade() < o.grade();
    return dx > o.dx;
  }
};

// Sparse exact bivariate polynomial in x (= x1) and y (= x2).
class BiPoly {
 public:
  BiPoly() : spec_(FieldSpec::rationals()) {}
  explicit BiPoly(const FieldSpec& fs) : spec_(fs) {}

  static BiPoly zero(const FieldSpec& fs) { return BiPoly(fs); }

  static BiPoly constant(const Scalar& c) {
    BiPoly f(c.spec());
    f.add_term({0, 0}, c);
    return f;
  }

  static BiPoly monomial(const FieldSpec& fs, int dx, int dy, const Scalar& c) {
    BiPoly f(fs);
    f.add_term({dx, dy}, c);
    return f;
  }

  static BiPoly var_x(const FieldSpec& fs) { return monomial(fs, 1, 0, Scalar::one(fs)); }
  static BiPoly var_y(const FieldSpec& fs) { return monomial(fs, 0, 1, Scalar::one(fs)); }

  const FieldSpec& spec() const { return spec_; }
  const std::map<Exp, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  // Total degree; -1 stands in for the zero polynomial's degree of -infinity.
  int degree() const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, e.grade());
    return d;
  }

  // Order of vanishing at the origin.
  int min_grade() const {
    require(!terms_.empty(), Errc::ZeroPolynomial, "zero polynomial has no minimal degree");
    return terms_.begin()->first.grade();
  }

  Scalar coeff(int dx, int dy) const {
    auto it = terms_.find({dx, dy});
    return it == terms_.end() ? Scalar::zero(spec_) : it->second;
  }

  void add_term(Exp e, const Scalar& c) {
    if (c.is_zero()) return;
    check_internal(c.spec() == spec_, "term field mismatch");
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  BiPoly operator-() const {
    BiPoly r(spec_);
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }

  BiPoly operator+(const BiPoly& o) const {
    match(o);
    BiPoly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }

  BiPoly operator-(const BiPoly& o) const { return *this + (-o); }

  BiPoly operator*(const BiPoly& o) const {
    match(o);
    BiPoly r(spec_);
    for (auto& [e1, c1] : terms_)
      for (auto& [e2, c2] : o.terms_) r.add_term({e1.dx + e2.dx, e1.dy + e2.dy}, c1 * c2);
    return r;
  }

  BiPoly operator*(const Scalar& s) const {
    BiPoly r(spec_);
    for (auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }

  BiPoly& operator+=(const BiPoly& o) { return *this = *this + o; }
  BiPoly& operator-=(const BiPoly& o) { return *this = *this - o; }
  BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }

  bool operator==(const BiPoly& o) const { return spec_ == o.spec_ && terms_ == o.terms_; }

  BiPoly pow(int k) const {
    check_internal(k >= 0, "negative power");
    BiPoly r = constant(Scalar::one(spec_));
    BiPoly b = *this;
    while (k > 0) {
      if (k & 1) r *= b;
      b = (k >>= 1) ? b * b : b;
    }
    return r;
  }

  Scalar eval(const Scalar& x, const Scalar& y) const {
    Scalar acc = Scalar::zero(spec_);
    for (auto& [e, c] : terms_) {
      Scalar t = c;
      for (int i = 0; i < e.dx; ++i) t *= x;
      for (int i = 0; i < e.dy; ++i) t *= y;
      acc += t;
    }
    return acc;
  }

  // f(gx, gy), expanded exactly.
  BiPoly subst(const BiPoly& gx, const BiPoly& gy) const {
    match(gx);
    match(gy);
    std::vector<BiPoly> px{constant(Scalar::one(spec_))}, py{constant(Scalar::one(spec_))};
    BiPoly r(spec_);
    for (auto& [e, c] : terms_) {
      while ((int)px.size() <= e.dx) px.push_back(px.back() * gx);
      while ((int)py.size() <= e.dy) py.push_back(py.back() * gy);
      r += px[e.dx] * py[e.dy] * c;
    }
    return r;
  }

  // f(x + a, y + b)
  BiPoly shift(const Scalar& a, const Scalar& b) const {
    BiPoly gx = var_x(spec_) + constant(a);
    BiPoly gy = var_y(spec_) + constant(b);
    return subst(gx, gy);
  }

  // Exact division by x^k (every term must carry it).
  BiPoly divide_pow_x(int k) const {
    BiPoly r(spec_);
    for (auto& [e, c] : terms_) {
      check_internal(e.dx >= k, "inexact division by x^k");
      r.terms_.emplace(Exp{e.dx - k, e.dy}, c);
    }
    return r;
  }

  BiPoly divide_pow_y(int k) const {
    BiPoly r(spec_);
    for (auto& [e, c] : terms_) {
      check_internal(e.dy >= k, "inexact division by y^k");
      r.terms_.emplace(Exp{e.dx, e.dy - k}, c);
    }
    return r;
  }

  BiPoly drop_below_grade(int m) const {
    BiPoly r(spec_);
    for (auto& [e, c] : terms_)
      if (e.grade() >= m) r.terms_.emplace(e, c);
    return r;
  }

  // Homogeneous part of lowest total degree (the tangent cone at the origin).
  BiPoly lowest_form() const {
    BiPoly r(spec_);
    if (terms_.empty()) return r;
    int m = min_grade();
    for (auto& [e, c] : terms_) {
      if (e.grade() > m) break;
      r.terms_.emplace(e, c);
    }
    return r;
  }

  BiPoly deriv_x() const {
    BiPoly r(spec_);
    for (auto& [e, c] : terms_)
      if (e.dx > 0) r.add_term({e.dx - 1, e.dy}, c * Scalar::of_int(spec_, e.dx));
    return r;
  }

  BiPoly deriv_y() const {
    BiPoly r(spec_);
    for (auto& [e, c] : terms_)
      if (e.dy > 0) r.add_term({e.dx, e.dy - 1}, c * Scalar::of_int(spec_, e.dy));
    return r;
  }

  BiPoly value_part() const {
    BiPoly r(spec_.base());
    for (auto& [e, c] : terms_) r.add_term(e, c.value_part());
    return r;
  }

  BiPoly deriv_part() const {
    BiPoly r(spec_.base());
    for (auto& [e, c] : terms_) r.add_term(e, c.deriv_part());
    return r;
  }

  BiPoly promoted() const {
    BiPoly r(spec_.with_dual());
    for (auto& [e, c] : terms_) r.add_term(e, c.promoted());
    return r;
  }

  BiPoly swap_vars() const {
    BiPoly r(spec_);
    for (auto& [e, c] : terms_) r.terms_.emplace(Exp{e.dy, e.dx}, c);
    return r;
  }

 private:
  void match(const BiPoly& o) const {
    if (spec_ != o.spec_)
      fail(Errc::MixedFields, "polynomials over " + spec_.str() + " and " + o.spec_.str());
  }

  FieldSpec spec_;
  std::map<Exp, Scalar> terms_;
};

inline BiPoly substitute(const BiPoly& f, const BiPoly& gx, const BiPoly& gy) {
  return f.subst(gx, gy);
}

// ---------------------------------------------------------------------------
// Univariate helpers (dense, ascending coefficients).

using UniPoly = std::vector<Scalar>;

inline int uni_degree(const UniPoly& f) {
  for (int i = (int)f.size() - 1; i >= 0; --i)
    if (!f[i].is_zero()) return i;
  return -1;
}

inline Scalar uni_eval(const UniPoly& f, const Scalar& t) {
  check_internal(!f.empty(), "empty univariate");
  Scalar acc = Scalar::zero(f[0].spec());
  for (int i = (int)f.size() - 1; i >= 0; --i) acc = acc * t + f[i];
  return acc;
}

// Synthetic division by (t - r); requires r to be a root.
inline UniPoly uni_deflate(const UniPoly& f, const Scalar& r) {
  int d = uni_degree(f);
  check_internal(d >= 1, "deflating a constant");
  UniPoly q(d, Scalar::zero(r.spec()));
  Scalar carry = f[d];
  for (int i = d - 1; i >= 0; --i) {
    q[i] = carry;
    carry = f[i] + carry * r;
  }
  check_internal(carry.is_zero(), "deflation at a non-root");
  return q;
}

// Restriction of f to the line x = 0, as a polynomial in y.
inline UniPoly restrict_x0(const BiPoly& f) {
  UniPoly r(std::max(f.degree() + 1, 1), Scalar::zero(f.spec()));
  for (auto& [e, c] : f.terms())
    if (e.dx == 0) r[e.dy] += c;
  return r;
}

inline UniPoly restrict_y0(const BiPoly& f) {
  UniPoly r(std::max(f.degree() + 1, 1), Scalar::zero(f.spec()));
  for (auto& [e, c] : f.terms())
    if (e.dy == 0) r[e.dx] += c;
  return r;
}

// Divisors of |n| via trial division; a surviving cofactor must be prime
// or the search is abandoned (the cap guards the rational-root hunt).
inline std::vector<mpz_class> all_divisors(mpz_class n) {
  if (n < 0) n = -n;
  check_internal(n != 0, "divisors of zero");
  std::vector<std::pair<mpz_class, int>> factors;
  mpz_class d = 2;
  while (d * d <= n && d <= 1000000) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      factors.push_back({d, e});
    }
    d += (d == 2) ? 1 : 2;
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      fail(Errc::RootSearchOverflow, "coefficient too hard to factor for rational-root search");
    factors.push_back({n, 1});
  }
  std::vector<mpz_class> divs{1};
  for (auto& [p, e] : factors) {
    size_t sz = divs.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * pk);
    }
  }
  return divs;
}

// All roots of f in the base field, with multiplicities; whatever does not
// split off as a linear factor is returned in `residual`.
inline std::vector<std::pair<Scalar, int>> uni_roots(const UniPoly& f, const FieldSpec& fs,
                                                     UniPoly* residual = nullptr) {
  check_internal(!fs.dual, "uni_roots over a dual ring");
  int d = uni_degree(f);
  require(d >= 0, Errc::ZeroPolynomial, "root search on the zero polynomial");
  UniPoly g(f.begin(), f.begin() + (d + 1));
  std::vector<std::pair<Scalar, int>> roots;
  auto take_root = [&](const Scalar& r) {
    int mult = 0;
    while (uni_degree(g) >= 1 && uni_eval(g, r).is_zero()) {
      g = uni_deflate(g, r);
      ++mult;
    }
    if (mult > 0) roots.push_back({r, mult});
  };

  if (fs.kind == FieldKind::PrimeField) {
    for (long v = 0; v < fs.p && uni_degree(g) >= 1; ++v) take_root(Scalar::of_int(fs, v));
  } else {
    take_root(Scalar::zero(fs));
    if (uni_degree(g) >= 1) {
      // Clear denominators, then try num/den over divisors of the extremes.
      mpz_class lcm = 1;
      for (auto& c : g) lcm = ::lcm(lcm, c.value().get_den());
      std::vector<mpz_class> zc;
      for (auto& c : g) zc.push_back(mpz_class(c.value() * lcm));
      int dd = uni_degree(g);
      int low = 0;
      while (zc[low] == 0) ++low;
      check_internal(low == 0, "trailing zero after root extraction");
      auto nums = all_divisors(zc[0]);
      auto dens = all_divisors(zc[dd]);
      for (auto& n : nums) {
        for (auto& den : dens) {
          if (uni_degree(g) < 1) break;
          mpq_class cand(n, den);
          cand.canonicalize();
          take_root(Scalar::of_mpq(fs, cand));
          take_root(Scalar::of_mpq(fs, -cand));
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end(),
            [](auto& a, auto& b) { return Scalar::cmp(a.first, b.first) < 0; });
  if (residual) *residual = g;
  return roots;
}

inline UniPoly uni_gcd(UniPoly a, UniPoly b) {
  check_internal(!a.empty() || !b.empty(), "gcd of empties");
  FieldSpec fs = (a.empty() ? b : a)[0].spec();
  auto norm = [&](UniPoly& f) {
    int d = uni_degree(f);
    if (d < 0) {
      f.clear();
      return;
    }
    f.resize(d + 1);
    Scalar lead = f[d].inverse();
    for (auto& c : f) c *= lead;
  };
  norm(a);
  norm(b);
  while (!b.empty()) {
    // a mod b for monic b
    int db = uni_degree(b);
    while (uni_degree(a) >= db && uni_degree(a) >= 0) {
      int da = uni_degree(a);
      Scalar c = a[da];
      for (int i = 0; i <= db; ++i) a[da - db + i] -= c * b[i];
      a.resize(std::max(uni_degree(a) + 1, 0));
    }
    std::swap(a, b);
    norm(b);
  }
  if (a.empty()) a.push_back(Scalar::zero(fs));
  return a;
}

inline UniPoly uni_div_exact(UniPoly u, const UniPoly& v) {
  int dv = uni_degree(v);
  check_internal(dv >= 0, "division by zero polynomial");
  const FieldSpec fs = v[dv].spec();
  int du = uni_degree(u);
  if (du < 0) return {Scalar::zero(fs)};
  check_internal(du >= dv, "inexact univariate division");
  UniPoly q(du - dv + 1, Scalar::zero(fs));
  Scalar inv = v[dv].inverse();
  for (int k = du - dv; k >= 0; --k) {
    Scalar c = u[k + dv] * inv;
    q[k] = c;
    for (int i = 0; i <= dv; ++i) u[k + i] -= c * v[i];
  }
  check_internal(uni_degree(u) < 0, "nonzero remainder in exact division");
  return q;
}

// ---------------------------------------------------------------------------
// Bivariate gcd via content / primitive part and pseudo-remainders in y.

namespace gcddetail {

inline int deg_y(const BiPoly& f) {
  int d = -1;
  for (auto& [e, c] : f.terms()) d = std::max(d, e.dy);
  return d;
}

// y-slices as univariate polynomials in x
inline std::vector<UniPoly> y_slices(const BiPoly& f, int upto_dy) {
  int dx_max = 0;
  for (auto& [e, c] : f.terms()) dx_max = std::max(dx_max, e.dx);
  std::vector<UniPoly> out(upto_dy + 1, UniPoly(dx_max + 1, Scalar::zero(f.spec())));
  for (auto& [e, c] : f.terms()) out[e.dy][e.dx] = c;
  return out;
}

inline BiPoly from_y_slices(const std::vector<UniPoly>& slices, const FieldSpec& fs) {
  BiPoly f(fs);
  for (int dy = 0; dy < (int)slices.size(); ++dy)
    for (int dx = 0; dx < (int)slices[dy].size(); ++dx) f.add_term({dx, dy}, slices[dy][dx]);
  return f;
}

inline UniPoly content_y(const BiPoly& f) {
  int dy = deg_y(f);
  check_internal(dy >= 0, "content of zero");
  auto slices = y_slices(f, dy);
  UniPoly c;
  bool first = true;
  for (auto& s : slices) {
    if (uni_degree(s) < 0) continue;
    c = first ? s : uni_gcd(c, s);
    first = false;
  }
  return c;
}

inline BiPoly divide_content_y(const BiPoly& f, const UniPoly& content) {
  int dy = deg_y(f);
  auto slices = y_slices(f, dy);
  for (auto& s : slices)
    s = uni_degree(s) < 0 ? UniPoly{Scalar::zero(f.spec())} : uni_div_exact(s, content);
  return from_y_slices(slices, f.spec());
}

inline BiPoly lead_y(const BiPoly& f) {  // leading y-coefficient, as a poly in x
  int dy = deg_y(f);
  BiPoly out(f.spec());
  for (auto& [e, c] : f.terms())
    if (e.dy == dy) out.add_term({e.dx, 0}, c);
  return out;
}

inline BiPoly pseudo_rem_y(BiPoly a, const BiPoly& b) {
  int db = deg_y(b);
  BiPoly lb = lead_y(b);
  while (!a.is_zero() && deg_y(a) >= db) {
    int da = deg_y(a);
    BiPoly la = lead_y(a);
    BiPoly shift = BiPoly::monomial(a.spec(), 0, da - db, Scalar::one(a.spec()));
    a = a * lb - b * la * shift;
  }
  return a;
}

}  // namespace gcddetail

// gcd up to a scalar; the result is normalized so its graded-lex leading
// coefficient is 1.  Used by squarefreeness checks and support detection.
inline BiPoly bipoly_gcd(BiPoly f, BiPoly g) {
  using namespace gcddetail;
  const FieldSpec fs = f.spec();
  auto normalize = [&](BiPoly h) {
    if (h.is_zero()) return h;
    Scalar lead = h.terms().rbegin()->second;
    return h * lead.inverse();
  };
  if (f.is_zero()) return normalize(g);
  if (g.is_zero()) return normalize(f);

  UniPoly cf = content_y(f), cg = content_y(g);
  BiPoly a = divide_content_y(f, cf), b = divide_content_y(g, cg);
  if (deg_y(a) < deg_y(b)) std::swap(a, b);
  while (!b.is_zero() && deg_y(b) >= 1) {
    BiPoly r = pseudo_rem_y(a, b);
    a = b;
    b = r.is_zero() ? r : divide_content_y(r, content_y(r));
  }
  BiPoly pp_gcd = b.is_zero() ? a : BiPoly::constant(Scalar::one(fs));
  UniPoly cgcd = uni_gcd(cf, cg);
  BiPoly content(fs);
  for (int i = 0; i <= uni_degree(cgcd); ++i) content.add_term({i, 0}, cgcd[i]);
  return normalize(pp_gcd * content);
}

// ---------------------------------------------------------------------------
// Multiplicity and tangent directions.

// Order of vanishing of f at (a, b).
inline int mult_at_point(const BiPoly& f, const Scalar& a, const Scalar& b) {
  require(!f.is_zero(), Errc::ZeroPolynomial, "multiplicity of the zero polynomial");
  require(!a.spec().dual, Errc::DualFieldInput, "multiplicity point must be over the base field");
  BiPoly g = f.shift(a, b);
  if (g.is_zero()) return 0;  // unreachable: shift preserves nonzero
  return g.min_grade();
}

// A point [l0 : l1] of the exceptional line; directions are points of P^1
// with coordinates [x : y].  Normalized to (1, t) or (0, 1).
struct ProjParam {
  Scalar l0, l1;

  static ProjParam finite(const Scalar& t) { return {Scalar::one(t.spec()), t}; }
  static ProjParam infinite(const FieldSpec& fs) { return {Scalar::zero(fs), Scalar::one(fs)}; }

  // Normalization keys off the value part so dual deformations of [0:1]
  // stay representable in chart 2.
  static ProjParam of(const Scalar& l0, const Scalar& l1) {
    require(!(l0.is_zero() && l1.is_zero()), Errc::BadParams, "[0:0] is not a point");
    if (l0.is_unit()) return {Scalar::one(l0.spec()), l1 / l0};
    require(l1.is_unit(), Errc::BadParams, "projective pair with no unit coordinate");
    return {l0 / l1, Scalar::one(l0.spec())};
  }

  bool at_infinity() const { return !l0.is_unit(); }
  bool operator==(const ProjParam& o) const { return l0 == o.l0 && l1 == o.l1; }

  std::string str() const { return "[" + l0.str() + ":" + l1.str() + "]"; }
};

struct TangentDirections {
  std::vector<std::pair<ProjParam, int>> dirs;
};

// Roots of the tangent cone of f at (a, b) over the base field, with
// multiplicities.  Raises FieldExtensionRequired if an irreducible factor
// of degree >= 2 remains.
inline TangentDirections tangent_directions(const BiPoly& f, const Scalar& a, const Scalar& b) {
  require(!f.is_zero(), Errc::ZeroPolynomial, "tangent cone of the zero polynomial");
  const FieldSpec fs = f.spec();
  BiPoly g = f.shift(a, b);
  require(g.min_grade() >= 1, Errc::PointNotOnCurve, "polynomial does not vanish at the point");
  BiPoly L = g.lowest_form();
  int m = L.min_grade();

  // mult of direction [0:1] = x-adic valuation of the form
  int vx = m;
  for (auto& [e, c] : L.terms()) vx = std::min(vx, e.dx);

  // phi(t) = L(1, t): finite directions [1:t]
  UniPoly phi(m + 1, Scalar::zero(fs));
  for (auto& [e, c] : L.terms()) phi[e.dy] += c;

  TangentDirections out;
  UniPoly residual;
  if (uni_degree(phi) >= 0) {
    auto roots = uni_roots(phi, fs, &residual);
    for (auto& [r, mult] : roots) out.dirs.push_back({ProjParam::finite(r), mult});
    if (uni_degree(residual) >= 1) {
      std::string desc;
      for (int i = uni_degree(residual); i >= 0; --i)
        if (!residual[i].is_zero()) desc += (desc.empty() ? "" : " + ") + residual[i].str() + "*t^" + std::to_string(i);
      fail(Errc::FieldExtensionRequired,
           "tangent cone has an irreducible factor of degree " +
               std::to_string(uni_degree(residual)) + " over " + fs.str() + ": " + desc);
    }
  }
  if (vx > 0) out.dirs.push_back({ProjParam::infinite(fs), vx});
  return out;
}

}  // namespace enriques
