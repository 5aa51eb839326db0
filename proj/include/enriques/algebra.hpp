#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "enriques/errors.hpp"

namespace enriques {

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

enum class FieldKind { Rationals, PrimeField };

// The coefficient field: Q or F_p, optionally extended by e with e^2 = 0.
struct FieldSpec {
  FieldKind kind = FieldKind::Rationals;
  long p = 0;
  bool dual = false;

  bool operator==(const FieldSpec&) const = default;

  static FieldSpec rationals(bool dual = false) { return {FieldKind::Rationals, 0, dual}; }

  static FieldSpec prime_field(long p, bool dual = false) {
    require(is_prime(p), Errc::BadParams, "characteristic must be prime, got " + std::to_string(p));
    return {FieldKind::PrimeField, p, dual};
  }

  FieldSpec base() const { return {kind, p, false}; }
  FieldSpec with_dual() const { return {kind, p, true}; }

  long characteristic() const { return kind == FieldKind::PrimeField ? p : 0; }

  std::string str() const {
    std::string s = kind == FieldKind::Rationals ? "Q" : "F" + std::to_string(p);
    if (dual) s += "[e]";
    return s;
  }

  // Accepts "Q", "F2", "F31", with optional suffix "[e]".
  static FieldSpec parse(const std::string& text) {
    std::string s = text;
    bool dual = false;
    if (s.size() >= 3 && s.substr(s.size() - 3) == "[e]") {
      dual = true;
      s = s.substr(0, s.size() - 3);
    }
    if (s == "Q") return rationals(dual);
    if (s.size() >= 2 && s[0] == 'F') {
      long p = 0;
      for (size_t i = 1; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') fail(Errc::FormatError, "bad field spec '" + text + "'");
        p = p * 10 + (s[i] - '0');
        if (p > 1000000) fail(Errc::FormatError, "characteristic too large in '" + text + "'");
      }
      return prime_field(p, dual);
    }
    fail(Errc::FormatError, "bad field spec '" + text + "' (expected Q, Fp, optionally [e])");
  }
};

// An exact field element.  For dual specs the element is value + deriv*e.
class Scalar {
 public:
  Scalar() : spec_(FieldSpec::rationals()) {}

  static Scalar zero(const FieldSpec& fs) { return Scalar(fs); }
  static Scalar one(const FieldSpec& fs) { return of_int(fs, 1); }

  static Scalar of_int(const FieldSpec& fs, long v) { return of_mpq(fs, mpq_class(v)); }

  static Scalar of_mpq(const FieldSpec& fs, const mpq_class& v) {
    Scalar s(fs);
    s.a_ = reduce(fs, v);
    return s;
  }

  static Scalar dual(const FieldSpec& fs, const mpq_class& value, const mpq_class& deriv) {
    require(fs.dual, Errc::BadParams, "dual scalar in non-dual field " + fs.str());
    Scalar s(fs);
    s.a_ = reduce(fs, value);
    s.b_ = reduce(fs, deriv);
    return s;
  }

  const FieldSpec& spec() const { return spec_; }
  const mpq_class& value() const { return a_; }
  const mpq_class& deriv() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  // Units of K[e] are the elements with invertible value part.
  bool is_unit() const { return a_ != 0; }

  // Reinterpret in the dual extension of the same base field.
  Scalar promoted() const {
    Scalar s(spec_.with_dual());
    s.a_ = a_;
    return s;
  }
  Scalar value_part() const {
    Scalar s(spec_.base());
    s.a_ = a_;
    return s;
  }
  Scalar deriv_part() const {
    Scalar s(spec_.base());
    s.a_ = b_;
    return s;
  }

  Scalar operator-() const {
    Scalar r(spec_);
    r.a_ = reduce(spec_, -a_);
    r.b_ = reduce(spec_, -b_);
    return r;
  }

  Scalar operator+(const Scalar& o) const {
    match(o);
    Scalar r(spec_);
    r.a_ = reduce(spec_, a_ + o.a_);
    r.b_ = reduce(spec_, b_ + o.b_);
    return r;
  }

  Scalar operator-(const Scalar& o) const { return *this + (-o); }

  Scalar operator*(const Scalar& o) const {
    match(o);
    Scalar r(spec_);
    r.a_ = reduce(spec_, a_ * o.a_);
    if (spec_.dual) r.b_ = reduce(spec_, a_ * o.b_ + b_ * o.a_);  // e^2 = 0
    return r;
  }

  Scalar inverse() const {
    if (spec_.dual) {
      require(a_ != 0, Errc::DivisionByZero, "non-unit dual scalar has no inverse");
      mpq_class ia = base_inv(spec_, a_);
      Scalar r(spec_);
      r.a_ = ia;
      r.b_ = reduce(spec_, -b_ * ia * ia);
      return r;
    }
    require(a_ != 0, Errc::DivisionByZero, "division by zero");
    Scalar r(spec_);
    r.a_ = base_inv(spec_, a_);
    return r;
  }

  Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  bool operator==(const Scalar& o) const { return spec_ == o.spec_ && a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  // Total order used only for deterministic output.
  static int cmp(const Scalar& x, const Scalar& y) {
    int c = ::cmp(x.a_, y.a_);
    if (c != 0) return c;
    return ::cmp(x.b_, y.b_);
  }

  std::string str() const {
    std::string s = a_.get_str();
    if (spec_.dual && b_ != 0) s += "+(" + b_.get_str() + ")e";
    return s;
  }

 private:
  explicit Scalar(const FieldSpec& fs) : spec_(fs) {}

  void match(const Scalar& o) const {
    if (spec_ != o.spec_)
      fail(Errc::MixedFields, "operands over " + spec_.str() + " and " + o.spec_.str());
  }

  static mpq_class reduce(const FieldSpec& fs, const mpq_class& v) {
    if (fs.kind == FieldKind::Rationals) {
      mpq_class r = v;
      r.canonicalize();
      return r;
    }
    // num * den^{-1} mod p, represented in [0, p)
    mpz_class p(fs.p);
    mpq_class c = v;
    c.canonicalize();
    mpz_class den = c.get_den();
    mpz_class dmod = den % p;
    if (dmod < 0) dmod += p;
    require(dmod != 0, Errc::DivisionByZero,
            "denominator divisible by " + std::to_string(fs.p));
    mpz_class inv;
    check_internal(mpz_invert(inv.get_mpz_t(), dmod.get_mpz_t(), p.get_mpz_t()) != 0,
                   "modular inverse failed");
    mpz_class r = (c.get_num() % p) * inv % p;
    if (r < 0) r += p;
    return mpq_class(r);
  }

  static mpq_class base_inv(const FieldSpec& fs, const mpq_class& v) {
    if (fs.kind == FieldKind::Rationals) {
      mpq_class r = 1 / v;
      r.canonicalize();
      return r;
    }
    mpz_class p(fs.p), x = v.get_num() % p, inv;
    if (x < 0) x += p;
    require(x != 0, Errc::DivisionByZero, "division by zero mod " + std::to_string(fs.p));
    check_internal(mpz_invert(inv.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()) != 0,
                   "modular inverse failed");
    return mpq_class(inv);
  }

  FieldSpec spec_;
  mpq_class a_, b_;
};

}  // namespace enriques
