#pragma once

// Exact arithmetic primitives shared by every permid module.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace permid {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Library error carrying the module it came from and a short machine code.
class Error : public std::runtime_error {
 public:
  Error(std::string origin, std::string code, const std::string& message)
      : std::runtime_error(message), origin_(std::move(origin)), code_(std::move(code)) {}

  const std::string& origin() const noexcept { return origin_; }
  const std::string& code() const noexcept { return code_; }

 private:
  std::string origin_;
  std::string code_;
};

namespace errc {
inline constexpr std::string_view precondition = "precondition";
inline constexpr std::string_view overflow = "overflow";
inline constexpr std::string_view mismatch = "mismatch";
inline constexpr std::string_view invariant = "invariant";
inline constexpr std::string_view infeasible = "infeasible";
inline constexpr std::string_view bound_violation = "bound_violation";
inline constexpr std::string_view parse = "parse";
}  // namespace errc

[[noreturn]] inline void fail(std::string_view origin, std::string_view code, const std::string& message) {
  throw Error(std::string(origin), std::string(code), message);
}

inline void require(bool condition, std::string_view origin, const std::string& message) {
  if (!condition) fail(origin, errc::precondition, message);
}

inline BigInt big(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

inline bool fits_u64(const BigInt& v) { return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

inline std::uint64_t to_u64(const BigInt& v, std::string_view origin, std::string_view what) {
  if (!fits_u64(v)) fail(origin, errc::overflow, std::string(what) + " does not fit in 64 bits: " + v.get_str());
  std::uint64_t out = 0;
  std::size_t words = 0;
  mpz_export(&out, &words, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return words == 0 ? 0 : out;
}

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt r;
  if (k > n) return r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt factorial(std::uint64_t n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt pow(const BigInt& base, std::uint64_t e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow(const Rational& base, std::uint64_t e) {
  BigInt num;
  BigInt den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::size_t bit_length(const BigInt& v) {
  return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

/// Exact ceiling of a nonnegative rational.
inline BigInt ceil(const Rational& r) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline BigInt floor(const Rational& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

/// Canonical "p/q" rendering; integers keep an explicit "/1".
inline std::string to_pq(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Nearest double (get_d truncates toward zero).
inline double to_double(const Rational& r) {
  const double t = r.get_d();
  if (!std::isfinite(t)) return t;
  const double away = std::nextafter(t, sgn(r) < 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity());
  if (!std::isfinite(away)) return t;
  const Rational dt = abs(r - Rational(t));
  const Rational da = abs(Rational(away) - r);
  return da < dt ? away : t;
}

/// Parses "p/q", "p" or a finite decimal such as "0.125".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&]() -> Rational { fail("core", errc::parse, "not a rational: '" + s + "'"); };
  if (s.empty()) return bad();
  try {
    if (auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) return bad();
      bool negative = s[0] == '-';
      std::string whole = s.substr(negative ? 1 : 0, dot - (negative ? 1 : 0));
      std::string frac = s.substr(dot + 1);
      for (char c : whole + frac)
        if (c < '0' || c > '9') return bad();
      BigInt num((whole.empty() ? "0" : whole) + frac);
      Rational r(num, pow(BigInt(10), frac.size()));
      r.canonicalize();
      return negative ? Rational(-r) : r;
    }
    for (char c : s)
      if (!((c >= '0' && c <= '9') || c == '/' || c == '-')) return bad();
    Rational r(s);
    if (r.get_den() == 0) return bad();
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    return bad();
  }
}

/// Dyadic bracket lo <= value^(1/root) <= hi; exact when the root is an integer.
struct RootBracket {
  Rational lo;
  Rational hi;
  bool exact = false;
};

inline RootBracket nth_root_bracket(const BigInt& value, unsigned long root, unsigned long bits) {
  RootBracket out;
  BigInt r;
  if (mpz_root(r.get_mpz_t(), value.get_mpz_t(), root) != 0) {
    out.lo = out.hi = Rational(r);
    out.exact = true;
    return out;
  }
  BigInt scaled = value << (bits * root);
  mpz_root(r.get_mpz_t(), scaled.get_mpz_t(), root);
  BigInt den = BigInt(1) << bits;
  out.lo = Rational(r, den);
  out.hi = Rational(r + 1, den);
  out.lo.canonicalize();
  out.hi.canonicalize();
  return out;
}

/// Integer power with a signed exponent.
inline Rational ipow(const Rational& base, long e) {
  if (e >= 0) return pow(base, static_cast<std::uint64_t>(e));
  return Rational(1) / pow(base, static_cast<std::uint64_t>(-e));
}

}  // namespace permid
