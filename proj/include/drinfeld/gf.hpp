#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/rational.hpp"

namespace drinfeld {

/// An element of F_q, stored as the integer whose base-p digits are the
/// coordinates in the power basis 1, g, g^2, ... (least significant first).
using Fq = std::uint32_t;

class FiniteField;
using FieldRef = std::shared_ptr<const FiniteField>;

/// F_q = F_p[g]/(modulus). q is limited to 2^16 so that products of two
/// prime-field residues fit in 32 bits and log tables stay small.
class FiniteField {
 public:
  static constexpr std::uint32_t kMaxQ = 1u << 16;

  /// Builds F_{p^k}. Without a modulus the smallest monic irreducible of
  /// degree k in base-p index order (c_0 least significant) is used.
  static FieldRef create(std::uint32_t p, int k = 1,
                         std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
    if (p < 2 || !is_prime(p)) throw InputError("field characteristic " + std::to_string(p) + " is not prime");
    if (k < 1) throw InputError("field degree must be positive");
    std::uint64_t q = 1;
    for (int i = 0; i < k; ++i) {
      q *= p;
      if (q > kMaxQ) throw InputError("field size exceeds the supported limit 2^16");
    }
    std::vector<std::uint32_t> mod;
    if (modulus) {
      mod = *modulus;
      while (!mod.empty() && mod.back() % p == 0) mod.pop_back();
      for (auto& c : mod) c %= p;
      if (static_cast<int>(mod.size()) != k + 1) {
        throw InputError("modulus must have degree " + std::to_string(k));
      }
      const std::uint32_t lead_inv = inv_mod(mod.back(), p);
      for (auto& c : mod) c = static_cast<std::uint32_t>(std::uint64_t(c) * lead_inv % p);
      if (!prime_poly_irreducible(mod, p)) throw DomainError("modulus is reducible over F_" + std::to_string(p));
    } else {
      mod = default_modulus(p, k);
    }
    return FieldRef(new FiniteField(p, k, static_cast<std::uint32_t>(q), std::move(mod)));
  }

  std::uint32_t p() const { return p_; }
  int k() const { return k_; }
  std::uint32_t q() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  bool is_prime_field() const { return k_ == 1; }

  Fq zero() const { return 0; }
  Fq one() const { return 1; }
  /// The class of the modulus variable (equals 1's successor only when k == 1).
  Fq generator() const { return k_ == 1 ? 1 % p_ : p_; }

  Fq from_int(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Fq>(r);
  }

  Fq add(Fq a, Fq b) const {
    if (k_ == 1) {
      Fq s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    Fq r = 0, mul = 1;
    while (a || b) {
      Fq s = a % p_ + b % p_;
      if (s >= p_) s -= p_;
      r += s * mul;
      a /= p_;
      b /= p_;
      mul *= p_;
    }
    return r;
  }

  Fq neg(Fq a) const {
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    Fq r = 0, mul = 1;
    while (a) {
      Fq d = a % p_;
      r += (d == 0 ? 0 : p_ - d) * mul;
      a /= p_;
      mul *= p_;
    }
    return r;
  }

  Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }

  Fq mul(Fq a, Fq b) const {
    if (a == 0 || b == 0) return 0;
    if (k_ == 1) return static_cast<Fq>(std::uint64_t(a) * b % p_);
    std::uint32_t e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }

  Fq inv(Fq a) const {
    if (a == 0) throw DomainError("inverse of zero in F_q");
    if (k_ == 1) return inv_mod(a, p_);
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }

  Fq pow(Fq a, std::uint64_t e) const {
    Fq result = 1;
    while (e) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  /// The unique b with b^p = a.
  Fq pth_root(Fq a) const {
    if (k_ == 1) return a;
    std::uint64_t e = 1;
    for (int i = 0; i < k_ - 1; ++i) e *= p_;
    return pow(a, e);
  }

  /// Multiplicative order divides q-1; used by tests and by monicize.
  bool is_power(Fq a, std::uint64_t n) const {
    if (a == 0) return true;
    std::uint64_t g = gcd_u64(n, q_ - 1);
    return pow(a, (q_ - 1) / g) == 1;
  }

  std::vector<std::uint32_t> digits(Fq a) const {
    std::vector<std::uint32_t> d(k_, 0);
    for (int i = 0; i < k_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  }

  Fq from_digits(const std::vector<std::uint32_t>& d) const {
    Fq r = 0;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) r = r * p_ + d[i] % p_;
    return r;
  }

  /// Decimal digit for prime fields, otherwise a polynomial in g.
  std::string to_string(Fq a) const {
    if (k_ == 1) return std::to_string(a);
    if (a == 0) return "0";
    auto d = digits(a);
    std::string out;
    for (int i = k_ - 1; i >= 0; --i) {
      if (d[i] == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += std::to_string(d[i]);
      } else {
        if (d[i] != 1) out += std::to_string(d[i]) + "*";
        out += "g";
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

  /// True when the element needs parentheses as a coefficient.
  bool is_compound(Fq a) const {
    if (k_ == 1) return false;
    int nonzero = 0;
    for (auto d : digits(a)) nonzero += d != 0;
    return nonzero > 1;
  }

  bool operator==(const FiniteField& o) const { return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_; }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) return false;
    }
    return true;
  }

  static std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) {
      auto t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

 private:
  FiniteField(std::uint32_t p, int k, std::uint32_t q, std::vector<std::uint32_t> mod)
      : p_(p), k_(k), q_(q), modulus_(std::move(mod)) {
    if (k_ > 1) build_tables();
  }

  static std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
    while (new_r) {
      std::int64_t quot = r / new_r;
      std::int64_t tmp = t - quot * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - quot * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (r != 1) throw DomainError("inverse of zero in F_p");
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
  }

  // Small dense polynomial helpers over F_p (coefficients low to high).
  using PPoly = std::vector<std::uint32_t>;

  static void trim(PPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }

  static PPoly pmod(PPoly a, const PPoly& m, std::uint32_t p) {
    trim(a);
    const std::uint32_t li = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
      const std::uint64_t c = std::uint64_t(a.back()) * li % p;
      const std::size_t shift = a.size() - m.size();
      for (std::size_t i = 0; i < m.size(); ++i) {
        a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * m[i] % p) % p);
      }
      trim(a);
    }
    return a;
  }

  static bool prime_poly_irreducible(const PPoly& f, std::uint32_t p) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n <= 1) return n == 1;
    // Trial division by every monic polynomial of degree 1..n/2.
    for (int d = 1; d <= n / 2; ++d) {
      std::uint64_t count = 1;
      for (int i = 0; i < d; ++i) count *= p;
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        PPoly g(d + 1, 0);
        std::uint64_t x = idx;
        for (int i = 0; i < d; ++i) {
          g[i] = static_cast<std::uint32_t>(x % p);
          x /= p;
        }
        g[d] = 1;
        if (pmod(f, g, p).empty()) return false;
      }
    }
    return true;
  }

  static PPoly default_modulus(std::uint32_t p, int k) {
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      PPoly g(k + 1, 0);
      std::uint64_t x = idx;
      for (int i = 0; i < k; ++i) {
        g[i] = static_cast<std::uint32_t>(x % p);
        x /= p;
      }
      g[k] = 1;
      if (prime_poly_irreducible(g, p)) return g;
    }
    throw DomainError("no irreducible polynomial found");  // unreachable
  }

  // Product of two elements by polynomial multiplication mod the modulus;
  // only used while building the log tables.
  Fq slow_mul(Fq a, Fq b) const {
    auto da = digits(a), db = digits(b);
    PPoly prod(2 * k_, 0);
    for (int i = 0; i < k_; ++i) {
      for (int j = 0; j < k_; ++j) {
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t(da[i]) * db[j]) % p_);
      }
    }
    PPoly r = pmod(prod, modulus_, p_);
    r.resize(k_, 0);
    return from_digits(r);
  }

  void build_tables() {
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    for (Fq cand = 2; cand < q_; ++cand) {
      Fq x = 1;
      std::uint32_t ord = 0;
      do {
        x = slow_mul(x, cand);
        ++ord;
      } while (x != 1 && ord < q_);
      if (ord != q_ - 1) continue;
      x = 1;
      for (std::uint32_t e = 0; e < q_ - 1; ++e) {
        exp_[e] = x;
        log_[x] = e;
        x = slow_mul(x, cand);
      }
      return;
    }
    throw DomainError("no primitive element found");  // unreachable for a field
  }

  std::uint32_t p_;
  int k_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<Fq> exp_;
  std::vector<std::uint32_t> log_;
};

inline bool same_field(const FieldRef& a, const FieldRef& b) { return a == b || (a && b && *a == *b); }

}  // namespace drinfeld
