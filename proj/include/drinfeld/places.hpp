#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/ext_field.hpp"
#include "drinfeld/factor.hpp"
#include "drinfeld/rational.hpp"
#include "drinfeld/ratfunc.hpp"

namespace drinfeld {

/// A valuation value; nullopt stands for +infinity (the valuation of 0).
using Val = std::optional<std::int64_t>;

/// v(a) < v(b) with +infinity handled.
inline bool val_less(const Val& a, const Val& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

inline std::string val_to_string(const Val& v) { return v ? std::to_string(*v) : "+inf"; }

/// F_q(x) together with the degree [F_q(x) : K] over the field K relative to
/// which place degrees are normalized (1 when F_q(x) is K itself).
struct FunctionField {
  FieldRef fq;
  std::string var = "t";
  std::int64_t ext_degree = 1;

  RatFunc parse(const std::string& s) const { return RatFunc::parse(fq, s, var); }
  std::string str(const RatFunc& y) const { return y.to_string(var); }
};

/// A place of F_q(x): v_P for a monic irreducible P, or v_inf. Uniformizers
/// are fixed as P and 1/x respectively.
class Place {
 public:
  enum class Kind { Finite, Infinity };

  static Place finite(Poly p, std::int64_t ext_degree = 1) {
    if (p.degree() < 1 || !p.is_monic()) throw DomainError("finite place needs a monic non-constant polynomial");
    if (!is_irreducible(p)) throw DomainError("place polynomial " + p.to_string() + " is reducible");
    return Place(Kind::Finite, std::move(p), ext_degree);
  }

  /// Skips the irreducibility test; for factors produced by factor().
  static Place finite_unchecked(Poly p, std::int64_t ext_degree = 1) {
    return Place(Kind::Finite, std::move(p), ext_degree);
  }

  static Place infinity(const FieldRef& f, std::int64_t ext_degree = 1) {
    return Place(Kind::Infinity, Poly::x(f), ext_degree);
  }

  Kind kind() const { return kind_; }
  bool is_infinite() const { return kind_ == Kind::Infinity; }
  /// P for finite places; for infinity the local parameter s = 1/x written
  /// as the polynomial "x" in the reversed coordinate.
  const Poly& prime() const { return p_; }
  const FieldRef& field() const { return p_.field(); }
  std::int64_t ext_degree() const { return ext_; }
  /// Degree of the residue field over F_q.
  int residue_degree() const { return is_infinite() ? 1 : static_cast<int>(p_.degree()); }
  /// Coherent degree d(v) = [k_v : F_q] / [F_q(x) : K].
  Rational degree() const { return Rational(BigInt(residue_degree()), BigInt(ext_)); }

  RatFunc uniformizer() const {
    if (is_infinite()) return RatFunc::x(field()).inverse();
    return RatFunc(p_);
  }

  Val valuation(const RatFunc& y) const {
    if (y.is_zero()) return std::nullopt;
    if (is_infinite()) return y.den().degree() - y.num().degree();
    return static_cast<std::int64_t>(ord(y.num(), p_)) - ord(y.den(), p_);
  }

  Val valuation(const Poly& y) const {
    if (y.is_zero()) return std::nullopt;
    if (is_infinite()) return -y.degree();
    return ord(y, p_);
  }

  ExtField residue_field() const { return ExtField(p_); }

  /// Image of y in the residue field; requires v(y) >= 0.
  Poly residue(const RatFunc& y) const {
    Val v = valuation(y);
    if (v && *v < 0) throw DomainError("residue of an element with negative valuation");
    const FieldRef& f = field();
    if (!v) return Poly(f);
    if (is_infinite()) {
      if (y.num().degree() < y.den().degree()) return Poly(f);
      return Poly::constant(f, f->div(y.num().lead(), y.den().lead()));
    }
    return (y.num() * Poly::inverse_mod(y.den(), p_)) % p_;
  }

  /// Residue of y * pi^{-v(y)}; never zero.
  Poly angular_component(const RatFunc& y) const {
    if (y.is_zero()) throw DomainError("angular component of zero");
    const FieldRef& f = field();
    if (is_infinite()) return Poly::constant(f, f->div(y.num().lead(), y.den().lead()));
    return (strip(y.num()) * Poly::inverse_mod(strip(y.den()), p_)) % p_;
  }

  std::string to_string(const std::string& var = "t") const {
    if (is_infinite()) return "v_inf";
    return "v_{" + p_.to_string(var) + "}";
  }

  friend bool operator==(const Place& a, const Place& b) { return a.kind_ == b.kind_ && a.p_ == b.p_; }
  friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
  /// Finite places by polynomial order, infinity last.
  friend bool operator<(const Place& a, const Place& b) {
    if (a.kind_ != b.kind_) return a.kind_ == Kind::Finite;
    return a.p_ < b.p_;
  }

 private:
  Place(Kind k, Poly p, std::int64_t ext) : kind_(k), p_(std::move(p)), ext_(ext) {
    if (ext_ < 1) throw DomainError("extension degree must be positive");
  }

  Poly strip(Poly a) const {
    for (;;) {
      auto [qt, r] = Poly::divmod(a, p_);
      if (!r.is_zero()) return a;
      a = std::move(qt);
    }
  }

  Kind kind_;
  Poly p_;
  std::int64_t ext_;
};

inline Place infinity_of(const FunctionField& k) { return Place::infinity(k.fq, k.ext_degree); }

/// Places with nonzero valuation at y, sorted, with the valuations.
inline std::vector<std::pair<Place, std::int64_t>> support(const FunctionField& k, const RatFunc& y) {
  if (y.is_zero()) throw DomainError("support of zero is undefined");
  std::vector<std::pair<Place, std::int64_t>> out;
  if (!y.num().is_constant()) {
    for (const auto& [p, e] : factor(y.num()).factors) out.emplace_back(Place::finite_unchecked(p, k.ext_degree), e);
  }
  if (!y.den().is_constant()) {
    for (const auto& [p, e] : factor(y.den()).factors) out.emplace_back(Place::finite_unchecked(p, k.ext_degree), -e);
  }
  const std::int64_t vinf = y.den().degree() - y.num().degree();
  if (vinf != 0) out.emplace_back(infinity_of(k), vinf);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Places where y has a pole.
inline std::vector<Place> poles(const FunctionField& k, const RatFunc& y) {
  std::vector<Place> out;
  if (y.is_zero()) return out;
  for (auto& [v, e] : support(k, y)) {
    if (e < 0) out.push_back(v);
  }
  return out;
}

/// y in F_q.
inline bool is_constant(const RatFunc& y) { return y.is_constant(); }

/// The embedding F_q(t) -> F_q(u), t -> image(u).
struct SubstitutionEmbedding {
  RatFunc image;
  std::string source_var = "t";
  std::string target_var = "u";

  SubstitutionEmbedding(RatFunc img, std::string from = "t", std::string to = "u")
      : image(std::move(img)), source_var(std::move(from)), target_var(std::move(to)) {
    if (image.is_constant()) throw DomainError("substitution must be non-constant");
  }

  std::int64_t degree() const { return image.weil_degree(); }
  RatFunc apply(const RatFunc& y) const { return y.compose(image); }
  FunctionField target(const FunctionField& base) const {
    return FunctionField{base.fq, target_var, base.ext_degree * degree()};
  }
};

struct PlaceExtension {
  Place below;
  Place above;
  std::int64_t e;
  std::int64_t f;
  Rational d_above;
};

/// All places of F_q(u) above v with ramification, residue degree and
/// coherent degree d(w) = f d(v) / [L:K].
inline std::vector<PlaceExtension> extend_places(const SubstitutionEmbedding& sigma, const Place& v) {
  const Poly& n = sigma.image.num();
  const Poly& d = sigma.image.den();
  const std::int64_t m = sigma.degree();
  const std::int64_t ext = v.ext_degree() * m;
  std::vector<PlaceExtension> out;
  auto push = [&](Place w, std::int64_t e) {
    const std::int64_t f = w.residue_degree() / v.residue_degree();
    Rational dw = Rational(BigInt(f)) * v.degree() / m;
    out.push_back(PlaceExtension{v, std::move(w), e, f, dw});
  };
  if (v.is_infinite()) {
    if (!d.is_constant()) {
      for (const auto& [p, e] : factor(d).factors) push(Place::finite_unchecked(p, ext), e);
    }
    if (n.degree() > d.degree()) push(Place::infinity(v.field(), ext), n.degree() - d.degree());
  } else {
    const Poly& p = v.prime();
    const std::int64_t deg = p.degree();
    // P(N/D) = H / D^deg with H the homogenization of P.
    Poly h(v.field());
    Poly npow = Poly::one(v.field());
    std::vector<Poly> dpows{Poly::one(v.field())};
    for (std::int64_t i = 1; i <= deg; ++i) dpows.push_back(dpows.back() * d);
    for (std::int64_t j = 0; j <= deg; ++j) {
      if (p.coeff(j) != 0) h = h + (npow * dpows[deg - j]).scaled(p.coeff(j));
      npow = npow * n;
    }
    if (!h.is_constant()) {
      for (const auto& [q, e] : factor(h).factors) push(Place::finite_unchecked(q, ext), e);
    }
    const std::int64_t e_inf = deg * d.degree() - h.degree();
    if (e_inf > 0) push(Place::infinity(v.field(), ext), e_inf);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.above < b.above; });
  return out;
}

}  // namespace drinfeld
