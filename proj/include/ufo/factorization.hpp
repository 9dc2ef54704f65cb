#pragma once

// Factoring an endomorphism tau of a finite algebra B through the universal
// morphism induced by `mu` on the free object: an onto pi with pi . mu = tau . pi.
//
// Construction:
//   D       = carrier of B in index order, m = |D|,  z_x = D[x mod m]
//   sigma(x)= (x+1)*m + index(tau(z_x))         strictly increasing, so every
//                                               component is a ray and
//                                               z_sigma(x) = tau(z_x)
//   embed sigma into mu, the i-th head (ascending) on mu's ray copy i
//   pi(x)   = z at pi_A^-1(x) for x in A, the identity (bottom) elsewhere

#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ufo/algebra.hpp"
#include "ufo/component_embedding.hpp"
#include "ufo/free_words.hpp"
#include "ufo/nat_injection.hpp"

namespace ufo {

class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const Violation& v) : std::invalid_argument(v.describe()), violation(v) {}
  Violation violation;
};

struct EnumerationScheme {
  std::vector<Element> elements;  // D
  std::vector<Nat> position;      // element -> index in D

  Nat modulus() const { return elements.size(); }
  Element z(Nat x) const { return elements[x % elements.size()]; }
};

/// D is the carrier in index order, which is already closed under tau.
inline EnumerationScheme build_enumeration(const FiniteAlgebra& a, const Endomorphism& t) {
  std::set<Element> closure;
  for (Element e = 0; e < a.size; ++e) closure.insert(e);
  for (bool grew = true; grew;) {
    grew = false;
    for (Element e : std::vector<Element>(closure.begin(), closure.end())) grew |= closure.insert(t(e)).second;
  }
  EnumerationScheme s{{closure.begin(), closure.end()}, std::vector<Nat>(a.size, 0)};
  for (Nat i = 0; i < s.elements.size(); ++i) s.position[s.elements[i]] = i;
  return s;
}

/// The ray-only injection x -> (x+1)*m + index(tau(z_x)).
class SigmaInjection {
 public:
  SigmaInjection(const EnumerationScheme& e, const Endomorphism& t) : m_(e.modulus()), successor_(m_) {
    for (Nat r = 0; r < m_; ++r) successor_[r] = e.position[t(e.elements[r])];
  }

  Nat modulus() const { return m_; }

  /// index(tau(D[r])): the residue of sigma(x) for x = r mod m.
  Nat successor_residue(Nat r) const { return successor_[r]; }

  Nat forward(Nat x) const {
    return detail::checked_narrow((static_cast<detail::u128>(x) + 1) * m_ + successor_[x % m_], "sigma");
  }

  /// y = Q*m + r with Q >= 1 is an image iff r == index(tau(D[(Q-1) mod m])).
  std::optional<Nat> preimage(Nat y) const {
    const Nat q = y / m_;
    if (q == 0 || y % m_ != successor_[(q - 1) % m_]) return std::nullopt;
    return q - 1;
  }

  bool is_head(Nat y) const { return !preimage(y); }

  /// Number of heads below h, for a head h. Every block [Q*m, (Q+1)*m) with
  /// Q >= 1 holds exactly one image and m-1 heads.
  Nat head_rank(Nat h) const {
    if (h < m_) return h;
    const Nat q = h / m_;
    const Nat r = h % m_;
    const Nat taken = successor_[(q - 1) % m_];
    return m_ + (q - 1) * (m_ - 1) + r - (taken < r ? 1 : 0);
  }

  /// The head of rank i. Throws std::out_of_range when there is none (m = 1
  /// has the single head 0).
  Nat head_at(Nat i) const {
    if (i < m_) return i;
    if (m_ == 1) throw std::out_of_range("sigma has a single ray");
    const Nat rest = i - m_;
    const Nat q = 1 + rest / (m_ - 1);
    const Nat s = rest % (m_ - 1);
    const Nat taken = successor_[(q - 1) % m_];
    return detail::checked_narrow(static_cast<detail::u128>(q) * m_ + (s < taken ? s : s + 1), "sigma");
  }

  bool has_component(const ComponentId& id) const {
    return id.shape.kind == Shape::Kind::ray && (m_ > 1 || id.index == 0);
  }

  CellAddress locate(Nat x) const {
    if (m_ == 1) return RayCell{0, x};
    Nat k = 0;
    for (auto p = preimage(x); p; p = preimage(x)) {
      x = *p;
      ++k;
    }
    return RayCell{head_rank(x), k};
  }

  std::optional<Nat> cell_at(const CellAddress& c) const {
    if (!has_component(component_of(c))) return std::nullopt;
    const auto& ray = std::get<RayCell>(c);
    try {
      Nat y = head_at(ray.copy);
      for (Nat k = 0; k < ray.step; ++k) y = forward(y);
      return y;
    } catch (const std::overflow_error&) {
      return std::nullopt;
    }
  }

  /// sigma^k(head_i) mod m without materializing the label, which outgrows
  /// 64 bits after a few dozen steps. Residues move along the functional
  /// graph r -> successor_residue(r), so k is reduced modulo its cycle.
  Nat residue_at(const RayCell& c) const {
    Nat r = head_at(c.copy) % m_;
    Nat k = c.step;
    std::vector<Nat> first_seen(m_, UINT64_MAX);
    for (Nat t = 0; k > 0; ++t, --k) {
      if (first_seen[r] != UINT64_MAX) {
        k %= t - first_seen[r];
        for (; k > 0; --k) r = successor_[r];
        break;
      }
      first_seen[r] = t;
      r = successor_[r];
    }
    return r;
  }

 private:
  Nat m_;
  std::vector<Nat> successor_;
};

static_assert(PresentedInjection<SigmaInjection>);

inline SigmaInjection build_sigma(const EnumerationScheme& e, const Endomorphism& t) { return {e, t}; }

/// Everything needed to evaluate pi at any generator and to check the
/// commuting square. Diagnostic overrides replace pi at single generators.
class FactorizationWitness {
 public:
  FactorizationWitness(FiniteAlgebra algebra, Endomorphism tau)
      : algebra_(std::move(algebra)),
        tau_(std::move(tau)),
        enumeration_(build_enumeration(algebra_, tau_)),
        embedding_(build_sigma(enumeration_, tau_)) {}

  const FiniteAlgebra& algebra() const { return algebra_; }
  const Endomorphism& tau() const { return tau_; }
  const EnumerationScheme& enumeration() const { return enumeration_; }
  const SigmaInjection& sigma() const { return embedding_.sigma(); }
  const Embedding<SigmaInjection>& embedding() const { return embedding_; }

  Element fixed_point() const { return algebra_.identity; }

  Element pi(Nat x) const {
    if (auto it = overrides_.find(x); it != overrides_.end()) return it->second;
    const auto local = embedding_.inverse_cell(x);
    if (!local) return fixed_point();
    return enumeration_.elements[sigma().residue_at(std::get<RayCell>(*local))];
  }

  /// Bound to this witness; must not outlive it.
  GeneratorAssignment assignment() const {
    return [this](Nat x) { return pi(x); };
  }

  FactorizationWitness with_pi_override(Nat x, Element value) const {
    FactorizationWitness w = *this;
    w.overrides_[x] = value;
    return w;
  }

  const std::map<Nat, Element>& pi_overrides() const { return overrides_; }

 private:
  FiniteAlgebra algebra_;
  Endomorphism tau_;
  EnumerationScheme enumeration_;
  Embedding<SigmaInjection> embedding_;
  std::map<Nat, Element> overrides_;
};

/// Throws InvalidInput when the algebra or the endomorphism is malformed.
inline FactorizationWitness factorize(const FiniteAlgebra& a, const Endomorphism& t) {
  if (auto v = validate_algebra(a)) throw InvalidInput(*v);
  if (t.map.size() != a.size) {
    throw InvalidInput(Violation{"endomorphism length " + std::to_string(t.map.size()) + " != algebra size", {}});
  }
  if (auto check = is_endomorphism(a, t.map); !check) throw InvalidInput(*check.violation);
  return {a, t};
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// First x < window where sigma breaks strict growth, injectivity, head
/// decidability, or z_sigma(x) = tau(z_x).
inline std::optional<Nat> check_sigma(const FactorizationWitness& w, Nat window) {
  const auto& s = w.sigma();
  const auto& e = w.enumeration();
  std::set<Nat> images;
  for (Nat x = 0; x < window; ++x) {
    const Nat y = s.forward(x);
    if (y <= x || !images.insert(y).second) return x;
    if (s.preimage(y) != x) return x;
    if (e.z(y) != w.tau()(e.z(x))) return x;
  }
  return std::nullopt;
}

struct SquareCounterexample {
  Nat x = 0;
  Nat mu_x = 0;
  Element left = 0;   // pi(mu(x))
  Element right = 0;  // tau(pi(x))
};

struct SquareReport {
  Nat checked = 0;
  std::uint64_t digest = 0;  // FNV-1a over (x, pi(x)) for the checked x
  std::optional<SquareCounterexample> counterexample;
  bool passed() const { return !counterexample.has_value(); }
};

inline SquareReport verify_square_on_generators(const FactorizationWitness& w, Nat window) {
  SquareReport report{window, 0, std::nullopt};
  detail::Fnv1a hash;
  for (Nat x = 0; x < window; ++x) {
    const Nat mx = mu_forward(x);
    const Element px = w.pi(x);
    hash.add(x);
    hash.add(px);
    const Element left = w.pi(mx);
    const Element right = w.tau()(px);
    if (left != right) {
      report.counterexample = SquareCounterexample{x, mx, left, right};
      return report;
    }
  }
  report.digest = hash.state;
  return report;
}

struct WordCounterexample {
  std::size_t index = 0;
  FreeElement word;
  Element left = 0;
  Element right = 0;
};

struct WordReport {
  std::size_t checked = 0;
  std::optional<WordCounterexample> counterexample;
  bool passed() const { return !counterexample.has_value(); }
};

/// pi(u(v)) = tau(pi(v)) where u rewrites every generator g to mu(g).
inline WordReport verify_square_on_words(const FactorizationWitness& w, const std::vector<FreeElement>& words) {
  WordReport report{words.size(), std::nullopt};
  const auto pi = w.assignment();
  for (std::size_t i = 0; i < words.size(); ++i) {
    const FreeElement shifted = map_generators(words[i], [](Nat g) { return mu_forward(g); });
    const Element left = free_extension_eval(w.algebra(), pi, shifted);
    const Element right = w.tau()(free_extension_eval(w.algebra(), pi, words[i]));
    if (left != right) {
      report.counterexample = WordCounterexample{i, words[i], left, right};
      return report;
    }
  }
  return report;
}

inline std::vector<FreeElement> random_words(AlgebraKind kind, std::size_t count, std::size_t max_length,
                                             Nat generator_bound, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FreeElement> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_word(kind, rng, max_length, generator_bound));
  return out;
}

struct SurjectivityReport {
  Nat heads_used = 0;
  std::set<Element> image;      // pi over the first heads_used heads
  std::set<Element> generated;  // subalgebra generated by the image
  std::vector<Element> missing;
  bool passed() const { return missing.empty(); }
};

/// The first m sigma-indices are heads, and pi sends the host of head j to
/// D[j]. `head_limit` below m is a diagnostic truncation.
inline SurjectivityReport verify_surjectivity(const FactorizationWitness& w,
                                              std::optional<Nat> head_limit = std::nullopt) {
  const Nat m = w.enumeration().modulus();
  SurjectivityReport r;
  r.heads_used = head_limit ? std::min(*head_limit, m) : m;
  for (Nat j = 0; j < r.heads_used; ++j) r.image.insert(w.pi(w.embedding().forward(j)));
  r.generated = generated_subalgebra(w.algebra(), r.image);
  for (Element e : w.enumeration().elements) {
    if (!r.image.contains(e)) r.missing.push_back(e);
  }
  if (r.missing.empty() && r.generated.size() != w.algebra().size) {
    for (Element e = 0; e < w.algebra().size; ++e) {
      if (!r.generated.contains(e)) r.missing.push_back(e);
    }
  }
  return r;
}

}  // namespace ufo
