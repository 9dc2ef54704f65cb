#pragma once

// Elements of the free monoid, free group and free semilattice on countably
// many generators, and their evaluation in a finite algebra.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ufo/algebra.hpp"
#include "ufo/nat_injection.hpp"

namespace ufo {

struct Literal {
  Nat generator = 0;
  int sign = +1;  // -1 only in group words
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Carrier-level map from generator indices into a finite algebra.
using GeneratorAssignment = std::function<Element(Nat)>;

/// A word over generator literals. Monoid words are positive; group words
/// may carry inverse literals; semilattice terms are kept as sorted sets of
/// positive literals.
class FreeElement {
 public:
  FreeElement() = default;
  FreeElement(AlgebraKind kind, std::vector<Literal> word) : kind_(kind), word_(std::move(word)) {
    for (const auto& l : word_) {
      if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("literal sign must be +1 or -1");
      if (l.sign < 0 && kind_ != AlgebraKind::group) {
        throw std::invalid_argument("inverse literal in a " + to_string(kind_) + " word");
      }
    }
    if (kind_ == AlgebraKind::semilattice) normalize_set();
  }

  static FreeElement positive(AlgebraKind kind, const std::vector<Nat>& generators) {
    std::vector<Literal> w;
    w.reserve(generators.size());
    for (Nat g : generators) w.push_back({g, +1});
    return {kind, std::move(w)};
  }

  AlgebraKind kind() const { return kind_; }
  const std::vector<Literal>& word() const { return word_; }
  bool empty() const { return word_.empty(); }
  std::size_t length() const { return word_.size(); }

  bool is_reduced() const {
    return std::adjacent_find(word_.begin(), word_.end(), [](const Literal& a, const Literal& b) {
             return a.generator == b.generator && a.sign == -b.sign;
           }) == word_.end();
  }

  friend bool operator==(const FreeElement&, const FreeElement&) = default;

 private:
  void normalize_set() {
    std::sort(word_.begin(), word_.end());
    word_.erase(std::unique(word_.begin(), word_.end()), word_.end());
  }

  AlgebraKind kind_ = AlgebraKind::monoid;
  std::vector<Literal> word_;
};

inline std::string to_string(const FreeElement& w) {
  if (w.empty()) return w.kind() == AlgebraKind::semilattice ? "{}" : "ε";
  std::string s = w.kind() == AlgebraKind::semilattice ? "{" : "";
  for (std::size_t i = 0; i < w.word().size(); ++i) {
    const auto& l = w.word()[i];
    if (i) s += w.kind() == AlgebraKind::semilattice ? "," : " ";
    s += "x" + std::to_string(l.generator);
    if (l.sign < 0) s += "^-1";
  }
  if (w.kind() == AlgebraKind::semilattice) s += "}";
  return s;
}

/// Free-group normal form by stack cancellation. Throws
/// std::invalid_argument for non-group words.
inline FreeElement free_reduce(const FreeElement& w) {
  if (w.kind() != AlgebraKind::group) throw std::invalid_argument("free_reduce applies to group words only");
  std::vector<Literal> out;
  out.reserve(w.length());
  for (const auto& l : w.word()) {
    if (!out.empty() && out.back().generator == l.generator && out.back().sign == -l.sign) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return {AlgebraKind::group, std::move(out)};
}

/// The product in the free object: concatenation, then reduction for
/// groups; union for semilattices.
inline FreeElement multiply(const FreeElement& a, const FreeElement& b) {
  if (a.kind() != b.kind()) throw std::invalid_argument("multiply: words of different kinds");
  std::vector<Literal> w = a.word();
  w.insert(w.end(), b.word().begin(), b.word().end());
  FreeElement out(a.kind(), std::move(w));
  return a.kind() == AlgebraKind::group ? free_reduce(out) : out;
}

/// Applies a generator map literal by literal, keeping signs.
template <class F>
FreeElement map_generators(const FreeElement& w, F&& f) {
  std::vector<Literal> out;
  out.reserve(w.length());
  for (const auto& l : w.word()) out.push_back({static_cast<Nat>(f(l.generator)), l.sign});
  return {w.kind(), std::move(out)};
}

/// The unique morphism extending `assign`, applied to `w`: a left fold of
/// the operation from the identity (bottom for semilattices).
template <class Assign>
Element free_extension_eval(const FiniteAlgebra& a, const Assign& assign, const FreeElement& w) {
  Element acc = a.identity;
  for (const auto& l : w.word()) {
    Element v = static_cast<Element>(assign(l.generator));
    if (l.sign < 0) v = a.inv(v);
    acc = a.op(acc, v);
  }
  return acc;
}

/// A word of length at most `max_length` over generators below
/// `generator_bound`. Uses plain modular reduction of the engine output so
/// draws are identical across standard libraries.
inline FreeElement random_word(AlgebraKind kind, std::mt19937_64& rng, std::size_t max_length,
                               Nat generator_bound) {
  const std::size_t len = static_cast<std::size_t>(rng() % (max_length + 1));
  std::vector<Literal> w;
  w.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    const Nat g = rng() % generator_bound;
    const int sign = (kind == AlgebraKind::group && (rng() & 1U)) ? -1 : +1;
    w.push_back({g, sign});
  }
  FreeElement out(kind, std::move(w));
  return kind == AlgebraKind::group ? free_reduce(out) : out;
}

}  // namespace ufo
