#pragma once

// Finite monoids, groups and bounded join-semilattices as Cayley tables.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ufo {

using Element = std::uint32_t;

enum class AlgebraKind : std::uint8_t { monoid, group, semilattice };

inline std::string to_string(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::monoid: return "monoid";
    case AlgebraKind::group: return "group";
    case AlgebraKind::semilattice: return "semilattice";
  }
  return "?";
}

inline std::optional<AlgebraKind> parse_kind(std::string_view s) {
  if (s == "monoid") return AlgebraKind::monoid;
  if (s == "group") return AlgebraKind::group;
  if (s == "semilattice") return AlgebraKind::semilattice;
  return std::nullopt;
}

/// Row-major m x m operation table. For semilattices `op` is the join and
/// `identity` the bottom element.
struct FiniteAlgebra {
  AlgebraKind kind = AlgebraKind::monoid;
  std::size_t size = 0;
  std::vector<Element> table;
  Element identity = 0;
  std::optional<std::vector<Element>> inverse;

  Element op(Element a, Element b) const { return table[static_cast<std::size_t>(a) * size + b]; }
  Element inv(Element a) const { return (*inverse)[a]; }

  friend bool operator==(const FiniteAlgebra&, const FiniteAlgebra&) = default;
};

struct Violation {
  std::string law;
  std::vector<Element> witness;

  std::string describe() const {
    std::string s = law;
    if (!witness.empty()) {
      s += " at (";
      for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(witness[i]);
      }
      s += ")";
    }
    return s;
  }
};

/// Exhaustive law check; nullopt means the algebra is well formed.
inline std::optional<Violation> validate_algebra(const FiniteAlgebra& a) {
  const std::size_t m = a.size;
  if (m == 0) return Violation{"empty carrier", {}};
  if (a.table.size() != m * m) return Violation{"table shape is not size x size", {}};
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      if (a.table[x * m + y] >= m) {
        return Violation{"closure", {static_cast<Element>(x), static_cast<Element>(y)}};
      }
    }
  }
  if (a.identity >= m) return Violation{"identity out of range", {a.identity}};
  for (Element x = 0; x < m; ++x) {
    if (a.op(a.identity, x) != x || a.op(x, a.identity) != x) return Violation{"identity law", {x}};
  }
  for (Element x = 0; x < m; ++x) {
    for (Element y = 0; y < m; ++y) {
      for (Element z = 0; z < m; ++z) {
        if (a.op(a.op(x, y), z) != a.op(x, a.op(y, z))) return Violation{"associativity", {x, y, z}};
      }
    }
  }
  if (a.kind == AlgebraKind::group) {
    if (!a.inverse) return Violation{"group without inverse table", {}};
    if (a.inverse->size() != m) return Violation{"inverse table length", {}};
    for (Element x = 0; x < m; ++x) {
      const Element ix = (*a.inverse)[x];
      if (ix >= m) return Violation{"inverse out of range", {x}};
      if (a.op(x, ix) != a.identity || a.op(ix, x) != a.identity) return Violation{"inverse law", {x}};
    }
  } else if (a.inverse) {
    return Violation{"inverse table on a non-group", {}};
  }
  if (a.kind == AlgebraKind::semilattice) {
    for (Element x = 0; x < m; ++x) {
      if (a.op(x, x) != x) return Violation{"idempotence", {x}};
      for (Element y = 0; y < x; ++y) {
        if (a.op(x, y) != a.op(y, x)) return Violation{"commutativity", {x, y}};
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Built-in algebras
// ---------------------------------------------------------------------------

/// Z_n under addition mod n, as a group or as a monoid.
inline FiniteAlgebra cyclic(std::size_t n, AlgebraKind kind = AlgebraKind::group) {
  FiniteAlgebra a{kind, n, std::vector<Element>(n * n), 0, std::nullopt};
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) a.table[x * n + y] = static_cast<Element>((x + y) % n);
  }
  if (kind == AlgebraKind::group) {
    a.inverse = std::vector<Element>(n);
    for (std::size_t x = 0; x < n; ++x) (*a.inverse)[x] = static_cast<Element>((n - x) % n);
  }
  return a;
}

/// The chain 0 < 1 < ... < n-1 under max.
inline FiniteAlgebra chain(std::size_t n) {
  FiniteAlgebra a{AlgebraKind::semilattice, n, std::vector<Element>(n * n), 0, std::nullopt};
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) a.table[x * n + y] = static_cast<Element>(std::max(x, y));
  }
  return a;
}

/// Bottom 0, atoms 1 and 2, top 3.
inline FiniteAlgebra diamond() {
  return FiniteAlgebra{AlgebraKind::semilattice,
                       4,
                       {0, 1, 2, 3,  //
                        1, 1, 3, 3,  //
                        2, 3, 2, 3,  //
                        3, 3, 3, 3},
                       0,
                       std::nullopt};
}

/// Permutations of {0,1,2} in lexicographic order of their one-line
/// notation; (a*b)(i) = a(b(i)). Element 0 is the identity, 1, 2 and 5 are
/// transpositions, 3 and 4 are 3-cycles.
inline const std::array<std::array<int, 3>, 6>& s3_permutations() {
  static const std::array<std::array<int, 3>, 6> perms = {{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  return perms;
}

inline FiniteAlgebra symmetric3() {
  const auto& perms = s3_permutations();
  auto index_of = [&](const std::array<int, 3>& p) {
    return static_cast<Element>(std::find(perms.begin(), perms.end(), p) - perms.begin());
  };
  FiniteAlgebra a{AlgebraKind::group, 6, std::vector<Element>(36), 0, std::vector<Element>(6)};
  for (std::size_t x = 0; x < 6; ++x) {
    for (std::size_t y = 0; y < 6; ++y) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[x][perms[y][i]];
      a.table[x * 6 + y] = index_of(c);
    }
    std::array<int, 3> inv{};
    for (int i = 0; i < 3; ++i) inv[perms[x][i]] = i;
    (*a.inverse)[x] = index_of(inv);
  }
  return a;
}

// ---------------------------------------------------------------------------
// Endomorphisms
// ---------------------------------------------------------------------------

struct Endomorphism {
  std::vector<Element> map;
  Element operator()(Element e) const { return map[e]; }
  friend bool operator==(const Endomorphism&, const Endomorphism&) = default;
};

struct EndomorphismCheck {
  bool ok = false;
  std::optional<Violation> violation;
  explicit operator bool() const { return ok; }
};

/// Throws std::invalid_argument when the vector length differs from the
/// carrier size.
inline EndomorphismCheck is_endomorphism(const FiniteAlgebra& a, const std::vector<Element>& t) {
  if (t.size() != a.size) {
    throw std::invalid_argument("endomorphism has " + std::to_string(t.size()) + " entries, algebra has " +
                                std::to_string(a.size));
  }
  for (Element x = 0; x < a.size; ++x) {
    if (t[x] >= a.size) return {false, Violation{"image out of range", {x}}};
  }
  if (t[a.identity] != a.identity) return {false, Violation{"does not fix the identity", {a.identity}}};
  for (Element x = 0; x < a.size; ++x) {
    for (Element y = 0; y < a.size; ++y) {
      if (t[a.op(x, y)] != a.op(t[x], t[y])) return {false, Violation{"homomorphism law", {x, y}}};
    }
  }
  return {true, std::nullopt};
}

/// x -> g x g^-1.
inline Endomorphism conjugation(const FiniteAlgebra& a, Element g) {
  Endomorphism t{std::vector<Element>(a.size)};
  for (Element x = 0; x < a.size; ++x) t.map[x] = a.op(a.op(g, x), a.inv(g));
  return t;
}

/// Least subset containing `seeds` and the identity, closed under the
/// operation (and inverses, for groups). Throws std::domain_error for an
/// out-of-range seed.
inline std::set<Element> generated_subalgebra(const FiniteAlgebra& a, const std::set<Element>& seeds) {
  for (Element s : seeds) {
    if (s >= a.size) throw std::domain_error("generated_subalgebra: element " + std::to_string(s) + " out of range");
  }
  std::set<Element> closed = seeds;
  closed.insert(a.identity);
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<Element> current(closed.begin(), closed.end());
    for (Element x : current) {
      if (a.kind == AlgebraKind::group) grew |= closed.insert(a.inv(x)).second;
      for (Element y : current) grew |= closed.insert(a.op(x, y)).second;
    }
  }
  return closed;
}

}  // namespace ufo
