#pragma once

// Addressing of the naturals as a disjoint union of cycles, rays and lines,
// and the universal injection `mu` that steps every component forward.
//
// Layout of x:  t = x mod 3, y = x div 3
//   t == 0  ->  (flat, copy) = unpair(y), flat = n(n-1)/2 + p   ->  Cycle{n, copy, p}
//   t == 1  ->  (copy, k)    = unpair(y)                         ->  Ray{copy, k}
//   t == 2  ->  (copy, zz)   = unpair(y), k = unzigzag(zz)       ->  Line{copy, k}

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>

namespace ufo {

using Nat = std::uint64_t;
using Int = std::int64_t;

namespace detail {

using u128 = unsigned __int128;

inline Nat checked_narrow(u128 v, const char* what) {
  if (v > static_cast<u128>(UINT64_MAX)) {
    throw std::overflow_error(std::string(what) + ": result exceeds 64 bits");
  }
  return static_cast<Nat>(v);
}

inline Nat isqrt(u128 v) {
  // Newton iteration on 128-bit; the result always fits 64 bits.
  if (v == 0) return 0;
  u128 x = v;
  u128 y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + v / x) / 2;
  }
  return static_cast<Nat>(x);
}

// Largest w with w(w+1)/2 <= z.
inline Nat triangular_root(Nat z) {
  Nat w = (isqrt(static_cast<u128>(z) * 8 + 1) - 1) / 2;
  while (static_cast<u128>(w) * (w + 1) / 2 > z) --w;
  while (static_cast<u128>(w + 1) * (w + 2) / 2 <= z) ++w;
  return w;
}

}  // namespace detail

/// Cantor pairing (i+j)(i+j+1)/2 + i. Throws std::overflow_error when the
/// code does not fit in 64 bits.
inline Nat pair(Nat i, Nat j) {
  const detail::u128 d = static_cast<detail::u128>(i) + j;
  return detail::checked_narrow(d * (d + 1) / 2 + i, "pair");
}

struct Pair {
  Nat i = 0;
  Nat j = 0;
  friend bool operator==(const Pair&, const Pair&) = default;
};

inline Pair unpair(Nat z) {
  const Nat d = detail::triangular_root(z);
  const Nat i = z - static_cast<Nat>(static_cast<detail::u128>(d) * (d + 1) / 2);
  return {i, d - i};
}

inline Nat zigzag(Int k) {
  return k >= 0 ? 2 * static_cast<Nat>(k) : 2 * static_cast<Nat>(-(k + 1)) + 1;
}

inline Int unzigzag(Nat z) {
  return (z % 2 == 0) ? static_cast<Int>(z / 2) : -static_cast<Int>(z / 2) - 1;
}

struct CycleCell {
  Nat length = 1;  // n >= 1
  Nat copy = 0;
  Nat position = 0;  // 0 <= position < length
  friend bool operator==(const CycleCell&, const CycleCell&) = default;
};

struct RayCell {
  Nat copy = 0;
  Nat step = 0;
  friend bool operator==(const RayCell&, const RayCell&) = default;
};

struct LineCell {
  Nat copy = 0;
  Int step = 0;
  friend bool operator==(const LineCell&, const LineCell&) = default;
};

using CellAddress = std::variant<CycleCell, RayCell, LineCell>;

inline bool is_valid(const CellAddress& c) {
  if (const auto* cyc = std::get_if<CycleCell>(&c)) {
    return cyc->length >= 1 && cyc->position < cyc->length;
  }
  return true;
}

inline std::string to_string(const CellAddress& c) {
  struct Printer {
    std::string operator()(const CycleCell& c) const {
      return "Cycle(n=" + std::to_string(c.length) + ", α=" + std::to_string(c.copy) +
             ", p=" + std::to_string(c.position) + ")";
    }
    std::string operator()(const RayCell& c) const {
      return "Ray(α=" + std::to_string(c.copy) + ", k=" + std::to_string(c.step) + ")";
    }
    std::string operator()(const LineCell& c) const {
      return "Line(α=" + std::to_string(c.copy) + ", k=" + std::to_string(c.step) + ")";
    }
  };
  return std::visit(Printer{}, c);
}

inline std::ostream& operator<<(std::ostream& os, const CellAddress& c) { return os << to_string(c); }

inline CellAddress decode_cell(Nat x) {
  const Nat tag = x % 3;
  const Pair p = unpair(x / 3);
  if (tag == 0) {
    const Nat n_minus_1 = detail::triangular_root(p.i);
    const Nat base = static_cast<Nat>(static_cast<detail::u128>(n_minus_1) * (n_minus_1 + 1) / 2);
    return CycleCell{n_minus_1 + 1, p.j, p.i - base};
  }
  if (tag == 1) return RayCell{p.i, p.j};
  return LineCell{p.i, unzigzag(p.j)};
}

/// Throws std::domain_error for a cycle position outside [0, length) and
/// std::overflow_error when the code does not fit in 64 bits.
inline Nat encode_cell(const CellAddress& c) {
  if (!is_valid(c)) throw std::domain_error("encode_cell: invalid cycle position in " + to_string(c));
  struct Encoder {
    Nat operator()(const CycleCell& c) const {
      const detail::u128 base = static_cast<detail::u128>(c.length) * (c.length - 1) / 2;
      const Nat flat = detail::checked_narrow(base + c.position, "encode_cell");
      return detail::checked_narrow(static_cast<detail::u128>(pair(flat, c.copy)) * 3, "encode_cell");
    }
    Nat operator()(const RayCell& c) const {
      return detail::checked_narrow(static_cast<detail::u128>(pair(c.copy, c.step)) * 3 + 1, "encode_cell");
    }
    Nat operator()(const LineCell& c) const {
      return detail::checked_narrow(static_cast<detail::u128>(pair(c.copy, zigzag(c.step))) * 3 + 2,
                                    "encode_cell");
    }
  };
  return std::visit(Encoder{}, c);
}

/// Like encode_cell, but reports invalid or oversized addresses as nullopt.
inline std::optional<Nat> try_encode_cell(const CellAddress& c) noexcept {
  if (!is_valid(c)) return std::nullopt;
  try {
    return encode_cell(c);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

inline CellAddress step_forward(const CellAddress& c) {
  struct Step {
    CellAddress operator()(CycleCell c) const {
      c.position = (c.position + 1) % c.length;
      return c;
    }
    CellAddress operator()(RayCell c) const {
      ++c.step;
      return c;
    }
    CellAddress operator()(LineCell c) const {
      ++c.step;
      return c;
    }
  };
  return std::visit(Step{}, c);
}

/// nullopt exactly at a ray head.
inline std::optional<CellAddress> step_backward(const CellAddress& c) {
  struct Step {
    std::optional<CellAddress> operator()(CycleCell c) const {
      c.position = (c.position + c.length - 1) % c.length;
      return c;
    }
    std::optional<CellAddress> operator()(RayCell c) const {
      if (c.step == 0) return std::nullopt;
      --c.step;
      return c;
    }
    std::optional<CellAddress> operator()(LineCell c) const {
      --c.step;
      return c;
    }
  };
  return std::visit(Step{}, c);
}

inline Nat mu_forward(Nat x) { return encode_cell(step_forward(decode_cell(x))); }

inline std::optional<Nat> mu_preimage(Nat y) {
  auto prev = step_backward(decode_cell(y));
  if (!prev) return std::nullopt;
  return encode_cell(*prev);
}

inline bool is_head(Nat x) {
  const auto c = decode_cell(x);
  const auto* ray = std::get_if<RayCell>(&c);
  return ray != nullptr && ray->step == 0;
}

}  // namespace ufo
