#pragma once

// Injections on the naturals presented by their component decomposition, and
// the conjugacy embedding of such an injection into `mu`.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ufo/nat_injection.hpp"

namespace ufo {

// ---------------------------------------------------------------------------
// Component shapes and identities
// ---------------------------------------------------------------------------

struct Shape {
  enum class Kind : std::uint8_t { cycle, ray, line };
  Kind kind = Kind::ray;
  Nat length = 0;  // cycles only

  static Shape cycle(Nat n) { return {Kind::cycle, n}; }
  static Shape ray() { return {Kind::ray, 0}; }
  static Shape line() { return {Kind::line, 0}; }

  friend auto operator<=>(const Shape&, const Shape&) = default;
};

inline std::string to_string(const Shape& s) {
  switch (s.kind) {
    case Shape::Kind::cycle: return "cycle " + std::to_string(s.length);
    case Shape::Kind::ray: return "ray";
    case Shape::Kind::line: return "line";
  }
  return "?";
}

/// A component of an injection (or a copy inside `mu`): its shape and its
/// ordinal among the components of that shape.
struct ComponentId {
  Shape shape;
  Nat index = 0;
  friend auto operator<=>(const ComponentId&, const ComponentId&) = default;
};

inline std::string to_string(const ComponentId& c) { return to_string(c.shape) + " #" + std::to_string(c.index); }

inline ComponentId component_of(const CellAddress& c) {
  if (const auto* cyc = std::get_if<CycleCell>(&c)) return {Shape::cycle(cyc->length), cyc->copy};
  if (const auto* ray = std::get_if<RayCell>(&c)) return {Shape::ray(), ray->copy};
  return {Shape::line(), std::get<LineCell>(c).copy};
}

/// Moves a cell onto component `target`, keeping its position. nullopt when
/// the position has no counterpart there (cycle overrun, negative ray step).
inline std::optional<CellAddress> rebase(const CellAddress& c, const ComponentId& target) {
  Int pos = 0;
  if (const auto* cyc = std::get_if<CycleCell>(&c)) {
    pos = static_cast<Int>(cyc->position);
  } else if (const auto* ray = std::get_if<RayCell>(&c)) {
    pos = static_cast<Int>(ray->step);
  } else {
    pos = std::get<LineCell>(c).step;
  }
  switch (target.shape.kind) {
    case Shape::Kind::cycle:
      if (pos < 0 || static_cast<Nat>(pos) >= target.shape.length) return std::nullopt;
      return CycleCell{target.shape.length, target.index, static_cast<Nat>(pos)};
    case Shape::Kind::ray:
      if (pos < 0) return std::nullopt;
      return RayCell{target.index, static_cast<Nat>(pos)};
    case Shape::Kind::line:
      return LineCell{target.index, pos};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Component specs
// ---------------------------------------------------------------------------

/// A component count: finite, or countably infinite.
struct Count {
  Nat value = 0;
  bool infinite = false;

  static Count omega() { return {0, true}; }
  static Count of(Nat n) { return {n, false}; }
  bool is_zero() const { return !infinite && value == 0; }
  bool covers(Nat index) const { return infinite || index < value; }

  friend bool operator==(const Count&, const Count&) = default;
};

inline std::string to_string(const Count& c) { return c.infinite ? "inf" : std::to_string(c.value); }

class InvalidSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ComponentSpec {
  std::map<Nat, Count> cycles;  // length -> count
  Count rays;
  Count lines;

  /// Shapes with nonzero count, cycles by ascending length, then rays, then lines.
  std::vector<std::pair<Shape, Count>> shapes() const {
    std::vector<std::pair<Shape, Count>> out;
    for (const auto& [n, c] : cycles) {
      if (!c.is_zero()) out.emplace_back(Shape::cycle(n), c);
    }
    if (!rays.is_zero()) out.emplace_back(Shape::ray(), rays);
    if (!lines.is_zero()) out.emplace_back(Shape::line(), lines);
    return out;
  }

  Count count_of(const Shape& s) const {
    switch (s.kind) {
      case Shape::Kind::cycle: {
        auto it = cycles.find(s.length);
        return it == cycles.end() ? Count{} : it->second;
      }
      case Shape::Kind::ray: return rays;
      case Shape::Kind::line: return lines;
    }
    return {};
  }

  bool has_infinitely_many_cells() const {
    for (const auto& [shape, count] : shapes()) {
      if (count.infinite || shape.kind != Shape::Kind::cycle) return true;
    }
    return false;
  }

  void validate() const {
    for (const auto& [n, c] : cycles) {
      if (n == 0) throw InvalidSpec("cycle length must be at least 1");
    }
    if (!has_infinitely_many_cells()) {
      throw InvalidSpec("component spec has finitely many cells; it cannot present an injection on the naturals");
    }
  }

  friend bool operator==(const ComponentSpec&, const ComponentSpec&) = default;
};

// ---------------------------------------------------------------------------
// Presented injections
// ---------------------------------------------------------------------------

/// An injection on the naturals that knows its own component decomposition.
/// Local cell addresses use the component ordinal in the `copy` field.
template <class T>
concept PresentedInjection = requires(const T& s, Nat x, const CellAddress& c, const ComponentId& id) {
  { s.forward(x) } -> std::same_as<Nat>;
  { s.locate(x) } -> std::same_as<CellAddress>;
  { s.cell_at(c) } -> std::same_as<std::optional<Nat>>;
  { s.has_component(id) } -> std::same_as<bool>;
};

namespace detail {

// sum_{i=lo}^{hi-1} (d - i), requires hi <= d + 1.
inline u128 sum_gap(u128 d, u128 lo, u128 hi) {
  if (lo >= hi) return 0;
  const u128 n = hi - lo;
  return n * d - (lo + hi - 1) * n / 2;
}

}  // namespace detail

/// The canonical injection realizing a ComponentSpec.
///
/// Components whose shape has a finite count form one block, labelled in the
/// diagonal order of (component, cell) pairs (ascending component+cell, then
/// ascending component; line cells ordered 0, 1, -1, 2, -2, ...). Shapes with
/// infinitely many components each form a block of their own: (copy, cell)
/// is packed by Cantor pairing for rays and lines, copy*n + p for n-cycles.
/// A finite leading block takes the first labels; the infinite blocks are
/// interleaved round-robin after it.
class RealizedInjection {
 public:
  explicit RealizedInjection(ComponentSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    u128_total finite_cells = 0;
    bool finite_block_infinite = false;
    Nat next_index = 0;
    for (const auto& [shape, count] : spec_.shapes()) {
      if (count.infinite) {
        omega_shapes_.push_back(shape);
        continue;
      }
      Run run{shape, next_index, count.value, shape.kind == Shape::Kind::cycle ? shape.length : 0};
      next_index += count.value;
      if (run.size == 0) {
        finite_block_infinite = true;
      } else {
        finite_cells += static_cast<u128_total>(run.size) * run.count;
      }
      runs_.push_back(run);
    }
    if (finite_block_infinite) {
      finite_prefix_ = 0;
      blocks_.push_back(Block{true, {}});
    } else {
      finite_prefix_ = detail::checked_narrow(finite_cells, "realize");
    }
    for (const auto& s : omega_shapes_) blocks_.push_back(Block{false, s});
  }

  const ComponentSpec& spec() const { return spec_; }

  bool has_component(const ComponentId& id) const {
    if (id.shape.kind == Shape::Kind::cycle && id.shape.length == 0) return false;
    return spec_.count_of(id.shape).covers(id.index);
  }

  CellAddress locate(Nat x) const {
    if (!blocks_.empty() && blocks_.front().finite_runs) {
      if (blocks_.size() == 1) return locate_in_runs(x);
    } else if (x < finite_prefix_) {
      return locate_in_runs(x);
    }
    const Nat rest = x - finite_prefix_;
    const Nat b = blocks_.size();
    const Block& block = blocks_[rest % b];
    const Nat idx = rest / b;
    if (block.finite_runs) return locate_in_runs(idx);
    return locate_in_omega(block.shape, idx);
  }

  std::optional<Nat> cell_at(const CellAddress& c) const {
    const ComponentId id = component_of(c);
    if (!is_valid(c) || !has_component(id)) return std::nullopt;
    const auto count = spec_.count_of(id.shape);
    try {
      if (!count.infinite) {
        const Nat label = label_in_runs(c);
        if (!blocks_.empty() && blocks_.front().finite_runs) return interleave(0, label);
        return label;
      }
      const auto it = std::find_if(blocks_.begin(), blocks_.end(),
                                   [&](const Block& b) { return !b.finite_runs && b.shape == id.shape; });
      return interleave(static_cast<Nat>(it - blocks_.begin()), index_in_omega(c));
    } catch (const std::overflow_error&) {
      return std::nullopt;
    }
  }

  Nat forward(Nat x) const {
    auto y = cell_at(step_forward(locate(x)));
    if (!y) throw std::overflow_error("realized injection: image exceeds 64 bits");
    return *y;
  }

  /// The first `per_shape` components of every shape, in canonical order.
  std::vector<ComponentId> leading_components(Nat per_shape) const {
    std::vector<ComponentId> out;
    for (const auto& [shape, count] : spec_.shapes()) {
      const Nat n = count.infinite ? per_shape : std::min(per_shape, count.value);
      for (Nat i = 0; i < n; ++i) out.push_back({shape, i});
    }
    return out;
  }

 private:
  using u128_total = detail::u128;

  // A maximal group of finite-count components of one shape, occupying
  // component indices [start, start + count) of the diagonal order.
  struct Run {
    Shape shape;
    Nat start = 0;
    Nat count = 0;
    Nat size = 0;  // 0 means infinite
  };

  struct Block {
    bool finite_runs = false;
    Shape shape;
  };

  Nat interleave(Nat block, Nat idx) const {
    const detail::u128 label =
        static_cast<detail::u128>(idx) * blocks_.size() + block + finite_prefix_;
    return detail::checked_narrow(label, "realize");
  }

  // Number of valid (i, j) with i + j < d.
  detail::u128 cells_before_diagonal(Nat d) const {
    detail::u128 total = 0;
    for (const Run& r : runs_) {
      const detail::u128 lo = r.start;
      const detail::u128 hi = std::min<detail::u128>(static_cast<detail::u128>(r.start) + r.count, d);
      if (lo >= hi) continue;
      if (r.size == 0) {
        total += detail::sum_gap(d, lo, hi);
        continue;
      }
      // min(size, d - i) == size  iff  i <= d - size
      detail::u128 split = lo;
      if (d >= r.size) split = std::clamp<detail::u128>(static_cast<detail::u128>(d - r.size) + 1, lo, hi);
      total += (split - lo) * r.size + detail::sum_gap(d, split, hi);
    }
    return total;
  }

  // Valid component indices on diagonal d within a run: [lo, hi).
  static std::pair<Nat, Nat> diagonal_range(const Run& r, Nat d) {
    Nat lo = r.start;
    if (r.size != 0 && d >= r.size) lo = std::max(lo, d - r.size + 1);
    const Nat hi = static_cast<Nat>(std::min<detail::u128>(static_cast<detail::u128>(r.start) + r.count,
                                                          static_cast<detail::u128>(d) + 1));
    return {lo, std::max(lo, hi)};
  }

  CellAddress local_cell(const Run& r, Nat i, Nat j) const {
    const Nat ordinal = i - r.start;
    switch (r.shape.kind) {
      case Shape::Kind::cycle: return CycleCell{r.shape.length, ordinal, j};
      case Shape::Kind::ray: return RayCell{ordinal, j};
      case Shape::Kind::line: return LineCell{ordinal, unzigzag(j)};
    }
    return RayCell{};
  }

  CellAddress locate_in_runs(Nat x) const {
    // Largest d with cells_before_diagonal(d) <= x; every diagonal is nonempty.
    Nat lo = 0;
    Nat hi = x + 1;
    while (lo < hi) {
      const Nat mid = lo + (hi - lo + 1) / 2;
      if (cells_before_diagonal(mid) <= x) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    const Nat d = lo;
    Nat rank = x - static_cast<Nat>(cells_before_diagonal(d));
    for (const Run& r : runs_) {
      const auto [a, b] = diagonal_range(r, d);
      if (rank < b - a) return local_cell(r, a + rank, d - (a + rank));
      rank -= b - a;
    }
    throw std::logic_error("realized injection: diagonal walk overran");
  }

  Nat label_in_runs(const CellAddress& c) const {
    const ComponentId id = component_of(c);
    const auto run = std::find_if(runs_.begin(), runs_.end(), [&](const Run& r) { return r.shape == id.shape; });
    Nat j = 0;
    if (const auto* cyc = std::get_if<CycleCell>(&c)) {
      j = cyc->position;
    } else if (const auto* ray = std::get_if<RayCell>(&c)) {
      j = ray->step;
    } else {
      j = zigzag(std::get<LineCell>(c).step);
    }
    const Nat i = run->start + id.index;
    const Nat d = detail::checked_narrow(static_cast<detail::u128>(i) + j, "realize");
    detail::u128 label = cells_before_diagonal(d);
    for (const Run& r : runs_) {
      const auto [a, b] = diagonal_range(r, d);
      if (a < std::min(b, i)) label += std::min(b, i) - a;
    }
    return detail::checked_narrow(label, "realize");
  }

  static CellAddress locate_in_omega(const Shape& s, Nat idx) {
    switch (s.kind) {
      case Shape::Kind::cycle: return CycleCell{s.length, idx / s.length, idx % s.length};
      case Shape::Kind::ray: {
        const Pair p = unpair(idx);
        return RayCell{p.i, p.j};
      }
      case Shape::Kind::line: {
        const Pair p = unpair(idx);
        return LineCell{p.i, unzigzag(p.j)};
      }
    }
    return RayCell{};
  }

  static Nat index_in_omega(const CellAddress& c) {
    if (const auto* cyc = std::get_if<CycleCell>(&c)) {
      return detail::checked_narrow(static_cast<detail::u128>(cyc->copy) * cyc->length + cyc->position, "realize");
    }
    if (const auto* ray = std::get_if<RayCell>(&c)) return pair(ray->copy, ray->step);
    const auto& line = std::get<LineCell>(c);
    return pair(line.copy, zigzag(line.step));
  }

  ComponentSpec spec_;
  std::vector<Run> runs_;
  std::vector<Shape> omega_shapes_;
  std::vector<Block> blocks_;
  Nat finite_prefix_ = 0;
};

static_assert(PresentedInjection<RealizedInjection>);

inline RealizedInjection realize(ComponentSpec spec) { return RealizedInjection(std::move(spec)); }

// ---------------------------------------------------------------------------
// Window classification
// ---------------------------------------------------------------------------

class NotAnInjection : public std::invalid_argument {
 public:
  NotAnInjection(Nat a, Nat b, Nat image)
      : std::invalid_argument("not an injection: " + std::to_string(a) + " and " + std::to_string(b) +
                              " both map to " + std::to_string(image)),
        first(a),
        second(b) {}
  Nat first;
  Nat second;
};

/// What can be seen of an injection on [0, N). Open segments may belong to a
/// ray, a line, or a cycle longer than the window shows.
struct WindowReport {
  std::vector<std::vector<Nat>> cycles;    // each listed from its least element
  std::vector<std::vector<Nat>> segments;  // each from its in-window start
};

template <class F>
  requires std::invocable<const F&, Nat>
WindowReport classify_window(const F& sigma, Nat window) {
  std::vector<Nat> image(window);
  std::unordered_map<Nat, Nat> source;
  source.reserve(window);
  std::vector<char> has_pred(window, 0);
  for (Nat x = 0; x < window; ++x) {
    image[x] = static_cast<Nat>(sigma(x));
    auto [it, fresh] = source.emplace(image[x], x);
    if (!fresh) throw NotAnInjection(it->second, x, image[x]);
    if (image[x] < window) has_pred[image[x]] = 1;
  }
  WindowReport report;
  std::vector<char> seen(window, 0);
  for (Nat x = 0; x < window; ++x) {
    if (has_pred[x]) continue;
    std::vector<Nat> seg;
    for (Nat y = x; y < window && !seen[y]; y = image[y]) {
      seen[y] = 1;
      seg.push_back(y);
    }
    report.segments.push_back(std::move(seg));
  }
  for (Nat x = 0; x < window; ++x) {
    if (seen[x]) continue;
    std::vector<Nat> cyc;
    for (Nat y = x; !seen[y]; y = image[y]) {
      seen[y] = 1;
      cyc.push_back(y);
    }
    report.cycles.push_back(std::move(cyc));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Allocation and embedding
// ---------------------------------------------------------------------------

/// Which copy inside `mu` hosts each component of the embedded injection.
/// Unless overridden, component (shape, i) goes to copy (shape, i).
class Allocation {
 public:
  ComponentId copy_for(const ComponentId& component) const {
    auto it = forward_.find(component);
    return it == forward_.end() ? component : it->second;
  }

  std::optional<ComponentId> component_for(const ComponentId& copy) const {
    if (auto it = reverse_.find(copy); it != reverse_.end()) return it->second;
    if (forward_.contains(copy)) return std::nullopt;
    return copy;
  }

  /// Points one component at another copy without touching the reverse map.
  void redirect(const ComponentId& component, const ComponentId& copy) { forward_[component] = copy; }

  /// Exchanges the copies of two components.
  void swap(const ComponentId& a, const ComponentId& b) {
    const ComponentId ca = copy_for(a);
    const ComponentId cb = copy_for(b);
    forward_[a] = cb;
    forward_[b] = ca;
    reverse_[cb] = a;
    reverse_[ca] = b;
  }

  const std::map<ComponentId, ComponentId>& overrides() const { return forward_; }

 private:
  std::map<ComponentId, ComponentId> forward_;
  std::map<ComponentId, ComponentId> reverse_;
};

/// A ⊆ N together with pi_A : N -> A such that sigma = pi_A^-1 . mu . pi_A.
template <PresentedInjection Injection>
class Embedding {
 public:
  explicit Embedding(Injection sigma, Allocation allocation = {})
      : sigma_(std::move(sigma)), allocation_(std::move(allocation)) {}

  const Injection& sigma() const { return sigma_; }
  const Allocation& allocation() const { return allocation_; }
  Allocation& allocation() { return allocation_; }

  /// pi_A(x), or nullopt when the allocation sends x somewhere that does not exist.
  std::optional<Nat> try_forward(Nat x) const {
    const CellAddress local = sigma_.locate(x);
    const auto target = rebase(local, allocation_.copy_for(component_of(local)));
    if (!target) return std::nullopt;
    return try_encode_cell(*target);
  }

  Nat forward(Nat x) const {
    auto y = try_forward(x);
    if (!y) throw std::domain_error("embedding: pi_A undefined at " + std::to_string(x));
    return *y;
  }

  /// The local cell of sigma that y hosts, if y is in A.
  std::optional<CellAddress> inverse_cell(Nat y) const {
    const CellAddress host = decode_cell(y);
    const auto component = allocation_.component_for(component_of(host));
    if (!component || !sigma_.has_component(*component)) return std::nullopt;
    return rebase(host, *component);
  }

  bool contains(Nat y) const { return inverse_cell(y).has_value(); }

  std::optional<Nat> inverse(Nat y) const {
    auto local = inverse_cell(y);
    if (!local) return std::nullopt;
    return sigma_.cell_at(*local);
  }

 private:
  Injection sigma_;
  Allocation allocation_;
};

template <PresentedInjection Injection>
Embedding<Injection> embed(Injection sigma) {
  return Embedding<Injection>(std::move(sigma));
}

/// Fresh allocation: no two of `components` share a copy.
template <PresentedInjection Injection>
bool allocation_is_fresh(const Embedding<Injection>& e, const std::vector<ComponentId>& components) {
  std::vector<ComponentId> copies;
  copies.reserve(components.size());
  for (const auto& c : components) copies.push_back(e.allocation().copy_for(c));
  std::sort(copies.begin(), copies.end());
  return std::adjacent_find(copies.begin(), copies.end()) == copies.end();
}

// ---------------------------------------------------------------------------
// Conjugacy verification
// ---------------------------------------------------------------------------

namespace detail {

struct Fnv1a {
  std::uint64_t state = 0xcbf29ce484222325ULL;
  void add(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      state ^= (v >> (8 * b)) & 0xff;
      state *= 0x100000001b3ULL;
    }
  }
};

}  // namespace detail

struct ConjugacyCounterexample {
  enum class Check : std::uint8_t { pi_defined, pi_in_a, mu_pi_in_a, conjugacy };
  Check failed = Check::conjugacy;
  Nat x = 0;
  std::optional<Nat> pi_x;
  std::optional<Nat> mu_pi_x;
  std::optional<Nat> pulled_back;
  Nat sigma_x = 0;
};

inline std::string to_string(ConjugacyCounterexample::Check c) {
  using C = ConjugacyCounterexample::Check;
  switch (c) {
    case C::pi_defined: return "pi_A(x) undefined";
    case C::pi_in_a: return "pi_A(x) not in A";
    case C::mu_pi_in_a: return "mu(pi_A(x)) not in A";
    case C::conjugacy: return "pi_A^-1(mu(pi_A(x))) != sigma(x)";
  }
  return "?";
}

struct ConjugacyReport {
  Nat window = 0;
  std::uint64_t digest = 0;  // FNV-1a over (x, pi_A(x)) for x < window
  std::optional<ConjugacyCounterexample> counterexample;
  bool passed() const { return !counterexample.has_value(); }
};

template <PresentedInjection Injection>
ConjugacyReport verify_conjugacy(const Embedding<Injection>& e, const Injection& sigma, Nat window) {
  using C = ConjugacyCounterexample::Check;
  ConjugacyReport report{window, 0, std::nullopt};
  detail::Fnv1a hash;
  for (Nat x = 0; x < window; ++x) {
    ConjugacyCounterexample cx;
    cx.x = x;
    cx.sigma_x = sigma.forward(x);
    cx.pi_x = e.try_forward(x);
    auto fail = [&](C check) {
      cx.failed = check;
      report.counterexample = cx;
      return report;
    };
    if (!cx.pi_x) return fail(C::pi_defined);
    hash.add(x);
    hash.add(*cx.pi_x);
    if (!e.contains(*cx.pi_x)) return fail(C::pi_in_a);
    cx.mu_pi_x = mu_forward(*cx.pi_x);
    if (!e.contains(*cx.mu_pi_x)) return fail(C::mu_pi_in_a);
    cx.pulled_back = e.inverse(*cx.mu_pi_x);
    if (cx.pulled_back != cx.sigma_x) return fail(C::conjugacy);
  }
  report.digest = hash.state;
  return report;
}

/// A deliberately broken allocation for diagnostics: swaps the first
/// components of the first two shapes present, or, with a single shape,
/// points its second component at the copy hosting its first. A lone ray or
/// line is pointed at a copy of a shape it cannot fit.
inline Embedding<RealizedInjection> corrupt_allocation(Embedding<RealizedInjection> e) {
  const auto shapes = e.sigma().spec().shapes();
  if (shapes.size() >= 2) {
    e.allocation().swap({shapes[0].first, 0}, {shapes[1].first, 0});
    return e;
  }
  const auto& [shape, count] = shapes.front();
  if (count.covers(1)) {
    e.allocation().redirect({shape, 1}, e.allocation().copy_for({shape, 0}));
  } else if (shape.kind == Shape::Kind::ray) {
    e.allocation().redirect({shape, 0}, {Shape::cycle(1), 0});
  } else {
    e.allocation().redirect({shape, 0}, {Shape::ray(), 0});
  }
  return e;
}

}  // namespace ufo
