// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ufo/ufo.hpp"
#include "ufo_cli.hpp"

using namespace ufo;

namespace {

// Tolerances and windows.
constexpr Nat kMuWindow = 100'000;
constexpr double kMuBudgetSeconds = 2.0;
constexpr Nat kConjugacyWindow = 10'000;
constexpr Nat kMutationPerShape = 2;
constexpr Nat kGeneratorWindow = 10'000;
constexpr std::size_t kWordCount = 200;
constexpr std::size_t kWordMaxLength = 8;
constexpr Nat kWordGenerators = 500;
constexpr std::uint64_t kWordSeed = 42;
constexpr double kFactorizationBudgetSeconds = 5.0;
constexpr std::size_t kExhaustiveMaxSize = 3;
constexpr Nat kExhaustiveWindow = 2'000;
constexpr std::size_t kExhaustiveWords = 50;

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void report(const std::string& name, const Outcome& o) {
  std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << name;
  if (!o.detail.empty()) std::cout << " -- " << o.detail;
  std::cout << '\n';
  if (!o.ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string data(const std::string& name) { return std::string(UFO_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

Outcome mu_well_formed() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Nat> images;
  images.reserve(kMuWindow);
  for (Nat x = 0; x < kMuWindow && o.ok; ++x) {
    const Nat y = mu_forward(x);
    images.push_back(y);
    if (encode_cell(decode_cell(x)) != x) o.fail("codec roundtrip at " + std::to_string(x));
    if (mu_preimage(y) != x) o.fail("preimage of mu(" + std::to_string(x) + ")");
    const auto p = mu_preimage(x);
    if (p && mu_forward(*p) != x) o.fail("mu(preimage(" + std::to_string(x) + "))");
    const CellAddress cell = decode_cell(x);
    const auto* ray = std::get_if<RayCell>(&cell);
    const bool ray_head = ray && ray->step == 0;
    if (is_head(x) != !p || is_head(x) != ray_head) o.fail("head characterization at " + std::to_string(x));
  }
  std::sort(images.begin(), images.end());
  if (std::adjacent_find(images.begin(), images.end()) != images.end()) o.fail("two indices share an image");
  for (Nat y : images) {
    if (y < kMuWindow && is_head(y)) o.fail("head " + std::to_string(y) + " has a preimage");
  }
  const double s = seconds_since(t0);
  if (s > kMuBudgetSeconds) o.fail("took " + std::to_string(s) + " s");
  if (o.ok) o.detail = "x < " + std::to_string(kMuWindow) + " in " + std::to_string(s) + " s";
  return o;
}

// ---------------------------------------------------------------------------

struct NamedSpec {
  std::string name;
  ComponentSpec spec;
};

std::vector<NamedSpec> conjugacy_specs() {
  std::vector<NamedSpec> out;
  ComponentSpec successor;
  successor.rays = Count::of(1);
  out.push_back({"successor", successor});

  ComponentSpec two_cycle_ray;
  two_cycle_ray.cycles[2] = Count::of(1);
  two_cycle_ray.rays = Count::of(1);
  out.push_back({"2-cycle + ray", two_cycle_ray});

  ComponentSpec mixed;
  mixed.cycles[2] = Count::of(3);
  mixed.cycles[5] = Count::of(1);
  mixed.rays = Count::of(4);
  mixed.lines = Count::of(2);
  out.push_back({"3x2-cycle + 5-cycle + 4 rays + 2 lines", mixed});

  ComponentSpec everything;
  for (Nat n = 1; n <= 5; ++n) everything.cycles[n] = Count::omega();
  everything.rays = Count::omega();
  everything.lines = Count::omega();
  out.push_back({"inf of every cycle <= 5, rays, lines", everything});
  return out;
}

bool breaks(const Embedding<RealizedInjection>& e) {
  return !verify_conjugacy(e, e.sigma(), kConjugacyWindow).passed();
}

Outcome conjugacy_reproduced(const NamedSpec& ns) {
  Outcome o;
  ns.spec.validate();
  const auto sigma = realize(ns.spec);
  const auto e = embed(sigma);
  const auto r = verify_conjugacy(e, sigma, kConjugacyWindow);
  if (!r.passed()) {
    o.fail(to_string(r.counterexample->failed) + " at x = " + std::to_string(r.counterexample->x));
    return o;
  }
  for (Nat y = 0; y < kConjugacyWindow; ++y) {
    if (e.contains(y) && !e.contains(mu_forward(y))) o.fail("A not closed under mu at " + std::to_string(y));
  }

  std::size_t mutations = 0;
  std::size_t missed = 0;
  auto probe = [&](Embedding<RealizedInjection> m) {
    ++mutations;
    if (!breaks(m)) ++missed;
  };
  const auto leading = sigma.leading_components(kMutationPerShape);
  for (const auto& c : leading) {
    for (const auto& d : leading) {
      if (c == d) continue;
      auto m = e;
      m.allocation().redirect(c, m.allocation().copy_for(d));
      probe(std::move(m));
    }
  }
  const auto shapes = ns.spec.shapes();
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    for (std::size_t j = i + 1; j < shapes.size(); ++j) {
      auto m = e;
      m.allocation().swap({shapes[i].first, 0}, {shapes[j].first, 0});
      probe(std::move(m));
    }
  }
  probe(corrupt_allocation(e));
  if (missed) o.fail(std::to_string(missed) + " of " + std::to_string(mutations) + " mutations undetected");
  if (o.ok) {
    std::ostringstream d;
    d << "window " << kConjugacyWindow << ", digest 0x" << std::hex << r.digest << std::dec << ", " << mutations
      << " mutations detected";
    o.detail = d.str();
  }
  return o;
}

// ---------------------------------------------------------------------------

struct Instance {
  std::string name;
  FiniteAlgebra algebra;
  std::vector<Element> tau;
};

Outcome all_verifiers(const FactorizationWitness& w, Nat window, std::size_t words) {
  Outcome o;
  if (auto x = check_sigma(w, window)) o.fail("sigma invariant at " + std::to_string(*x));
  const auto sq = verify_square_on_generators(w, window);
  if (!sq.passed()) o.fail("generator square at x = " + std::to_string(sq.counterexample->x));
  const auto ws = verify_square_on_words(
      w, random_words(w.algebra().kind, words, kWordMaxLength, kWordGenerators, kWordSeed));
  if (!ws.passed()) o.fail("word square at " + to_string(ws.counterexample->word));
  const auto su = verify_surjectivity(w);
  if (!su.passed()) o.fail("pi misses " + std::to_string(su.missing.size()) + " elements");
  return o;
}

Outcome factorization_instances() {
  Outcome o;
  const auto s3 = symmetric3();
  const std::vector<Instance> instances = {
      {"Z2 id", cyclic(2), {0, 1}},
      {"Z6 2x", cyclic(6), {0, 2, 4, 0, 2, 4}},
      {"S3 conj 1", s3, conjugation(s3, 1).map},
      {"diamond swap", diamond(), {0, 2, 1, 3}},
  };
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& in : instances) {
    const auto w = factorize(in.algebra, Endomorphism{in.tau});
    const auto r = all_verifiers(w, kGeneratorWindow, kWordCount);
    if (!r.ok) o.fail(in.name + ": " + r.detail);
  }
  const double s = seconds_since(t0);
  if (s > kFactorizationBudgetSeconds) o.fail("took " + std::to_string(s) + " s");
  if (o.ok) o.detail = std::to_string(instances.size()) + " instances in " + std::to_string(s) + " s";
  return o;
}

// ---------------------------------------------------------------------------

// Direct reading of the definition, kept apart from is_endomorphism.
bool brute_endomorphism(const FiniteAlgebra& a, const std::vector<Element>& t) {
  if (t[a.identity] != a.identity) return false;
  for (Element x = 0; x < a.size; ++x) {
    for (Element y = 0; y < a.size; ++y) {
      if (t[a.table[x * a.size + y]] != a.table[t[x] * a.size + t[y]]) return false;
    }
  }
  if (a.inverse) {
    for (Element x = 0; x < a.size; ++x) {
      if (t[(*a.inverse)[x]] != (*a.inverse)[t[x]]) return false;
    }
  }
  return true;
}

Outcome exhaustive_small() {
  Outcome o;
  std::vector<std::pair<std::string, FiniteAlgebra>> algebras;
  for (std::size_t m = 1; m <= kExhaustiveMaxSize; ++m) {
    algebras.push_back({"Z" + std::to_string(m) + " group", cyclic(m)});
    algebras.push_back({"Z" + std::to_string(m) + " monoid", cyclic(m, AlgebraKind::monoid)});
    algebras.push_back({"chain " + std::to_string(m), chain(m)});
  }
  std::size_t maps = 0, accepted = 0;
  for (const auto& [name, a] : algebras) {
    std::vector<Element> t(a.size, 0);
    for (bool more = true; more;) {
      ++maps;
      const bool expected = brute_endomorphism(a, t);
      if (static_cast<bool>(is_endomorphism(a, t)) != expected) o.fail(name + ": classifier disagrees");
      if (expected) {
        ++accepted;
        const auto r = all_verifiers(factorize(a, Endomorphism{t}), kExhaustiveWindow, kExhaustiveWords);
        if (!r.ok) o.fail(name + ": " + r.detail);
      }
      more = false;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (++t[i] < a.size) {
          more = true;
          break;
        }
        t[i] = 0;
      }
    }
  }
  if (o.ok) o.detail = std::to_string(maps) + " maps, " + std::to_string(accepted) + " endomorphisms factored";
  return o;
}

// ---------------------------------------------------------------------------

Outcome anchors() {
  Outcome o;
  const std::vector<std::pair<Nat, Nat>> mu_values = {{0, 0}, {1, 4}, {4, 10}, {6, 15}, {15, 6}, {5, 2}};
  for (const auto& [x, y] : mu_values) {
    if (mu_forward(x) != y) o.fail("mu(" + std::to_string(x) + ") = " + std::to_string(mu_forward(x)));
  }
  const auto w = factorize(cyclic(2), Endomorphism{{0, 1}});
  const auto& s = w.sigma();
  if (s.forward(0) != 2 || s.forward(1) != 5) o.fail("Z2 id: sigma(0), sigma(1)");
  const std::vector<Nat> heads = {0, 1, 3, 4};
  for (Nat i = 0; i < heads.size(); ++i) {
    if (s.head_at(i) != heads[i]) o.fail("Z2 id: head " + std::to_string(i));
  }
  if (w.pi(1) != 0 || w.pi(7) != 1) o.fail("Z2 id: pi(1), pi(7)");
  if (w.pi(mu_forward(7)) != w.tau()(w.pi(7))) o.fail("Z2 id: square at 7");
  return o;
}

// ---------------------------------------------------------------------------

int exit_code_of(const std::string& args) {
  const std::string cmd = std::string("\"") + UFO_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_contract() {
  Outcome o;
  const std::vector<std::pair<std::string, std::vector<std::string>>> goldens = {
      {"mu_0_20.txt", {"mu", "0..20", "--preimage"}},
      {"embed_cycle2_ray.txt", {"embed", data("cycle2_ray.spec"), "--window", "10000"}},
      {"factorize_z2_id.txt", {"factorize", data("z2.alg"), data("z2_id.endo"), "--generators", "10000"}},
      {"factorize_z6_double.txt",
       {"factorize", data("z6.alg"), data("z6_double.endo"), "--generators", "2000", "--words", "200", "--maxlen",
        "8", "--seed", "42"}},
  };
  for (const auto& [file, args] : goldens) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != cli::kPass) o.fail(file + ": exit " + std::to_string(code));
    if (out.str() != slurp(data("golden/" + file))) o.fail(file + ": output differs from golden");
  }
  const std::string z2 = "factorize \"" + data("z2.alg") + "\" \"" + data("z2_id.endo") + "\"";
  const std::vector<std::pair<std::string, int>> codes = {
      {z2, 0},
      {z2 + " --corrupt-pi 7", 1},
      {"factorize \"" + data("malformed.alg") + "\" \"" + data("z2_id.endo") + "\"", 2},
  };
  for (const auto& [args, want] : codes) {
    const int got = exit_code_of(args);
    if (got != want) o.fail("exit " + std::to_string(got) + " for '" + args + "', want " + std::to_string(want));
  }
  if (o.ok) o.detail = std::to_string(goldens.size()) + " goldens, exit codes 0/1/2";
  return o;
}

void guarded(const std::string& name, const std::function<Outcome()>& f) {
  try {
    report(name, f());
  } catch (const std::exception& e) {
    Outcome o;
    o.fail(std::string("exception: ") + e.what());
    report(name, o);
  }
}

}  // namespace

int main() {
  guarded("mu is a well-formed injection with decidable heads", mu_well_formed);
  for (const auto& ns : conjugacy_specs()) {
    guarded("conjugacy and mutation detection: " + ns.name, [&] { return conjugacy_reproduced(ns); });
  }
  guarded("factorization of the four reference instances", factorization_instances);
  guarded("exhaustive self-maps of small monoids", exhaustive_small);
  guarded("hand-computed anchors", anchors);
  guarded("cli goldens and exit codes", cli_contract);
  std::cout << (failures ? std::to_string(failures) + " criteria failed\n" : "all criteria passed\n");
  return failures ? 1 : 0;
}
