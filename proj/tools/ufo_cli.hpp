#pragma once

// Command dispatch for the `ufo` tool. Exit codes: 0 all checks pass,
// 1 a verifier found a counterexample, 2 invalid input or usage.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ufo/ufo.hpp"

namespace ufo::cli {

inline constexpr int kPass = 0;
inline constexpr int kCounterexample = 1;
inline constexpr int kInvalid = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct IndexRange {
  Nat first = 0;
  Nat last = 0;  // exclusive
};

inline Nat parse_nat(const std::string& s) {
  Nat v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) throw UsageError("not a natural number: '" + s + "'");
  return v;
}

// "x" or "a..b" (half open)
inline IndexRange parse_range(const std::string& s) {
  if (auto dots = s.find(".."); dots != std::string::npos) {
    IndexRange r{parse_nat(s.substr(0, dots)), parse_nat(s.substr(dots + 2))};
    if (r.last <= r.first) throw UsageError("empty range '" + s + "'");
    if (r.last - r.first > 1'000'000) throw UsageError("range longer than 10^6 rows");
    return r;
  }
  const Nat x = parse_nat(s);
  if (x == UINT64_MAX) throw UsageError("index too large");
  return {x, x + 1};
}

inline std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  return in;
}

inline std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline std::string show(const std::optional<Nat>& v) { return v ? std::to_string(*v) : "undefined"; }

template <class Range>
std::string join(const Range& r, const char* sep = " ") {
  std::string s;
  bool first = true;
  for (const auto& v : r) {
    if (!first) s += sep;
    s += std::to_string(v);
    first = false;
  }
  return s;
}

}  // namespace detail

struct MuOptions {
  std::string indices;
  bool preimage = false;
  bool decode = false;
};

inline int cmd_mu(const MuOptions& o, std::ostream& out) {
  const auto range = detail::parse_range(o.indices);
  for (Nat x = range.first; x < range.last; ++x) {
    const Nat y = mu_forward(x);
    out << x << " → " << y << ", " << to_string(decode_cell(x));
    if (o.decode) out << " ↦ " << to_string(decode_cell(y));
    if (o.preimage) {
      const auto p = mu_preimage(x);
      out << ", μ⁻¹: " << (p ? std::to_string(*p) : std::string("head"));
    }
    out << '\n';
  }
  return kPass;
}

struct EmbedOptions {
  std::string spec_path;
  Nat window = 1000;
  bool corrupt = false;
};

inline int cmd_embed(const EmbedOptions& o, std::ostream& out, std::ostream& err) {
  auto in = detail::open(o.spec_path);
  ComponentSpec spec;
  try {
    spec = parse_spec(in);
    spec.validate();
  } catch (const std::exception& e) {
    err << "invalid spec " << o.spec_path << ": " << e.what() << '\n';
    return kInvalid;
  }
  const RealizedInjection sigma = realize(spec);
  Embedding<RealizedInjection> e = embed(sigma);
  if (o.corrupt) e = corrupt_allocation(std::move(e));

  out << "spec:\n";
  std::istringstream printed(print_spec(spec));
  for (std::string line; std::getline(printed, line);) out << "  " << line << '\n';
  out << "allocation (first 3 components per shape):\n";
  for (const auto& c : sigma.leading_components(3)) {
    out << "  " << to_string(c) << " -> mu copy " << to_string(e.allocation().copy_for(c)) << '\n';
  }
  out << "sample (x, sigma(x), pi_A(x), host cell):\n";
  for (Nat x = 0; x < std::min<Nat>(o.window, 12); ++x) {
    const auto px = e.try_forward(x);
    out << "  " << x << "  " << sigma.forward(x) << "  " << detail::show(px) << "  "
        << (px ? to_string(decode_cell(*px)) : std::string("-")) << '\n';
  }
  const auto report = verify_conjugacy(e, sigma, o.window);
  if (report.passed()) {
    out << "conjugacy on [0, " << o.window << "): PASS digest " << detail::hex(report.digest) << '\n';
    return kPass;
  }
  const auto& cx = *report.counterexample;
  out << "conjugacy on [0, " << o.window << "): FAIL at x = " << cx.x << ": " << to_string(cx.failed)
      << "; pi_A(x) = " << detail::show(cx.pi_x) << ", mu(pi_A(x)) = " << detail::show(cx.mu_pi_x)
      << ", pulled back = " << detail::show(cx.pulled_back) << ", sigma(x) = " << cx.sigma_x << '\n';
  return kCounterexample;
}

struct FactorizeOptions {
  std::string algebra_path;
  std::string endo_path;
  Nat generators = 2000;
  std::size_t words = 200;
  std::size_t max_length = 8;
  Nat word_generators = 500;
  std::uint64_t seed = 42;
  std::optional<Nat> corrupt_pi;
  std::optional<Nat> surjectivity_heads;
};

inline int cmd_factorize(const FactorizeOptions& o, std::ostream& out, std::ostream& err) {
  FiniteAlgebra algebra;
  std::vector<Element> endo;
  try {
    auto ain = detail::open(o.algebra_path);
    algebra = parse_algebra(ain);
    auto ein = detail::open(o.endo_path);
    endo = parse_endo(ein);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kInvalid;
  }
  std::optional<FactorizationWitness> built;
  try {
    built = factorize(algebra, Endomorphism{endo});
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalid;
  }
  FactorizationWitness w = *built;
  if (o.corrupt_pi) {
    const Nat x = *o.corrupt_pi;
    w = w.with_pi_override(x, static_cast<Element>((w.pi(x) + 1) % algebra.size));
  }
  const Nat m = w.enumeration().modulus();
  const auto& sigma = w.sigma();

  out << "algebra: " << to_string(algebra.kind) << ", size " << algebra.size << ", identity " << algebra.identity
      << '\n';
  out << "endomorphism: " << detail::join(endo) << '\n';
  out << "enumeration: m = " << m << ", D = [" << detail::join(w.enumeration().elements) << "]\n";
  std::vector<Nat> residues;
  for (Nat r = 0; r < m; ++r) residues.push_back(sigma.successor_residue(r));
  out << "sigma(x) = (x+1)*" << m << " + r[x mod " << m << "], r = [" << detail::join(residues) << "]\n";
  std::vector<Nat> heads;
  for (Nat i = 0; i < 20 && sigma.has_component({Shape::ray(), i}); ++i) heads.push_back(sigma.head_at(i));
  out << "heads (first " << heads.size() << "): " << detail::join(heads) << '\n';
  out << "allocation: head #i -> mu ray copy i\n";
  out << "pi samples (x, host cell, pi(x)):\n";
  for (Nat x = 0; x < 20; ++x) {
    out << "  " << x << "  " << to_string(decode_cell(x)) << "  " << w.pi(x) << '\n';
  }

  bool ok = true;
  const auto gen = verify_square_on_generators(w, o.generators);
  if (gen.passed()) {
    out << "generator square on [0, " << o.generators << "): PASS digest " << detail::hex(gen.digest) << '\n';
  } else {
    ok = false;
    const auto& cx = *gen.counterexample;
    out << "generator square on [0, " << o.generators << "): FAIL at x = " << cx.x << ": pi(mu(x)) = pi(" << cx.mu_x
        << ") = " << cx.left << ", tau(pi(x)) = " << cx.right << '\n';
  }

  const auto words = random_words(algebra.kind, o.words, o.max_length, o.word_generators, o.seed);
  const auto wr = verify_square_on_words(w, words);
  out << "word square (" << o.words << " words, length <= " << o.max_length << ", generators < "
      << o.word_generators << ", seed " << o.seed << "): ";
  if (wr.passed()) {
    out << "PASS\n";
  } else {
    ok = false;
    const auto& cx = *wr.counterexample;
    out << "FAIL at word #" << cx.index << " " << to_string(cx.word) << ": left " << cx.left << ", right "
        << cx.right << '\n';
  }

  const auto sr = verify_surjectivity(w, o.surjectivity_heads);
  out << "surjectivity (first " << sr.heads_used << " heads): image {" << detail::join(sr.image, ",")
      << "}, generated {" << detail::join(sr.generated, ",") << "}: ";
  if (sr.passed()) {
    out << "PASS\n";
  } else {
    ok = false;
    out << "FAIL, missing {" << detail::join(sr.missing, ",") << "}\n";
  }
  out << "result: " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kPass : kCounterexample;
}

/// Entry point shared by the binary and the in-process tests.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Universal injection, conjugacy embeddings and projective factorizations", "ufo"};
  app.require_subcommand(1);

  MuOptions mu_opts;
  auto* mu = app.add_subcommand("mu", "Evaluate the universal injection at an index or a range a..b");
  mu->add_option("indices", mu_opts.indices, "x or a..b (half open)")->required();
  mu->add_flag("--preimage", mu_opts.preimage, "Also print the preimage, or 'head'");
  mu->add_flag("--decode", mu_opts.decode, "Also print the cell address of the image");

  EmbedOptions embed_opts;
  auto* emb = app.add_subcommand("embed", "Embed the injection presented by a spec file and verify conjugacy");
  emb->add_option("spec", embed_opts.spec_path, "Component spec file")->required();
  emb->add_option("--window", embed_opts.window, "Check x in [0, N)");
  emb->add_flag("--corrupt", embed_opts.corrupt, "Break the allocation before verifying (diagnostic)");

  FactorizeOptions fact_opts;
  auto* fac = app.add_subcommand("factorize", "Factor an endomorphism through the universal morphism");
  fac->add_option("algebra", fact_opts.algebra_path, "Algebra file")->required();
  fac->add_option("endo", fact_opts.endo_path, "Endomorphism file")->required();
  fac->add_option("--generators", fact_opts.generators, "Check the square at generators x < N");
  fac->add_option("--words", fact_opts.words, "Number of random words");
  fac->add_option("--maxlen", fact_opts.max_length, "Maximum random word length");
  fac->add_option("--word-generators", fact_opts.word_generators, "Random words use generators below this");
  fac->add_option("--seed", fact_opts.seed, "Random word seed");
  fac->add_option("--corrupt-pi", fact_opts.corrupt_pi, "Alter pi at one generator (diagnostic)");
  fac->add_option("--surjectivity-heads", fact_opts.surjectivity_heads,
                  "Use only the first K heads in the surjectivity check (diagnostic)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalid;
  }

  try {
    if (mu->parsed()) return cmd_mu(mu_opts, out);
    if (emb->parsed()) return cmd_embed(embed_opts, out, err);
    if (fac->parsed()) {
      if (fact_opts.generators == 0 || fact_opts.word_generators == 0) throw UsageError("counts must be positive");
      return cmd_factorize(fact_opts, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace ufo::cli
