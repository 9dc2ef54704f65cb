#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ufo/ufo.hpp"

using namespace ufo;

namespace {

template <class F>
auto parse_text(F parse, const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

FiniteAlgebra load(const std::string& name) {
  std::ifstream in(std::string(UFO_TEST_DATA) + "/" + name);
  return parse_algebra(in);
}

}  // namespace

TEST(AlgebraFile, DataFilesMatchBuiltins) {
  EXPECT_EQ(load("z2.alg"), cyclic(2));
  EXPECT_EQ(load("z6.alg"), cyclic(6));
  EXPECT_EQ(load("s3.alg"), symmetric3());
  EXPECT_EQ(load("diamond.alg"), diamond());
}

TEST(AlgebraFile, PrintParseRoundTrip) {
  for (const auto& a : {cyclic(6), cyclic(4, AlgebraKind::monoid), symmetric3(), diamond(), chain(5)}) {
    const std::string text = print_algebra(a);
    const auto b = parse_text(parse_algebra, text);
    EXPECT_EQ(a, b);
    EXPECT_EQ(print_algebra(b), text);
  }
}

TEST(AlgebraFile, CommentsAndGluedKeys) {
  const auto a = parse_text(parse_algebra, "# Z2\nkind:group\nsize: 2\n\ntable:\n0 1 # row 0\n1 0\nidentity: 0\ninverse: 0 1\n");
  EXPECT_EQ(a, cyclic(2));
}

TEST(AlgebraFile, SyntaxErrors) {
  EXPECT_THROW(parse_text(parse_algebra, "kind: ring\nsize: 1\ntable:\n0\nidentity: 0\n"), ParseError);
  EXPECT_THROW(parse_text(parse_algebra, "kind: monoid\nsize: 2\ntable:\n0 1\n1\nidentity: 0\n"), ParseError);
  EXPECT_THROW(parse_text(parse_algebra, "kind: monoid\nsize: 2\ntable:\n0 1\n"), ParseError);
  EXPECT_THROW(parse_text(parse_algebra, "kind: monoid\nsize: 1\ntable:\n0\n"), ParseError);
  EXPECT_THROW(parse_text(parse_algebra, "kind: monoid\nsize: 1\ntable:\n-1\nidentity: 0\n"), ParseError);
  EXPECT_THROW(parse_text(parse_algebra, "kind: monoid\nsize: 0\n"), ParseError);
  EXPECT_THROW(parse_text(parse_algebra, "kind: monoid\ntable:\n0\n"), ParseError);
  EXPECT_THROW(parse_text(parse_algebra, "colour: blue\n"), ParseError);
  try {
    parse_text(parse_algebra, "kind: monoid\nsize: 2\ntable:\n0 1\n1 x\nidentity: 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line_number, 5u);
  }
}

TEST(AlgebraFile, ParsesButFailsLaws) {
  const auto a = parse_text(parse_algebra, "kind: monoid\nsize: 2\ntable:\n0 1\n1 7\nidentity: 0\n");
  ASSERT_TRUE(validate_algebra(a));
  EXPECT_EQ(validate_algebra(a)->law, "closure");
}

TEST(EndoFile, ParseAndPrint) {
  EXPECT_EQ(parse_text(parse_endo, "endo: 0 2 4 0 2 4\n"), (std::vector<Element>{0, 2, 4, 0, 2, 4}));
  EXPECT_EQ(print_endo({0, 2, 1, 3}), "endo: 0 2 1 3\n");
  EXPECT_THROW(parse_text(parse_endo, "map: 0 1\n"), ParseError);
  EXPECT_THROW(parse_text(parse_endo, "endo: 0 1\nendo: 1 0\n"), ParseError);
  EXPECT_THROW(parse_text(parse_endo, ""), ParseError);
}

TEST(SpecFile, ParseAndPrint) {
  const auto s = parse_text(parse_spec, "cycle 2 x 3\ncycle 5 x 1\nray 4\nline 2\n");
  EXPECT_EQ(s.cycles.at(2), Count::of(3));
  EXPECT_EQ(s.cycles.at(5), Count::of(1));
  EXPECT_EQ(s.rays, Count::of(4));
  EXPECT_EQ(s.lines, Count::of(2));
  EXPECT_EQ(parse_text(parse_spec, print_spec(s)), s);

  const auto inf = parse_text(parse_spec, "ray inf\nline 2\ncycle 3 x 1\ncycle 3 x inf\n");
  EXPECT_TRUE(inf.rays.infinite);
  EXPECT_TRUE(inf.cycles.at(3).infinite);
  EXPECT_EQ(parse_text(parse_spec, "cycle 2 x 1\ncycle 2 x 2\nray 1").cycles.at(2), Count::of(3));
}

TEST(SpecFile, Errors) {
  EXPECT_THROW(parse_text(parse_spec, "cycle 2 1\n"), ParseError);
  EXPECT_THROW(parse_text(parse_spec, "cycle 0 x 1\n"), ParseError);
  EXPECT_THROW(parse_text(parse_spec, "ray many\n"), ParseError);
  EXPECT_THROW(parse_text(parse_spec, "tree 1\n"), ParseError);
  EXPECT_THROW(parse_text(parse_spec, "cycle 2 x 1\n").validate(), InvalidSpec);
}
