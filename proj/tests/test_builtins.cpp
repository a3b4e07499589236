#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pmc/builtins.hpp"
#include "pmc/trees.hpp"

using namespace pmc;

TEST_CASE("tree encoding round-trips") {
  for (std::string enc : {"(.,.)", "((.,.),.)", "()", ".", "((),(.))"}) {
    TNode t = tree_parse(enc, false);
    CHECK(tree_enc(t, false) == enc);
  }
  // labeled and colored
  TNode t = tree_parse("(.2'a',.1'b')'c'", true);
  CHECK(tree_enc(t, true) == "(.2'a',.1'b')'c'");
  auto [ins, out] = tree_boundary(t);
  CHECK(ins == std::vector<std::string>{"b", "a"});  // label order
  CHECK(out == "c");
}

TEST_CASE("tree substitution composes planar trees left to right") {
  // substitute a 2-corolla into the first vertex of a 2-corolla-with-child
  TNode outer = tree_parse("(.,.)", false);
  TNode inner = tree_parse("(.,.)", false);
  TNode unitV = tree_parse("(.,.)", false);
  std::vector<std::pair<int, int>> origin;
  TNode comp = tree_subst_all(outer, {inner}, &origin);
  CHECK(tree_enc(comp, false) == "(.,.)");
  REQUIRE(origin.size() == 1);
  CHECK(origin[0] == std::make_pair(0, 0));
  (void)unitV;
}

TEST_CASE("enumerate_ops for Mon yields one operation per arity") {
  MonMonad mon;
  auto ops = mon.enumerate("*", 3, {});
  REQUIRE(ops.size() == 4);
  CHECK(ops[0].enc == "m0");
  CHECK(ops[3].enc == "m3");
}

TEST_CASE("enumerate_ops for Gr(Mon) counts boxed and circled linear graphs") {
  GrMonMonad gr;
  CHECK(gr.colors().size() == 2);
  auto r = gr.enumerate("r", 3, {});
  CHECK(r.size() == 4);  // c0..c3
  auto m = gr.enumerate("m", 3, {});
  CHECK(m.size() == 3);  // b0..b2 (arity k+1 <= 3)
}

TEST_CASE("NOp(1) tree enumeration matches the brute-force counter") {
  NOpMonad nop({"*"});
  // vertex arities <= 2, <= 2 vertices -> 13 planar trees
  EnumBounds eb;
  eb.maxVertexArity = 2;
  auto ops = nop.enumerate(std::nullopt, 2, eb);
  CHECK(ops.size() == 13);
  CHECK(oracles::count_planar_trees(2, 2) == 13);
  // all bounds <= 3
  for (int v = 0; v <= 3; ++v)
    for (int a = 0; a <= 3; ++a) {
      EnumBounds e2;
      e2.maxVertexArity = a;
      auto got = nop.enumerate(std::nullopt, v, e2);
      CHECK(static_cast<long long>(got.size()) == oracles::count_planar_trees(v, a));
    }
}

TEST_CASE("NOp(1) validates as a monad") {
  NOpMonad nop({"*"});
  ValidationBound b;
  b.maxArity = 2;
  b.colorCap = 4;
  b.maxVertexArity = 2;
  b.maxOpSize = 2;
  ValidationReport rep = validate_monad(nop, b);
  CHECK(rep.ok());
}

TEST_CASE("NOp respects boundaries under substitution") {
  NOpMonad nop({"*"});
  // substitute the 2-leaf corolla into the single vertex of the 2-leaf corolla
  Op corolla{"(.,.)"};
  OpInfo oi = nop.info(corolla);
  REQUIRE(oi.arity() == 1);
  CHECK(oi.target == "(*,*;*)");
  SubstResult r = nop.subst(corolla, {corolla});
  CHECK(r.op.enc == "(.,.)");
  // substituting a two-vertex tree with matching boundary grows the tree
  Op tall{"((.),.)"};
  SubstResult r2 = nop.subst(corolla, {tall});
  CHECK(r2.op.enc == "((.),.)");
  CHECK(r2.origin.size() == 2);
  // boundary mismatch is rejected
  CHECK_THROWS(nop.subst(corolla, {Op{"((.,.),.)"}}));
}

TEST_CASE("SOp twist squares to the identity corolla") {
  SOpMonad sop({"*"});
  Op e2{"(.1,.2)"};
  Op tw{"(.2,.1)"};
  CHECK(sop.unit("(*,*;*)") == e2);
  SubstResult r = sop.subst(e2, {tw});
  CHECK(r.op == tw);
  SubstResult r2 = sop.subst(tw, {tw});
  CHECK(r2.op == e2);
}

TEST_CASE("SOp validates as a monad on small bounds") {
  SOpMonad sop({"*"});
  ValidationBound b;
  b.maxArity = 1;
  b.colorCap = 3;
  b.maxVertexArity = 2;
  b.maxOpSize = 2;
  CHECK(validate_monad(sop, b).ok());
}

TEST_CASE("SOp enumerate includes all labelings") {
  SOpMonad sop({"*"});
  auto ops = sop.enumerate(std::string("(*,*;*)"), 1, {});
  // one shape (the 2-corolla) with 2 labelings
  CHECK(ops.size() == 2);
}

TEST_CASE("Gr(Mon) substitution splices graphs at the marked vertex") {
  GrMonMonad gr;
  // insert c2 into the middle circle of b2: b2 has slots r,r,m
  SubstResult r = gr.subst({"b2"}, {{"c1"}, {"c2"}, {"b0"}});
  CHECK(r.op.enc == "b3");
  // slot order: circles then box
  REQUIRE(r.origin.size() == 4);
  CHECK(r.origin[0] == std::make_pair(0, 0));
  CHECK(r.origin[1] == std::make_pair(1, 0));
  CHECK(r.origin[2] == std::make_pair(1, 1));
  CHECK(r.origin[3] == std::make_pair(2, 0));
}

TEST_CASE("bouquet encoding round-trips") {
  auto [ins, out] = bouquet_parse("(a,b;c)");
  CHECK(ins == std::vector<std::string>{"a", "b"});
  CHECK(out == "c");
  CHECK(bouquet_enc(ins, out) == "(a,b;c)");
  auto [i2, o2] = bouquet_parse("(;x)");
  CHECK(i2.empty());
  CHECK(o2 == "x");
  // nested bouquets (module gradings)
  auto [i3, o3] = bouquet_parse("((;*),(*;*);*)");
  REQUIRE(i3.size() == 2);
  CHECK(i3[0] == "(;*)");
  CHECK(i3[1] == "(*;*)");
}
