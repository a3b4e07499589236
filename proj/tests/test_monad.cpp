#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pmc/builtins.hpp"
#include "pmc/monad.hpp"

using namespace pmc;

namespace {

// Mon with its multiplication deliberately off by one on arities
class BrokenMon final : public PolynomialMonad {
 public:
  MonMonad good;
  std::string name() const override { return "mon-broken"; }
  std::vector<Color> colors(int cap) const override { return good.colors(cap); }
  bool isColor(const Color& c) const override { return good.isColor(c); }
  OpInfo info(const Op& b) const override { return good.info(b); }
  Op unit(const Color& c) const override { return good.unit(c); }
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override {
    SubstResult r = good.subst(b, inner);
    int arity = static_cast<int>(r.origin.size());
    if (arity >= 2) {  // corrupt composites of arity >= 2
      r.op = {"m" + std::to_string(arity + 1)};
      r.origin.push_back({0, 0});
    }
    return r;
  }
  std::vector<Op> enumerate(const std::optional<Color>& t, int a,
                            const EnumBounds& eb) const override {
    return good.enumerate(t, a, eb);
  }
};

}  // namespace

TEST_CASE("builtin Mon validates up to arity 4") {
  MonMonad mon;
  ValidationBound b;
  b.maxArity = 4;
  ValidationReport rep = validate_monad(mon, b);
  CHECK(rep.ok());
  CHECK(rep.unitChecks > 0);
  CHECK(rep.assocChecks > 0);
}

TEST_CASE("an injected multiplication fault is reported with a composite") {
  BrokenMon bad;
  ValidationReport rep = validate_monad(bad);
  CHECK_FALSE(rep.ok());
  CHECK(rep.failures.front().find("m") != std::string::npos);
}

TEST_CASE("builtin Id has one color and one unary operation") {
  IdMonad id;
  CHECK(id.colors().size() == 1);
  auto ops = id.enumerate(std::nullopt, 5, {});
  REQUIRE(ops.size() == 1);
  CHECK(id.info(ops[0]).arity() == 1);
  CHECK(validate_monad(id).ok());
}

TEST_CASE("free Mon algebra on two generators truncated at arity 2 has 7 elements") {
  MonMonad mon;
  FamilySet x;
  x.byColor["*"] = FinSet({"x", "y"});
  FamilySet t = free_apply(mon, x, 2);
  CHECK(t.at("*").size() == 7);  // 1 + 2 + 4
}

TEST_CASE("free algebra on the empty family has only units of nullary operations") {
  MonMonad mon;
  FamilySet x;
  x.byColor["*"] = FinSet(std::vector<std::string>{});
  FamilySet t = free_apply(mon, x, 3);
  CHECK(t.at("*").size() == 1);  // the empty word m0()
  CHECK(t.at("*").name(0) == "m0()");
}

TEST_CASE("free_apply is functorial on truncations") {
  MonMonad mon;
  FamilySet x;
  x.byColor["*"] = FinSet({"x", "y"});
  FamilySet small = free_apply(mon, x, 2);
  FamilySet big = free_apply(mon, x, 4);
  for (int i = 0; i < small.at("*").size(); ++i)
    CHECK(big.at("*").contains(small.at("*").name(i)));
}

TEST_CASE("unit laws hold exhaustively on builtins within bound") {
  // mu(b; eta...) = b and mu(eta; b) = b are asserted inside validate_monad;
  // run it over Gr(Mon) too
  GrMonMonad gr;
  ValidationBound b;
  b.maxArity = 3;
  CHECK(validate_monad(gr, b).ok());
}

TEST_CASE("morphism composition is associative on composable triples") {
  MonMonad mon;
  auto idMor = [&](const PolynomialMonad& m) {
    PolyMonadMorphism f;
    f.label = "id";
    f.dom = &m;
    f.cod = &m;
    f.colorMap = [](const Color& c) { return c; };
    f.opMap = [](const Op& b) { return b; };
    f.fiberMap = [&m](const Op& b) {
      std::vector<int> v(m.info(b).arity());
      for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
      return v;
    };
    return f;
  };
  PolyMonadMorphism f = idMor(mon), g = idMor(mon), h = idMor(mon);
  PolyMonadMorphism lhs = compose(compose(h, g), f);
  PolyMonadMorphism rhs = compose(h, compose(g, f));
  for (int k = 0; k <= 4; ++k) {
    Op b{"m" + std::to_string(k)};
    CHECK(lhs.opMap(b) == rhs.opMap(b));
    CHECK(lhs.fiberMap(b) == rhs.fiberMap(b));
  }
  CHECK(validate_morphism(f).ok());
}
