// Builtin polynomial monads: Id, Mon, NOp(I), SOp(J), Gr(Mon).
// Gr(NOp(I)) and friends are produced by the Grothendieck construction in
// constructions.hpp from the canonical morphisms defined there.
#pragma once

#include <memory>
#include <set>

#include "pmc/monad.hpp"
#include "pmc/trees.hpp"

namespace pmc {

// the identity monad: one color, one (unary) operation
class IdMonad final : public PolynomialMonad {
 public:
  std::string name() const override { return "id"; }
  std::vector<Color> colors(int cap = -1) const override { return {"*"}; }
  bool isColor(const Color& c) const override { return c == "*"; }
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;
};

// the monad for monoids: operations m0, m1, m2, ... one per arity
class MonMonad final : public PolynomialMonad {
 public:
  std::string name() const override { return "mon"; }
  std::vector<Color> colors(int cap = -1) const override { return {"*"}; }
  bool isColor(const Color& c) const override { return c == "*"; }
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;
};

// bouquet encoding shared by the operad-shaped monads: "(i1,...,ik;i)"
std::string bouquet_enc(const std::vector<std::string>& inputs, const std::string& out);
std::pair<std::vector<std::string>, std::string> bouquet_parse(const std::string& s);

// the monad for I-colored non-symmetric operads: colors are planar bouquets,
// operations are planar trees with I-colored edges, slots are tree vertices
class NOpMonad final : public PolynomialMonad {
 public:
  explicit NOpMonad(std::vector<std::string> baseColors);
  std::string name() const override;
  std::vector<Color> colors(int cap = -1) const override;
  bool finiteColors() const override { return false; }
  bool isColor(const Color& c) const override;
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;

  bool showColors() const { return base_.size() > 1; }
  const std::vector<std::string>& baseColors() const { return base_; }

 private:
  std::vector<std::string> base_;
};

// the monad for J-colored symmetric operads: operations are planar trees with
// numbered leaves; the symmetric structure lives in the numbering
class SOpMonad final : public PolynomialMonad {
 public:
  explicit SOpMonad(std::vector<std::string> baseColors);
  std::string name() const override;
  std::vector<Color> colors(int cap = -1) const override;
  bool finiteColors() const override { return false; }
  bool isColor(const Color& c) const override;
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;

  bool showColors() const { return base_.size() > 1; }
  const std::vector<std::string>& baseColors() const { return base_; }

 private:
  std::vector<std::string> base_;
};

// Gr(Mon), hand-coded on linear graphs: colors {r, m}; circled graphs "c<k>"
// target r, boxed graphs "b<k>" (k circles then the box) target m
class GrMonMonad final : public PolynomialMonad {
 public:
  std::string name() const override { return "gr_mon"; }
  std::vector<Color> colors(int cap = -1) const override { return {"r", "m"}; }
  bool isColor(const Color& c) const override { return c == "r" || c == "m"; }
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;
};

// planar-tree enumeration used by the tree monads: all trees with the given
// boundary and at most maxVerts vertices (arity caps from eb)
std::vector<TNode> enumerate_trees(const std::vector<std::string>& baseColors,
                                   const std::optional<std::pair<std::vector<std::string>,
                                                                 std::string>>& boundary,
                                   int maxVerts, const EnumBounds& eb);

}  // namespace pmc
