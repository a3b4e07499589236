// Derived monads: T+1, T_f/T_g/T_{f,g}, the Grothendieck construction Gr(T),
// the plus construction T+, and the left-module pair system.
#pragma once

#include <memory>

#include "pmc/builtins.hpp"
#include "pmc/monad.hpp"
#include "pmc/trees.hpp"

namespace pmc {

using MonadPtr = std::shared_ptr<const PolynomialMonad>;

// --- T+1 ----------------------------------------------------------------

// colors doubled with a fresh constant color (suffix ') per original color;
// operations of T on the first block, unit operations on the second
class WithConstantsMonad final : public PolynomialMonad {
 public:
  explicit WithConstantsMonad(MonadPtr base);
  std::string name() const override { return base_->name() + "+1"; }
  std::vector<Color> colors(int cap = -1) const override;
  bool finiteColors() const override { return base_->finiteColors(); }
  bool isColor(const Color& c) const override;
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;
  const PolynomialMonad& base() const { return *base_; }

 private:
  MonadPtr base_;
};

MonadPtr with_constants(MonadPtr t);

// --- T_f, T_g, T_{f,g} ----------------------------------------------------

enum class TfgVariant { Tf, Tg, Tfg };

// a polynomial monad on triples of collections whose algebras are
// (X, K, L, g, f) (variants drop g or f); colors x:i, k:i, l:i
class TfgMonad final : public PolynomialMonad {
 public:
  TfgMonad(MonadPtr base, TfgVariant v);
  std::string name() const override;
  std::vector<Color> colors(int cap = -1) const override;
  bool finiteColors() const override { return base_->finiteColors(); }
  bool isColor(const Color& c) const override;
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;
  const PolynomialMonad& base() const { return *base_; }
  TfgVariant variant() const { return variant_; }

 private:
  MonadPtr base_;
  TfgVariant variant_;
};

MonadPtr tfg_monad(MonadPtr t, TfgVariant v = TfgVariant::Tfg);
// the attached cartesian morphism to T (fold colors, strip tags)
PolyMonadMorphism tfg_projection(const TfgMonad& tfg);

// --- Grothendieck construction ----------------------------------------------

// The input of Gr(T): a morphism phi: T -> SOp(J) presented by its tree
// assignment. Pair operations (the boxed summand) carry a payload which for
// plain systems is just the base operation; module-style systems add leaf
// gradings.
class GrSystem {
 public:
  virtual ~GrSystem() = default;
  virtual std::string label() const = 0;
  virtual const PolynomialMonad& base() const = 0;
  virtual MonadPtr basePtr() const = 0;
  virtual std::vector<std::string> jcolors(int cap) const = 0;
  virtual bool finiteJ() const { return true; }
  virtual bool isJColor(const std::string& j) const = 0;

  struct PairData {
    Op base;
    std::vector<std::string> leafColors;  // J-colors, slot order
    std::string rootColor;
  };
  virtual PairData decode(const std::string& payload) const = 0;
  virtual std::string unitPair(const std::string& j) const = 0;
  // replace the underlying base op after a vertex-level substitution
  virtual std::string rebase(const std::string& payload, const Op& newBase) const = 0;

  struct GraftOut {
    std::string payload;
    // for each base slot of the result: (0, i) from host base, (1, j) from sub
    std::vector<std::pair<int, int>> baseOrigin;
  };
  virtual GraftOut graft(const std::string& host, int leafSlot,
                         const std::string& sub) const = 0;

  virtual std::vector<std::string> enumeratePairs(const std::optional<std::string>& targetJ,
                                                  int maxSlots,
                                                  const EnumBounds& eb) const = 0;
  // the honest polynomial-monad morphism into SOp(J); absent for graded systems
  virtual std::optional<PolyMonadMorphism> morphism() const { return std::nullopt; }
};

using GrSystemPtr = std::shared_ptr<const GrSystem>;

// the monad of pairs (O, A): colors I + J, operations c|b (circled summand)
// and b|payload (boxed summand)
class GrMonad final : public PolynomialMonad {
 public:
  explicit GrMonad(GrSystemPtr sys);
  std::string name() const override { return "gr(" + sys_->label() + ")"; }
  std::vector<Color> colors(int cap = -1) const override;
  bool finiteColors() const override;
  bool isColor(const Color& c) const override;
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;
  const GrSystem& system() const { return *sys_; }

  static Color algebraColor(const Color& i) { return "O:" + i; }
  static Color moduleColor(const Color& j) { return "A:" + j; }

 private:
  GrSystemPtr sys_;
};

std::shared_ptr<const GrMonad> gr_of(GrSystemPtr sys);

// canonical systems
GrSystemPtr gr_system_mon();                    // Mon -> SOp({*}): chains
GrSystemPtr gr_system_nop(std::vector<std::string> baseColors);  // NOp(I) -> SOp(I)
GrSystemPtr gr_system_sop(std::vector<std::string> baseColors);  // SOp(J) -> SOp(J)
GrSystemPtr gr_system_plus(MonadPtr base);      // T+ -> SOp(I_T)
// the O' encoding of left modules over NOp(I): leaf-graded pairs
GrSystemPtr module_system(std::vector<std::string> baseColors);

// --- plus construction --------------------------------------------------

// T+: colors are the operations of T, operations are B-decorated rooted
// trees, fibers are tree vertices
class PlusMonad final : public PolynomialMonad {
 public:
  explicit PlusMonad(MonadPtr base);
  std::string name() const override { return base_->name() + "+"; }
  std::vector<Color> colors(int cap = -1) const override;
  bool finiteColors() const override { return false; }
  bool isColor(const Color& c) const override;
  OpInfo info(const Op& b) const override;
  Op unit(const Color& c) const override;
  SubstResult subst(const Op& b, const std::vector<Op>& inner) const override;
  std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                            const EnumBounds& eb) const override;
  const PolynomialMonad& base() const { return *base_; }
  MonadPtr basePtr() const { return base_; }

  bool showColors() const;
  // the composite base operation a decorated tree evaluates to, together with
  // the bijection of its dangling leaves (preorder) onto the target's fiber
  std::pair<Op, std::vector<int>> fold(const TNode& t) const;

 private:
  MonadPtr base_;
};

std::shared_ptr<const PlusMonad> plus_construction(MonadPtr t);

}  // namespace pmc
