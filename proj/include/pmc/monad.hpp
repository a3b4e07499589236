// Polynomial monads over finite (or lazily enumerable) color sets: the
// quadruple I <- E -> B -> I with unit and multiplication, operations carried
// by canonical term encodings and lazily enumerable by (target color, arity).
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pmc/fin.hpp"

namespace pmc {

using Color = std::string;

struct Op {
  std::string enc;
  bool operator==(const Op& o) const { return enc == o.enc; }
  bool operator<(const Op& o) const { return enc_less(enc, o.enc); }
};

struct OpInfo {
  Color target;
  std::vector<Color> sources;  // ordered fiber p^-1(b)
  int arity() const { return static_cast<int>(sources.size()); }
};

// composite together with the bijection of the combined fiber onto its fiber:
// origin[i] = (outer slot, slot within the operation substituted there)
struct SubstResult {
  Op op;
  std::vector<std::pair<int, int>> origin;
};

// extra structural bounds for enumeration of tree-shaped operation families
struct EnumBounds {
  int maxVertexArity = -1;  // < 0: unbounded
  int maxOpSize = -1;       // vertices of a tree operation; < 0: unbounded
};

class PolynomialMonad {
 public:
  virtual ~PolynomialMonad() = default;
  virtual std::string name() const = 0;

  // finite color list, or the first `cap` members of a lazily infinite family
  virtual std::vector<Color> colors(int cap = -1) const = 0;
  virtual bool finiteColors() const { return true; }
  virtual bool isColor(const Color& c) const = 0;

  virtual OpInfo info(const Op& b) const = 0;  // throws on malformed encodings
  virtual Op unit(const Color& c) const = 0;
  virtual SubstResult subst(const Op& b, const std::vector<Op>& inner) const = 0;

  // complete duplicate-free list of operations with the given target (all
  // targets when unset) and arity <= maxArity, in canonical-encoding order
  virtual std::vector<Op> enumerate(const std::optional<Color>& target, int maxArity,
                                    const EnumBounds& eb = {}) const = 0;

  bool isUnit(const Op& b) const { return unit(info(b).target).enc == b.enc; }
};

// --- law checking -----------------------------------------------------------

struct ValidationBound {
  int maxArity = 3;        // arity of outer and inner operations
  int colorCap = 8;        // colors sampled from lazily infinite families
  int maxVertexArity = 3;  // structural caps for tree families
  int maxOpSize = 3;
  long long maxComposites = 20000;  // cap on associativity instances
};

struct ValidationReport {
  long long unitChecks = 0;
  long long assocChecks = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

// checks unit laws and associativity on all composites within the bound;
// reports every counterexample with the offending composite
ValidationReport validate_monad(const PolynomialMonad& m, const ValidationBound& b = {});

// --- free algebras ----------------------------------------------------------

struct FamilySet {
  std::map<Color, FinSet> byColor;
  const FinSet& at(const Color& c) const {
    static const FinSet empty;
    auto it = byColor.find(c);
    return it == byColor.end() ? empty : it->second;
  }
};

// truncated T(X): formal pairs "op(x1,...,xk)" with arity(op) <= bound
FamilySet free_apply(const PolynomialMonad& m, const FamilySet& x, int bound,
                     const EnumBounds& eb = {});

// --- finite algebras --------------------------------------------------------

class Algebra {
 public:
  virtual ~Algebra() = default;
  virtual const PolynomialMonad& monad() const = 0;
  virtual const FinSet& at(const Color& c) const = 0;
  virtual int eval(const Op& b, const std::vector<int>& args) const = 0;
};

// checks eval respects unit and multiplication up to the bound
ValidationReport check_algebra(const Algebra& a, const ValidationBound& b = {});

// --- morphisms of polynomial monads -----------------------------------------

struct PolyMonadMorphism {
  std::string label;
  const PolynomialMonad* dom = nullptr;
  const PolynomialMonad* cod = nullptr;
  std::function<Color(const Color&)> colorMap;
  std::function<Op(const Op&)> opMap;
  // slot i of b corresponds to slot fiberMap(b)[i] of opMap(b)
  std::function<std::vector<int>(const Op&)> fiberMap;
};

// composition (g after f); fiber maps compose accordingly
PolyMonadMorphism compose(const PolyMonadMorphism& g, const PolyMonadMorphism& f);

// checks target/source-color preservation and commutation with unit and
// multiplication on bounded composites (the four-square check, slot-wise)
ValidationReport validate_morphism(const PolyMonadMorphism& f, const ValidationBound& b = {});

// all slot assignments (c_e) with t(c_e) = s(e), drawn from `pool`
std::vector<std::vector<Op>> slot_assignments(const PolynomialMonad& m, const OpInfo& info,
                                              const std::map<Color, std::vector<Op>>& pool);

}  // namespace pmc
