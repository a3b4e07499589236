#include "pmc/monad.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pmc {

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << "unit checks: " << unitChecks << ", associativity checks: " << assocChecks
     << ", counterexamples: " << failures.size();
  for (size_t i = 0; i < failures.size() && i < 5; ++i) os << "\n  " << failures[i];
  return os.str();
}

std::vector<std::vector<Op>> slot_assignments(const PolynomialMonad& m, const OpInfo& info,
                                              const std::map<Color, std::vector<Op>>& pool) {
  std::vector<std::vector<Op>> out{{}};
  for (auto& src : info.sources) {
    auto it = pool.find(src);
    if (it == pool.end() || it->second.empty()) return {};
    std::vector<std::vector<Op>> next;
    for (auto& partial : out)
      for (auto& c : it->second) {
        auto v = partial;
        v.push_back(c);
        next.push_back(std::move(v));
      }
    out = std::move(next);
    if (out.size() > 200000) throw std::runtime_error("slot_assignments: blowup");
  }
  return out;
}

namespace {

std::map<Color, std::vector<Op>> opPool(const PolynomialMonad& m, const ValidationBound& b) {
  std::map<Color, std::vector<Op>> pool;
  EnumBounds eb{b.maxVertexArity, b.maxOpSize};
  std::vector<Color> cols = m.colors(m.finiteColors() ? -1 : b.colorCap);
  for (auto& c : cols) pool[c] = m.enumerate(c, b.maxArity, eb);
  return pool;
}

}  // namespace

ValidationReport validate_monad(const PolynomialMonad& m, const ValidationBound& b) {
  ValidationReport rep;
  auto pool = opPool(m, b);

  // unit operations must be unary with matching source
  for (auto& [c, ops] : pool) {
    Op u = m.unit(c);
    OpInfo ui = m.info(u);
    if (ui.target != c || ui.arity() != 1 || ui.sources[0] != c)
      rep.failures.push_back("unit at color " + c + " is not a unary self-colored operation");
  }

  // unit laws
  for (auto& [c, ops] : pool) {
    for (auto& op : ops) {
      OpInfo oi = m.info(op);
      // right unit: mu(b; eta,...,eta) = b with identity fiber bijection
      std::vector<Op> units;
      for (auto& s : oi.sources) units.push_back(m.unit(s));
      SubstResult r = m.subst(op, units);
      ++rep.unitChecks;
      if (!(r.op == op))
        rep.failures.push_back("right unit law fails at " + op.enc + " -> " + r.op.enc);
      else
        for (int i = 0; i < oi.arity(); ++i)
          if (r.origin[i] != std::make_pair(i, 0))
            rep.failures.push_back("right unit law scrambles fiber of " + op.enc);
      // left unit: mu(eta; b) = b
      SubstResult l = m.subst(m.unit(oi.target), {op});
      ++rep.unitChecks;
      if (!(l.op == op))
        rep.failures.push_back("left unit law fails at " + op.enc + " -> " + l.op.enc);
      if (rep.failures.size() > 20) return rep;
    }
  }

  // associativity: mu(mu(b;c);d) = mu(b;(mu(c_e;d_e)))
  long long budget = b.maxComposites;
  for (auto& [c, ops] : pool) {
    for (auto& op : ops) {
      OpInfo oi = m.info(op);
      if (oi.arity() > 3) continue;
      auto assigns = slot_assignments(m, oi, pool);
      for (auto& cs : assigns) {
        SubstResult mid = m.subst(op, cs);
        OpInfo mi = m.info(mid.op);
        if (mi.arity() > 4) continue;
        // single nested layer: substitute units everywhere except one slot
        for (int k = 0; k < mi.arity(); ++k) {
          auto [outerSlot, innerSlot] = mid.origin[k];
          auto dsIt = pool.find(mi.sources[k]);
          if (dsIt == pool.end()) continue;
          for (auto& d : dsIt->second) {
            if (--budget < 0) return rep;
            std::vector<Op> ds;
            for (int j = 0; j < mi.arity(); ++j)
              ds.push_back(j == k ? d : m.unit(mi.sources[j]));
            SubstResult lhs = m.subst(mid.op, ds);

            // right side: replace cs[outerSlot] by its composite with d at innerSlot
            OpInfo ci = m.info(cs[outerSlot]);
            std::vector<Op> innerDs;
            for (int j = 0; j < ci.arity(); ++j)
              innerDs.push_back(j == innerSlot ? d : m.unit(ci.sources[j]));
            SubstResult newInner = m.subst(cs[outerSlot], innerDs);
            std::vector<Op> cs2 = cs;
            cs2[outerSlot] = newInner.op;
            SubstResult rhs = m.subst(op, cs2);

            ++rep.assocChecks;
            if (!(lhs.op == rhs.op)) {
              rep.failures.push_back("associativity fails at mu(" + op.enc + "; ...) with " +
                                     d.enc + ": " + lhs.op.enc + " vs " + rhs.op.enc);
              if (rep.failures.size() > 20) return rep;
            }
          }
        }
      }
    }
  }
  return rep;
}

FamilySet free_apply(const PolynomialMonad& m, const FamilySet& x, int bound,
                     const EnumBounds& eb) {
  FamilySet out;
  std::vector<Color> cols = m.colors(m.finiteColors() ? -1 : 16);
  for (auto& c : cols) {
    std::vector<std::string> elems;
    for (auto& op : m.enumerate(c, bound, eb)) {
      OpInfo oi = m.info(op);
      // tuples of x-elements matching slot colors
      std::vector<std::vector<int>> tuples{{}};
      bool dead = false;
      for (auto& s : oi.sources) {
        const FinSet& xs = x.at(s);
        if (xs.size() == 0) {
          dead = true;
          break;
        }
        std::vector<std::vector<int>> next;
        for (auto& t : tuples)
          for (int i = 0; i < xs.size(); ++i) {
            auto v = t;
            v.push_back(i);
            next.push_back(std::move(v));
          }
        tuples = std::move(next);
      }
      if (dead && oi.arity() > 0) continue;
      for (auto& t : tuples) {
        std::vector<std::string> names;
        for (int j = 0; j < oi.arity(); ++j) names.push_back(x.at(oi.sources[j]).name(t[j]));
        elems.push_back(op.enc + tuple_enc(names));
      }
    }
    std::sort(elems.begin(), elems.end(), enc_less);
    out.byColor[c] = FinSet(elems);
  }
  return out;
}

ValidationReport check_algebra(const Algebra& a, const ValidationBound& b) {
  ValidationReport rep;
  const PolynomialMonad& m = a.monad();
  auto pool = opPool(m, b);

  auto tuplesFor = [&](const OpInfo& oi) {
    std::vector<std::vector<int>> tuples{{}};
    for (auto& s : oi.sources) {
      const FinSet& xs = a.at(s);
      std::vector<std::vector<int>> next;
      for (auto& t : tuples)
        for (int i = 0; i < xs.size(); ++i) {
          auto v = t;
          v.push_back(i);
          next.push_back(std::move(v));
        }
      tuples = std::move(next);
    }
    return tuples;
  };

  // unit acts as identity
  for (auto& [c, ops] : pool) {
    Op u = m.unit(c);
    for (int i = 0; i < a.at(c).size(); ++i) {
      ++rep.unitChecks;
      if (a.eval(u, {i}) != i)
        rep.failures.push_back("unit eval is not the identity at color " + c);
    }
  }

  // eval of a composite equals nested eval
  long long budget = b.maxComposites;
  for (auto& [c, ops] : pool) {
    for (auto& op : ops) {
      OpInfo oi = m.info(op);
      if (oi.arity() > 3) continue;
      auto assigns = slot_assignments(m, oi, pool);
      for (auto& cs : assigns) {
        SubstResult r = m.subst(op, cs);
        OpInfo ri = m.info(r.op);
        if (ri.arity() > 4) continue;
        for (auto& t : tuplesFor(ri)) {
          if (--budget < 0) return rep;
          int direct = a.eval(r.op, t);
          // nested: evaluate each inner op on its share of the tuple
          std::vector<int> mids(oi.arity());
          for (int e = 0; e < oi.arity(); ++e) {
            std::vector<int> share;
            for (int k = 0; k < ri.arity(); ++k)
              if (r.origin[k].first == e) share.push_back(t[k]);
            mids[e] = a.eval(cs[e], share);
          }
          int nested = a.eval(op, mids);
          ++rep.assocChecks;
          if (direct != nested) {
            rep.failures.push_back("algebra law fails: eval(" + r.op.enc + ") != nested at " +
                                   op.enc);
            if (rep.failures.size() > 20) return rep;
          }
        }
      }
    }
  }
  return rep;
}

PolyMonadMorphism compose(const PolyMonadMorphism& g, const PolyMonadMorphism& f) {
  PolyMonadMorphism h;
  h.label = g.label + "." + f.label;
  h.dom = f.dom;
  h.cod = g.cod;
  auto gc = g.colorMap, fc = f.colorMap;
  auto go = g.opMap, fo = f.opMap;
  auto gf = g.fiberMap, ff = f.fiberMap;
  h.colorMap = [gc, fc](const Color& c) { return gc(fc(c)); };
  h.opMap = [go, fo](const Op& b) { return go(fo(b)); };
  h.fiberMap = [gf, ff, fo](const Op& b) {
    std::vector<int> first = ff(b);
    std::vector<int> second = gf(fo(b));
    std::vector<int> out(first.size());
    for (size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
    return out;
  };
  return h;
}

ValidationReport validate_morphism(const PolyMonadMorphism& f, const ValidationBound& b) {
  ValidationReport rep;
  const PolynomialMonad& dom = *f.dom;
  const PolynomialMonad& cod = *f.cod;
  auto pool = opPool(dom, b);

  for (auto& [c, ops] : pool) {
    // units map to units
    Op u = dom.unit(c);
    ++rep.unitChecks;
    if (!(f.opMap(u) == cod.unit(f.colorMap(c))))
      rep.failures.push_back("morphism does not preserve the unit at color " + c);
    for (auto& op : ops) {
      OpInfo oi = dom.info(op);
      Op img = f.opMap(op);
      OpInfo ii = cod.info(img);
      if (ii.target != f.colorMap(oi.target))
        rep.failures.push_back("target color not preserved at " + op.enc);
      std::vector<int> fib = f.fiberMap(op);
      if (static_cast<int>(fib.size()) != oi.arity() || ii.arity() != oi.arity()) {
        rep.failures.push_back("fiber of " + op.enc + " is not mapped bijectively");
        continue;
      }
      std::vector<bool> hit(ii.arity(), false);
      for (int i = 0; i < oi.arity(); ++i) {
        if (fib[i] < 0 || fib[i] >= ii.arity() || hit[fib[i]]) {
          rep.failures.push_back("fiber map of " + op.enc + " is not a bijection");
          break;
        }
        hit[fib[i]] = true;
        if (ii.sources[fib[i]] != f.colorMap(oi.sources[i]))
          rep.failures.push_back("slot color not preserved at " + op.enc + " slot " +
                                 std::to_string(i));
      }
      if (rep.failures.size() > 20) return rep;
    }
  }

  // commutes with multiplication on bounded composites (slot-wise)
  long long budget = b.maxComposites;
  for (auto& [c, ops] : pool) {
    for (auto& op : ops) {
      OpInfo oi = dom.info(op);
      if (oi.arity() > 3) continue;
      auto assigns = slot_assignments(dom, oi, pool);
      for (auto& cs : assigns) {
        if (--budget < 0) return rep;
        SubstResult r = dom.subst(op, cs);
        std::vector<int> fibOuter = f.fiberMap(op);
        std::vector<Op> imgs;
        std::vector<std::vector<int>> fibInner;
        for (auto& ci : cs) {
          imgs.push_back(f.opMap(ci));
          fibInner.push_back(f.fiberMap(ci));
        }
        // reorder images along the outer fiber map
        std::vector<Op> imgsInOrder(imgs.size());
        for (size_t i = 0; i < imgs.size(); ++i) imgsInOrder[fibOuter[i]] = imgs[i];
        SubstResult ri = cod.subst(f.opMap(op), imgsInOrder);
        ++rep.assocChecks;
        if (!(f.opMap(r.op) == ri.op)) {
          rep.failures.push_back("morphism does not commute with multiplication at " + op.enc +
                                 ": " + f.opMap(r.op).enc + " vs " + ri.op.enc);
          if (rep.failures.size() > 20) return rep;
          continue;
        }
        // slot-wise: the fiber bijections commute with the origin bookkeeping
        std::vector<int> fibComposite = f.fiberMap(r.op);
        for (int k = 0; k < static_cast<int>(r.origin.size()); ++k) {
          auto [e, j] = r.origin[k];
          // slot k of the domain composite sits inside cs[e] at j; its image
          // should be the slot of the codomain composite originating from
          // (fibOuter[e], fibInner[e][j])
          int want = -1;
          for (int kk = 0; kk < static_cast<int>(ri.origin.size()); ++kk)
            if (ri.origin[kk] == std::make_pair(fibOuter[e], fibInner[e][j])) want = kk;
          if (fibComposite[k] != want) {
            rep.failures.push_back("fiber bijections do not commute slot-wise at " + op.enc);
            break;
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace pmc
