#include "pmc/builtins.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace pmc {

// --- Id -----------------------------------------------------------------

OpInfo IdMonad::info(const Op& b) const {
  if (b.enc != "e") throw std::runtime_error("id: unknown operation '" + b.enc + "'");
  return {"*", {"*"}};
}

Op IdMonad::unit(const Color& c) const {
  if (c != "*") throw std::runtime_error("id: unknown color " + c);
  return {"e"};
}

SubstResult IdMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  info(b);
  if (inner.size() != 1 || inner[0].enc != "e")
    throw std::runtime_error("id: bad substitution");
  return {{"e"}, {{0, 0}}};
}

std::vector<Op> IdMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                   const EnumBounds&) const {
  if (target && *target != "*") return {};
  if (maxArity < 1) return {};
  return {{"e"}};
}

// --- Mon ----------------------------------------------------------------

namespace {
int monArity(const std::string& enc) {
  if (enc.size() < 2 || enc[0] != 'm') throw std::runtime_error("mon: bad op '" + enc + "'");
  return std::stoi(enc.substr(1));
}
}  // namespace

OpInfo MonMonad::info(const Op& b) const {
  int k = monArity(b.enc);
  return {"*", std::vector<Color>(k, "*")};
}

Op MonMonad::unit(const Color& c) const {
  if (c != "*") throw std::runtime_error("mon: unknown color " + c);
  return {"m1"};
}

SubstResult MonMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  int k = monArity(b.enc);
  if (static_cast<int>(inner.size()) != k) throw std::runtime_error("mon: wrong inner count");
  SubstResult r;
  int total = 0;
  for (int i = 0; i < k; ++i) {
    int j = monArity(inner[i].enc);
    for (int t = 0; t < j; ++t) r.origin.push_back({i, t});
    total += j;
  }
  r.op = {"m" + std::to_string(total)};
  return r;
}

std::vector<Op> MonMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                    const EnumBounds&) const {
  if (target && *target != "*") return {};
  std::vector<Op> out;
  for (int k = 0; k <= maxArity; ++k) out.push_back({"m" + std::to_string(k)});
  return out;
}

// --- bouquets -------------------------------------------------------------

std::string bouquet_enc(const std::vector<std::string>& inputs, const std::string& out) {
  std::string s = "(";
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (i) s += ",";
    s += inputs[i];
  }
  s += ";";
  s += out;
  s += ")";
  return s;
}

std::pair<std::vector<std::string>, std::string> bouquet_parse(const std::string& s) {
  if (s.size() < 3 || s.front() != '(' || s.back() != ')')
    throw std::runtime_error("bad bouquet '" + s + "'");
  std::string body = s.substr(1, s.size() - 2);
  // split at the top-level ';'
  int depth = 0;
  size_t semi = std::string::npos;
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '(') ++depth;
    if (body[i] == ')') --depth;
    if (body[i] == ';' && depth == 0) semi = i;
  }
  if (semi == std::string::npos) throw std::runtime_error("bad bouquet '" + s + "'");
  std::string ins = body.substr(0, semi);
  std::string out = body.substr(semi + 1);
  std::vector<std::string> inputs;
  if (!ins.empty()) {
    depth = 0;
    size_t start = 0;
    for (size_t i = 0; i <= ins.size(); ++i) {
      if (i == ins.size() || (ins[i] == ',' && depth == 0)) {
        inputs.push_back(ins.substr(start, i - start));
        start = i + 1;
      } else if (ins[i] == '(')
        ++depth;
      else if (ins[i] == ')')
        --depth;
    }
  }
  return {inputs, out};
}

// --- tree enumeration -------------------------------------------------------

namespace {

// all splits of `leaves` into `parts` consecutive blocks
void splits(const std::vector<std::string>& leaves, int parts,
            std::vector<std::vector<std::vector<std::string>>>& out) {
  std::vector<std::vector<std::string>> cur;
  std::function<void(size_t, int)> go = [&](size_t at, int remaining) {
    if (remaining == 0) {
      if (at == leaves.size()) out.push_back(cur);
      return;
    }
    for (size_t end = at; end <= leaves.size(); ++end) {
      cur.push_back(std::vector<std::string>(leaves.begin() + at, leaves.begin() + end));
      go(end, remaining - 1);
      cur.pop_back();
    }
  };
  go(0, parts);
}

}  // namespace

std::vector<TNode> enumerate_trees(
    const std::vector<std::string>& baseColors,
    const std::optional<std::pair<std::vector<std::string>, std::string>>& boundary,
    int maxVerts, const EnumBounds& eb) {
  if (maxVerts < 0) return {};
  if (!boundary) {
    // no boundary: needs an arity cap to stay finite
    if (eb.maxVertexArity < 0)
      throw std::runtime_error("tree enumeration without boundary needs a vertex arity cap");
    std::vector<TNode> all;
    std::set<std::string> seen;
    bool sc = baseColors.size() > 1;
    int maxLeaves = maxVerts * std::max(eb.maxVertexArity - 1, 0) + 1;
    std::vector<std::vector<std::string>> leafTuples{{}};
    for (int len = 0; len <= maxLeaves; ++len) {
      if (len > 0) {
        std::vector<std::vector<std::string>> next;
        for (auto& t : leafTuples)
          if (static_cast<int>(t.size()) == len - 1)
            for (auto& c : baseColors) {
              auto v = t;
              v.push_back(c);
              next.push_back(std::move(v));
            }
        leafTuples.insert(leafTuples.end(), next.begin(), next.end());
      }
    }
    for (auto& leaves : leafTuples)
      for (auto& root : baseColors) {
        auto trees = enumerate_trees(baseColors, std::make_pair(leaves, root), maxVerts, eb);
        for (auto& t : trees) {
          std::string e = tree_enc(t, sc);
          if (seen.insert(e).second) all.push_back(t);
        }
      }
    std::sort(all.begin(), all.end(), [&](const TNode& a, const TNode& b) {
      return enc_less(tree_enc(a, sc), tree_enc(b, sc));
    });
    return all;
  }

  const auto& [leaves, root] = *boundary;
  std::vector<TNode> out;
  // bare edge
  if (leaves.size() == 1 && leaves[0] == root) {
    TNode l;
    l.leaf = true;
    l.color = root;
    out.push_back(l);
  }
  if (maxVerts == 0) return out;
  // root vertex of arity a
  int aCap = static_cast<int>(leaves.size()) + maxVerts - 1;
  if (eb.maxVertexArity >= 0) aCap = std::min(aCap, eb.maxVertexArity);
  for (int a = 0; a <= aCap; ++a) {
    if (a == 0) {
      if (leaves.empty()) {
        TNode stump;
        stump.leaf = false;
        stump.color = root;
        out.push_back(stump);
      }
      continue;
    }
    std::vector<std::vector<std::vector<std::string>>> blockSets;
    splits(leaves, a, blockSets);
    for (auto& blocks : blockSets) {
      // choose edge colors and subtrees per block
      std::vector<std::vector<TNode>> choices(a);
      bool dead = false;
      for (int i = 0; i < a && !dead; ++i) {
        std::vector<TNode> opts;
        for (auto& c : baseColors) {
          auto subs =
              enumerate_trees(baseColors, std::make_pair(blocks[i], c), maxVerts - 1, eb);
          opts.insert(opts.end(), subs.begin(), subs.end());
        }
        if (opts.empty()) dead = true;
        choices[i] = std::move(opts);
      }
      if (dead) continue;
      // cartesian product with a global vertex budget
      std::vector<int> idx(a, 0);
      while (true) {
        int verts = 1;
        for (int i = 0; i < a; ++i) verts += tree_vertex_count(choices[i][idx[i]]);
        if (verts <= maxVerts) {
          TNode v;
          v.leaf = false;
          v.color = root;
          for (int i = 0; i < a; ++i) v.kids.push_back(choices[i][idx[i]]);
          out.push_back(std::move(v));
        }
        int at = a - 1;
        while (at >= 0 && ++idx[at] == static_cast<int>(choices[at].size())) {
          idx[at] = 0;
          --at;
        }
        if (at < 0) break;
      }
    }
  }
  // dedup (different block splits can coincide only if trees differ; keep safe)
  bool sc = baseColors.size() > 1;
  std::set<std::string> seen;
  std::vector<TNode> uniq;
  for (auto& t : out) {
    if (seen.insert(tree_enc(t, sc)).second) uniq.push_back(t);
  }
  std::sort(uniq.begin(), uniq.end(), [&](const TNode& a, const TNode& b) {
    return enc_less(tree_enc(a, sc), tree_enc(b, sc));
  });
  return uniq;
}

// --- NOp --------------------------------------------------------------------

NOpMonad::NOpMonad(std::vector<std::string> baseColors) : base_(std::move(baseColors)) {
  if (base_.empty()) throw std::runtime_error("nop: the color set must be non-empty");
}

std::string NOpMonad::name() const {
  return base_.size() == 1 && base_[0] == "*" ? "nop" : "nop(" + std::to_string(base_.size()) + ")";
}

std::vector<Color> NOpMonad::colors(int cap) const {
  // planar bouquets ordered by input count
  std::vector<Color> out;
  if (cap < 0) cap = 16;
  std::vector<std::vector<std::string>> tuples{{}};
  while (static_cast<int>(out.size()) < cap) {
    std::vector<std::vector<std::string>> next;
    for (auto& t : tuples)
      for (auto& o : base_) {
        out.push_back(bouquet_enc(t, o));
        if (static_cast<int>(out.size()) >= cap) return out;
      }
    for (auto& t : tuples)
      for (auto& c : base_) {
        auto v = t;
        v.push_back(c);
        next.push_back(std::move(v));
      }
    tuples = std::move(next);
  }
  return out;
}

bool NOpMonad::isColor(const Color& c) const {
  try {
    auto [ins, out] = bouquet_parse(c);
    for (auto& i : ins)
      if (std::find(base_.begin(), base_.end(), i) == base_.end()) return false;
    return std::find(base_.begin(), base_.end(), out) != base_.end();
  } catch (...) {
    return false;
  }
}

OpInfo NOpMonad::info(const Op& b) const {
  TNode t = tree_parse(b.enc, showColors());
  auto [leaves, root] = tree_boundary(t);
  OpInfo oi;
  oi.target = bouquet_enc(leaves, root);
  for (auto* v : tree_vertices(t)) {
    auto [in, out] = tree_vertex_bouquet(*v);
    oi.sources.push_back(bouquet_enc(in, out));
  }
  return oi;
}

Op NOpMonad::unit(const Color& c) const {
  auto [ins, out] = bouquet_parse(c);
  TNode v;
  v.leaf = false;
  v.color = out;
  for (auto& i : ins) {
    TNode l;
    l.leaf = true;
    l.color = i;
    v.kids.push_back(l);
  }
  return {tree_enc(v, showColors())};
}

SubstResult NOpMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  TNode t = tree_parse(b.enc, showColors());
  std::vector<TNode> repl;
  for (auto& i : inner) repl.push_back(tree_parse(i.enc, showColors()));
  SubstResult r;
  TNode composite = tree_subst_all(t, repl, &r.origin);
  r.op = {tree_enc(composite, showColors())};
  return r;
}

std::vector<Op> NOpMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                    const EnumBounds& eb) const {
  int maxV = maxArity;
  if (eb.maxOpSize >= 0) maxV = std::min(maxV, eb.maxOpSize);
  std::optional<std::pair<std::vector<std::string>, std::string>> boundary;
  if (target) boundary = bouquet_parse(*target);
  std::vector<Op> out;
  for (auto& t : enumerate_trees(base_, boundary, maxV, eb))
    out.push_back({tree_enc(t, showColors())});
  return out;
}

// --- SOp --------------------------------------------------------------------

SOpMonad::SOpMonad(std::vector<std::string> baseColors) : base_(std::move(baseColors)) {
  if (base_.empty()) throw std::runtime_error("sop: the color set must be non-empty");
}

std::string SOpMonad::name() const {
  return base_.size() == 1 && base_[0] == "*" ? "sop" : "sop(" + std::to_string(base_.size()) + ")";
}

std::vector<Color> SOpMonad::colors(int cap) const {
  NOpMonad helper(base_);
  return helper.colors(cap);
}

bool SOpMonad::isColor(const Color& c) const {
  NOpMonad helper(base_);
  return helper.isColor(c);
}

OpInfo SOpMonad::info(const Op& b) const {
  TNode t = tree_parse(b.enc, showColors());
  auto [leaves, root] = tree_boundary(t);  // label order
  OpInfo oi;
  oi.target = bouquet_enc(leaves, root);
  for (auto* v : tree_vertices(t)) {
    auto [in, out] = tree_vertex_bouquet(*v);
    oi.sources.push_back(bouquet_enc(in, out));
  }
  return oi;
}

Op SOpMonad::unit(const Color& c) const {
  NOpMonad helper(base_);
  TNode v = tree_parse(helper.unit(c).enc, showColors());
  return {tree_enc(tree_label_planar(v), showColors())};
}

SubstResult SOpMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  TNode t = tree_parse(b.enc, showColors());
  std::vector<TNode> repl;
  for (auto& i : inner) repl.push_back(tree_parse(i.enc, showColors()));
  SubstResult r;
  TNode composite = tree_subst_all(t, repl, &r.origin);
  r.op = {tree_enc(composite, showColors())};
  return r;
}

std::vector<Op> SOpMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                    const EnumBounds& eb) const {
  int maxV = maxArity;
  if (eb.maxOpSize >= 0) maxV = std::min(maxV, eb.maxOpSize);
  std::vector<Op> out;
  std::set<std::string> seen;
  auto addLabelings = [&](const TNode& shape, const std::vector<std::string>& wantLeafColors) {
    // all numberings sending label i to a leaf of color wantLeafColors[i-1]
    auto leavesPre = tree_leaves(shape);  // unlabeled: preorder
    int k = static_cast<int>(leavesPre.size());
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end());
    do {
      // leaf at planar position p gets label perm[p]+1
      bool ok = true;
      for (int p = 0; p < k && ok; ++p)
        if (leavesPre[p]->color != wantLeafColors[perm[p]]) ok = false;
      if (!ok) continue;
      TNode labeled = shape;
      int pos = 0;
      std::function<void(TNode&)> lab = [&](TNode& n) {
        if (n.leaf) {
          n.label = perm[pos++] + 1;
          return;
        }
        for (auto& kd : n.kids) lab(kd);
      };
      lab(labeled);
      std::string e = tree_enc(labeled, showColors());
      if (seen.insert(e).second) out.push_back({e});
    } while (std::next_permutation(perm.begin(), perm.end()));
  };

  if (target) {
    auto [ins, root] = bouquet_parse(*target);
    // enumerate shapes for every planar arrangement of the input colors
    std::vector<std::string> sortedIns = ins;
    std::sort(sortedIns.begin(), sortedIns.end());
    std::set<std::vector<std::string>> arrangements;
    do {
      arrangements.insert(sortedIns);
    } while (std::next_permutation(sortedIns.begin(), sortedIns.end()));
    for (auto& arr : arrangements)
      for (auto& shape : enumerate_trees(base_, std::make_pair(arr, root), maxV, eb))
        addLabelings(shape, ins);
  } else {
    if (eb.maxVertexArity < 0)
      throw std::runtime_error("sop enumeration without target needs a vertex arity cap");
    for (auto& shape : enumerate_trees(base_, std::nullopt, maxV, eb)) {
      auto [leaves, root] = tree_boundary(shape);
      std::vector<std::string> sorted = leaves;
      std::sort(sorted.begin(), sorted.end());
      std::set<std::vector<std::string>> wants;
      do {
        wants.insert(sorted);
      } while (std::next_permutation(sorted.begin(), sorted.end()));
      for (auto& w : wants) addLabelings(shape, w);
    }
  }
  std::vector<Op> sortedOut = out;
  std::sort(sortedOut.begin(), sortedOut.end());
  return sortedOut;
}

// --- Gr(Mon) ------------------------------------------------------------

namespace {
std::pair<char, int> grMonParse(const std::string& enc) {
  if (enc.size() < 2 || (enc[0] != 'c' && enc[0] != 'b'))
    throw std::runtime_error("gr_mon: bad op '" + enc + "'");
  return {enc[0], std::stoi(enc.substr(1))};
}
}  // namespace

OpInfo GrMonMonad::info(const Op& b) const {
  auto [kind, k] = grMonParse(b.enc);
  OpInfo oi;
  if (kind == 'c') {
    oi.target = "r";
    oi.sources.assign(k, "r");
  } else {
    oi.target = "m";
    oi.sources.assign(k, "r");
    oi.sources.push_back("m");
  }
  return oi;
}

Op GrMonMonad::unit(const Color& c) const {
  if (c == "r") return {"c1"};
  if (c == "m") return {"b0"};
  throw std::runtime_error("gr_mon: unknown color " + c);
}

SubstResult GrMonMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  auto [kind, k] = grMonParse(b.enc);
  OpInfo oi = info(b);
  if (inner.size() != oi.sources.size()) throw std::runtime_error("gr_mon: wrong inner count");
  SubstResult r;
  int circles = 0;
  for (int i = 0; i < k; ++i) {
    auto [ik, ij] = grMonParse(inner[i].enc);
    if (ik != 'c') throw std::runtime_error("gr_mon: circle slot needs a circled graph");
    for (int t = 0; t < ij; ++t) r.origin.push_back({i, t});
    circles += ij;
  }
  if (kind == 'c') {
    r.op = {"c" + std::to_string(circles)};
  } else {
    auto [ik, ij] = grMonParse(inner[k].enc);
    if (ik != 'b') throw std::runtime_error("gr_mon: box slot needs a boxed graph");
    for (int t = 0; t < ij; ++t) r.origin.push_back({k, t});
    r.origin.push_back({k, ij});
    r.op = {"b" + std::to_string(circles + ij)};
  }
  return r;
}

std::vector<Op> GrMonMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                      const EnumBounds&) const {
  std::vector<Op> out;
  if (!target || *target == "r")
    for (int k = 0; k <= maxArity; ++k) out.push_back({"c" + std::to_string(k)});
  if (!target || *target == "m")
    for (int k = 0; k + 1 <= maxArity; ++k) out.push_back({"b" + std::to_string(k)});
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pmc
