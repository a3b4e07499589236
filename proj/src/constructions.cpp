#include "pmc/constructions.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace pmc {

// --- T+1 ----------------------------------------------------------------

namespace {
const std::string kConstUnitPrefix = "u(";

bool isConstColor(const std::string& c) { return !c.empty() && c.back() == '\''; }
}  // namespace

WithConstantsMonad::WithConstantsMonad(MonadPtr base) : base_(std::move(base)) {}

std::vector<Color> WithConstantsMonad::colors(int cap) const {
  std::vector<Color> out;
  for (auto& c : base_->colors(cap)) {
    out.push_back(c);
    out.push_back(c + "'");
  }
  if (cap >= 0 && static_cast<int>(out.size()) > cap) out.resize(cap);
  return out;
}

bool WithConstantsMonad::isColor(const Color& c) const {
  if (isConstColor(c)) return base_->isColor(c.substr(0, c.size() - 1));
  return base_->isColor(c);
}

OpInfo WithConstantsMonad::info(const Op& b) const {
  if (b.enc.rfind(kConstUnitPrefix, 0) == 0 && b.enc.back() == ')') {
    std::string c = b.enc.substr(2, b.enc.size() - 3);
    if (!isConstColor(c) || !isColor(c))
      throw std::runtime_error(name() + ": bad constant unit " + b.enc);
    return {c, {c}};
  }
  return base_->info(b);
}

Op WithConstantsMonad::unit(const Color& c) const {
  if (isConstColor(c)) return {kConstUnitPrefix + c + ")"};
  return base_->unit(c);
}

SubstResult WithConstantsMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  if (b.enc.rfind(kConstUnitPrefix, 0) == 0) {
    if (inner.size() != 1 || !(inner[0] == b))
      throw std::runtime_error(name() + ": constant colors only compose with themselves");
    return {b, {{0, 0}}};
  }
  return base_->subst(b, inner);
}

std::vector<Op> WithConstantsMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                              const EnumBounds& eb) const {
  std::vector<Op> out;
  if (!target || !isConstColor(*target)) {
    std::optional<Color> t = target;
    for (auto& op : base_->enumerate(t, maxArity, eb)) out.push_back(op);
  }
  if (maxArity >= 1) {
    if (target && isConstColor(*target)) {
      out.push_back(unit(*target));
    } else if (!target) {
      for (auto& c : base_->colors(base_->finiteColors() ? -1 : 8))
        out.push_back(unit(c + "'"));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

MonadPtr with_constants(MonadPtr t) { return std::make_shared<WithConstantsMonad>(std::move(t)); }

// --- T_{f,g} ------------------------------------------------------------

namespace {
std::pair<char, std::string> tfgColorParse(const std::string& c) {
  if (c.size() > 2 && c[1] == ':' && (c[0] == 'x' || c[0] == 'k' || c[0] == 'l'))
    return {c[0], c.substr(2)};
  throw std::runtime_error("tfg: bad color '" + c + "'");
}
}  // namespace

TfgMonad::TfgMonad(MonadPtr base, TfgVariant v) : base_(std::move(base)), variant_(v) {}

std::string TfgMonad::name() const {
  switch (variant_) {
    case TfgVariant::Tf: return base_->name() + "_f";
    case TfgVariant::Tg: return base_->name() + "_g";
    default: return base_->name() + "_fg";
  }
}

std::vector<Color> TfgMonad::colors(int cap) const {
  std::vector<Color> out;
  for (auto& c : base_->colors(cap)) {
    out.push_back("x:" + c);
    out.push_back("k:" + c);
    out.push_back("l:" + c);
  }
  if (cap >= 0 && static_cast<int>(out.size()) > cap) out.resize(cap);
  return out;
}

bool TfgMonad::isColor(const Color& c) const {
  try {
    auto [blk, i] = tfgColorParse(c);
    return base_->isColor(i);
  } catch (...) {
    return false;
  }
}

OpInfo TfgMonad::info(const Op& b) const {
  if (b.enc.rfind("u(", 0) == 0 && b.enc.back() == ')') {
    std::string c = b.enc.substr(2, b.enc.size() - 3);
    auto [blk, i] = tfgColorParse(c);
    if (blk == 'x') throw std::runtime_error(name() + ": x-block units carry tags");
    return {c, {c}};
  }
  if (b.enc.rfind("f(", 0) == 0 && b.enc.back() == ')') {
    if (variant_ == TfgVariant::Tg) throw std::runtime_error(name() + " has no f-operations");
    std::string i = b.enc.substr(2, b.enc.size() - 3);
    return {"l:" + i, {"k:" + i}};
  }
  size_t bang = b.enc.rfind('!');
  if (bang == std::string::npos) throw std::runtime_error(name() + ": bad op '" + b.enc + "'");
  Op core{b.enc.substr(0, bang)};
  std::string tags = b.enc.substr(bang + 1);
  OpInfo ci = base_->info(core);
  if (static_cast<int>(tags.size()) != ci.arity())
    throw std::runtime_error(name() + ": tag string length mismatch in '" + b.enc + "'");
  OpInfo oi;
  oi.target = "x:" + ci.target;
  for (int i = 0; i < ci.arity(); ++i) {
    if (tags[i] == 'x')
      oi.sources.push_back("x:" + ci.sources[i]);
    else if (tags[i] == 'k' && variant_ != TfgVariant::Tf)
      oi.sources.push_back("k:" + ci.sources[i]);
    else
      throw std::runtime_error(name() + ": bad tag in '" + b.enc + "'");
  }
  return oi;
}

Op TfgMonad::unit(const Color& c) const {
  auto [blk, i] = tfgColorParse(c);
  if (blk == 'x') return {base_->unit(i).enc + "!x"};
  return {"u(" + c + ")"};
}

SubstResult TfgMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  OpInfo oi = info(b);
  if (inner.size() != oi.sources.size()) throw std::runtime_error(name() + ": wrong inner count");
  // unary wrappers on k/l blocks
  if (b.enc.rfind("u(", 0) == 0) return {inner[0], {{0, 0}}};
  if (b.enc.rfind("f(", 0) == 0) {
    if (!(inner[0] == unit(oi.sources[0])))
      throw std::runtime_error(name() + ": k-slots accept only units");
    return {b, {{0, 0}}};
  }
  size_t bang = b.enc.rfind('!');
  Op core{b.enc.substr(0, bang)};
  std::string tags = b.enc.substr(bang + 1);
  // assemble base-level inners
  std::vector<Op> baseInner;
  std::vector<std::string> innerTags;
  OpInfo ci = base_->info(core);
  for (int e = 0; e < ci.arity(); ++e) {
    if (tags[e] == 'k') {
      if (!(inner[e] == unit("k:" + ci.sources[e])))
        throw std::runtime_error(name() + ": k-slots accept only units");
      baseInner.push_back(base_->unit(ci.sources[e]));
      innerTags.push_back("k");
    } else {
      size_t ib = inner[e].enc.rfind('!');
      if (ib == std::string::npos)
        throw std::runtime_error(name() + ": x-slot needs an x-block operation");
      baseInner.push_back({inner[e].enc.substr(0, ib)});
      innerTags.push_back(inner[e].enc.substr(ib + 1));
    }
  }
  SubstResult br = base_->subst(core, baseInner);
  std::string newTags;
  for (auto& [e, j] : br.origin) newTags += tags[e] == 'k' ? 'k' : innerTags[e][j];
  return {{br.op.enc + "!" + newTags}, br.origin};
}

std::vector<Op> TfgMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                    const EnumBounds& eb) const {
  std::vector<Op> out;
  auto addXOps = [&](const std::optional<Color>& baseTarget) {
    for (auto& core : base_->enumerate(baseTarget, maxArity, eb)) {
      int k = base_->info(core).arity();
      if (variant_ == TfgVariant::Tf) {
        out.push_back({core.enc + "!" + std::string(k, 'x')});
      } else {
        // all tag strings over {x,k}
        for (int mask = 0; mask < (1 << k); ++mask) {
          std::string tags;
          for (int i = 0; i < k; ++i) tags += (mask >> i & 1) ? 'k' : 'x';
          out.push_back({core.enc + "!" + tags});
        }
      }
    }
  };
  if (target) {
    auto [blk, i] = tfgColorParse(*target);
    if (blk == 'x') addXOps(i);
    if (blk == 'k' && maxArity >= 1) out.push_back(unit(*target));
    if (blk == 'l' && maxArity >= 1) {
      out.push_back(unit(*target));
      if (variant_ != TfgVariant::Tg) out.push_back({"f(" + i + ")"});
    }
  } else {
    addXOps(std::nullopt);
    for (auto& c : base_->colors(base_->finiteColors() ? -1 : 8)) {
      if (maxArity >= 1) {
        out.push_back(unit("k:" + c));
        out.push_back(unit("l:" + c));
        if (variant_ != TfgVariant::Tg) out.push_back({"f(" + c + ")"});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](const Op& a, const Op& b) { return a == b; }),
            out.end());
  return out;
}

MonadPtr tfg_monad(MonadPtr t, TfgVariant v) { return std::make_shared<TfgMonad>(std::move(t), v); }

PolyMonadMorphism tfg_projection(const TfgMonad& tfg) {
  PolyMonadMorphism m;
  m.label = "proj(" + tfg.name() + ")";
  m.dom = &tfg;
  m.cod = &tfg.base();
  const PolynomialMonad* base = &tfg.base();
  m.colorMap = [](const Color& c) { return tfgColorParse(c).second; };
  m.opMap = [base](const Op& b) -> Op {
    if (b.enc.rfind("u(", 0) == 0) {
      auto [blk, i] = tfgColorParse(b.enc.substr(2, b.enc.size() - 3));
      return base->unit(i);
    }
    if (b.enc.rfind("f(", 0) == 0) return base->unit(b.enc.substr(2, b.enc.size() - 3));
    size_t bang = b.enc.rfind('!');
    return {b.enc.substr(0, bang)};
  };
  const TfgMonad* dom = &tfg;
  m.fiberMap = [dom](const Op& b) {
    std::vector<int> v(dom->info(b).arity());
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
  };
  return m;
}

// --- Gr(T) ----------------------------------------------------------------

namespace {
constexpr const char* kCircled = "c|";
constexpr const char* kBoxed = "b|";
}  // namespace

GrMonad::GrMonad(GrSystemPtr sys) : sys_(std::move(sys)) {}

std::vector<Color> GrMonad::colors(int cap) const {
  std::vector<Color> out;
  int half = cap < 0 ? -1 : cap / 2 + 1;
  for (auto& i : sys_->base().colors(sys_->base().finiteColors() ? -1 : half))
    out.push_back(algebraColor(i));
  for (auto& j : sys_->jcolors(sys_->finiteJ() ? -1 : (half < 0 ? 16 : half)))
    out.push_back(moduleColor(j));
  if (cap >= 0 && static_cast<int>(out.size()) > cap) out.resize(cap);
  return out;
}

bool GrMonad::finiteColors() const { return sys_->base().finiteColors() && sys_->finiteJ(); }

bool GrMonad::isColor(const Color& c) const {
  if (c.rfind("O:", 0) == 0) return sys_->base().isColor(c.substr(2));
  if (c.rfind("A:", 0) == 0) return sys_->isJColor(c.substr(2));
  return false;
}

OpInfo GrMonad::info(const Op& b) const {
  if (b.enc.rfind(kCircled, 0) == 0) {
    OpInfo bi = sys_->base().info({b.enc.substr(2)});
    OpInfo oi;
    oi.target = algebraColor(bi.target);
    for (auto& s : bi.sources) oi.sources.push_back(algebraColor(s));
    return oi;
  }
  if (b.enc.rfind(kBoxed, 0) == 0) {
    GrSystem::PairData pd = sys_->decode(b.enc.substr(2));
    OpInfo bi = sys_->base().info(pd.base);
    OpInfo oi;
    oi.target = moduleColor(pd.rootColor);
    for (auto& s : bi.sources) oi.sources.push_back(algebraColor(s));
    for (auto& j : pd.leafColors) oi.sources.push_back(moduleColor(j));
    return oi;
  }
  throw std::runtime_error(name() + ": bad op '" + b.enc + "'");
}

Op GrMonad::unit(const Color& c) const {
  if (c.rfind("O:", 0) == 0) return {kCircled + sys_->base().unit(c.substr(2)).enc};
  if (c.rfind("A:", 0) == 0) return {kBoxed + sys_->unitPair(c.substr(2))};
  throw std::runtime_error(name() + ": unknown color " + c);
}

SubstResult GrMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  OpInfo oi = info(b);
  if (inner.size() != oi.sources.size()) throw std::runtime_error(name() + ": wrong inner count");
  if (b.enc.rfind(kCircled, 0) == 0) {
    std::vector<Op> baseInner;
    for (auto& i : inner) {
      if (i.enc.rfind(kCircled, 0) != 0)
        throw std::runtime_error(name() + ": algebra slots need circled operations");
      baseInner.push_back({i.enc.substr(2)});
    }
    SubstResult br = sys_->base().subst({b.enc.substr(2)}, baseInner);
    return {{kCircled + br.op.enc}, br.origin};
  }

  std::string payload = b.enc.substr(2);
  GrSystem::PairData pd = sys_->decode(payload);
  int baseArity = sys_->base().info(pd.base).arity();
  int leafCount = static_cast<int>(pd.leafColors.size());

  // vertex-level substitution with the circled inners
  std::vector<Op> baseInner;
  for (int e = 0; e < baseArity; ++e) {
    if (inner[e].enc.rfind(kCircled, 0) != 0)
      throw std::runtime_error(name() + ": algebra slots need circled operations");
    baseInner.push_back({inner[e].enc.substr(2)});
  }
  SubstResult br = sys_->base().subst(pd.base, baseInner);
  std::string cur = sys_->rebase(payload, br.op);
  // trace base slots back to (outer slot, inner slot)
  std::vector<std::pair<int, int>> baseSlotOrigin = br.origin;
  // leaf origins: spliced in while grafting right to left
  std::vector<std::pair<int, int>> leafSlotOrigin(leafCount, {-1, -1});

  for (int l = leafCount - 1; l >= 0; --l) {
    const Op& sub = inner[baseArity + l];
    if (sub.enc.rfind(kBoxed, 0) != 0)
      throw std::runtime_error(name() + ": module slots need boxed operations");
    std::string subPayload = sub.enc.substr(2);
    GrSystem::PairData sd = sys_->decode(subPayload);
    int subBaseArity = sys_->base().info(sd.base).arity();
    int subLeaves = static_cast<int>(sd.leafColors.size());
    if (sd.rootColor != pd.leafColors[l])
      throw std::runtime_error(name() + ": graft color mismatch at leaf " + std::to_string(l));

    GrSystem::GraftOut g = sys_->graft(cur, l, subPayload);
    cur = g.payload;
    std::vector<std::pair<int, int>> newBaseOrigin;
    for (auto& [side, idx] : g.baseOrigin) {
      if (side == 0)
        newBaseOrigin.push_back(baseSlotOrigin[idx]);
      else
        newBaseOrigin.push_back({baseArity + l, idx});
    }
    baseSlotOrigin = std::move(newBaseOrigin);
    std::vector<std::pair<int, int>> newLeafOrigin;
    for (int i = 0; i < l; ++i) newLeafOrigin.push_back(leafSlotOrigin[i]);
    for (int j = 0; j < subLeaves; ++j)
      newLeafOrigin.push_back({baseArity + l, subBaseArity + j});
    for (int i = l + 1; i < static_cast<int>(leafSlotOrigin.size()); ++i)
      newLeafOrigin.push_back(leafSlotOrigin[i]);
    leafSlotOrigin = std::move(newLeafOrigin);
  }

  SubstResult r;
  r.op = {kBoxed + cur};
  r.origin = baseSlotOrigin;
  r.origin.insert(r.origin.end(), leafSlotOrigin.begin(), leafSlotOrigin.end());
  return r;
}

std::vector<Op> GrMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                   const EnumBounds& eb) const {
  std::vector<Op> out;
  if (!target || target->rfind("O:", 0) == 0) {
    std::optional<Color> bt;
    if (target) bt = target->substr(2);
    for (auto& op : sys_->base().enumerate(bt, maxArity, eb))
      out.push_back({kCircled + op.enc});
  }
  if (!target || target->rfind("A:", 0) == 0) {
    std::optional<std::string> jt;
    if (target) jt = target->substr(2);
    for (auto& payload : sys_->enumeratePairs(jt, maxArity, eb))
      out.push_back({kBoxed + payload});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::shared_ptr<const GrMonad> gr_of(GrSystemPtr sys) {
  return std::make_shared<GrMonad>(std::move(sys));
}

// --- canonical systems ------------------------------------------------------

namespace {

// Mon -> SOp({*}): psi(m_k) = the chain of k unary vertices
class MonGrSystem final : public GrSystem {
 public:
  MonGrSystem() : base_(std::make_shared<MonMonad>()), sop_(std::make_shared<SOpMonad>(
                                                           std::vector<std::string>{"*"})) {}
  std::string label() const override { return "mon"; }
  const PolynomialMonad& base() const override { return *base_; }
  MonadPtr basePtr() const override { return base_; }
  std::vector<std::string> jcolors(int) const override { return {"*"}; }
  bool isJColor(const std::string& j) const override { return j == "*"; }

  PairData decode(const std::string& payload) const override {
    OpInfo oi = base_->info({payload});
    return {{payload}, {"*"}, "*"};
  }
  std::string unitPair(const std::string& j) const override {
    if (j != "*") throw std::runtime_error("mon system: bad module color " + j);
    return "m0";
  }
  std::string rebase(const std::string&, const Op& newBase) const override {
    return newBase.enc;
  }
  GraftOut graft(const std::string& host, int leafSlot, const std::string& sub) const override {
    if (leafSlot != 0) throw std::runtime_error("mon system: chains have one leaf");
    int a = std::stoi(host.substr(1));
    int b = std::stoi(sub.substr(1));
    GraftOut g;
    g.payload = "m" + std::to_string(a + b);
    for (int i = 0; i < a; ++i) g.baseOrigin.push_back({0, i});
    for (int j = 0; j < b; ++j) g.baseOrigin.push_back({1, j});
    return g;
  }
  std::vector<std::string> enumeratePairs(const std::optional<std::string>& targetJ,
                                          int maxSlots, const EnumBounds&) const override {
    if (targetJ && *targetJ != "*") return {};
    std::vector<std::string> out;
    for (int k = 0; k + 1 <= maxSlots; ++k) out.push_back("m" + std::to_string(k));
    return out;
  }
  std::optional<PolyMonadMorphism> morphism() const override;

 private:
  std::shared_ptr<MonMonad> base_;
  std::shared_ptr<SOpMonad> sop_;
  friend TNode monChain(int k);
};

TNode monChain(int k) {
  TNode leaf;
  leaf.leaf = true;
  leaf.color = "*";
  leaf.label = 1;
  TNode cur = leaf;
  for (int i = 0; i < k; ++i) {
    TNode v;
    v.leaf = false;
    v.color = "*";
    v.kids.push_back(cur);
    cur = v;
  }
  return cur;
}

std::optional<PolyMonadMorphism> MonGrSystem::morphism() const {
  PolyMonadMorphism m;
  m.label = "mon->sop";
  m.dom = base_.get();
  m.cod = sop_.get();
  m.colorMap = [](const Color&) { return std::string("(*;*)"); };
  m.opMap = [](const Op& b) -> Op {
    int k = std::stoi(b.enc.substr(1));
    return {tree_enc(monChain(k), false)};
  };
  const PolynomialMonad* base = base_.get();
  m.fiberMap = [base](const Op& b) {
    std::vector<int> v(base->info(b).arity());
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
  };
  return m;
}

// shared implementation for systems whose base operations are trees whose
// vertices are the slots in preorder (NOp, SOp, plus construction)
class TreeGrSystem : public GrSystem {
 public:
  TreeGrSystem(std::string label, MonadPtr base, std::vector<std::string> jcolors,
               bool baseShowColors)
      : label_(std::move(label)),
        base_(std::move(base)),
        j_(std::move(jcolors)),
        showColors_(baseShowColors) {}

  std::string label() const override { return label_; }
  const PolynomialMonad& base() const override { return *base_; }
  MonadPtr basePtr() const override { return base_; }
  std::vector<std::string> jcolors(int) const override { return j_; }
  bool isJColor(const std::string& j) const override {
    return std::find(j_.begin(), j_.end(), j) != j_.end();
  }

  // how a base op becomes the J-colored tree; default: it already is one
  virtual TNode toTree(const Op& b) const { return tree_parse(b.enc, showColors_); }
  virtual Op fromTree(const TNode& t) const { return {tree_enc(t, showColors_)}; }

  PairData decode(const std::string& payload) const override {
    TNode t = toTree({payload});
    auto [leaves, root] = tree_boundary(t);
    return {{payload}, leaves, root};
  }
  std::string unitPair(const std::string& j) const override {
    TNode leaf;
    leaf.leaf = true;
    leaf.color = j;
    return fromTree(leaf).enc;
  }
  std::string rebase(const std::string&, const Op& newBase) const override {
    return newBase.enc;
  }
  GraftOut graft(const std::string& host, int leafSlot, const std::string& sub) const override {
    TNode h = toTree({host});
    TNode s = toTree({sub});
    GraftOut g;
    TNode grafted = tree_graft_leaf(h, leafSlot, s, &g.baseOrigin);
    g.payload = fromTree(grafted).enc;
    return g;
  }
  std::vector<std::string> enumeratePairs(const std::optional<std::string>& targetJ,
                                          int maxSlots, const EnumBounds& eb) const override {
    // pair slots = vertices + leaves
    std::vector<std::string> out;
    for (auto& op : base_->enumerate(std::nullopt, maxSlots, eb)) {
      TNode t = toTree(op);
      if (tree_vertex_count(t) + tree_leaf_count(t) > maxSlots) continue;
      auto [leaves, root] = tree_boundary(t);
      if (targetJ && root != *targetJ) continue;
      out.push_back(op.enc);
    }
    std::sort(out.begin(), out.end(), enc_less);
    return out;
  }

 protected:
  std::string label_;
  MonadPtr base_;
  std::vector<std::string> j_;
  bool showColors_;
};

class NOpGrSystem final : public TreeGrSystem {
 public:
  explicit NOpGrSystem(std::vector<std::string> cols)
      : TreeGrSystem("nop", std::make_shared<NOpMonad>(cols), cols, cols.size() > 1),
        sop_(std::make_shared<SOpMonad>(cols)) {}
  std::optional<PolyMonadMorphism> morphism() const override {
    PolyMonadMorphism m;
    m.label = "nop->sop";
    m.dom = base_.get();
    m.cod = sop_.get();
    bool sc = showColors_;
    m.colorMap = [](const Color& c) { return c; };
    m.opMap = [sc](const Op& b) -> Op {
      TNode t = tree_label_planar(tree_parse(b.enc, sc));
      return {tree_enc(t, sc)};
    };
    const PolynomialMonad* base = base_.get();
    m.fiberMap = [base](const Op& b) {
      std::vector<int> v(base->info(b).arity());
      for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
      return v;
    };
    return m;
  }

 private:
  std::shared_ptr<SOpMonad> sop_;
};

class SOpGrSystem final : public TreeGrSystem {
 public:
  explicit SOpGrSystem(std::vector<std::string> cols)
      : TreeGrSystem("sop", std::make_shared<SOpMonad>(cols), cols, cols.size() > 1) {}
};

class PlusGrSystem final : public TreeGrSystem {
 public:
  explicit PlusGrSystem(MonadPtr innerBase)
      : TreeGrSystem("plus(" + innerBase->name() + ")",
                     std::make_shared<PlusMonad>(innerBase),
                     innerBase->colors(innerBase->finiteColors() ? -1 : 16),
                     true),
        finiteJ_(innerBase->finiteColors()) {}
  bool finiteJ() const override { return finiteJ_; }
  bool isJColor(const std::string& j) const override {
    return static_cast<const PlusMonad&>(*base_).base().isColor(j);
  }
  TNode toTree(const Op& b) const override {
    const auto& plus = static_cast<const PlusMonad&>(*base_);
    TNode t = tree_parse(b.enc, plus.showColors());
    // strip decorations, keep edge colors, label planar
    std::function<void(TNode&)> strip = [&](TNode& n) {
      n.dec.clear();
      for (auto& k : n.kids) strip(k);
    };
    strip(t);
    return tree_label_planar(t);
  }
  Op fromTree(const TNode&) const override {
    throw std::runtime_error("plus system: pair payloads are rebuilt by graft");
  }
  // grafting decorated trees directly keeps the decorations
  GraftOut graft(const std::string& host, int leafSlot, const std::string& sub) const override {
    const auto& plus = static_cast<const PlusMonad&>(*base_);
    TNode h = tree_parse(host, plus.showColors());
    TNode s = tree_parse(sub, plus.showColors());
    GraftOut g;
    TNode grafted = tree_graft_leaf(h, leafSlot, s, &g.baseOrigin);
    g.payload = tree_enc(grafted, plus.showColors());
    return g;
  }

 private:
  bool finiteJ_;
};

// leaf-graded pairs over NOp(I): payload = tree!"(g1,...,gk)"
class ModuleGrSystem final : public GrSystem {
 public:
  explicit ModuleGrSystem(std::vector<std::string> cols)
      : base_(std::make_shared<NOpMonad>(cols)), cols_(cols) {}
  std::string label() const override { return "module(nop)"; }
  const PolynomialMonad& base() const override { return *base_; }
  MonadPtr basePtr() const override { return base_; }
  bool finiteJ() const override { return false; }
  std::vector<std::string> jcolors(int cap) const override { return base_->colors(cap); }
  bool isJColor(const std::string& j) const override { return base_->isColor(j); }

  static std::pair<std::string, std::vector<std::string>> split(const std::string& payload) {
    size_t bang = payload.rfind('!');
    if (bang == std::string::npos)
      throw std::runtime_error("module system: payload without grading '" + payload + "'");
    auto [gradings, out] = bouquet_parse(payload.substr(bang + 1) + ";_");
    return {payload.substr(0, bang), gradings};
  }
  static std::string join(const std::string& treeEnc, const std::vector<std::string>& gradings) {
    std::string g = bouquet_enc(gradings, "_");
    return treeEnc + "!" + g.substr(0, g.size() - 3) + ")";
  }

  PairData decode(const std::string& payload) const override {
    auto [treeEnc, gradings] = split(payload);
    TNode t = tree_parse(treeEnc, cols_.size() > 1);
    auto [leaves, root] = tree_boundary(t);
    if (leaves.size() != gradings.size())
      throw std::runtime_error("module system: grading arity mismatch in '" + payload + "'");
    std::vector<std::string> concat;
    for (size_t l = 0; l < leaves.size(); ++l) {
      auto [ins, out] = bouquet_parse(gradings[l]);
      if (out != leaves[l])
        throw std::runtime_error("module system: grading color mismatch in '" + payload + "'");
      concat.insert(concat.end(), ins.begin(), ins.end());
    }
    return {{treeEnc}, gradings, bouquet_enc(concat, root)};
  }
  std::string unitPair(const std::string& j) const override {
    auto [ins, out] = bouquet_parse(j);
    TNode leaf;
    leaf.leaf = true;
    leaf.color = out;
    return join(tree_enc(leaf, cols_.size() > 1), {j});
  }
  std::string rebase(const std::string& payload, const Op& newBase) const override {
    auto [treeEnc, gradings] = split(payload);
    return join(newBase.enc, gradings);
  }
  GraftOut graft(const std::string& host, int leafSlot, const std::string& sub) const override {
    auto [hTree, hGrad] = split(host);
    auto [sTree, sGrad] = split(sub);
    bool sc = cols_.size() > 1;
    GraftOut g;
    TNode grafted =
        tree_graft_leaf(tree_parse(hTree, sc), leafSlot, tree_parse(sTree, sc), &g.baseOrigin);
    std::vector<std::string> gradings;
    for (int i = 0; i < leafSlot; ++i) gradings.push_back(hGrad[i]);
    gradings.insert(gradings.end(), sGrad.begin(), sGrad.end());
    for (size_t i = leafSlot + 1; i < hGrad.size(); ++i) gradings.push_back(hGrad[i]);
    g.payload = join(tree_enc(grafted, sc), gradings);
    return g;
  }
  std::vector<std::string> enumeratePairs(const std::optional<std::string>& targetJ,
                                          int maxSlots, const EnumBounds& eb) const override {
    std::vector<std::string> out;
    if (targetJ) {
      auto [ins, root] = bouquet_parse(*targetJ);
      for (auto& op : base_->enumerate(std::nullopt, maxSlots, eb)) {
        bool sc = cols_.size() > 1;
        TNode t = tree_parse(op.enc, sc);
        if (t.color != root) continue;
        int leaves = tree_leaf_count(t);
        if (tree_vertex_count(t) + leaves > maxSlots) continue;
        auto [leafCols, r] = tree_boundary(t);
        // split `ins` into `leaves` consecutive blocks with matching out colors
        std::vector<std::vector<std::string>> gradings;
        std::function<void(size_t, size_t)> go = [&](size_t at, size_t leaf) {
          if (leaf == static_cast<size_t>(leaves)) {
            if (at != ins.size()) return;
            std::vector<std::string> gs;
            for (size_t l = 0; l < gradings.size(); ++l)
              gs.push_back(bouquet_enc(gradings[l], leafCols[l]));
            out.push_back(join(op.enc, gs));
            return;
          }
          for (size_t end = at; end <= ins.size(); ++end) {
            gradings.push_back(std::vector<std::string>(ins.begin() + at, ins.begin() + end));
            go(end, leaf + 1);
            gradings.pop_back();
          }
        };
        go(0, 0);
      }
    } else {
      // bounded gradings: bouquets with at most maxVertexArity inputs
      int cap = eb.maxVertexArity < 0 ? 2 : eb.maxVertexArity;
      std::vector<std::string> smallBouquets;
      std::vector<std::vector<std::string>> tuples{{}};
      for (int len = 0; len <= cap; ++len) {
        for (auto& t : tuples)
          if (static_cast<int>(t.size()) == len)
            for (auto& o : cols_) smallBouquets.push_back(bouquet_enc(t, o));
        std::vector<std::vector<std::string>> next;
        for (auto& t : tuples)
          if (static_cast<int>(t.size()) == len)
            for (auto& c : cols_) {
              auto v = t;
              v.push_back(c);
              next.push_back(std::move(v));
            }
        tuples.insert(tuples.end(), next.begin(), next.end());
      }
      for (auto& op : base_->enumerate(std::nullopt, maxSlots, eb)) {
        bool sc = cols_.size() > 1;
        TNode t = tree_parse(op.enc, sc);
        int leaves = tree_leaf_count(t);
        if (tree_vertex_count(t) + leaves > maxSlots) continue;
        auto [leafCols, r] = tree_boundary(t);
        std::vector<std::vector<std::string>> options(leaves);
        for (int l = 0; l < leaves; ++l)
          for (auto& bq : smallBouquets) {
            auto [ins, o] = bouquet_parse(bq);
            if (o == leafCols[l]) options[l].push_back(bq);
          }
        std::vector<int> idx(leaves, 0);
        while (true) {
          std::vector<std::string> gs;
          for (int l = 0; l < leaves; ++l) gs.push_back(options[l][idx[l]]);
          out.push_back(join(op.enc, gs));
          int at = leaves - 1;
          while (at >= 0 && ++idx[at] == static_cast<int>(options[at].size())) {
            idx[at] = 0;
            --at;
          }
          if (at < 0) break;
          if (leaves == 0) break;
        }
        if (leaves == 0) continue;
      }
    }
    std::sort(out.begin(), out.end(), enc_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::shared_ptr<NOpMonad> base_;
  std::vector<std::string> cols_;
};

}  // namespace

GrSystemPtr gr_system_mon() { return std::make_shared<MonGrSystem>(); }
GrSystemPtr gr_system_nop(std::vector<std::string> baseColors) {
  return std::make_shared<NOpGrSystem>(std::move(baseColors));
}
GrSystemPtr gr_system_sop(std::vector<std::string> baseColors) {
  return std::make_shared<SOpGrSystem>(std::move(baseColors));
}
GrSystemPtr gr_system_plus(MonadPtr base) {
  return std::make_shared<PlusGrSystem>(std::move(base));
}
GrSystemPtr module_system(std::vector<std::string> baseColors) {
  return std::make_shared<ModuleGrSystem>(std::move(baseColors));
}

// --- plus construction ------------------------------------------------------

PlusMonad::PlusMonad(MonadPtr base) : base_(std::move(base)) {}

bool PlusMonad::showColors() const {
  return !(base_->finiteColors() && base_->colors().size() == 1);
}

std::vector<Color> PlusMonad::colors(int cap) const {
  if (cap < 0) cap = 16;
  std::vector<Color> out;
  for (int arity = 0; static_cast<int>(out.size()) < cap && arity <= 8; ++arity) {
    EnumBounds eb;
    eb.maxVertexArity = arity;
    eb.maxOpSize = arity;
    for (auto& op : base_->enumerate(std::nullopt, arity, eb)) {
      if (std::find(out.begin(), out.end(), op.enc) == out.end()) {
        out.push_back(op.enc);
        if (static_cast<int>(out.size()) >= cap) break;
      }
    }
  }
  return out;
}

bool PlusMonad::isColor(const Color& c) const {
  try {
    base_->info({c});
    return true;
  } catch (...) {
    return false;
  }
}

std::pair<Op, std::vector<int>> PlusMonad::fold(const TNode& t) const {
  // evaluate the decorated tree to its composite base operation; dangling
  // leaves stay open as the unit slots they were substituted with
  struct Out {
    Op op;
    std::vector<int> leafToSlot;  // leaf preorder index (within subtree) -> slot
    int leafCount = 0;
  };
  std::function<Out(const TNode&)> go = [&](const TNode& n) -> Out {
    if (n.leaf) {
      Out o;
      o.op = base_->unit(n.color);
      o.leafToSlot = {0};
      o.leafCount = 1;
      return o;
    }
    if (n.dec.empty()) throw std::runtime_error(name() + ": vertex without decoration");
    Op dec{n.dec};
    OpInfo di = base_->info(dec);
    if (di.arity() != static_cast<int>(n.kids.size()))
      throw std::runtime_error(name() + ": vertex decoration arity mismatch for " + n.dec);
    if (di.target != n.color)
      throw std::runtime_error(name() + ": vertex decoration target mismatch for " + n.dec);
    std::vector<Op> parts;
    std::vector<Out> outs;
    for (size_t i = 0; i < n.kids.size(); ++i) {
      Out o = go(n.kids[i]);
      if (base_->info(o.op).target != di.sources[i])
        throw std::runtime_error(name() + ": edge color mismatch under " + n.dec);
      parts.push_back(o.op);
      outs.push_back(std::move(o));
    }
    SubstResult r = base_->subst(dec, parts);
    Out o;
    o.op = r.op;
    // composite slot k originates from (input e, slot j of parts[e]);
    // invert to get leaf -> slot
    std::vector<int> leafBase(n.kids.size(), 0);
    int acc = 0;
    for (size_t e = 0; e < n.kids.size(); ++e) {
      leafBase[e] = acc;
      acc += outs[e].leafCount;
    }
    o.leafCount = acc;
    o.leafToSlot.assign(acc, -1);
    for (int k = 0; k < static_cast<int>(r.origin.size()); ++k) {
      auto [e, j] = r.origin[k];
      // slot j of parts[e] is reached by the leaf with leafToSlot == j
      for (int leaf = 0; leaf < outs[e].leafCount; ++leaf)
        if (outs[e].leafToSlot[leaf] == j) o.leafToSlot[leafBase[e] + leaf] = k;
    }
    return o;
  };
  Out o = go(t);
  return {o.op, o.leafToSlot};
}

OpInfo PlusMonad::info(const Op& b) const {
  TNode t = tree_parse(b.enc, showColors());
  auto [target, leafMap] = fold(t);
  OpInfo oi;
  oi.target = target.enc;
  for (auto* v : tree_vertices(t)) oi.sources.push_back(v->dec);
  return oi;
}

Op PlusMonad::unit(const Color& c) const {
  OpInfo bi = base_->info({c});
  TNode v;
  v.leaf = false;
  v.color = bi.target;
  v.dec = c;
  for (auto& s : bi.sources) {
    TNode l;
    l.leaf = true;
    l.color = s;
    v.kids.push_back(l);
  }
  return {tree_enc(v, showColors())};
}

SubstResult PlusMonad::subst(const Op& b, const std::vector<Op>& inner) const {
  TNode t = tree_parse(b.enc, showColors());
  auto verts = tree_vertices(t);
  if (inner.size() != verts.size()) throw std::runtime_error(name() + ": wrong inner count");
  std::vector<TNode> repl;
  for (size_t v = 0; v < inner.size(); ++v) {
    TNode q = tree_parse(inner[v].enc, showColors());
    auto [composite, leafMap] = fold(q);
    if (composite.enc != verts[v]->dec)
      throw std::runtime_error(name() + ": substitution target mismatch at vertex " +
                               std::to_string(v));
    // transient labels route vertex inputs to the right dangling leaves
    int leafIdx = 0;
    std::function<void(TNode&)> lab = [&](TNode& n) {
      if (n.leaf) {
        n.label = leafMap[leafIdx++] + 1;
        return;
      }
      for (auto& k : n.kids) lab(k);
    };
    lab(q);
    repl.push_back(std::move(q));
  }
  SubstResult r;
  TNode composite = tree_subst_all(t, repl, &r.origin);
  r.op = {tree_enc(tree_unlabel(composite), showColors())};
  return r;
}

std::vector<Op> PlusMonad::enumerate(const std::optional<Color>& target, int maxArity,
                                     const EnumBounds& eb) const {
  // decorations drawn within the vertex-arity cap
  int decArity = eb.maxVertexArity < 0 ? maxArity + 2 : eb.maxVertexArity;
  EnumBounds inner = eb;
  std::vector<Op> decorations = base_->enumerate(std::nullopt, decArity, inner);
  int maxV = maxArity;
  if (eb.maxOpSize >= 0) maxV = std::min(maxV, eb.maxOpSize);

  // grow decorated trees by target base-op color
  std::vector<Op> out;
  std::set<std::string> seen;
  // gen(targetOp, budget): all decorated trees whose fold equals targetOp
  std::function<std::vector<TNode>(const Op&, int)> gen = [&](const Op& want,
                                                              int budget) -> std::vector<TNode> {
    std::vector<TNode> res;
    OpInfo wi = base_->info(want);
    // bare edge when the target is a unit
    if (base_->isUnit(want)) {
      TNode l;
      l.leaf = true;
      l.color = wi.target;
      res.push_back(l);
    }
    if (budget == 0) return res;
    // root vertex decorated d, children folded appropriately
    for (auto& d : decorations) {
      OpInfo di = base_->info(d);
      if (di.target != wi.target) continue;
      // children: decorated trees q_1..q_a with subst(d; folds) == want
      std::vector<std::vector<TNode>> options;
      bool dead = false;
      for (int e = 0; e < di.arity() && !dead; ++e) {
        std::vector<TNode> opts;
        // child composites range over ops with target di.sources[e]
        for (auto& childComposite : base_->enumerate(di.sources[e], budget + 4, inner))
          for (auto& q : gen(childComposite, budget - 1)) opts.push_back(q);
        if (opts.empty()) dead = true;
        options.push_back(std::move(opts));
      }
      if (dead && di.arity() > 0) continue;
      std::vector<int> idx(di.arity(), 0);
      while (true) {
        int verts = 1;
        for (int e = 0; e < di.arity(); ++e) verts += tree_vertex_count(options[e][idx[e]]);
        if (verts <= budget) {
          std::vector<Op> folds;
          for (int e = 0; e < di.arity(); ++e) folds.push_back(fold(options[e][idx[e]]).first);
          SubstResult r = base_->subst(d, folds);
          if (r.op == want) {
            TNode v;
            v.leaf = false;
            v.color = wi.target;
            v.dec = d.enc;
            for (int e = 0; e < di.arity(); ++e) v.kids.push_back(options[e][idx[e]]);
            res.push_back(std::move(v));
          }
        }
        int at = di.arity() - 1;
        while (at >= 0 && ++idx[at] == static_cast<int>(options[at].size())) {
          idx[at] = 0;
          --at;
        }
        if (at < 0 || di.arity() == 0) break;
      }
    }
    return res;
  };

  std::vector<Op> targets;
  if (target) {
    targets.push_back({*target});
  } else {
    // all base ops reachable as folds of trees within the caps
    targets = base_->enumerate(std::nullopt, std::max(maxV * std::max(decArity, 1), 1), inner);
  }
  for (auto& want : targets)
    for (auto& t : gen(want, maxV)) {
      std::string e = tree_enc(t, showColors());
      if (seen.insert(e).second) out.push_back({e});
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::shared_ptr<const PlusMonad> plus_construction(MonadPtr t) {
  return std::make_shared<PlusMonad>(std::move(t));
}

}  // namespace pmc
