#include "pmc/presented.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pmc {

void PresentedCategory::buildIndex() const {
  if (indexed_) return;
  objIdx_.clear();
  genIdx_.clear();
  for (int i = 0; i < static_cast<int>(objects.size()); ++i) objIdx_[objects[i]] = i;
  for (int i = 0; i < static_cast<int>(generators.size()); ++i) genIdx_[generators[i].id] = i;
  out_.assign(objects.size(), {});
  in_.assign(objects.size(), {});
  for (int i = 0; i < static_cast<int>(generators.size()); ++i) {
    auto s = objIdx_.find(generators[i].src);
    auto t = objIdx_.find(generators[i].tgt);
    if (s != objIdx_.end()) out_[s->second].push_back(i);
    if (t != objIdx_.end()) in_[t->second].push_back(i);
  }
  indexed_ = true;
}

int PresentedCategory::objectIndex(const std::string& id) const {
  buildIndex();
  auto it = objIdx_.find(id);
  if (it == objIdx_.end()) throw std::runtime_error("unknown object '" + id + "'");
  return it->second;
}

bool PresentedCategory::hasObject(const std::string& id) const {
  buildIndex();
  return objIdx_.count(id) != 0;
}

int PresentedCategory::generatorIndex(const std::string& id) const {
  buildIndex();
  auto it = genIdx_.find(id);
  if (it == genIdx_.end()) throw std::runtime_error("unknown generator '" + id + "'");
  return it->second;
}

const std::vector<std::vector<int>>& PresentedCategory::outEdges() const {
  buildIndex();
  return out_;
}

const std::vector<std::vector<int>>& PresentedCategory::inEdges() const {
  buildIndex();
  return in_;
}

void PresentedCategory::validate() const {
  std::set<std::string> objSeen, genSeen;
  for (auto& o : objects)
    if (!objSeen.insert(o).second)
      throw std::runtime_error("duplicate object id '" + o + "'");
  for (auto& g : generators) {
    if (!genSeen.insert(g.id).second)
      throw std::runtime_error("duplicate generator id '" + g.id + "'");
    if (!objSeen.count(g.src))
      throw std::runtime_error("generator '" + g.id + "' has dangling source '" + g.src + "'");
    if (!objSeen.count(g.tgt))
      throw std::runtime_error("generator '" + g.id + "' has dangling target '" + g.tgt + "'");
  }
  buildIndex();
  auto pathEnds = [&](const std::vector<std::string>& path, const std::string& relName)
      -> std::pair<std::string, std::string> {
    if (path.empty()) throw std::runtime_error("relation " + relName + " has an empty side with no anchor");
    std::string src, cur;
    for (size_t i = 0; i < path.size(); ++i) {
      auto it = genIdx_.find(path[i]);
      if (it == genIdx_.end())
        throw std::runtime_error("relation " + relName + " uses unknown generator '" + path[i] + "'");
      const Generator& g = generators[it->second];
      if (i == 0) {
        src = g.src;
        cur = g.tgt;
      } else {
        if (g.src != cur)
          throw std::runtime_error("relation " + relName + " path is not composable at '" + path[i] + "'");
        cur = g.tgt;
      }
    }
    return {src, cur};
  };
  for (size_t r = 0; r < relations.size(); ++r) {
    const Relation& rel = relations[r];
    std::string name = "#" + std::to_string(r);
    if (rel.lhs.empty() && rel.rhs.empty()) continue;
    // an empty side denotes an identity path; its endpoints are pinned by the other side
    if (rel.lhs.empty() || rel.rhs.empty()) {
      auto [s, t] = pathEnds(rel.lhs.empty() ? rel.rhs : rel.lhs, name);
      if (s != t)
        throw std::runtime_error("relation " + name + " equates a path with an identity but endpoints differ");
      continue;
    }
    auto [ls, lt] = pathEnds(rel.lhs, name);
    auto [rs, rt] = pathEnds(rel.rhs, name);
    if (ls != rs || lt != rt)
      throw std::runtime_error("relation " + name + " sides do not share endpoints");
  }
}

std::vector<std::vector<std::string>> pi0(const PresentedCategory& c) {
  UnionFind uf(static_cast<int>(c.objects.size()));
  for (auto& g : c.generators) uf.unite(c.objectIndex(g.src), c.objectIndex(g.tgt));
  std::map<int, std::vector<std::string>> comps;
  for (int i = 0; i < static_cast<int>(c.objects.size()); ++i)
    comps[uf.find(i)].push_back(c.objects[i]);
  std::vector<std::vector<std::string>> out;
  for (auto& [root, objs] : comps) {
    auto v = objs;
    std::sort(v.begin(), v.end(), enc_less);
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return enc_less(a.front(), b.front()); });
  return out;
}

void SetValuedDiagram::validate() const {
  if (!base) throw std::runtime_error("diagram has no base category");
  base->validate();
  for (auto& o : base->objects)
    if (!value.count(o)) throw std::runtime_error("diagram missing value at object '" + o + "'");
  for (auto& g : base->generators) {
    auto it = action.find(g.id);
    if (it == action.end())
      throw std::runtime_error("diagram missing action for generator '" + g.id + "'");
    const auto& m = it->second;
    int d = value.at(g.src).size();
    int c = value.at(g.tgt).size();
    if (static_cast<int>(m.size()) != d)
      throw std::runtime_error("action of '" + g.id + "' has wrong domain size");
    for (int v : m)
      if (v < 0 || v >= c)
        throw std::runtime_error("action of '" + g.id + "' maps outside its codomain");
  }
  auto applyPath = [&](const std::vector<std::string>& path, const std::string& srcObj) {
    std::vector<int> cur(value.at(srcObj).size());
    for (size_t i = 0; i < cur.size(); ++i) cur[i] = static_cast<int>(i);
    for (auto& gid : path) {
      const auto& m = action.at(gid);
      for (auto& x : cur) x = m[x];
    }
    return cur;
  };
  for (size_t r = 0; r < base->relations.size(); ++r) {
    const Relation& rel = base->relations[r];
    if (rel.lhs.empty() && rel.rhs.empty()) continue;
    const std::vector<std::string>& probe = rel.lhs.empty() ? rel.rhs : rel.lhs;
    const Generator& g0 = base->generators[base->generatorIndex(probe.front())];
    std::vector<int> a = applyPath(rel.lhs, g0.src);
    std::vector<int> b = applyPath(rel.rhs, g0.src);
    if (a != b)
      throw std::runtime_error("relation #" + std::to_string(r) +
                               " does not commute pointwise in the diagram");
  }
}

Cocone colimit(const SetValuedDiagram& d) {
  const PresentedCategory& base = *d.base;
  // offsets into the disjoint sum
  std::map<std::string, int> offset;
  int total = 0;
  for (auto& o : base.objects) {
    offset[o] = total;
    total += d.value.at(o).size();
  }
  UnionFind uf(total);
  for (auto& g : base.generators) {
    const auto& m = d.action.at(g.id);
    int so = offset[g.src], to = offset[g.tgt];
    for (int i = 0; i < static_cast<int>(m.size()); ++i) uf.unite(so + i, to + m[i]);
  }
  // name classes by their enc-least member "obj#elem"
  std::vector<std::string> memberName(total);
  for (auto& o : base.objects) {
    const FinSet& s = d.value.at(o);
    for (int i = 0; i < s.size(); ++i) memberName[offset[o] + i] = o + "#" + s.name(i);
  }
  std::map<int, std::string> repName;
  for (int i = 0; i < total; ++i) {
    int r = uf.find(i);
    auto it = repName.find(r);
    if (it == repName.end() || enc_less(memberName[i], it->second)) repName[r] = memberName[i];
  }
  std::vector<std::string> apexElems;
  for (auto& [r, n] : repName) apexElems.push_back(n);
  std::sort(apexElems.begin(), apexElems.end(), enc_less);
  FinSet apex(apexElems);
  std::map<std::string, int> apexIdx;
  for (int i = 0; i < apex.size(); ++i) apexIdx[apex.name(i)] = i;

  Cocone cc;
  cc.apex = apex;
  for (auto& o : base.objects) {
    const FinSet& s = d.value.at(o);
    std::vector<int> leg(s.size());
    for (int i = 0; i < s.size(); ++i) leg[i] = apexIdx.at(repName.at(uf.find(offset[o] + i)));
    cc.legs[o] = std::move(leg);
  }
  return cc;
}

namespace {
std::string dotEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace

std::string PresentedCategory::toDot() const {
  std::ostringstream os;
  os << "digraph category {\n  node [shape=box];\n";
  for (auto& o : objects) os << "  \"" << dotEscape(o) << "\";\n";
  for (auto& g : generators)
    os << "  \"" << dotEscape(g.src) << "\" -> \"" << dotEscape(g.tgt) << "\" [label=\""
       << dotEscape(g.label.empty() ? g.id : g.label) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string PresentedCategory::toJson() const {
  nlohmann::json j;
  j["objects"] = objects;
  j["generators"] = nlohmann::json::array();
  for (auto& g : generators)
    j["generators"].push_back({{"id", g.id}, {"src", g.src}, {"tgt", g.tgt}, {"label", g.label}});
  j["relations"] = nlohmann::json::array();
  for (auto& r : relations) j["relations"].push_back({{"lhs", r.lhs}, {"rhs", r.rhs}});
  return j.dump(2);
}

PresentedCategory PresentedCategory::fromJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PresentedCategory c;
  for (auto& o : j.at("objects")) c.objects.push_back(o.get<std::string>());
  for (auto& g : j.at("generators"))
    c.generators.push_back({g.at("id").get<std::string>(), g.at("src").get<std::string>(),
                            g.at("tgt").get<std::string>(), g.value("label", std::string())});
  for (auto& r : j.at("relations")) {
    Relation rel;
    for (auto& x : r.at("lhs")) rel.lhs.push_back(x.get<std::string>());
    for (auto& x : r.at("rhs")) rel.rhs.push_back(x.get<std::string>());
    c.relations.push_back(std::move(rel));
  }
  return c;
}

}  // namespace pmc
