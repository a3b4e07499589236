#include "pmc/trees.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace pmc {

std::string tree_enc(const TNode& t, bool showColors) {
  std::string s;
  if (t.leaf) {
    s += ".";
    if (t.label > 0) s += std::to_string(t.label);
  } else {
    if (!t.dec.empty()) {
      s += "{";
      s += t.dec;
      s += "}";
    }
    s += "(";
    for (size_t i = 0; i < t.kids.size(); ++i) {
      if (i) s += ",";
      s += tree_enc(t.kids[i], showColors);
    }
    s += ")";
  }
  if (showColors) {
    s += "'";
    s += t.color;
    s += "'";
  }
  return s;
}

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;
  bool showColors;

  explicit Parser(const std::string& str, bool sc) : s(str), showColors(sc) {}

  [[noreturn]] void fail(const std::string& why) {
    throw std::runtime_error("tree parse error at " + std::to_string(pos) + ": " + why +
                             " in '" + s + "'");
  }

  char peek() {
    if (pos >= s.size()) fail("unexpected end");
    return s[pos];
  }

  TNode node() {
    TNode n;
    if (peek() == '.') {
      ++pos;
      n.leaf = true;
      size_t start = pos;
      while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos > start) n.label = std::stoi(s.substr(start, pos - start));
    } else {
      n.leaf = false;
      if (peek() == '{') {
        ++pos;
        int depth = 1;
        size_t start = pos;
        while (pos < s.size() && depth) {
          if (s[pos] == '{') ++depth;
          if (s[pos] == '}') --depth;
          ++pos;
        }
        if (depth) fail("unbalanced decoration");
        n.dec = s.substr(start, pos - start - 1);
      }
      if (peek() != '(') fail("expected '('");
      ++pos;
      if (peek() != ')') {
        while (true) {
          n.kids.push_back(node());
          if (peek() == ',') {
            ++pos;
            continue;
          }
          break;
        }
      }
      if (peek() != ')') fail("expected ')'");
      ++pos;
    }
    if (showColors) {
      if (peek() != '\'') fail("expected color");
      ++pos;
      size_t start = pos;
      while (pos < s.size() && s[pos] != '\'') ++pos;
      if (pos >= s.size()) fail("unterminated color");
      n.color = s.substr(start, pos - start);
      ++pos;
    } else {
      n.color = "*";
    }
    return n;
  }
};

}  // namespace

TNode tree_parse(const std::string& s, bool showColors) {
  Parser p(s, showColors);
  TNode n = p.node();
  if (p.pos != s.size()) p.fail("trailing input");
  return n;
}

int tree_vertex_count(const TNode& t) {
  if (t.leaf) return 0;
  int n = 1;
  for (auto& k : t.kids) n += tree_vertex_count(k);
  return n;
}

int tree_leaf_count(const TNode& t) {
  if (t.leaf) return 1;
  int n = 0;
  for (auto& k : t.kids) n += tree_leaf_count(k);
  return n;
}

std::vector<const TNode*> tree_vertices(const TNode& t) {
  std::vector<const TNode*> out;
  std::function<void(const TNode&)> walk = [&](const TNode& n) {
    if (n.leaf) return;
    out.push_back(&n);
    for (auto& k : n.kids) walk(k);
  };
  walk(t);
  return out;
}

std::vector<const TNode*> tree_leaves(const TNode& t) {
  std::vector<const TNode*> pre;
  std::function<void(const TNode&)> walk = [&](const TNode& n) {
    if (n.leaf) {
      pre.push_back(&n);
      return;
    }
    for (auto& k : n.kids) walk(k);
  };
  walk(t);
  bool labeled = !pre.empty() && pre.front()->label > 0;
  if (labeled)
    std::sort(pre.begin(), pre.end(),
              [](const TNode* a, const TNode* b) { return a->label < b->label; });
  return pre;
}

std::pair<std::vector<std::string>, std::string> tree_vertex_bouquet(const TNode& v) {
  std::vector<std::string> in;
  for (auto& k : v.kids) in.push_back(k.color);
  return {in, v.color};
}

std::pair<std::vector<std::string>, std::string> tree_boundary(const TNode& t) {
  std::vector<std::string> in;
  for (auto* l : tree_leaves(t)) in.push_back(l->color);
  return {in, t.color};
}

namespace {

void annotate(TNode& n, int which, int& counter, int fixedA) {
  if (n.leaf) return;
  if (which == 0) {
    n.tagA = counter++;
  } else {
    n.tagA = fixedA;
    n.tagB = counter++;
  }
  for (auto& k : n.kids) annotate(k, which, counter, fixedA);
}

// replace the leaves of `shape` (by label when labeled, else planar order)
// with the given attachment subtrees
TNode attach(TNode shape, const std::vector<TNode>& atts) {
  int planarCounter = 0;
  std::function<void(TNode&)> walk = [&](TNode& n) {
    if (n.leaf) {
      int idx = n.label > 0 ? n.label - 1 : planarCounter;
      ++planarCounter;
      if (idx < 0 || idx >= static_cast<int>(atts.size()))
        throw std::runtime_error("tree attach: leaf index out of range");
      std::string edgeColor = n.color;
      n = atts[idx];
      if (n.color != edgeColor)
        throw std::runtime_error("tree attach: color mismatch at leaf (" + edgeColor + " vs " +
                                 n.color + ")");
      return;
    }
    for (auto& k : n.kids) walk(k);
  };
  if (shape.leaf) {
    // bare-edge shape: single attachment replaces the whole tree
    if (atts.size() != 1) throw std::runtime_error("tree attach: bare edge wants one subtree");
    if (atts[0].color != shape.color)
      throw std::runtime_error("tree attach: color mismatch on bare edge");
    return atts[0];
  }
  walk(shape);
  return shape;
}

}  // namespace

TNode tree_subst_all(const TNode& outer, const std::vector<TNode>& repl,
                     std::vector<std::pair<int, int>>* origin) {
  TNode annotated = outer;
  int counter = 0;
  annotate(annotated, 0, counter, -1);
  if (static_cast<int>(repl.size()) != counter)
    throw std::runtime_error("tree_subst_all: wrong number of replacements");

  std::function<TNode(const TNode&)> go = [&](const TNode& n) -> TNode {
    if (n.leaf) return n;
    int v = n.tagA;
    // validate boundary compatibility
    auto [want, wantRoot] = tree_vertex_bouquet(n);
    auto [have, haveRoot] = tree_boundary(repl[v]);
    if (want != have || wantRoot != haveRoot)
      throw std::runtime_error("tree_subst_all: replacement boundary mismatch at vertex " +
                               std::to_string(v));
    TNode shape = repl[v];
    int innerCounter = 0;
    annotate(shape, 1, innerCounter, v);
    std::vector<TNode> atts;
    for (auto& k : n.kids) atts.push_back(go(k));
    return attach(std::move(shape), atts);
  };
  TNode result = go(annotated);

  if (origin) {
    origin->clear();
    for (auto* v : tree_vertices(result)) origin->push_back({v->tagA, v->tagB});
  }
  return result;
}

TNode tree_graft_leaf(const TNode& host, int leafSlot, const TNode& sub,
                      std::vector<std::pair<int, int>>* vertexOrigin) {
  TNode h = host;
  int counter = 0;
  annotate(h, 1, counter, 0);  // host vertices tagged (0, i)
  TNode s = sub;
  counter = 0;
  annotate(s, 1, counter, 1);  // grafted vertices tagged (1, j)

  // locate the leaf with the given slot index
  std::vector<TNode*> pre;
  std::function<void(TNode&)> collect = [&](TNode& n) {
    if (n.leaf) {
      pre.push_back(&n);
      return;
    }
    for (auto& k : n.kids) collect(k);
  };
  collect(h);
  bool labeled = !pre.empty() && pre.front()->label > 0;
  std::vector<TNode*> slots = pre;
  if (labeled)
    std::sort(slots.begin(), slots.end(),
              [](TNode* a, TNode* b) { return a->label < b->label; });
  if (leafSlot < 0 || leafSlot >= static_cast<int>(slots.size()))
    throw std::runtime_error("tree_graft_leaf: slot out of range");
  TNode* at = slots[leafSlot];
  if (at->color != s.color)
    throw std::runtime_error("tree_graft_leaf: color mismatch (" + at->color + " vs " + s.color +
                             ")");

  if (labeled) {
    int grafted = tree_leaf_count(s);
    int base = at->label;
    // renumber: host leaves after `base` shift up; sub's labels slide in
    std::function<void(TNode&)> shiftHost = [&](TNode& n) {
      if (n.leaf) {
        if (n.label > base) n.label += grafted - 1;
        return;
      }
      for (auto& k : n.kids) shiftHost(k);
    };
    shiftHost(h);
    std::function<void(TNode&)> shiftSub = [&](TNode& n) {
      if (n.leaf) {
        n.label += base - 1;
        return;
      }
      for (auto& k : n.kids) shiftSub(k);
    };
    shiftSub(s);
  }
  *at = s;

  if (vertexOrigin) {
    vertexOrigin->clear();
    for (auto* v : tree_vertices(h)) vertexOrigin->push_back({v->tagA, v->tagB});
  }
  return h;
}

TNode tree_label_planar(TNode t) {
  int next = 1;
  std::function<void(TNode&)> walk = [&](TNode& n) {
    if (n.leaf) {
      n.label = next++;
      return;
    }
    for (auto& k : n.kids) walk(k);
  };
  walk(t);
  return t;
}

TNode tree_unlabel(TNode t) {
  std::function<void(TNode&)> walk = [&](TNode& n) {
    if (n.leaf) {
      n.label = 0;
      return;
    }
    for (auto& k : n.kids) walk(k);
  };
  walk(t);
  return t;
}

}  // namespace pmc
