// Finite sets, functions between them, and union-find.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pmc {

struct FinSet {
  std::vector<std::string> elems;

  FinSet() = default;
  explicit FinSet(std::vector<std::string> e) : elems(std::move(e)) {}

  int size() const { return static_cast<int>(elems.size()); }
  const std::string& name(int i) const { return elems.at(i); }

  int index(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (elems[i] == name) return i;
    throw std::runtime_error("FinSet: no element named '" + name + "'");
  }

  bool contains(const std::string& name) const {
    return std::find(elems.begin(), elems.end(), name) != elems.end();
  }

  void sort() { std::sort(elems.begin(), elems.end()); }

  bool operator==(const FinSet& o) const { return elems == o.elems; }
};

// total function between finite sets, by element index
struct FinFn {
  int domSize = 0;
  int codSize = 0;
  std::vector<int> map;  // map[i] in [0, codSize)

  FinFn() = default;
  FinFn(int d, int c, std::vector<int> m) : domSize(d), codSize(c), map(std::move(m)) {
    if (static_cast<int>(map.size()) != domSize)
      throw std::runtime_error("FinFn: map size mismatch");
    for (int v : map)
      if (v < 0 || v >= codSize) throw std::runtime_error("FinFn: value out of range");
  }

  int operator()(int i) const { return map.at(i); }
};

struct UnionFind {
  std::vector<int> parent;
  std::vector<int> rnk;

  explicit UnionFind(int n = 0) { reset(n); }

  void reset(int n) {
    parent.resize(n);
    rnk.assign(n, 0);
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rnk[a] < rnk[b]) std::swap(a, b);
    parent[b] = a;
    if (rnk[a] == rnk[b]) ++rnk[a];
    return true;
  }

  int componentCount() {
    int c = 0;
    for (int i = 0; i < static_cast<int>(parent.size()); ++i)
      if (find(i) == i) ++c;
    return c;
  }
};

// canonical ordering used for all "smallest id" tie-breaks: by length, then lex
inline bool enc_less(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline std::string tuple_enc(const std::vector<std::string>& parts) {
  std::string s = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += parts[i];
  }
  s += ")";
  return s;
}

}  // namespace pmc
