// Independent oracles used by the test suites. These deliberately avoid the
// library's own code paths: counting and normal forms are recomputed from
// scratch so that agreement is meaningful.
#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "pmc/presented.hpp"

namespace oracles {

// connected-component count of the category-of-elements graph via plain BFS
// (the library uses union-find; this is the independent route)
inline int colimit_size_bfs(const pmc::SetValuedDiagram& d) {
  const pmc::PresentedCategory& base = *d.base;
  std::map<std::string, int> offset;
  int total = 0;
  for (auto& o : base.objects) {
    offset[o] = total;
    total += d.value.at(o).size();
  }
  std::vector<std::vector<int>> adj(total);
  for (auto& g : base.generators) {
    const auto& m = d.action.at(g.id);
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      int u = offset[g.src] + i, v = offset[g.tgt] + m[i];
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  }
  std::vector<bool> seen(total, false);
  int comps = 0;
  for (int s = 0; s < total; ++s) {
    if (seen[s]) continue;
    ++comps;
    std::deque<int> q{s};
    seen[s] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          q.push_back(v);
        }
    }
  }
  return comps;
}

// brute-force planar tree counter: one-color trees with <= maxVerts vertices,
// vertex arities <= maxArity, counted by an arity-sequence recursion
inline long long count_planar_trees(int maxVerts, int maxArity,
                                    std::optional<int> leafTarget = std::nullopt) {
  // trees = bare edge | vertex with a in [0..maxArity] subtrees
  // count(v, l) = number of trees with exactly v vertices and l leaves
  // computed by recursion on the root arity with composition splitting
  std::map<std::pair<int, int>, long long> memo;
  std::function<long long(int, int)> count = [&](int v, int l) -> long long {
    if (v == 0) return l == 1 ? 1 : 0;  // bare edge
    auto key = std::make_pair(v, l);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long long total = 0;
    // root vertex of arity a, children use v-1 vertices and l leaves overall
    for (int a = 0; a <= maxArity; ++a) {
      // distribute (v-1) vertices and l leaves among a ordered children,
      // each child a tree (bare edges allowed)
      std::function<long long(int, int, int)> dist = [&](int slots, int verts,
                                                         int leaves) -> long long {
        if (slots == 0) return verts == 0 && leaves == 0 ? 1 : 0;
        long long acc = 0;
        for (int cv = 0; cv <= verts; ++cv)
          for (int cl = 0; cl <= leaves; ++cl) {
            long long here = count(cv, cl);
            if (here) acc += here * dist(slots - 1, verts - cv, leaves - cl);
          }
        return acc;
      };
      if (a == 0 && l == 0) total += (v == 1) ? 1 : 0;  // stump
      if (a > 0) total += dist(a, v - 1, l);
    }
    memo[key] = total;
    return total;
  };
  long long total = 0;
  for (int v = 0; v <= maxVerts; ++v) {
    if (leafTarget) {
      total += count(v, *leafTarget);
    } else {
      int maxLeaves = v * std::max(maxArity - 1, 0) + 1;
      for (int l = 0; l <= maxLeaves; ++l) total += count(v, l);
    }
  }
  return total;
}

// free-product normal forms x0 l x1 l ... l xj over a finite monoid X and one
// letter l, with l-degree <= k (elements counted as tuples over X)
inline long long free_product_count(int xSize, int maxDegree) {
  long long total = 0, pw = xSize;
  for (int j = 0; j <= maxDegree; ++j) {
    total += pw;
    pw *= xSize;
  }
  return total;
}

// stars and bars: multisets over an n-element set of size <= k
inline long long multiset_count(int n, int k) {
  auto choose = [](long long a, long long b) {
    long long r = 1;
    for (long long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  long long total = 0;
  for (int j = 0; j <= k; ++j) total += choose(j + n - 1, n - 1);
  return total;
}

}  // namespace oracles
