// Planar rooted trees with colored edges, optional leaf numbering, and
// optional vertex decorations. Shared by the tree-shaped operation families:
// non-symmetric operads, symmetric operads, plus constructions, and the
// Grothendieck constructions built on them.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pmc {

// a subtree hanging on an edge; `color` is the color of that edge
struct TNode {
  std::string color;
  bool leaf = true;
  int label = 0;          // 1-based leaf numbering; 0 = unlabeled
  std::string dec;        // vertex decoration (plus construction)
  std::vector<TNode> kids;

  // transient origin tags used by substitution; never encoded
  int tagA = -1;
  int tagB = -1;
};

std::string tree_enc(const TNode& t, bool showColors);
TNode tree_parse(const std::string& s, bool showColors);

int tree_vertex_count(const TNode& t);
int tree_leaf_count(const TNode& t);

// preorder vertex list (pointers valid while the tree is alive)
std::vector<const TNode*> tree_vertices(const TNode& t);
// leaves in slot order: label order when labeled, preorder otherwise
std::vector<const TNode*> tree_leaves(const TNode& t);

// vertex bouquet: (input edge colors in planar order; vertex's own edge color)
std::pair<std::vector<std::string>, std::string> tree_vertex_bouquet(const TNode& v);

// boundary: (leaf colors in slot order; root color)
std::pair<std::vector<std::string>, std::string> tree_boundary(const TNode& t);

// substitute a replacement tree at every vertex (preorder indexing).
// Replacement i must have boundary matching vertex i's bouquet; its leaves
// receive the vertex's input subtrees (by label when labeled, else planar
// position). origin, when non-null, receives one (outerVertex, innerVertex)
// pair per composite vertex, in composite preorder.
TNode tree_subst_all(const TNode& outer, const std::vector<TNode>& repl,
                     std::vector<std::pair<int, int>>* origin);

// graft `sub` onto the leaf with slot index leafSlot; when the trees are
// labeled the splice renumbers: earlier labels keep, sub's labels shift in,
// later labels shift up. vertexOrigin, when non-null, receives for each
// composite vertex either (0, i) (vertex i of the host) or (1, j) (vertex j
// of the grafted tree).
TNode tree_graft_leaf(const TNode& host, int leafSlot, const TNode& sub,
                      std::vector<std::pair<int, int>>* vertexOrigin);

// identity-labeled copy (labels 1..k in planar order); strips nothing else
TNode tree_label_planar(TNode t);
// drop all leaf labels
TNode tree_unlabel(TNode t);

}  // namespace pmc
