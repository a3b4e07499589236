// Finite categories presented by generators and relations, Set-valued
// diagrams over them, and their colimits.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmc/fin.hpp"

namespace pmc {

struct Generator {
  std::string id;
  std::string src;
  std::string tgt;
  std::string label;
};

// two composable generator-id paths with common endpoints
struct Relation {
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;
};

class PresentedCategory {
 public:
  std::vector<std::string> objects;
  std::vector<Generator> generators;
  std::vector<Relation> relations;

  // throws std::runtime_error naming the offending object/generator/relation
  void validate() const;

  int objectIndex(const std::string& id) const;
  int generatorIndex(const std::string& id) const;
  bool hasObject(const std::string& id) const;

  // indices are built lazily and cached; call after the structure is final
  const std::vector<std::vector<int>>& outEdges() const;  // by object, generator indices
  const std::vector<std::vector<int>>& inEdges() const;

  std::string toDot() const;
  std::string toJson() const;
  static PresentedCategory fromJson(const std::string& text);

 private:
  mutable std::map<std::string, int> objIdx_;
  mutable std::map<std::string, int> genIdx_;
  mutable std::vector<std::vector<int>> out_, in_;
  mutable bool indexed_ = false;
  void buildIndex() const;
};

// connected components of the undirected generator graph,
// ordered by smallest object id, objects sorted within each component
std::vector<std::vector<std::string>> pi0(const PresentedCategory& c);

struct SetValuedDiagram {
  const PresentedCategory* base = nullptr;
  std::map<std::string, FinSet> value;        // object id -> finite set
  std::map<std::string, std::vector<int>> action;  // generator id -> index map

  // checks sets/maps line up and every relation commutes pointwise
  void validate() const;

  const FinSet& at(const std::string& obj) const { return value.at(obj); }
  const std::vector<int>& act(const std::string& gen) const { return action.at(gen); }
};

struct Cocone {
  FinSet apex;
  std::map<std::string, std::vector<int>> legs;  // object id -> map into apex
};

// coequalizer of the coproduct of values along generator actions;
// apex elements are named by the enc-least representative "obj#elem"
Cocone colimit(const SetValuedDiagram& d);

}  // namespace pmc
