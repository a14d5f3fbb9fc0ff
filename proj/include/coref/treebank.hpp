// Constituent-tree data model shared by both resolvers: parse nodes with
// discourse annotations, agreement/sort acceptability, and the traversal
// orders (breadth-first sweep, ancestor paths) the search algorithms use.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace coref {

enum class Gender { masc, fem, neut, unknown };
enum class Number { sing, plur, unknown };
enum class Person { third, other };

struct AgreementFeatures {
  Gender gender = Gender::unknown;
  Number number = Number::unknown;
  Person person = Person::third;

  bool operator==(const AgreementFeatures&) const = default;
};

// Hand-simulation convention: unknown acts as a wildcard on either side.
inline bool features_unify(const AgreementFeatures& a, const AgreementFeatures& b) {
  const bool g = a.gender == Gender::unknown || b.gender == Gender::unknown || a.gender == b.gender;
  const bool n = a.number == Number::unknown || b.number == Number::unknown || a.number == b.number;
  const bool p = a.person == b.person;
  return g && n && p;
}

enum class GrammaticalRole { subject, object, indirect_object, complement, adjunct, possessor };

// Cf salience tier for a role; possessors and unannotated NPs share the
// bottom tier with adjuncts.
inline int role_rank(std::optional<GrammaticalRole> role) {
  if (!role) return 4;
  switch (*role) {
    case GrammaticalRole::subject: return 0;
    case GrammaticalRole::object: return 1;
    case GrammaticalRole::indirect_object: return 2;
    case GrammaticalRole::complement: return 3;
    case GrammaticalRole::adjunct:
    case GrammaticalRole::possessor: return 4;
  }
  return 4;
}

struct DiscourseEntity {
  std::string id;
  std::string name;
  AgreementFeatures features;
  std::optional<std::string> sort;
  std::vector<std::string> members;  // non-empty => composite/set entity

  bool composite() const { return !members.empty(); }
  bool operator==(const DiscourseEntity&) const = default;
};

// Entity declarations of one document, in declaration order.
class EntityTable {
 public:
  EntityTable() = default;
  explicit EntityTable(std::vector<DiscourseEntity> entities) : entities_(std::move(entities)) {
    for (std::size_t i = 0; i < entities_.size(); ++i) index_[entities_[i].id] = i;
  }

  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  const DiscourseEntity& at(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::domain_error("unknown entity id: " + id);
    return entities_[it->second];
  }

  const std::vector<DiscourseEntity>& all() const { return entities_; }

  // Composites that list `id` as a member, in declaration order.
  std::vector<const DiscourseEntity*> composites_containing(const std::string& id) const {
    std::vector<const DiscourseEntity*> out;
    for (const auto& e : entities_)
      if (std::find(e.members.begin(), e.members.end(), id) != e.members.end()) out.push_back(&e);
    return out;
  }

  bool operator==(const EntityTable& other) const { return entities_ == other.entities_; }

 private:
  std::vector<DiscourseEntity> entities_;
  std::map<std::string, std::size_t> index_;
};

struct ParseNode {
  std::string id;     // document-unique
  std::string label;  // S, NP, NBAR, VP, PP, DET, N, V, free-form tags
  std::optional<std::string> token;  // present iff leaf
  std::vector<int> children;
  int parent = -1;
  int first_token = -1;  // index of leftmost dominated token, for precedence

  std::optional<std::string> entity_ref;  // NP realizing a declared entity
  std::optional<std::string> gold_ref;    // pronoun answer key
  bool is_pronoun = false;
  AgreementFeatures features;
  std::optional<std::string> requires_sort;
  std::optional<GrammaticalRole> role;
  bool underspecified = false;
  std::vector<std::string> fp_algorithms;  // manual false-positive marks
  std::vector<std::string> assumptions;    // e.g. speaker_identity

  bool leaf() const { return token.has_value(); }
  bool operator==(const ParseNode&) const = default;
};

// Literal tree description used by the corpus loader and by tests.
struct NodeSpec {
  std::string label;
  std::string token;  // non-empty => leaf
  std::vector<NodeSpec> children;

  std::string id;  // optional; generated when empty
  std::string entity;
  std::string gold;
  bool pron = false;
  AgreementFeatures features;
  std::string requires_sort;
  std::optional<GrammaticalRole> role;
  bool underspecified = false;
  std::vector<std::string> fp;
  std::vector<std::string> assumptions;
};

// One utterance tree stored as a flat node pool; nodes_[0] is the root.
// Immutable after construction.
class ParseTree {
 public:
  ParseTree() = default;

  // Flattens a NodeSpec. Nodes without explicit ids get "<prefix>#<preorder>".
  static ParseTree build(const NodeSpec& spec, const std::string& id_prefix = "n") {
    ParseTree t;
    t.add(spec, -1, id_prefix);
    t.finish();
    return t;
  }

  const ParseNode& at(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  const ParseNode& root() const { return nodes_.at(0); }
  int size() const { return static_cast<int>(nodes_.size()); }
  bool empty() const { return nodes_.empty(); }

  // Node indices in preorder (document order).
  std::vector<int> preorder() const {
    std::vector<int> out;
    out.reserve(nodes_.size());
    walk_preorder(0, out);
    return out;
  }

  std::vector<std::string> tokens() const {
    std::vector<std::string> out;
    for (int i : preorder())
      if (at(i).leaf()) out.push_back(*at(i).token);
    return out;
  }

  int find_by_id(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
      if (nodes_[static_cast<std::size_t>(i)].id == id) return i;
    return -1;
  }

  bool dominates(int a, int b) const {  // reflexive
    while (b != -1) {
      if (a == b) return true;
      b = at(b).parent;
    }
    return false;
  }

  // First strict ancestor with more than one child.
  int first_branching_ancestor(int n) const {
    for (int p = at(n).parent; p != -1; p = at(p).parent)
      if (at(p).children.size() > 1) return p;
    return -1;
  }

  // First strict ancestor labeled NP or S (Hobbs' "go up until you
  // encounter an NP or S node"; also the binding domain used by the
  // centering contra-index relation).
  int first_np_or_s_ancestor(int n) const {
    for (int p = at(n).parent; p != -1; p = at(p).parent)
      if (at(p).label == "NP" || at(p).label == "S") return p;
    return -1;
  }

  // Nearest strict ancestor labeled S.
  int minimal_clause(int n) const {
    for (int p = at(n).parent; p != -1; p = at(p).parent)
      if (at(p).label == "S") return p;
    return -1;
  }

  // True when a node with the given label lies strictly between descendant
  // `below` and ancestor `above`.
  bool label_strictly_between(int below, int above, const std::string& label) const {
    for (int p = at(below).parent; p != -1 && p != above; p = at(p).parent)
      if (at(p).label == label) return true;
    return false;
  }

  // The single NBAR child of an NP node, or -1.
  int nbar_child(int np) const {
    for (int c : at(np).children)
      if (at(c).label == "NBAR") return c;
    return -1;
  }

  bool operator==(const ParseTree& other) const { return nodes_ == other.nodes_; }

 private:
  int add(const NodeSpec& s, int parent, const std::string& prefix) {
    const int idx = static_cast<int>(nodes_.size());
    ParseNode n;
    n.id = s.id.empty() ? prefix + "#" + std::to_string(idx) : s.id;
    n.label = s.label;
    n.parent = parent;
    if (!s.token.empty()) n.token = s.token;
    if (!s.entity.empty()) n.entity_ref = s.entity;
    if (!s.gold.empty()) n.gold_ref = s.gold;
    n.is_pronoun = s.pron;
    n.features = s.features;
    if (!s.requires_sort.empty()) n.requires_sort = s.requires_sort;
    n.role = s.role;
    n.underspecified = s.underspecified;
    n.fp_algorithms = s.fp;
    n.assumptions = s.assumptions;
    nodes_.push_back(std::move(n));
    for (const auto& c : s.children) {
      int ci = add(c, idx, prefix);
      nodes_[static_cast<std::size_t>(idx)].children.push_back(ci);
    }
    return idx;
  }

  void finish() {
    int tok = 0;
    assign_first_token(0, tok);
  }

  int assign_first_token(int n, int& tok) {
    ParseNode& node = nodes_[static_cast<std::size_t>(n)];
    if (node.leaf()) {
      node.first_token = tok++;
      return node.first_token;
    }
    int first = -1;
    for (int c : node.children) {
      int f = assign_first_token(c, tok);
      if (first == -1) first = f;
    }
    node.first_token = first;
    return first;
  }

  void walk_preorder(int n, std::vector<int>& out) const {
    out.push_back(n);
    for (int c : at(n).children) walk_preorder(c, out);
  }

  std::vector<ParseNode> nodes_;
};

// Left-to-right breadth-first order over the whole tree: a node at depth d
// precedes every node at depth d+1, siblings keep child order.
inline std::vector<int> bfs_left_to_right(const ParseTree& tree) {
  std::vector<int> out;
  if (tree.empty()) return out;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    int n = q.front();
    q.pop();
    out.push_back(n);
    for (int c : tree.at(n).children) q.push(c);
  }
  return out;
}

// Chain node..ancestor inclusive, following parent links.
inline std::vector<int> path_to_ancestor(const ParseTree& tree, int node, int ancestor) {
  std::vector<int> path;
  int cur = node;
  while (cur != -1) {
    path.push_back(cur);
    if (cur == ancestor) return path;
    cur = tree.at(cur).parent;
  }
  throw std::domain_error("path_to_ancestor: node " + tree.at(ancestor).id +
                          " does not dominate " + tree.at(node).id);
}

namespace detail {
// Does the entity (or every member of a composite) satisfy a sort tag?
inline bool satisfies_sort(const DiscourseEntity& e, const std::string& sort,
                           const EntityTable& entities, int depth = 0) {
  if (depth > 4) return false;  // malformed cyclic composites
  if (e.sort && *e.sort == sort) return true;
  if (!e.composite()) return false;
  for (const auto& m : e.members) {
    if (!entities.contains(m)) return false;
    if (!satisfies_sort(entities.at(m), sort, entities, depth + 1)) return false;
  }
  return true;
}
}  // namespace detail

// Agreement + selectional acceptability of a candidate entity for a pronoun
// node. Sorts are corpus annotations, not inference.
inline bool acceptable(const ParseNode& pronoun, const DiscourseEntity& candidate,
                       const EntityTable& entities) {
  if (!pronoun.is_pronoun) throw std::domain_error("acceptable: node is not a pronoun");
  if (!features_unify(pronoun.features, candidate.features)) return false;
  if (pronoun.requires_sort && !detail::satisfies_sort(candidate, *pronoun.requires_sort, entities))
    return false;
  return true;
}

inline std::string to_string(Gender g) {
  switch (g) {
    case Gender::masc: return "masc";
    case Gender::fem: return "fem";
    case Gender::neut: return "neut";
    default: return "unknown";
  }
}
inline std::string to_string(Number n) {
  switch (n) {
    case Number::sing: return "sing";
    case Number::plur: return "plur";
    default: return "unknown";
  }
}
inline std::string to_string(Person p) { return p == Person::third ? "third" : "other"; }
inline std::string to_string(GrammaticalRole r) {
  switch (r) {
    case GrammaticalRole::subject: return "subject";
    case GrammaticalRole::object: return "object";
    case GrammaticalRole::indirect_object: return "indirect_object";
    case GrammaticalRole::complement: return "complement";
    case GrammaticalRole::adjunct: return "adjunct";
    case GrammaticalRole::possessor: return "possessor";
  }
  return "adjunct";
}

inline std::optional<Gender> gender_from_string(const std::string& s) {
  if (s == "masc") return Gender::masc;
  if (s == "fem") return Gender::fem;
  if (s == "neut") return Gender::neut;
  if (s == "unknown") return Gender::unknown;
  return std::nullopt;
}
inline std::optional<Number> number_from_string(const std::string& s) {
  if (s == "sing") return Number::sing;
  if (s == "plur") return Number::plur;
  if (s == "unknown") return Number::unknown;
  return std::nullopt;
}
inline std::optional<Person> person_from_string(const std::string& s) {
  if (s == "third") return Person::third;
  if (s == "other") return Person::other;
  return std::nullopt;
}
inline std::optional<GrammaticalRole> role_from_string(const std::string& s) {
  if (s == "subject") return GrammaticalRole::subject;
  if (s == "object") return GrammaticalRole::object;
  if (s == "indirect_object") return GrammaticalRole::indirect_object;
  if (s == "complement") return GrammaticalRole::complement;
  if (s == "adjunct") return GrammaticalRole::adjunct;
  if (s == "possessor") return GrammaticalRole::possessor;
  return std::nullopt;
}

}  // namespace coref
