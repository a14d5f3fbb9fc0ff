// Centering: forward-center construction, contra-indexing from tree
// geometry, the generate/filter/rank interpretation pipeline, and transition
// classification. Tied best interpretations are returned in parallel, never
// sampled.

#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coref/corpus.hpp"
#include "coref/treebank.hpp"

namespace coref {

enum class Transition { continue_, retain, smooth_shift, rough_shift, none };

inline std::string to_string(Transition t) {
  switch (t) {
    case Transition::continue_: return "continue";
    case Transition::retain: return "retain";
    case Transition::smooth_shift: return "smooth_shift";
    case Transition::rough_shift: return "rough_shift";
    case Transition::none: return "none";
  }
  return "none";
}

inline int transition_rank(Transition t) {
  switch (t) {
    case Transition::continue_: return 0;
    case Transition::retain: return 1;
    case Transition::smooth_shift: return 2;
    case Transition::rough_shift: return 3;
    case Transition::none: return 4;
  }
  return 4;
}

struct CfEntry {
  std::string entity;
  int node = -1;  // realizing NP node (or VP/S for appended events)
  int rank = 4;   // role_rank of the realizing NP

  bool operator==(const CfEntry&) const = default;
};
using CfList = std::vector<CfEntry>;

struct CenterState {
  std::optional<std::string> cb;
  CfList cf;
  Transition transition = Transition::none;

  bool operator==(const CenterState&) const = default;
};

struct Interpretation {
  // pronoun node id -> assigned entity id; covers exactly the pronouns.
  std::map<std::string, std::string> assignment;
  std::set<std::string> set_collection;  // pronouns resolved via set collection
  CenterState state;

  bool operator==(const Interpretation&) const = default;
};

// ---------------------------------------------------------------------------
// Contra-indexing.
//
// Computed from tree geometry alone:
//   * a node never contra-indexes itself;
//   * a pronoun inside an NP is contra-indexed with that NP unless a clause
//     (S) boundary intervenes, so "the cap with the hole in IT" blocks
//     IT = cap while "a CAR that doesn't pollute ITS environment" allows
//     ITS = car;
//   * otherwise X contra-indexes Y when X's first branching ancestor
//     dominates Y and X lies inside Y's binding domain. The binding domain
//     is the first NP or S above Y, which keeps possessors ("the SENATE ...
//     ITS debate") and embedded-clause pronouns free of their commanders.
// ---------------------------------------------------------------------------
inline bool contra_indexed(const ParseTree& tree, int a, int b) {
  if (a == b) return false;

  if (tree.dominates(a, b) || tree.dominates(b, a)) {
    const int outer = tree.dominates(a, b) ? a : b;
    const int inner = outer == a ? b : a;
    return !tree.label_strictly_between(inner, outer, "S");
  }

  for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    const int fba = tree.first_branching_ancestor(x);
    if (fba == -1 || !tree.dominates(fba, y)) continue;
    const int bd = tree.first_np_or_s_ancestor(y);
    if (bd != -1 && tree.dominates(bd, x)) return true;
  }
  return false;
}

inline bool contra_indexed(const ParseTree& tree_a, int a, const ParseTree& tree_b, int b) {
  if (&tree_a != &tree_b) throw std::domain_error("contra_indexed: nodes from different trees");
  return contra_indexed(tree_a, a, b);
}

// Symmetric relation over the NP nodes of one tree, precomputed per
// utterance.
class ContraIndex {
 public:
  ContraIndex() = default;
  explicit ContraIndex(const ParseTree& tree) {
    std::vector<int> nps;
    for (int i = 0; i < tree.size(); ++i)
      if (tree.at(i).label == "NP") nps.push_back(i);
    for (std::size_t i = 0; i < nps.size(); ++i)
      for (std::size_t j = i + 1; j < nps.size(); ++j)
        if (contra_indexed(tree, nps[i], nps[j])) pairs_.insert(key(nps[i], nps[j]));
  }

  bool operator()(int a, int b) const { return a != b && pairs_.count(key(a, b)) != 0; }

 private:
  static std::pair<int, int> key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
  std::set<std::pair<int, int>> pairs_;
};

// ---------------------------------------------------------------------------
// Forward centers.
// ---------------------------------------------------------------------------

// Cf of one utterance under a pronoun assignment: every entity-realizing NP
// (direct entity_ref or assigned pronoun) appears once, ordered
// subject > object > indirect object > complement > adjunct, document order
// within a rank. In strict mode a pronoun missing from the assignment is a
// generator bug.
inline CfList build_cf(const ParseTree& tree, const EntityTable& entities,
                       const std::map<std::string, std::string>& assignment,
                       bool strict = true) {
  CfList collected;
  for (int i : tree.preorder()) {
    const ParseNode& n = tree.at(i);
    if (n.label != "NP" && !n.entity_ref) continue;
    std::optional<std::string> entity;
    if (n.entity_ref) {
      entity = *n.entity_ref;
    } else if (n.is_pronoun) {
      auto it = assignment.find(n.id);
      if (it != assignment.end()) {
        entity = it->second;
      } else if (strict) {
        throw std::logic_error("build_cf: pronoun " + n.id + " has no assignment");
      }
    }
    if (!entity) continue;
    if (!entities.contains(*entity)) throw std::logic_error("build_cf: unknown entity " + *entity);
    collected.push_back({*entity, i, role_rank(n.role)});
  }
  std::stable_sort(collected.begin(), collected.end(),
                   [](const CfEntry& a, const CfEntry& b) { return a.rank < b.rank; });
  CfList out;
  std::set<std::string> seen;
  for (auto& e : collected)
    if (seen.insert(e.entity).second) out.push_back(std::move(e));
  return out;
}

// Four-way transition classification. An absent previous state, or a
// previous state with undefined Cb, satisfies the Cb-equality clause.
inline Transition classify_transition(const CenterState& state,
                                      const std::optional<CenterState>& prev) {
  bool cb_eq;
  if (!prev || !prev->cb) {
    cb_eq = true;
  } else {
    cb_eq = state.cb.has_value() && *state.cb == *prev->cb;
  }
  const bool cb_is_head =
      state.cb.has_value() && !state.cf.empty() && state.cf.front().entity == *state.cb;
  if (cb_eq) return cb_is_head ? Transition::continue_ : Transition::retain;
  return cb_is_head ? Transition::smooth_shift : Transition::rough_shift;
}

// ---------------------------------------------------------------------------
// Interpretation proposal.
// ---------------------------------------------------------------------------

// One candidate an individual pronoun may be assigned. Global-tier
// candidates (the global focus) only win when no ordinary assignment
// survives.
struct ScopedCandidate {
  std::string entity;
  bool global_tier = false;

  bool operator==(const ScopedCandidate&) const = default;
};

// Ordered candidate scope per pronoun node index.
using CandidateScope = std::function<std::vector<ScopedCandidate>(int pronoun_node)>;

struct ProposeOptions {
  // Assignments fixed before generation (oracle forcing, Carter overrides).
  std::map<std::string, std::string> fixed;
  // Pronouns whose fixed assignment came with a set-collection expansion.
  std::set<std::string> fixed_set_collection;
  // Applied to each interpretation's Cf after construction (event anaphora).
  std::function<CfList(const CfList&)> cf_transform;
};

struct ProposeResult {
  std::vector<Interpretation> interpretations;  // tied at the best rank
  int generated = 0;
  int filtered = 0;
  int survivors = 0;
};

namespace centering_detail {

struct PronounCandidate {
  std::string entity;
  bool global_tier = false;
  bool set_collection = false;
};

// Acceptable candidates for one pronoun, applying the set collection
// assumption to singular members of declared composites.
inline std::vector<PronounCandidate> acceptable_candidates(
    const ParseNode& pronoun, const std::vector<ScopedCandidate>& scope,
    const EntityTable& entities) {
  std::vector<PronounCandidate> out;
  std::set<std::string> seen;
  for (const auto& c : scope) {
    if (!entities.contains(c.entity)) continue;
    const DiscourseEntity& e = entities.at(c.entity);
    if (acceptable(pronoun, e, entities)) {
      if (seen.insert(e.id).second) out.push_back({e.id, c.global_tier, false});
      continue;
    }
    for (const DiscourseEntity* comp : entities.composites_containing(e.id))
      if (acceptable(pronoun, *comp, entities) && seen.insert(comp->id).second)
        out.push_back({comp->id, c.global_tier, true});
  }
  return out;
}

}  // namespace centering_detail

// The interpretation pipeline for one utterance:
//   GENERATE the cross-product of acceptable candidate assignments for the
//   utterance's pronouns (candidate scope supplied by the caller);
//   FILTER assignments that co-index contra-indexed nodes, derive the Cb as
//   the highest-ranked element of prev.cf realized in the utterance, and
//   enforce Rule 1 (a realized Cb must be pronominalized when anything is);
//   RANK survivors continue > retain > smooth shift > rough shift and return
//   every interpretation tied at the best rank. Segment-initial calls
//   (prev absent) rank ordinary assignments above global-tier ones.
inline ProposeResult propose(const ParseTree& tree, const EntityTable& entities,
                             const std::optional<CenterState>& prev, const CandidateScope& scope,
                             const ProposeOptions& options = {}) {
  ProposeResult result;
  const ContraIndex contra(tree);

  std::vector<int> pronouns;
  for (int i : tree.preorder())
    if (tree.at(i).is_pronoun) pronouns.push_back(i);

  std::vector<int> free_pronouns;
  for (int p : pronouns)
    if (!options.fixed.count(tree.at(p).id)) free_pronouns.push_back(p);

  std::vector<std::vector<centering_detail::PronounCandidate>> candidates;
  for (int p : free_pronouns)
    candidates.push_back(centering_detail::acceptable_candidates(tree.at(p), scope(p), entities));

  // Entities realized by full NPs, and the realizing nodes per entity
  // (pronoun assignments are added per interpretation).
  std::map<std::string, std::vector<int>> full_np_nodes;
  for (int i : tree.preorder()) {
    const ParseNode& n = tree.at(i);
    if (n.entity_ref) full_np_nodes[*n.entity_ref].push_back(i);
  }

  std::vector<std::size_t> pick(candidates.size(), 0);
  bool done = false;
  if (!candidates.empty())
    for (const auto& c : candidates)
      if (c.empty()) done = true;  // some pronoun has no candidate: no interpretations

  std::vector<std::pair<int, Interpretation>> survivors;  // rank, interpretation
  int best_rank = std::numeric_limits<int>::max();

  while (!done) {
    ++result.generated;
    Interpretation interp;
    interp.assignment = options.fixed;
    for (const auto& id : options.fixed_set_collection) interp.set_collection.insert(id);
    for (std::size_t k = 0; k < free_pronouns.size(); ++k) {
      const auto& cand = candidates[k][pick[k]];
      interp.assignment[tree.at(free_pronouns[k]).id] = cand.entity;
      if (cand.set_collection) interp.set_collection.insert(tree.at(free_pronouns[k]).id);
    }

    bool uses_global = false;
    for (std::size_t k = 0; k < free_pronouns.size(); ++k)
      if (candidates[k][pick[k]].global_tier) uses_global = true;

    // Contra-indexing filter: no co-indexed contra pair, whether the other
    // realization is a pronoun or a full NP. Oracle-forced assignments are
    // exempt; they are the answer key.
    bool ok = true;
    for (std::size_t k = 0; k < pronouns.size() && ok; ++k) {
      const std::string& idk = tree.at(pronouns[k]).id;
      const bool fixed_k = options.fixed.count(idk) != 0;
      const std::string& ek = interp.assignment.at(idk);
      for (std::size_t l = k + 1; l < pronouns.size() && ok; ++l) {
        const std::string& idl = tree.at(pronouns[l]).id;
        if (fixed_k && options.fixed.count(idl)) continue;
        const std::string& el = interp.assignment.at(idl);
        if (ek == el && contra(pronouns[k], pronouns[l])) ok = false;
      }
      if (fixed_k) continue;
      auto it = full_np_nodes.find(ek);
      if (it != full_np_nodes.end())
        for (int n : it->second)
          if (contra(pronouns[k], n)) ok = false;
    }

    // Cb: highest-ranked element of prev.cf realized in this utterance.
    std::set<std::string> realized;
    for (const auto& [e, _] : full_np_nodes) realized.insert(e);
    std::set<std::string> pronominalized;
    for (const auto& [_, e] : interp.assignment) {
      realized.insert(e);
      pronominalized.insert(e);
    }
    std::optional<std::string> cb;
    if (prev)
      for (const auto& entry : prev->cf)
        if (realized.count(entry.entity)) {
          cb = entry.entity;
          break;
        }

    // Rule 1: if anything is pronominalized the Cb must be.
    if (ok && cb && !pronouns.empty() && !pronominalized.count(*cb)) ok = false;

    if (ok) {
      interp.state.cb = cb;
      CfList cf = build_cf(tree, entities, interp.assignment, /*strict=*/true);
      interp.state.cf = options.cf_transform ? options.cf_transform(cf) : cf;
      interp.state.transition =
          prev ? classify_transition(interp.state, prev) : Transition::none;
      const int rank =
          prev ? transition_rank(interp.state.transition) : (uses_global ? 1 : 0);
      if (rank < best_rank) best_rank = rank;
      survivors.emplace_back(rank, std::move(interp));
    } else {
      ++result.filtered;
    }

    // Advance the cross-product; the first pronoun varies slowest so output
    // order follows candidate salience.
    if (candidates.empty()) break;
    std::size_t k = candidates.size();
    while (k > 0) {
      --k;
      if (++pick[k] < candidates[k].size()) break;
      pick[k] = 0;
      if (k == 0) done = true;
    }
  }

  for (auto& [rank, interp] : survivors) {
    if (rank != best_rank) continue;
    if (std::find(result.interpretations.begin(), result.interpretations.end(), interp) ==
        result.interpretations.end())
      result.interpretations.push_back(std::move(interp));
  }
  result.survivors = static_cast<int>(result.interpretations.size());
  return result;
}

}  // namespace coref
