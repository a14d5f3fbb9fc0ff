// Tree-search pronoun resolution: a deterministic candidate stream over the
// parse trees of the current and previous utterances, plus a resolver that
// stops at the first acceptable antecedent.
//
// Step numbering follows the classic eight-step search: start at the pronoun
// NP (1), ascend to the first NP/S node X (2), sweep left of the path below X
// proposing NPs with an NP/S between them and X (3), when X is the highest S
// sweep previous sentences breadth-first (4), otherwise ascend again (5),
// propose an NP X whose NBAR the path avoided (6), sweep left of the path
// without descending below NP/S nodes, proposing NP and S nodes (7), loop (8).

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "coref/corpus.hpp"
#include "coref/treebank.hpp"

namespace coref {

struct HobbsProposal {
  int utt_index = -1;          // utterance the proposed node lives in
  int node = -1;               // index into that utterance's tree
  int step = 0;                // 3, 4, 6 or 7
  int sentence_distance = 0;   // 0 iff intrasentential (step != 4)
  std::optional<std::string> entity;  // unset for S nodes and bare NPs
  bool via_set_collection = false;    // resolver expanded a member to its set

  bool operator==(const HobbsProposal&) const = default;
};

// Dynamic referents of pronouns resolved earlier in the run (node id ->
// entity id). Proposing an already-resolved pronoun NP surfaces its current
// referent, which is what lets errors chain forward.
using ResolutionContext = std::map<std::string, std::string>;

namespace hobbs_detail {

inline std::optional<std::string> proposal_entity(const ParseNode& n,
                                                  const ResolutionContext& context) {
  if (n.entity_ref) return n.entity_ref;
  if (n.is_pronoun) {
    auto it = context.find(n.id);
    if (it != context.end()) return it->second;
  }
  return std::nullopt;
}

// Breadth-first sweep of the region below `top` and to the left of the
// ancestor path `path` (path.front() is the bottom node, path.back() == top).
// Path nodes admit only children strictly left of their path child and are
// never themselves visited; the path bottom is not expanded. `prune_np_s`
// selects step-7 behaviour (visit NP/S without descending).
inline void sweep_left_of_path(const ParseTree& tree, const std::vector<int>& path,
                               bool prune_np_s, const std::function<bool(int)>& visit) {
  std::map<int, int> path_child;  // path node -> its child on the path
  for (std::size_t i = 0; i + 1 < path.size(); ++i) path_child[path[i + 1]] = path[i];
  const int bottom = path.front();

  std::queue<int> q;
  q.push(path.back());
  while (!q.empty()) {
    int n = q.front();
    q.pop();
    auto pc = path_child.find(n);
    if (pc != path_child.end()) {
      // Path node: admit children up to the path child; the right side is
      // excluded, the path bottom is not part of the left region.
      for (int c : tree.at(n).children) {
        if (c == pc->second) {
          if (c != bottom) q.push(c);
          break;
        }
        q.push(c);
      }
      continue;
    }
    if (!visit(n)) return;
    const std::string& lab = tree.at(n).label;
    if (prune_np_s && (lab == "NP" || lab == "S")) continue;  // do not go below
    for (int c : tree.at(n).children) q.push(c);
  }
}

}  // namespace hobbs_detail

// Walks the candidate sequence for `pronoun_node` of utterance `utt_index`,
// invoking `visit` on each proposal until it returns false or the stream is
// exhausted (history goes back arbitrarily far, i.e. to the document start).
inline void for_each_candidate(const Document& doc, int utt_index, int pronoun_node,
                               const ResolutionContext& context,
                               const std::function<bool(const HobbsProposal&)>& visit) {
  const ParseTree& tree = doc.utterances.at(static_cast<std::size_t>(utt_index)).tree;
  const ParseNode& pronoun = tree.at(pronoun_node);
  if (!pronoun.is_pronoun)
    throw std::domain_error("hobbs: node " + pronoun.id + " is not a pronoun");

  auto propose = [&](int utt, int node, int step, int dist) {
    const ParseNode& n = doc.utterances.at(static_cast<std::size_t>(utt)).tree.at(node);
    HobbsProposal p;
    p.utt_index = utt;
    p.node = node;
    p.step = step;
    p.sentence_distance = dist;
    p.entity = hobbs_detail::proposal_entity(n, context);
    return visit(p);
  };

  // Step 1-2: ascend from the pronoun NP to the first NP or S node.
  const int start = pronoun_node;
  int x = tree.first_np_or_s_ancestor(start);
  if (x == -1)
    throw std::domain_error("hobbs: pronoun " + pronoun.id + " not dominated by any NP or S");
  std::vector<int> path = path_to_ancestor(tree, start, x);

  // Step 3: propose NPs left of the path that have an NP or S node strictly
  // between them and X (the contra-indexing guard).
  {
    bool keep_going = true;
    hobbs_detail::sweep_left_of_path(tree, path, /*prune_np_s=*/false, [&](int n) {
      if (tree.at(n).label == "NP" &&
          (tree.label_strictly_between(n, x, "NP") || tree.label_strictly_between(n, x, "S"))) {
        keep_going = propose(utt_index, n, 3, 0);
        return keep_going;
      }
      return true;
    });
    if (!keep_going) return;
  }

  // Steps 4-8.
  for (;;) {
    const bool highest_s = tree.at(x).label == "S" && tree.minimal_clause(x) == -1;
    if (highest_s) {
      // Step 4: previous sentences in reverse chronological order, each
      // traversed left-to-right breadth-first; NP nodes are proposed.
      for (int j = utt_index - 1; j >= 0; --j) {
        const ParseTree& prev = doc.utterances.at(static_cast<std::size_t>(j)).tree;
        for (int n : bfs_left_to_right(prev)) {
          if (prev.at(n).label != "NP") continue;
          if (!propose(j, n, 4, utt_index - j)) return;
        }
      }
      return;
    }

    // Step 5: ascend to the next NP or S node.
    const int old_x = x;
    x = tree.first_np_or_s_ancestor(old_x);
    if (x == -1) throw std::domain_error("hobbs: malformed tree above " + tree.at(old_x).id);
    path = path_to_ancestor(tree, old_x, x);

    // Step 6: propose X itself when it is an NP whose NBAR the path avoided.
    if (tree.at(x).label == "NP") {
      const int nbar = tree.nbar_child(x);
      bool through_nbar = false;
      for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (path[i] == nbar) through_nbar = true;
      if (!through_nbar && x != start) {
        if (!propose(utt_index, x, 6, 0)) return;
      }
    }

    // Step 7: sweep left of the path, proposing NP and S nodes but not
    // descending below them.
    {
      bool keep_going = true;
      hobbs_detail::sweep_left_of_path(tree, path, /*prune_np_s=*/true, [&](int n) {
        const std::string& lab = tree.at(n).label;
        if (lab == "NP" || lab == "S") {
          keep_going = propose(utt_index, n, 7, 0);
          return keep_going;
        }
        return true;
      });
      if (!keep_going) return;
    }
  }
}

// Full candidate sequence, in order. Deterministic: two invocations yield
// identical sequences.
inline std::vector<HobbsProposal> candidate_stream(const Document& doc, int utt_index,
                                                   int pronoun_node,
                                                   const ResolutionContext& context = {}) {
  std::vector<HobbsProposal> out;
  for_each_candidate(doc, utt_index, pronoun_node, context, [&](const HobbsProposal& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

// First acceptable proposal, applying the set collection assumption: when a
// singular member of a declared composite is proposed for a plural pronoun,
// the composite is acceptable in its place (flagged in the result).
inline std::optional<HobbsProposal> resolve(const Document& doc, int utt_index, int pronoun_node,
                                            const ResolutionContext& context = {}) {
  const ParseTree& tree = doc.utterances.at(static_cast<std::size_t>(utt_index)).tree;
  const ParseNode& pronoun = tree.at(pronoun_node);
  std::optional<HobbsProposal> result;
  for_each_candidate(doc, utt_index, pronoun_node, context, [&](const HobbsProposal& p) {
    if (!p.entity) return true;  // S nodes and bare NPs carry no entity
    const DiscourseEntity& e = doc.entities.at(*p.entity);
    if (acceptable(pronoun, e, doc.entities)) {
      result = p;
      return false;
    }
    for (const DiscourseEntity* comp : doc.entities.composites_containing(e.id)) {
      if (acceptable(pronoun, *comp, doc.entities)) {
        result = p;
        result->entity = comp->id;
        result->via_set_collection = true;
        return false;
      }
    }
    return true;
  });
  return result;
}

}  // namespace coref
