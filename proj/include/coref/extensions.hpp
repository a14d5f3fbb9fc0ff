// Three independently toggleable modifications to the centering baseline:
// a global focus candidate at segment-initial utterances, event entities on
// the forward-centers list, and Carter's preference for intra-sentential
// candidates when no usable discourse center exists.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coref/centering.hpp"
#include "coref/corpus.hpp"
#include "coref/hobbs.hpp"

namespace coref {

struct ExtensionConfig {
  bool global_focus_enabled = false;
  bool event_cf_enabled = false;
  bool carter_isc_enabled = false;

  bool any() const { return global_focus_enabled || event_cf_enabled || carter_isc_enabled; }
};

// At a segment-initial utterance the document's global focus joins the
// candidate scope at the lowest rank: it never displaces an ordinary
// candidate, it only becomes available when nothing else survives.
inline std::vector<ScopedCandidate> apply_global_focus(std::vector<ScopedCandidate> scope,
                                                       const std::optional<std::string>& focus,
                                                       bool segment_initial) {
  if (!focus || !segment_initial) return scope;
  for (const auto& c : scope)
    if (c.entity == *focus) return scope;
  scope.push_back({*focus, /*global_tier=*/true});
  return scope;
}

// Append event entities annotated on the utterance's VP and S nodes after
// all NP entries, VP events before S events.
inline CfList extend_cf_with_events(CfList cf, const ParseTree& tree) {
  auto append_label = [&](const std::string& label) {
    for (int i : tree.preorder()) {
      const ParseNode& n = tree.at(i);
      if (n.label != label || !n.entity_ref) continue;
      bool present = false;
      for (const auto& e : cf)
        if (e.entity == *n.entity_ref) present = true;
      if (!present) cf.push_back({*n.entity_ref, i, 5});
    }
  };
  append_label("VP");
  append_label("S");
  return cf;
}

// Carter's ISC rule: when no discourse center has been established, or the
// established center is rejected for this pronoun on agreement/sort grounds
// or by contra-indexing, return the intra-sentential slice of the Hobbs
// candidate stream as the preferred candidate ordering. Otherwise the normal
// flow stands.
inline std::optional<std::vector<HobbsProposal>> carter_isc(
    const Document& doc, int utt_index, int pronoun_node,
    const std::optional<CenterState>& prev, const ResolutionContext& context = {}) {
  const ParseTree& tree = doc.utterances.at(static_cast<std::size_t>(utt_index)).tree;
  const ParseNode& pronoun = tree.at(pronoun_node);

  bool center_usable = false;
  if (prev && prev->cb) {
    const DiscourseEntity& cb = doc.entities.at(*prev->cb);
    center_usable = acceptable(pronoun, cb, doc.entities);
    if (center_usable) {
      for (int i = 0; i < tree.size() && center_usable; ++i) {
        const ParseNode& n = tree.at(i);
        if (n.entity_ref && *n.entity_ref == cb.id && contra_indexed(tree, pronoun_node, i))
          center_usable = false;
      }
    }
  }
  if (center_usable) return std::nullopt;

  std::vector<HobbsProposal> iscs;
  for_each_candidate(doc, utt_index, pronoun_node, context, [&](const HobbsProposal& p) {
    if (p.sentence_distance == 0) iscs.push_back(p);
    return true;
  });
  return iscs;
}

}  // namespace coref
