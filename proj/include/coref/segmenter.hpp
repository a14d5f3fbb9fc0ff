// Discourse segmentation from orthography, anaphora distribution, cue words
// and task structure. Centering operates within the resulting segments.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "coref/corpus.hpp"

namespace coref {

enum class BoundaryReason { document_start, paragraph, cue_word, task_action };

inline std::string to_string(BoundaryReason r) {
  switch (r) {
    case BoundaryReason::document_start: return "document_start";
    case BoundaryReason::paragraph: return "paragraph";
    case BoundaryReason::cue_word: return "cue_word";
    case BoundaryReason::task_action: return "task_action";
  }
  return "document_start";
}

struct SegmentMap {
  // utterance id -> segment id; segment ids are contiguous from 0 in
  // document order.
  std::map<std::string, int> segment_of;
  // utterance id -> reason, for utterances that open a segment.
  std::map<std::string, BoundaryReason> boundary_reason;

  int segments() const {
    int max_id = -1;
    for (const auto& [_, s] : segment_of) max_id = std::max(max_id, s);
    return max_id + 1;
  }

  bool operator==(const SegmentMap&) const = default;
};

namespace detail {

inline const std::set<std::string>& segment_cues() {
  static const std::set<std::string> cues = {"next", "then", "now"};
  return cues;
}

// Paragraph exception: the first sentence of the paragraph continues the
// previous discourse when it has a subject pronoun, or a pronoun that no
// earlier NP in the same sentence can match.
inline bool paragraph_continues(const Utterance& u, const EntityTable& entities) {
  for (int i = 0; i < u.tree.size(); ++i) {
    const ParseNode& n = u.tree.at(i);
    if (!n.is_pronoun) continue;
    if (n.role && *n.role == GrammaticalRole::subject) return true;
    bool matched = false;
    for (int j = 0; j < u.tree.size(); ++j) {
      const ParseNode& m = u.tree.at(j);
      if (m.label != "NP" || m.is_pronoun) continue;
      if (m.first_token >= n.first_token) continue;
      const AgreementFeatures feats =
          m.entity_ref ? entities.at(*m.entity_ref).features : m.features;
      if (features_unify(n.features, feats)) matched = true;
    }
    if (!matched) return true;
  }
  return false;
}

}  // namespace detail

// Assign segment ids. Task dialogues break on pick-up actions or the cue
// words next/then/now; published texts break on paragraphs unless the
// paragraph-initial sentence is anaphorically bound to what precedes.
inline SegmentMap segment(const Document& doc) {
  SegmentMap map;
  int seg = -1;
  for (std::size_t i = 0; i < doc.utterances.size(); ++i) {
    const Utterance& u = doc.utterances[i];
    std::optional<BoundaryReason> reason;
    if (i == 0) {
      reason = BoundaryReason::document_start;
    } else if (doc.genre == Genre::task_dialogue) {
      bool pickup = false;
      for (const auto& a : u.task_actions)
        if (detail::lower(a) == "pick-up") pickup = true;
      bool cued = false;
      for (const auto& c : u.cue_words)
        if (detail::segment_cues().count(detail::lower(c))) cued = true;
      if (pickup)
        reason = BoundaryReason::task_action;
      else if (cued)
        reason = BoundaryReason::cue_word;
    } else {
      if (u.paragraph_start && !detail::paragraph_continues(u, doc.entities))
        reason = BoundaryReason::paragraph;
    }
    if (reason) {
      ++seg;
      map.boundary_reason[u.id] = *reason;
    }
    map.segment_of[u.id] = seg;
  }
  return map;
}

}  // namespace coref
