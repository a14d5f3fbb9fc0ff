// Document-level drivers: enumerate third-person pronoun sites, run one
// algorithm over a document (optionally with oracle-forced assignments for
// replay analysis), and surface per-pronoun proposals plus centering traces.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coref/centering.hpp"
#include "coref/corpus.hpp"
#include "coref/extensions.hpp"
#include "coref/hobbs.hpp"
#include "coref/segmenter.hpp"

namespace coref {

enum class Algorithm { hobbs, bfp };

inline std::string to_string(Algorithm a) { return a == Algorithm::hobbs ? "hobbs" : "bfp"; }
inline std::optional<Algorithm> algorithm_from_string(const std::string& s) {
  if (s == "hobbs") return Algorithm::hobbs;
  if (s == "bfp") return Algorithm::bfp;
  return std::nullopt;
}

// Folded pronoun category: possessives and accusatives count with their
// nominative ("his" with "he", "her" with "she").
inline std::string pronoun_category(const std::string& token) {
  const std::string t = detail::lower(token);
  if (t == "he" || t == "him" || t == "his" || t == "himself") return "he";
  if (t == "she" || t == "her" || t == "hers" || t == "herself") return "she";
  if (t == "it" || t == "its" || t == "itself") return "it";
  if (t == "they" || t == "them" || t == "their" || t == "theirs" || t == "themselves")
    return "they";
  return "other";
}

struct PronounSite {
  int utt_index = -1;
  int node = -1;
  std::string node_id;
  std::string utt_id;
  std::string token;
  std::string category;
  std::optional<std::string> gold;
  bool underspecified = false;
  std::vector<std::string> fp_algorithms;
  std::vector<std::string> assumptions;
};

inline std::vector<PronounSite> pronoun_sites(const Document& doc) {
  std::vector<PronounSite> out;
  for (std::size_t i = 0; i < doc.utterances.size(); ++i) {
    const Utterance& u = doc.utterances[i];
    for (int n : u.tree.preorder()) {
      const ParseNode& node = u.tree.at(n);
      if (!node.is_pronoun) continue;
      PronounSite s;
      s.utt_index = static_cast<int>(i);
      s.node = n;
      s.node_id = node.id;
      s.utt_id = u.id;
      for (int c : u.tree.preorder())
        if (u.tree.dominates(n, c) && u.tree.at(c).leaf()) {
          s.token = *u.tree.at(c).token;
          break;
        }
      s.category = pronoun_category(s.token);
      s.gold = node.gold_ref;
      s.underspecified = node.underspecified;
      s.fp_algorithms = node.fp_algorithms;
      s.assumptions = node.assumptions;
      out.push_back(std::move(s));
    }
  }
  return out;
}

struct PronounResolution {
  PronounSite site;
  std::vector<std::string> proposed;  // distinct entities, salience order
  bool set_collection = false;
  bool forced = false;
};

struct UtteranceTrace {
  std::string utt_id;
  bool segment_initial = false;
  bool transparent = false;  // no pronouns and nothing realized: state carried
  int generated = 0;
  int filtered = 0;
  int survivors = 0;
  CenterState chosen;
};

struct DocumentRun {
  Algorithm algorithm = Algorithm::hobbs;
  std::string doc_id;
  std::vector<PronounResolution> pronouns;     // document order
  std::vector<UtteranceTrace> centering_trace; // bfp only
  SegmentMap segments;                         // bfp only
};

// node id -> entity id; pronouns whose answers are dictated by the oracle.
using ForcedMap = std::map<std::string, std::string>;

// Observer invoked once per non-transparent utterance of a centering run
// with the exact pipeline inputs and output (drives the brute-force oracle
// comparison).
struct ProposeCall {
  int utt_index = -1;
  std::optional<CenterState> prev;
  std::map<int, std::vector<ScopedCandidate>> scopes;  // per free pronoun node
  ProposeOptions options;
  ProposeResult result;
};
using ProposeObserver = std::function<void(const Document&, const ProposeCall&)>;

inline DocumentRun run_hobbs(const Document& doc, const ForcedMap& forced = {}) {
  DocumentRun run;
  run.algorithm = Algorithm::hobbs;
  run.doc_id = doc.id;
  ResolutionContext context;
  for (const auto& site : pronoun_sites(doc)) {
    PronounResolution r;
    r.site = site;
    auto f = forced.find(site.node_id);
    if (f != forced.end()) {
      r.proposed = {f->second};
      r.forced = true;
      context[site.node_id] = f->second;
    } else {
      auto proposal = resolve(doc, site.utt_index, site.node, context);
      if (proposal && proposal->entity) {
        r.proposed = {*proposal->entity};
        r.set_collection = proposal->via_set_collection;
        context[site.node_id] = *proposal->entity;
      }
    }
    run.pronouns.push_back(std::move(r));
  }
  return run;
}

namespace resolver_detail {

inline bool shares_np_ancestor(const ParseTree& tree, int np, int pronoun) {
  for (int a = tree.at(pronoun).parent; a != -1; a = tree.at(a).parent)
    if (tree.at(a).label == "NP" && tree.dominates(a, np)) return true;
  return false;
}

// Candidate scope for one pronoun: the previous utterance's forward centers
// in rank order, then intrasentential candidates. Segment-initial utterances
// draw on every entity-realizing NP preceding the pronoun; elsewhere only
// NPs sharing a complex-NP host with the pronoun qualify.
inline std::vector<ScopedCandidate> baseline_scope(const ParseTree& tree, int pronoun,
                                                   const std::optional<CenterState>& prev,
                                                   bool segment_initial) {
  std::vector<ScopedCandidate> out;
  std::set<std::string> seen;
  if (!segment_initial && prev)
    for (const auto& e : prev->cf)
      if (seen.insert(e.entity).second) out.push_back({e.entity, false});
  const int p_tok = tree.at(pronoun).first_token;
  for (int i : tree.preorder()) {
    const ParseNode& n = tree.at(i);
    if (!n.entity_ref || n.is_pronoun) continue;
    if (n.first_token >= p_tok) continue;
    if (!segment_initial && !shares_np_ancestor(tree, i, pronoun)) continue;
    if (seen.insert(*n.entity_ref).second) out.push_back({*n.entity_ref, false});
  }
  return out;
}

// State threaded past an utterance none of whose interpretations survived:
// full NPs still realize entities even when the pronouns stay unresolved.
inline CenterState fallback_state(const ParseTree& tree, const EntityTable& entities,
                                  const std::optional<CenterState>& prev,
                                  const std::function<CfList(const CfList&)>& cf_transform) {
  CenterState state;
  std::set<std::string> realized;
  for (int i : tree.preorder())
    if (tree.at(i).entity_ref) realized.insert(*tree.at(i).entity_ref);
  if (prev)
    for (const auto& e : prev->cf)
      if (realized.count(e.entity)) {
        state.cb = e.entity;
        break;
      }
  CfList cf = build_cf(tree, entities, {}, /*strict=*/false);
  state.cf = cf_transform ? cf_transform(cf) : cf;
  state.transition = prev ? classify_transition(state, prev) : Transition::none;
  return state;
}

}  // namespace resolver_detail

inline DocumentRun run_bfp(const Document& doc, const ExtensionConfig& ext = {},
                           const ForcedMap& forced = {},
                           const ProposeObserver& observer = nullptr) {
  DocumentRun run;
  run.algorithm = Algorithm::bfp;
  run.doc_id = doc.id;
  run.segments = segment(doc);

  const auto sites = pronoun_sites(doc);
  std::map<std::string, PronounResolution> by_node;
  for (const auto& s : sites) {
    PronounResolution r;
    r.site = s;
    by_node[s.node_id] = std::move(r);
  }

  std::function<CfList(const CfList&)> cf_transform;
  ResolutionContext context;  // referents chosen so far, for Carter orderings

  std::optional<CenterState> prev;
  for (std::size_t i = 0; i < doc.utterances.size(); ++i) {
    const Utterance& u = doc.utterances[i];
    const ParseTree& tree = u.tree;
    const bool segment_initial = run.segments.boundary_reason.count(u.id) != 0;
    if (segment_initial) prev = std::nullopt;

    if (ext.event_cf_enabled) {
      cf_transform = [&tree](const CfList& cf) { return extend_cf_with_events(cf, tree); };
    } else {
      cf_transform = nullptr;
    }

    std::vector<int> pronouns;
    for (int n : tree.preorder())
      if (tree.at(n).is_pronoun) pronouns.push_back(n);

    bool realizes_anything = !pronouns.empty();
    for (int n : tree.preorder())
      if (tree.at(n).entity_ref) realizes_anything = true;

    UtteranceTrace trace;
    trace.utt_id = u.id;
    trace.segment_initial = segment_initial;

    if (!realizes_anything) {
      // Contentless utterance ("ok."): the center state passes through.
      trace.transparent = true;
      if (prev) trace.chosen = *prev;
      run.centering_trace.push_back(trace);
      continue;
    }

    ProposeOptions opts;
    opts.cf_transform = cf_transform;
    for (int p : pronouns) {
      const std::string& id = tree.at(p).id;
      auto f = forced.find(id);
      if (f != forced.end()) {
        opts.fixed[id] = f->second;
        by_node[id].forced = true;
        continue;
      }
      if (!ext.carter_isc_enabled) continue;
      auto override_stream = carter_isc(doc, static_cast<int>(i), p, prev, context);
      if (!override_stream) continue;
      // First acceptable intra-sentential candidate wins, set collection
      // applying as usual; an empty ordering falls back to the normal flow.
      for (const auto& proposal : *override_stream) {
        if (!proposal.entity) continue;
        const DiscourseEntity& e = doc.entities.at(*proposal.entity);
        if (acceptable(tree.at(p), e, doc.entities)) {
          opts.fixed[id] = e.id;
          break;
        }
        bool found = false;
        for (const DiscourseEntity* comp : doc.entities.composites_containing(e.id))
          if (acceptable(tree.at(p), *comp, doc.entities)) {
            opts.fixed[id] = comp->id;
            opts.fixed_set_collection.insert(id);
            found = true;
            break;
          }
        if (found) break;
      }
    }

    std::map<int, std::vector<ScopedCandidate>> scopes;
    for (int p : pronouns) {
      if (opts.fixed.count(tree.at(p).id)) continue;
      auto scope = resolver_detail::baseline_scope(tree, p, prev, segment_initial);
      if (ext.global_focus_enabled && doc.genre == Genre::task_dialogue)
        scope = apply_global_focus(std::move(scope), doc.global_focus, segment_initial);
      scopes[p] = std::move(scope);
    }

    auto scope_fn = [&scopes](int p) -> std::vector<ScopedCandidate> {
      auto it = scopes.find(p);
      return it == scopes.end() ? std::vector<ScopedCandidate>{} : it->second;
    };

    ProposeResult result = propose(tree, doc.entities, prev, scope_fn, opts);
    trace.generated = result.generated;
    trace.filtered = result.filtered;
    trace.survivors = result.survivors;

    if (observer) {
      ProposeCall call;
      call.utt_index = static_cast<int>(i);
      call.prev = prev;
      call.scopes = scopes;
      call.options = opts;
      call.result = result;
      observer(doc, call);
    }

    if (result.interpretations.empty()) {
      for (int p : pronouns) {
        auto f = opts.fixed.find(tree.at(p).id);
        if (f != opts.fixed.end()) {
          by_node[tree.at(p).id].proposed = {f->second};
          context[tree.at(p).id] = f->second;
        }
      }
      CenterState state =
          resolver_detail::fallback_state(tree, doc.entities, prev, cf_transform);
      trace.chosen = state;
      prev = state;
      run.centering_trace.push_back(trace);
      continue;
    }

    for (int p : pronouns) {
      const std::string& id = tree.at(p).id;
      PronounResolution& r = by_node[id];
      for (const auto& interp : result.interpretations) {
        const std::string& e = interp.assignment.at(id);
        if (std::find(r.proposed.begin(), r.proposed.end(), e) == r.proposed.end())
          r.proposed.push_back(e);
        if (interp.set_collection.count(id)) r.set_collection = true;
      }
      context[id] = result.interpretations.front().assignment.at(id);
    }

    trace.chosen = result.interpretations.front().state;
    prev = result.interpretations.front().state;
    run.centering_trace.push_back(trace);
  }

  for (const auto& s : sites) run.pronouns.push_back(by_node[s.node_id]);
  return run;
}

inline DocumentRun run_document(const Document& doc, Algorithm algo,
                                const ExtensionConfig& ext = {}, const ForcedMap& forced = {}) {
  return algo == Algorithm::hobbs ? run_hobbs(doc, forced) : run_bfp(doc, ext, forced);
}

}  // namespace coref
