// Report assembly and rendering. One code path computes per-document
// evaluations (safe to run in parallel across documents); assembly and
// rendering are deterministic so repeated runs emit identical bytes.

#pragma once

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coref/evaluator.hpp"
#include "coref/resolver.hpp"

namespace coref {

struct RunSpec {
  Algorithm algo = Algorithm::hobbs;
  ExtensionConfig ext;

  std::string label() const {
    std::string s = to_string(algo);
    if (algo == Algorithm::bfp) {
      if (ext.global_focus_enabled) s += "+global-focus";
      if (ext.event_cf_enabled) s += "+event-cf";
      if (ext.carter_isc_enabled) s += "+carter";
    }
    return s;
  }
};

struct DocEval {
  std::string path;
  Document doc;
  std::vector<DocumentRun> runs;                    // one per spec
  std::vector<std::vector<PronounOutcome>> scored;  // one per spec
  std::vector<ChainReport> chains;                  // one per spec
};

inline DocEval evaluate_document(const std::string& path, Document doc,
                                 const std::vector<RunSpec>& specs) {
  DocEval ev;
  ev.path = path;
  ev.doc = std::move(doc);
  for (const auto& spec : specs) {
    DocumentRun run = run_document(ev.doc, spec.algo, spec.ext);
    auto outcomes = score(run, ev.doc);
    Resolver resolver = [&spec](const Document& d, const ForcedMap& forced) {
      return run_document(d, spec.algo, spec.ext, forced);
    };
    ev.chains.push_back(error_chains(outcomes, ev.doc, resolver));
    ev.runs.push_back(std::move(run));
    ev.scored.push_back(std::move(outcomes));
  }
  return ev;
}

struct GenreCount {
  int correct = 0;
  int total = 0;
};

struct AlgorithmReport {
  std::string label;
  std::map<std::string, GenreCount> by_genre;
  int correct = 0;
  int total = 0;
  int root = 0;
  int chained = 0;
  std::map<std::string, int> assumption_counts;  // among correct outcomes
  int fp_count = 0;                              // manual marks among correct outcomes
};

struct Report {
  std::vector<std::string> corpora;
  std::vector<RunSpec> specs;
  std::vector<AlgorithmReport> algorithms;
  std::optional<CrossTable> cross;  // compare mode
  std::vector<std::pair<std::string, ChiSquareResult>> chi;
  std::vector<std::vector<PronounOutcome>> outcomes;  // per spec, all documents
  std::vector<const DocEval*> docs;                   // assembly order
};

inline Report assemble_report(const std::vector<DocEval>& evals,
                              const std::vector<RunSpec>& specs) {
  Report rep;
  rep.specs = specs;
  rep.outcomes.resize(specs.size());
  for (std::size_t s = 0; s < specs.size(); ++s) {
    AlgorithmReport ar;
    ar.label = specs[s].label();
    rep.algorithms.push_back(ar);
  }
  for (const auto& ev : evals) {
    rep.corpora.push_back(ev.path);
    rep.docs.push_back(&ev);
    for (std::size_t s = 0; s < specs.size(); ++s) {
      AlgorithmReport& ar = rep.algorithms[s];
      for (const auto& o : ev.scored[s]) {
        GenreCount& g = ar.by_genre[to_string(o.genre)];
        ++g.total;
        ++ar.total;
        if (o.verdict == Verdict::correct) {
          ++g.correct;
          ++ar.correct;
          for (const auto& f : o.assumption_flags) ++ar.assumption_counts[f];
          if (o.fp_annotated) ++ar.fp_count;
        }
        rep.outcomes[s].push_back(o);
      }
      ar.root += ev.chains[s].root;
      ar.chained += ev.chains[s].chained;
    }
  }

  if (specs.size() == 2) {
    rep.cross = cross_distribution(rep.outcomes[0], rep.outcomes[1]);
    // Overall A-vs-B correct/incorrect comparison.
    const auto& a = rep.algorithms[0];
    const auto& b = rep.algorithms[1];
    if (a.total > 0 && b.total > 0 && a.correct + b.correct > 0 &&
        (a.total - a.correct) + (b.total - b.correct) > 0) {
      rep.chi.emplace_back(
          a.label + "_vs_" + b.label,
          chi_square({{double(a.correct), double(a.total - a.correct)},
                      {double(b.correct), double(b.total - b.correct)}}));
    }
  }
  // Per-algorithm comparison across genres (requires >=2 genres with data
  // and no zero expected counts).
  for (const auto& ar : rep.algorithms) {
    std::vector<std::vector<double>> t(2);
    int genres = 0;
    for (const auto& [g, c] : ar.by_genre) {
      (void)g;
      if (c.total == 0) continue;
      t[0].push_back(double(c.correct));
      t[1].push_back(double(c.total - c.correct));
      ++genres;
    }
    if (genres >= 2) {
      try {
        rep.chi.emplace_back(ar.label + "_across_genres", chi_square(t));
      } catch (const std::domain_error&) {
        // zero expected count somewhere: comparison not well-defined
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

namespace report_detail {

inline std::vector<std::string> ordered_genres() { return {"novel", "news", "task_dialogue"}; }
inline std::vector<std::string> ordered_categories() {
  return {"he", "she", "it", "they", "other"};
}

inline std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(6) << v;
  return ss.str();
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace report_detail

struct RenderOptions {
  bool per_pronoun = true;
  bool correct_chains = false;
  bool trace = false;
};

inline std::string render_tsv(const Report& rep, const RenderOptions& opts = {}) {
  using namespace report_detail;
  std::ostringstream out;
  out << "# pronoun resolution report\n";
  out << "corpora\t" << join(rep.corpora, ",") << "\n";
  out << "algorithms\t";
  {
    std::vector<std::string> labels;
    for (const auto& a : rep.algorithms) labels.push_back(a.label);
    out << join(labels, ",") << "\n";
  }

  out << "\n[correct]\ngenre";
  for (const auto& a : rep.algorithms) out << "\t" << a.label << "\tN";
  out << "\n";
  for (const auto& g : ordered_genres()) {
    bool any = false;
    for (const auto& a : rep.algorithms)
      if (a.by_genre.count(g) && a.by_genre.at(g).total > 0) any = true;
    if (!any) continue;
    out << g;
    for (const auto& a : rep.algorithms) {
      const auto it = a.by_genre.find(g);
      const GenreCount c = it == a.by_genre.end() ? GenreCount{} : it->second;
      out << "\t" << c.correct << "\t" << c.total;
    }
    out << "\n";
  }
  out << "total";
  for (const auto& a : rep.algorithms) out << "\t" << a.correct << "\t" << a.total;
  out << "\n";

  if (rep.cross) {
    out << "\n[cross]\ncategory\tboth\tneither\t" << rep.algorithms[0].label << "_only\t"
        << rep.algorithms[1].label << "_only\ttotal\n";
    for (const auto& cat : ordered_categories()) {
      auto it = rep.cross->by_category.find(cat);
      if (it == rep.cross->by_category.end()) continue;
      const CrossCell& c = it->second;
      out << cat << "\t" << c.both << "\t" << c.neither << "\t" << c.a_only << "\t" << c.b_only
          << "\t" << c.total() << "\n";
    }
    const CrossCell& t = rep.cross->total;
    out << "total\t" << t.both << "\t" << t.neither << "\t" << t.a_only << "\t" << t.b_only
        << "\t" << t.total() << "\n";
  }

  out << "\n[chains]\nalgorithm\troot\tchained\tfailures\n";
  for (const auto& a : rep.algorithms)
    out << a.label << "\t" << a.root << "\t" << a.chained << "\t" << a.root + a.chained << "\n";

  if (opts.correct_chains) {
    out << "\n[chain_adjusted]\nalgorithm\traw_correct\tchained\tadjusted_correct\tN\n";
    for (const auto& a : rep.algorithms)
      out << a.label << "\t" << a.correct << "\t" << a.chained << "\t" << a.correct + a.chained
          << "\t" << a.total << "\n";
  }

  if (!rep.chi.empty()) {
    out << "\n[chi_square]\ncomparison\tstatistic\tdof\tsignificant_at_05\n";
    for (const auto& [name, r] : rep.chi)
      out << name << "\t" << fmt(r.statistic) << "\t" << r.dof << "\t"
          << (r.significant_at_05 ? "yes" : "no") << "\n";
  }

  out << "\n[assumptions]\nalgorithm\tflag\tcorrect_with_flag\n";
  for (const auto& a : rep.algorithms)
    for (const auto& [flag, n] : a.assumption_counts)
      out << a.label << "\t" << flag << "\t" << n << "\n";

  out << "\n[false_positives]\nalgorithm\tmanual_fp_correct\n";
  for (const auto& a : rep.algorithms) out << a.label << "\t" << a.fp_count << "\n";

  if (opts.per_pronoun) {
    out << "\n[pronouns]\nalgorithm\tdoc\tutterance\tnode\ttoken\tcategory\tgold\tproposed"
           "\tverdict\tflags\n";
    for (std::size_t s = 0; s < rep.outcomes.size(); ++s)
      for (const auto& o : rep.outcomes[s]) {
        std::vector<std::string> flags(o.assumption_flags.begin(), o.assumption_flags.end());
        if (o.fp_annotated) flags.push_back("fp");
        out << rep.algorithms[s].label << "\t" << o.doc_id << "\t" << o.utt_id << "\t"
            << o.node_id << "\t" << o.token << "\t" << o.category << "\t"
            << (o.gold ? *o.gold : "-") << "\t" << (o.proposed.empty() ? "-" : join(o.proposed, ","))
            << "\t" << to_string(o.verdict) << "\t" << (flags.empty() ? "-" : join(flags, ","))
            << "\n";
      }
  }

  if (opts.trace) {
    out << "\n[trace]\nalgorithm\tdoc\tutterance\tsegment_initial\ttransparent\tgenerated"
           "\tfiltered\tsurvivors\tcb\ttransition\tcf\n";
    for (const DocEval* ev : rep.docs)
      for (std::size_t s = 0; s < ev->runs.size(); ++s) {
        const DocumentRun& run = ev->runs[s];
        if (run.algorithm != Algorithm::bfp) continue;
        for (const auto& t : run.centering_trace) {
          std::vector<std::string> cf;
          for (const auto& e : t.chosen.cf) cf.push_back(e.entity);
          out << rep.algorithms[s].label << "\t" << ev->doc.id << "\t" << t.utt_id << "\t"
              << (t.segment_initial ? "yes" : "no") << "\t" << (t.transparent ? "yes" : "no")
              << "\t" << t.generated << "\t" << t.filtered << "\t" << t.survivors << "\t"
              << (t.chosen.cb ? *t.chosen.cb : "-") << "\t" << to_string(t.chosen.transition)
              << "\t" << (cf.empty() ? "-" : join(cf, ",")) << "\n";
        }
      }
  }
  return out.str();
}

inline std::string render_segments_tsv(const std::vector<DocEval>& evals) {
  std::ostringstream out;
  out << "# segmentation report\ndoc\tutterance\tsegment\tboundary_reason\n";
  for (const auto& ev : evals) {
    const SegmentMap map = segment(ev.doc);
    for (const auto& u : ev.doc.utterances) {
      auto reason = map.boundary_reason.find(u.id);
      out << ev.doc.id << "\t" << u.id << "\t" << map.segment_of.at(u.id) << "\t"
          << (reason == map.boundary_reason.end() ? "-" : to_string(reason->second)) << "\n";
    }
  }
  return out.str();
}

inline nlohmann::ordered_json report_json(const Report& rep, const RenderOptions& opts = {}) {
  nlohmann::ordered_json j;
  j["corpora"] = rep.corpora;
  auto algos = nlohmann::ordered_json::array();
  for (const auto& a : rep.algorithms) {
    nlohmann::ordered_json aj;
    aj["label"] = a.label;
    aj["correct"] = a.correct;
    aj["total"] = a.total;
    nlohmann::ordered_json genres = nlohmann::ordered_json::object();
    for (const auto& g : report_detail::ordered_genres()) {
      auto it = a.by_genre.find(g);
      if (it == a.by_genre.end() || it->second.total == 0) continue;
      genres[g] = {{"correct", it->second.correct}, {"total", it->second.total}};
    }
    aj["by_genre"] = genres;
    aj["chains"] = {{"root", a.root}, {"chained", a.chained}};
    if (opts.correct_chains)
      aj["chain_adjusted"] = {{"raw_correct", a.correct},
                              {"adjusted_correct", a.correct + a.chained}};
    nlohmann::ordered_json assume = nlohmann::ordered_json::object();
    for (const auto& [flag, n] : a.assumption_counts) assume[flag] = n;
    aj["assumption_assisted"] = assume;
    aj["false_positives"] = a.fp_count;
    algos.push_back(aj);
  }
  j["algorithms"] = algos;

  if (rep.cross) {
    nlohmann::ordered_json cj = nlohmann::ordered_json::object();
    auto cell = [](const CrossCell& c) {
      return nlohmann::ordered_json{
          {"both", c.both}, {"neither", c.neither}, {"a_only", c.a_only}, {"b_only", c.b_only}};
    };
    for (const auto& cat : report_detail::ordered_categories()) {
      auto it = rep.cross->by_category.find(cat);
      if (it != rep.cross->by_category.end()) cj[cat] = cell(it->second);
    }
    cj["total"] = cell(rep.cross->total);
    j["cross_distribution"] = cj;
  }

  if (!rep.chi.empty()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [name, r] : rep.chi)
      arr.push_back({{"comparison", name},
                     {"statistic", r.statistic},
                     {"dof", r.dof},
                     {"significant_at_05", r.significant_at_05}});
    j["chi_square"] = arr;
  }

  if (opts.per_pronoun) {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < rep.outcomes.size(); ++s)
      for (const auto& o : rep.outcomes[s]) {
        nlohmann::ordered_json oj;
        oj["algorithm"] = rep.algorithms[s].label;
        oj["doc"] = o.doc_id;
        oj["utterance"] = o.utt_id;
        oj["node"] = o.node_id;
        oj["token"] = o.token;
        oj["category"] = o.category;
        if (o.gold) oj["gold"] = *o.gold;
        oj["proposed"] = o.proposed;
        oj["verdict"] = to_string(o.verdict);
        oj["flags"] = std::vector<std::string>(o.assumption_flags.begin(),
                                               o.assumption_flags.end());
        oj["fp"] = o.fp_annotated;
        arr.push_back(oj);
      }
    j["pronouns"] = arr;
  }

  if (opts.trace) {
    auto arr = nlohmann::ordered_json::array();
    for (const DocEval* ev : rep.docs)
      for (std::size_t s = 0; s < ev->runs.size(); ++s) {
        const DocumentRun& run = ev->runs[s];
        if (run.algorithm != Algorithm::bfp) continue;
        for (const auto& t : run.centering_trace) {
          nlohmann::ordered_json tj;
          tj["algorithm"] = rep.algorithms[s].label;
          tj["doc"] = ev->doc.id;
          tj["utterance"] = t.utt_id;
          tj["segment_initial"] = t.segment_initial;
          tj["transparent"] = t.transparent;
          tj["generated"] = t.generated;
          tj["filtered"] = t.filtered;
          tj["survivors"] = t.survivors;
          if (t.chosen.cb) tj["cb"] = *t.chosen.cb;
          tj["transition"] = to_string(t.chosen.transition);
          std::vector<std::string> cf;
          for (const auto& e : t.chosen.cf) cf.push_back(e.entity);
          tj["cf"] = cf;
          arr.push_back(tj);
        }
      }
    j["trace"] = arr;
  }
  return j;
}

inline std::string render_json(const Report& rep, const RenderOptions& opts = {}) {
  return report_json(rep, opts).dump(2) + "\n";
}

}  // namespace coref
