// Evaluation methodology: strict success scoring (ties that disagree fail
// even when the answer is among them), both/neither/only cross-distributions
// per pronoun category, error-chain analysis by forced-oracle replay, and
// Pearson chi-square tests against fixed 0.05 critical values.

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coref/corpus.hpp"
#include "coref/resolver.hpp"

namespace coref {

enum class Verdict { correct, wrong, ambiguous_failure, no_antecedent, underspecified_failure };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::correct: return "correct";
    case Verdict::wrong: return "wrong";
    case Verdict::ambiguous_failure: return "ambiguous_failure";
    case Verdict::no_antecedent: return "no_antecedent";
    case Verdict::underspecified_failure: return "underspecified_failure";
  }
  return "wrong";
}

struct PronounOutcome {
  std::string doc_id;
  std::string utt_id;
  std::string node_id;
  Genre genre = Genre::novel;
  std::string algorithm;
  std::string category;  // he / she / it / they
  std::string token;
  std::vector<std::string> proposed;
  std::optional<std::string> gold;
  Verdict verdict = Verdict::wrong;
  std::set<std::string> assumption_flags;  // set_collection, speaker_identity, ...
  bool fp_annotated = false;               // manual false-positive mark, this algorithm

  bool failure() const { return verdict != Verdict::correct; }
};

// Score one run against the document's gold annotations.
//   correct  <=> every tied interpretation assigns the gold entity, or the
//                gold is a composite and the proposal is one of its members
//                (set collection, recorded as an assumption flag);
//   ties disagreeing on the pronoun fail as ambiguous even when the gold is
//   among them; underspecified pronouns always fail as underspecified.
inline std::vector<PronounOutcome> score(const DocumentRun& run, const Document& doc) {
  const auto sites = pronoun_sites(doc);
  if (run.pronouns.size() != sites.size())
    throw std::domain_error("score: run does not cover the document's pronouns");
  std::vector<PronounOutcome> out;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const PronounResolution& r = run.pronouns[i];
    if (r.site.node_id != sites[i].node_id)
      throw std::domain_error("score: run/document pronoun mismatch at " + sites[i].node_id);
    PronounOutcome o;
    o.doc_id = doc.id;
    o.utt_id = r.site.utt_id;
    o.node_id = r.site.node_id;
    o.genre = doc.genre;
    o.algorithm = to_string(run.algorithm);
    o.category = r.site.category;
    o.token = r.site.token;
    o.proposed = r.proposed;
    o.gold = r.site.gold;
    for (const auto& a : r.site.assumptions) o.assumption_flags.insert(a);
    if (r.set_collection) o.assumption_flags.insert("set_collection");
    for (const auto& fp : r.site.fp_algorithms)
      if (fp == o.algorithm) o.fp_annotated = true;

    if (r.site.underspecified) {
      o.verdict = Verdict::underspecified_failure;
    } else if (r.proposed.empty()) {
      o.verdict = Verdict::no_antecedent;
    } else if (r.proposed.size() > 1) {
      o.verdict = Verdict::ambiguous_failure;
    } else {
      const std::string& p = r.proposed.front();
      bool correct = o.gold && p == *o.gold;
      if (!correct && o.gold && doc.entities.contains(*o.gold)) {
        const DiscourseEntity& g = doc.entities.at(*o.gold);
        if (g.composite() &&
            std::find(g.members.begin(), g.members.end(), p) != g.members.end()) {
          correct = true;
          o.assumption_flags.insert("set_collection");
        }
      }
      o.verdict = correct ? Verdict::correct : Verdict::wrong;
    }
    out.push_back(std::move(o));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cross-distribution.
// ---------------------------------------------------------------------------

struct CrossCell {
  int both = 0;
  int neither = 0;
  int a_only = 0;
  int b_only = 0;

  int total() const { return both + neither + a_only + b_only; }
  bool operator==(const CrossCell&) const = default;
};

struct CrossTable {
  std::map<std::string, CrossCell> by_category;
  CrossCell total;
};

// Partition every pronoun into both/neither/A-only/B-only per category.
// Both runs must cover the identical pronoun set.
inline CrossTable cross_distribution(const std::vector<PronounOutcome>& a,
                                     const std::vector<PronounOutcome>& b) {
  if (a.size() != b.size())
    throw std::domain_error("cross_distribution: runs cover different pronoun sets");
  CrossTable table;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].doc_id != b[i].doc_id || a[i].node_id != b[i].node_id)
      throw std::domain_error("cross_distribution: pronoun mismatch at " + a[i].node_id);
    CrossCell& cell = table.by_category[a[i].category];
    const bool ca = a[i].verdict == Verdict::correct;
    const bool cb = b[i].verdict == Verdict::correct;
    if (ca && cb) {
      ++cell.both;
      ++table.total.both;
    } else if (!ca && !cb) {
      ++cell.neither;
      ++table.total.neither;
    } else if (ca) {
      ++cell.a_only;
      ++table.total.a_only;
    } else {
      ++cell.b_only;
      ++table.total.b_only;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Error chains.
// ---------------------------------------------------------------------------

struct ChainReport {
  int root = 0;
  int chained = 0;
  std::vector<std::string> root_ids;
  std::vector<std::string> chained_ids;

  int failures() const { return root + chained; }
};

using Resolver = std::function<DocumentRun(const Document&, const ForcedMap&)>;

// Forced-oracle replay: walk the failures in document order; a failure is
// chained when re-running the resolver with every earlier failing pronoun
// forced to gold turns it into a success, otherwise it is a root error.
inline ChainReport error_chains(const std::vector<PronounOutcome>& outcomes, const Document& doc,
                                const Resolver& resolver) {
  ChainReport report;
  std::vector<const PronounOutcome*> failures;
  for (const auto& o : outcomes)
    if (o.failure()) failures.push_back(&o);

  for (std::size_t i = 0; i < failures.size(); ++i) {
    ForcedMap forced;
    for (std::size_t j = 0; j < i; ++j)
      if (failures[j]->gold) forced[failures[j]->node_id] = *failures[j]->gold;
    const DocumentRun rerun = resolver(doc, forced);
    const auto rescored = score(rerun, doc);
    bool now_correct = false;
    for (const auto& o : rescored)
      if (o.node_id == failures[i]->node_id) now_correct = o.verdict == Verdict::correct;
    if (now_correct) {
      ++report.chained;
      report.chained_ids.push_back(failures[i]->node_id);
    } else {
      ++report.root;
      report.root_ids.push_back(failures[i]->node_id);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Chi-square.
// ---------------------------------------------------------------------------

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  bool significant_at_05 = false;
};

// 0.05 critical values for dof 1..10.
inline double chi_square_critical_05(int dof) {
  static const double table[] = {3.841, 5.991, 7.815, 9.488,  11.070,
                                 12.592, 14.067, 15.507, 16.919, 18.307};
  if (dof < 1 || dof > 10)
    throw std::domain_error("chi_square: dof " + std::to_string(dof) + " outside critical table");
  return table[dof - 1];
}

// Pearson statistic over an r x c count table. Every expected cell count
// must be positive.
inline ChiSquareResult chi_square(const std::vector<std::vector<double>>& table) {
  const std::size_t rows = table.size();
  if (rows < 2) throw std::domain_error("chi_square: need at least 2 rows");
  const std::size_t cols = table.front().size();
  if (cols < 2) throw std::domain_error("chi_square: need at least 2 columns");
  for (const auto& row : table)
    if (row.size() != cols) throw std::domain_error("chi_square: ragged table");

  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double n = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      row_sum[r] += table[r][c];
      col_sum[c] += table[r][c];
      n += table[r][c];
    }
  if (n <= 0.0) throw std::domain_error("chi_square: empty table");

  ChiSquareResult result;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double expected = row_sum[r] * col_sum[c] / n;
      if (expected <= 0.0)
        throw std::domain_error("chi_square: zero expected count in cell (" + std::to_string(r) +
                                "," + std::to_string(c) + ")");
      const double d = table[r][c] - expected;
      result.statistic += d * d / expected;
    }
  result.dof = static_cast<int>((rows - 1) * (cols - 1));
  result.significant_at_05 = result.statistic > chi_square_critical_05(result.dof);
  return result;
}

}  // namespace coref
