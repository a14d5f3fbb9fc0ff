// Corpus file format: one JSON document per file, trees as nested objects
// {id,label,children|token,attrs}. Loading validates every structural
// invariant; validate() reports diagnostics without failing.

#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coref/treebank.hpp"

namespace coref {

enum class Genre { novel, news, task_dialogue };

inline std::string to_string(Genre g) {
  switch (g) {
    case Genre::novel: return "novel";
    case Genre::news: return "news";
    case Genre::task_dialogue: return "task_dialogue";
  }
  return "novel";
}
inline std::optional<Genre> genre_from_string(const std::string& s) {
  if (s == "novel") return Genre::novel;
  if (s == "news") return Genre::news;
  if (s == "task_dialogue") return Genre::task_dialogue;
  return std::nullopt;
}

struct Utterance {
  std::string id;
  std::string speaker;
  ParseTree tree;  // root label S
  bool paragraph_start = false;
  std::vector<std::string> cue_words;    // drawn from the leading tokens
  std::vector<std::string> task_actions; // e.g. pick-up
  std::optional<int> segment_id;         // filled by the segmenter

  bool operator==(const Utterance&) const = default;
};

struct Document {
  std::string id;
  Genre genre = Genre::novel;
  std::vector<Utterance> utterances;
  EntityTable entities;
  std::optional<std::string> global_focus;  // task dialogues only

  bool operator==(const Document&) const = default;
};

struct CorpusError : std::runtime_error {
  explicit CorpusError(const std::string& what) : std::runtime_error(what) {}
};

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string message;
  std::string where;  // node or utterance id

  std::string str() const {
    return std::string(severity == Severity::error ? "error" : "warning") + ": " + message +
           (where.empty() ? "" : " (at " + where + ")");
  }
};

namespace detail {

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline AgreementFeatures features_from_json(const nlohmann::json& a, const std::string& ctx) {
  AgreementFeatures f;
  if (a.contains("gender")) {
    auto g = gender_from_string(a.at("gender").get<std::string>());
    if (!g) throw CorpusError("bad gender value at " + ctx);
    f.gender = *g;
  }
  if (a.contains("number")) {
    auto n = number_from_string(a.at("number").get<std::string>());
    if (!n) throw CorpusError("bad number value at " + ctx);
    f.number = *n;
  }
  if (a.contains("person")) {
    auto p = person_from_string(a.at("person").get<std::string>());
    if (!p) throw CorpusError("bad person value at " + ctx);
    f.person = *p;
  }
  return f;
}

inline NodeSpec node_from_json(const nlohmann::json& j, const std::string& ctx) {
  if (!j.is_object()) throw CorpusError("tree node must be an object at " + ctx);
  NodeSpec s;
  if (j.contains("id")) s.id = j.at("id").get<std::string>();
  if (!j.contains("label")) throw CorpusError("tree node missing label at " + ctx);
  s.label = j.at("label").get<std::string>();
  const bool has_token = j.contains("token");
  const bool has_children = j.contains("children");
  if (has_token == has_children)
    throw CorpusError("tree node needs exactly one of token/children at " + ctx +
                      (s.id.empty() ? "" : " (" + s.id + ")"));
  if (has_token) s.token = j.at("token").get<std::string>();
  if (j.contains("attrs")) {
    const auto& a = j.at("attrs");
    if (a.contains("entity")) s.entity = a.at("entity").get<std::string>();
    if (a.contains("gold")) s.gold = a.at("gold").get<std::string>();
    if (a.contains("pron")) s.pron = a.at("pron").get<bool>();
    s.features = features_from_json(a, ctx);
    if (a.contains("sort")) s.requires_sort = a.at("sort").get<std::string>();
    if (a.contains("role")) {
      auto r = role_from_string(a.at("role").get<std::string>());
      if (!r) throw CorpusError("bad role value at " + ctx);
      s.role = r;
    }
    if (a.contains("underspecified")) s.underspecified = a.at("underspecified").get<bool>();
    if (a.contains("fp")) s.fp = a.at("fp").get<std::vector<std::string>>();
    if (a.contains("assumptions"))
      s.assumptions = a.at("assumptions").get<std::vector<std::string>>();
  }
  if (has_children)
    for (const auto& c : j.at("children")) s.children.push_back(node_from_json(c, ctx));
  return s;
}

inline nlohmann::ordered_json node_to_json(const ParseTree& t, int i) {
  const ParseNode& n = t.at(i);
  nlohmann::ordered_json j;
  j["id"] = n.id;
  j["label"] = n.label;
  nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
  if (n.entity_ref) attrs["entity"] = *n.entity_ref;
  if (n.gold_ref) attrs["gold"] = *n.gold_ref;
  if (n.is_pronoun) attrs["pron"] = true;
  if (n.features.gender != Gender::unknown) attrs["gender"] = to_string(n.features.gender);
  if (n.features.number != Number::unknown) attrs["number"] = to_string(n.features.number);
  if (n.features.person != Person::third) attrs["person"] = to_string(n.features.person);
  if (n.requires_sort) attrs["sort"] = *n.requires_sort;
  if (n.role) attrs["role"] = to_string(*n.role);
  if (n.underspecified) attrs["underspecified"] = true;
  if (!n.fp_algorithms.empty()) attrs["fp"] = n.fp_algorithms;
  if (!n.assumptions.empty()) attrs["assumptions"] = n.assumptions;
  if (!attrs.empty()) j["attrs"] = attrs;
  if (n.leaf()) {
    j["token"] = *n.token;
  } else {
    auto arr = nlohmann::ordered_json::array();
    for (int c : n.children) arr.push_back(node_to_json(t, c));
    j["children"] = arr;
  }
  return j;
}

}  // namespace detail

// Structural diagnostics over a loaded document. Empty result means every
// invariant holds; warnings do not fail a load.
inline std::vector<Diagnostic> validate(const Document& doc) {
  using Severity = Diagnostic::Severity;
  std::vector<Diagnostic> out;
  auto error = [&](const std::string& msg, const std::string& where) {
    out.push_back({Severity::error, msg, where});
  };
  auto warning = [&](const std::string& msg, const std::string& where) {
    out.push_back({Severity::warning, msg, where});
  };

  if (doc.utterances.empty()) error("document has no utterances", doc.id);

  for (const auto& e : doc.entities.all()) {
    if (!e.members.empty()) {
      std::vector<std::string> distinct = e.members;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      if (distinct.size() < 2) error("composite needs >=2 distinct members", e.id);
      for (const auto& m : e.members) {
        if (m == e.id) error("composite lists itself as member", e.id);
        if (!doc.entities.contains(m)) error("composite member not declared: " + m, e.id);
      }
      if (e.features.number != Number::plur) error("composite entity must be plural", e.id);
    }
  }

  if (doc.global_focus) {
    if (doc.genre != Genre::task_dialogue)
      error("global_focus only valid for task dialogues", doc.id);
    if (!doc.entities.contains(*doc.global_focus))
      error("global_focus names undeclared entity: " + *doc.global_focus, doc.id);
  }

  std::map<std::string, int> node_ids;
  std::map<std::string, int> utt_ids;
  for (const auto& u : doc.utterances) {
    if (++utt_ids[u.id] > 1) error("duplicate utterance id", u.id);
    if (u.tree.empty()) {
      error("utterance has no tree", u.id);
      continue;
    }
    if (u.tree.root().label != "S") error("utterance root must be labeled S", u.id);

    // cue words must come from the utterance-initial token span
    const auto toks = u.tree.tokens();
    for (const auto& cue : u.cue_words) {
      bool found = false;
      for (std::size_t i = 0; i < toks.size() && i < 4; ++i)
        if (detail::lower(toks[i]) == detail::lower(cue)) found = true;
      if (!found) error("cue word '" + cue + "' not among leading tokens", u.id);
    }

    for (int i = 0; i < u.tree.size(); ++i) {
      const ParseNode& n = u.tree.at(i);
      if (++node_ids[n.id] > 1) error("duplicate node id", n.id);
      if (n.leaf() != n.children.empty())
        error("children must be empty exactly when token present", n.id);
      if (n.is_pronoun) {
        if (n.label != "NP") error("pronoun node must be labeled NP", n.id);
        if (!n.gold_ref && !n.underspecified)
          error("pronoun without gold_ref and without underspecified flag", n.id);
        if (n.entity_ref) error("pronoun NP must not carry entity_ref", n.id);
      }
      if (n.entity_ref && !doc.entities.contains(*n.entity_ref))
        error("entity_ref names undeclared entity: " + *n.entity_ref, n.id);
      if (n.gold_ref && !doc.entities.contains(*n.gold_ref))
        error("gold_ref names undeclared entity: " + *n.gold_ref, n.id);
      if (n.label == "NP") {
        int nbars = 0;
        for (int c : n.children)
          if (u.tree.at(c).label == "NBAR") ++nbars;
        if (nbars > 1) error("NP has more than one NBAR child", n.id);
      }
    }

    // A subject-role NP should be the leftmost NP of its clause.
    for (int i = 0; i < u.tree.size(); ++i) {
      const ParseNode& n = u.tree.at(i);
      if (n.label != "NP" || !n.role || *n.role != GrammaticalRole::subject) continue;
      const int clause = u.tree.minimal_clause(i);
      for (int j = 0; j < u.tree.size(); ++j) {
        if (j == i || u.tree.at(j).label != "NP") continue;
        if (u.tree.minimal_clause(j) != clause) continue;
        if (u.tree.dominates(j, i) || u.tree.dominates(i, j)) continue;
        if (u.tree.at(j).first_token < n.first_token)
          warning("subject-role NP is not leftmost under its clause", n.id);
      }
    }
  }
  return out;
}

// Parse a document from JSON text. Throws CorpusError on malformed input or
// any error-severity validation diagnostic.
inline Document loads(const std::string& text, const std::string& origin = "<string>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CorpusError(origin + ": JSON parse error at byte " + std::to_string(e.byte) + ": " +
                      e.what());
  }
  Document doc;
  try {
    doc.id = j.at("id").get<std::string>();
    auto g = genre_from_string(j.at("genre").get<std::string>());
    if (!g) throw CorpusError(origin + ": bad genre");
    doc.genre = *g;
    std::vector<DiscourseEntity> ents;
    for (const auto& ej : j.value("entities", nlohmann::json::array())) {
      DiscourseEntity e;
      e.id = ej.at("id").get<std::string>();
      e.name = ej.value("name", e.id);
      if (ej.contains("features"))
        e.features = detail::features_from_json(ej.at("features"), "entity " + e.id);
      if (ej.contains("sort")) e.sort = ej.at("sort").get<std::string>();
      if (ej.contains("members")) e.members = ej.at("members").get<std::vector<std::string>>();
      ents.push_back(std::move(e));
    }
    doc.entities = EntityTable(std::move(ents));
    if (j.contains("global_focus")) doc.global_focus = j.at("global_focus").get<std::string>();
    for (const auto& uj : j.at("utterances")) {
      Utterance u;
      u.id = uj.at("id").get<std::string>();
      u.speaker = uj.value("speaker", "");
      u.paragraph_start = uj.value("paragraph_start", false);
      u.cue_words = uj.value("cue_words", std::vector<std::string>{});
      u.task_actions = uj.value("task_actions", std::vector<std::string>{});
      NodeSpec spec = detail::node_from_json(uj.at("tree"), "utterance " + u.id);
      u.tree = ParseTree::build(spec, u.id);
      doc.utterances.push_back(std::move(u));
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorpusError(origin + ": " + e.what());
  }

  const auto diags = validate(doc);
  for (const auto& d : diags)
    if (d.severity == Diagnostic::Severity::error)
      throw CorpusError(origin + ": validation failed: " + d.str());
  return doc;
}

inline Document load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return loads(ss.str(), path);
}

inline std::string saves(const Document& doc) {
  nlohmann::ordered_json j;
  j["id"] = doc.id;
  j["genre"] = to_string(doc.genre);
  if (doc.global_focus) j["global_focus"] = *doc.global_focus;
  auto ents = nlohmann::ordered_json::array();
  for (const auto& e : doc.entities.all()) {
    nlohmann::ordered_json ej;
    ej["id"] = e.id;
    ej["name"] = e.name;
    nlohmann::ordered_json f = nlohmann::ordered_json::object();
    if (e.features.gender != Gender::unknown) f["gender"] = to_string(e.features.gender);
    if (e.features.number != Number::unknown) f["number"] = to_string(e.features.number);
    if (e.features.person != Person::third) f["person"] = to_string(e.features.person);
    if (!f.empty()) ej["features"] = f;
    if (e.sort) ej["sort"] = *e.sort;
    if (!e.members.empty()) ej["members"] = e.members;
    ents.push_back(ej);
  }
  j["entities"] = ents;
  auto utts = nlohmann::ordered_json::array();
  for (const auto& u : doc.utterances) {
    nlohmann::ordered_json uj;
    uj["id"] = u.id;
    if (!u.speaker.empty()) uj["speaker"] = u.speaker;
    if (u.paragraph_start) uj["paragraph_start"] = true;
    if (!u.cue_words.empty()) uj["cue_words"] = u.cue_words;
    if (!u.task_actions.empty()) uj["task_actions"] = u.task_actions;
    uj["tree"] = detail::node_to_json(u.tree, 0);
    utts.push_back(uj);
  }
  j["utterances"] = utts;
  return j.dump(2) + "\n";
}

inline void save(const Document& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CorpusError("cannot write corpus file: " + path);
  out << saves(doc);
}

}  // namespace coref
