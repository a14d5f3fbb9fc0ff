// Command-line front end: run one algorithm over annotated corpora, compare
// two, or report segmentation. Exit codes: 0 ok, 2 corpus/data error,
// 64 usage error.

#include <algorithm>
#include <atomic>
#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "coref/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitUsage = 64;

struct CommonOpts {
  std::vector<std::string> files;
  std::string format = "tsv";
  bool trace = false;
  bool correct_chains = false;
  bool seed_less = false;
  unsigned jobs = 1;
  coref::ExtensionConfig ext;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_ext) {
  cmd->add_option("files", o.files, "corpus files (*.json)")->required();
  cmd->add_option("--format", o.format, "output format: tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));
  cmd->add_flag("--trace", o.trace, "include per-utterance centering trace");
  cmd->add_flag("--correct-chains", o.correct_chains,
                "report chain-adjusted correct counts alongside raw counts");
  cmd->add_option("--jobs", o.jobs, "worker threads over documents")->check(CLI::Range(1u, 64u));
  cmd->add_flag("--seed-less", o.seed_less,
                "rejected: every run is deterministic, there is no seed to drop");
  if (with_ext) {
    cmd->add_flag("--global-focus", o.ext.global_focus_enabled,
                  "make the document's global focus available at segment-initial utterances");
    cmd->add_flag("--event-cf", o.ext.event_cf_enabled,
                  "append annotated VP/S event entities to the forward centers");
    cmd->add_flag("--carter", o.ext.carter_isc_enabled,
                  "prefer intra-sentential candidates when no usable center exists");
  }
}

// Load and evaluate documents with a small worker pool; results keep the
// sorted-path order regardless of scheduling.
int evaluate_all(const CommonOpts& o, const std::vector<coref::RunSpec>& specs,
                 std::vector<coref::DocEval>& evals) {
  std::vector<std::string> files = o.files;
  std::sort(files.begin(), files.end());
  evals.resize(files.size());
  std::vector<std::exception_ptr> errors(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      try {
        evals[i] = coref::evaluate_document(files[i], coref::load(files[i]), specs);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<unsigned>(o.jobs, static_cast<unsigned>(files.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t + 1 < std::max(1u, n); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) {
      try {
        std::rethrow_exception(e);
      } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitData;
      }
    }
  return kExitOk;
}

int emit_report(const CommonOpts& o, const std::vector<coref::RunSpec>& specs) {
  if (o.seed_less) {
    std::cerr << "error: --seed-less rejected; runs are deterministic and take no seed\n";
    return kExitUsage;
  }
  std::vector<coref::DocEval> evals;
  if (int rc = evaluate_all(o, specs, evals); rc != kExitOk) return rc;
  const coref::Report rep = coref::assemble_report(evals, specs);
  coref::RenderOptions ropts;
  ropts.correct_chains = o.correct_chains;
  ropts.trace = o.trace;
  std::cout << (o.format == "json" ? coref::render_json(rep, ropts)
                                   : coref::render_tsv(rep, ropts));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pronoun resolution toolkit: tree-search and centering resolvers"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  std::string algo_name = "hobbs";
  CLI::App* run = app.add_subcommand("run", "resolve every third-person pronoun");
  run->add_option("--algo", algo_name, "algorithm: hobbs or bfp")
      ->check(CLI::IsMember({"hobbs", "bfp"}));
  add_common(run, run_opts, /*with_ext=*/true);

  CommonOpts cmp_opts;
  std::vector<std::string> cmp_algos;
  CLI::App* cmp = app.add_subcommand("compare", "cross-distribution of two algorithms");
  cmp->add_option("--algos", cmp_algos, "two algorithms, e.g. --algos hobbs bfp")
      ->expected(2)
      ->required()
      ->check(CLI::IsMember({"hobbs", "bfp"}));
  add_common(cmp, cmp_opts, /*with_ext=*/true);

  CommonOpts seg_opts;
  CLI::App* seg = app.add_subcommand("segment", "report segment boundaries");
  add_common(seg, seg_opts, /*with_ext=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) {
      coref::RunSpec spec;
      spec.algo = *coref::algorithm_from_string(algo_name);
      spec.ext = run_opts.ext;
      return emit_report(run_opts, {spec});
    }
    if (cmp->parsed()) {
      std::vector<coref::RunSpec> specs;
      for (const auto& name : cmp_algos) {
        coref::RunSpec spec;
        spec.algo = *coref::algorithm_from_string(name);
        spec.ext = cmp_opts.ext;
        specs.push_back(spec);
      }
      return emit_report(cmp_opts, specs);
    }
    if (seg->parsed()) {
      if (seg_opts.seed_less) {
        std::cerr << "error: --seed-less rejected; runs are deterministic\n";
        return kExitUsage;
      }
      std::vector<coref::DocEval> evals;
      if (int rc = evaluate_all(seg_opts, {}, evals); rc != kExitOk) return rc;
      if (seg_opts.format == "json") {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& ev : evals) {
          const coref::SegmentMap map = coref::segment(ev.doc);
          for (const auto& u : ev.doc.utterances) {
            nlohmann::ordered_json e;
            e["doc"] = ev.doc.id;
            e["utterance"] = u.id;
            e["segment"] = map.segment_of.at(u.id);
            auto r = map.boundary_reason.find(u.id);
            if (r != map.boundary_reason.end()) e["boundary_reason"] = to_string(r->second);
            j.push_back(e);
          }
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << coref::render_segments_tsv(evals);
      }
      return kExitOk;
    }
  } catch (const coref::CorpusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
