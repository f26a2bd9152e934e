// stylemine command-line driver. Exit status: 0 success, 1 invalid input or
// usage, 2 runtime failure.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "stylemine/align.hpp"
#include "stylemine/config.hpp"
#include "stylemine/corpus.hpp"
#include "stylemine/distill.hpp"
#include "stylemine/embed.hpp"
#include "stylemine/error.hpp"
#include "stylemine/fixtures.hpp"
#include "stylemine/manifest.hpp"
#include "stylemine/metrics.hpp"
#include "stylemine/parallel.hpp"
#include "stylemine/scenegraph.hpp"
#include "stylemine/serve.hpp"

namespace fs = std::filesystem;
using namespace stylemine;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop.store(true); }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// Flag values that were given explicitly; applied on top of the config file.
struct Overrides {
  std::string config_path;
  std::optional<std::string> task;
  std::optional<std::string> strategy;
  std::optional<std::size_t> k;
  std::optional<double> p;
  std::optional<double> beta;
  std::optional<std::string> norm_mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<double> delta;
  std::optional<double> j_safe;
  std::optional<std::string> aggregation;
  std::optional<std::string> exist_mode;
  std::optional<double> lambda;
  std::optional<std::string> provider;
  std::optional<std::size_t> dim;
  std::optional<std::string> embed_source;
  std::optional<int> timeout_ms;
  std::optional<int> retries;
  std::optional<std::string> sep_open;
  std::optional<std::string> sep_close;
  std::optional<std::size_t> workers;
};

void add_config_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "json run config")->check(CLI::ExistingFile);
  cmd->add_option("--task", o.task, "preset: sentiment, formality, political, custom");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
}

void add_align_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--strategy", o.strategy, "rd, semb or semb-sas");
  cmd->add_option("--k", o.k, "candidates per source");
  cmd->add_option("--p", o.p, "minimum SAS");
  cmd->add_option("--beta", o.beta, "F-measure weight");
  cmd->add_option("--norm-mode", o.norm_mode, "tokens, entities or none");
  cmd->add_option("--seed", o.seed, "seed for the rd strategy");
}

void add_reward_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--alpha", o.alpha, "weight of d_order in d_psv");
  cmd->add_option("--delta", o.delta, "contrastive margin");
  cmd->add_option("--j-safe", o.j_safe, "safe-update threshold");
  cmd->add_option("--aggregation", o.aggregation, "amateur aggregation: mean, max, min");
  cmd->add_option("--exist-mode", o.exist_mode, "symmetric or missing");
}

void add_provider_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--provider", o.provider, "deterministic-test, file or remote");
  cmd->add_option("--dim", o.dim, "embedding dimension");
  cmd->add_option("--embeddings", o.embed_source, "embedding file or endpoint URL");
  cmd->add_option("--timeout-ms", o.timeout_ms, "remote request timeout");
  cmd->add_option("--retries", o.retries, "remote retries");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.task) c.apply_preset(parse_task_preset(*o.task));
  if (o.strategy) c.align.strategy = parse_strategy(*o.strategy);
  if (o.k) c.align.k = *o.k;
  if (o.p) c.align.p = *o.p;
  if (o.beta) c.align.beta = *o.beta;
  if (o.norm_mode) c.align.norm_mode = parse_norm_mode(*o.norm_mode);
  if (o.seed) c.align.seed = *o.seed;
  if (o.alpha) c.reward.alpha = *o.alpha;
  if (o.delta) c.reward.delta = *o.delta;
  if (o.j_safe) c.reward.j_safe = *o.j_safe;
  if (o.aggregation) c.reward.amateur_aggregation = parse_aggregation(*o.aggregation);
  if (o.exist_mode) c.reward.exist_mode = parse_exist_mode(*o.exist_mode);
  if (o.lambda) c.lambda = *o.lambda;
  if (o.provider) c.provider.kind = parse_provider_kind(*o.provider);
  if (o.dim) c.provider.dim = *o.dim;
  if (o.embed_source) c.provider.source = *o.embed_source;
  if (o.timeout_ms) c.provider.timeout = std::chrono::milliseconds(*o.timeout_ms);
  if (o.retries) c.provider.retries = *o.retries;
  if (o.sep_open) c.sep_open = *o.sep_open;
  if (o.sep_close) c.sep_close = *o.sep_close;
  if (o.workers) c.workers = *o.workers;
  c.validate();
  return c;
}

void manifest_for(const std::string& command, const RunConfig& c,
                  std::vector<fs::path> inputs, std::vector<fs::path> outputs) {
  Manifest m;
  m.command = command;
  m.config_json = config_to_json(c);
  m.inputs = std::move(inputs);
  m.seed = c.align.seed;
  m.outputs = std::move(outputs);
  write_manifest(m, manifest_path_for(m.outputs.front()));
}

Corpus read_corpus(const fs::path& path, const std::string& style) {
  return load_corpus(path, style, CorpusFormat::kJsonLines);
}

ProfileMap profiles_of(const Corpus& a, const Corpus* b) {
  ProfileMap m = build_profiles(a, default_stopwords());
  if (b != nullptr) {
    for (auto& kv : build_profiles(*b, default_stopwords())) m.insert(std::move(kv));
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stylemine: scene-aligned parallel mining and imitation rewards"};
  app.set_version_flag("--version", std::string(STYLEMINE_VERSION));
  app.require_subcommand(1);

  Overrides o;

  // parse
  std::string parse_in, parse_out, parse_format = "plain-lines", parse_style,
                                   parse_triplets;
  auto* parse = app.add_subcommand("parse", "tokenize, normalize and profile a corpus");
  parse->add_option("--input", parse_in, "raw corpus")->required()->check(CLI::ExistingFile);
  parse->add_option("--format", parse_format, "tsv, json-lines or plain-lines");
  parse->add_option("--style", parse_style, "style label")->required();
  parse->add_option("--triplets", parse_triplets, "triplet sidecar json-lines")
      ->check(CLI::ExistingFile);
  parse->add_option("--output", parse_out, "json-lines corpus")->required();
  add_config_flags(parse, o);

  // embed
  std::string embed_in, embed_out;
  auto* embed = app.add_subcommand("embed", "write sentence embeddings");
  embed->add_option("--input", embed_in, "json-lines corpus")->required()->check(CLI::ExistingFile);
  embed->add_option("--output", embed_out, "json-lines {id, vector}")->required();
  add_config_flags(embed, o);
  add_provider_flags(embed, o);

  // mine
  std::string mine_src, mine_tgt, mine_out, mine_pairs;
  auto* mine_cmd = app.add_subcommand("mine", "mine parallel groups across styles");
  mine_cmd->add_option("--src", mine_src, "source-style corpus")->required()->check(CLI::ExistingFile);
  mine_cmd->add_option("--tgt", mine_tgt, "target-style corpus")->required()->check(CLI::ExistingFile);
  mine_cmd->add_option("--output", mine_out, "groups json-lines")->required();
  mine_cmd->add_option("--pairs", mine_pairs, "also export training pairs here");
  mine_cmd->add_option("--sep-open", o.sep_open, "opening separator for pairs");
  mine_cmd->add_option("--sep-close", o.sep_close, "closing separator for pairs");
  add_config_flags(mine_cmd, o);
  add_align_flags(mine_cmd, o);
  add_provider_flags(mine_cmd, o);

  // distill
  std::string distill_in, distill_out, distill_corpus_out, distill_style = "target";
  bool distill_trace = false;
  auto* distill = app.add_subcommand("distill", "select salient sentences of long articles");
  distill->add_option("--input", distill_in, "articles json-lines")->required()->check(CLI::ExistingFile);
  distill->add_option("--output", distill_out, "plans json-lines")->required();
  distill->add_option("--corpus-out", distill_corpus_out, "selected sentences as a corpus");
  distill->add_option("--style", distill_style, "style label for --corpus-out");
  distill->add_option("--lambda", o.lambda, "budget ratio in (0, 1]");
  distill->add_flag("--trace", distill_trace, "include per-round trace");
  add_config_flags(distill, o);

  // reward
  std::string reward_in, reward_out;
  auto* reward = app.add_subcommand("reward", "score reward requests offline");
  reward->add_option("--input", reward_in, "request json-lines")->required()->check(CLI::ExistingFile);
  reward->add_option("--output", reward_out, "response json-lines")->required();
  add_config_flags(reward, o);
  add_reward_flags(reward, o);
  add_provider_flags(reward, o);

  // serve
  int serve_port = -1;
  auto* serve = app.add_subcommand("serve", "reward service over stdio or TCP");
  serve->add_option("--port", serve_port, "listen on 127.0.0.1:PORT instead of stdio");
  add_config_flags(serve, o);
  add_reward_flags(serve, o);
  add_provider_flags(serve, o);

  // eval
  std::string eval_in, eval_out, eval_mode = "average";
  auto* eval = app.add_subcommand("eval", "BLEU, i-PINC, ACC and GM");
  eval->add_option("--input", eval_in, "records json-lines")->required()->check(CLI::ExistingFile);
  eval->add_option("--output", eval_out, "report json")->required();
  eval->add_option("--bleu-mode", eval_mode, "average or composite");
  add_config_flags(eval, o);

  // stats
  std::string stats_src, stats_tgt, stats_groups, stats_out;
  auto* stats = app.add_subcommand("stats", "statistics of a mined dataset");
  stats->add_option("--src", stats_src, "source-style corpus")->required()->check(CLI::ExistingFile);
  stats->add_option("--tgt", stats_tgt, "target-style corpus")->required()->check(CLI::ExistingFile);
  stats->add_option("--groups", stats_groups, "groups json-lines")->required()->check(CLI::ExistingFile);
  stats->add_option("--output", stats_out, "stats json")->required();
  add_config_flags(stats, o);

  // verify
  std::string verify_root = "fixtures";
  auto* verify = app.add_subcommand("verify", "check fixtures against oracle outputs");
  verify->add_option("--fixtures", verify_root, "fixture root directory");
  add_config_flags(verify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const RunConfig cfg = resolve(o);
    const std::size_t workers = resolve_workers(cfg.workers);

    if (*parse) {
      Corpus c = load_corpus(parse_in, parse_style, parse_corpus_format(parse_format));
      if (!parse_triplets.empty()) c = attach_triplets(c, parse_triplets);
      std::vector<Sentence> out;
      for (const auto& s : c) {
        Sentence copy = s;
        copy.lemmas = s.normalized_tokens();
        copy.entities = profile_sentence(s, default_stopwords()).entity_seq();
        copy.triplets.reset();
        out.push_back(std::move(copy));
      }
      write_text(parse_out, corpus_to_json_lines(Corpus(c.style(), std::move(out))));
      std::vector<fs::path> inputs{parse_in};
      if (!parse_triplets.empty()) inputs.emplace_back(parse_triplets);
      manifest_for("parse", cfg, inputs, {parse_out});
    } else if (*embed) {
      const Corpus c = read_corpus(embed_in, "");
      const auto provider = make_provider(cfg.provider);
      write_text(embed_out, embeddings_to_json_lines(c, *provider));
      manifest_for("embed", cfg, {embed_in}, {embed_out});
    } else if (*mine_cmd) {
      const Corpus src = read_corpus(mine_src, "");
      const Corpus tgt = read_corpus(mine_tgt, "");
      const auto profiles = profiles_of(src, &tgt);
      std::unique_ptr<EmbeddingProvider> provider;
      if (cfg.align.strategy != Strategy::kRandom) provider = make_provider(cfg.provider);
      const auto result = mine(src, tgt, profiles, provider.get(), cfg.align, workers);
      write_text(mine_out, groups_to_json_lines(result, cfg.align));
      std::vector<fs::path> outputs{mine_out};
      if (!mine_pairs.empty()) {
        write_text(mine_pairs,
                   pairs_to_json_lines(export_pairs(result.groups, src, tgt,
                                                    cfg.sep_open, cfg.sep_close)));
        outputs.emplace_back(mine_pairs);
      }
      std::vector<fs::path> inputs{mine_src, mine_tgt};
      if (cfg.provider.kind == ProviderKind::kFile) inputs.emplace_back(cfg.provider.source);
      manifest_for("mine", cfg, inputs, outputs);
      std::cerr << result.groups.size() << " groups, " << result.dropped_sources
                << " sources dropped\n";
    } else if (*distill) {
      const auto articles = parse_articles(read_text(distill_in), distill_in);
      const auto plans = distill_all(articles, cfg.lambda, workers);
      std::string out;
      for (const auto& p : plans) out += plan_to_json(p, distill_trace) + "\n";
      write_text(distill_out, out);
      std::vector<fs::path> outputs{distill_out};
      if (!distill_corpus_out.empty()) {
        write_text(distill_corpus_out,
                   corpus_to_json_lines(distilled_corpus(articles, plans, distill_style)));
        outputs.emplace_back(distill_corpus_out);
      }
      manifest_for("distill", cfg, {distill_in}, outputs);
    } else if (*reward) {
      const auto provider = make_provider(cfg.provider);
      const RewardService service(*provider, cfg.reward);
      std::vector<std::string> lines;
      std::istringstream in(read_text(reward_in));
      for (std::string line; std::getline(in, line);) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
      }
      std::vector<std::string> responses(lines.size());
      parallel_for(lines.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) responses[i] = service.handle_line(lines[i]);
      });
      std::string out;
      for (const auto& r : responses) out += r + "\n";
      write_text(reward_out, out);
      manifest_for("reward", cfg, {reward_in}, {reward_out});
    } else if (*serve) {
      const auto provider = make_provider(cfg.provider);
      const RewardService service(*provider, cfg.reward);
      if (serve_port < 0) {
        service.serve_stream(std::cin, std::cout, workers);
      } else {
        if (serve_port > 65535) throw InputError("--port must be below 65536");
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::atomic<int> bound{0};
        std::thread announce([&bound] {
          while (bound.load() == 0 && !g_stop.load()) {
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
          }
          if (bound.load() > 0) std::cerr << "listening on 127.0.0.1:" << bound.load() << "\n";
        });
        service.serve_tcp(static_cast<std::uint16_t>(serve_port), workers, g_stop, &bound);
        g_stop.store(true);
        announce.join();
      }
    } else if (*eval) {
      if (eval_mode != "average" && eval_mode != "composite") {
        throw InputError("--bleu-mode must be average or composite");
      }
      const auto records = parse_eval_records(read_text(eval_in), eval_in);
      const auto report = evaluate(
          records, eval_mode == "average" ? BleuMode::kAverage : BleuMode::kComposite,
          workers);
      write_text(eval_out, report_to_json(report) + "\n");
      std::cout << report_to_table(report);
      manifest_for("eval", cfg, {eval_in}, {eval_out});
    } else if (*stats) {
      const Corpus src = read_corpus(stats_src, "");
      const Corpus tgt = read_corpus(stats_tgt, "");
      AlignmentParams params;
      const auto groups = groups_from_json_lines(read_text(stats_groups), &params);
      const auto report =
          dataset_stats(groups.groups, src, tgt, profiles_of(src, &tgt), params);
      write_text(stats_out, stats_to_json(report) + "\n");
      std::cout << stats_to_table(report);
      manifest_for("stats", cfg, {stats_src, stats_tgt, stats_groups}, {stats_out});
    } else if (*verify) {
      bool ok = true;
      for (const auto& r : verify_all(verify_root, workers)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.passed) std::cout << ": " << r.detail;
        std::cout << "\n";
        ok = ok && r.passed;
      }
      return ok ? 0 : 1;
    }
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
