#pragma once

// patparse command-line front end. Exit codes: 0 success, 1 processing
// error (one "error[<Code>]: message" line on stderr), 2 usage error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "patparse/patparse.hpp"

namespace patparse::cli {

namespace detail {

inline std::ifstream open_in(const std::string &path) {
  std::ifstream f(path);
  if (!f) fail("IOError", "cannot open " + path);
  return f;
}

inline void write_file(const std::string &path, const std::string &content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail("IOError", "cannot write " + path);
  f << content;
  if (!f) fail("IOError", "write failed for " + path);
}

inline Corpus load_corpus(const std::string &path, ReadMode mode) {
  auto f = open_in(path);
  return read_corpus(f, mode, std::filesystem::path(path).stem().string());
}

/// Tags to learn from: the gold column when present, else the single candidate.
inline Corpus as_training_corpus(Corpus c) {
  for (auto &s : c.sentences)
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      auto &t = s.tokens[i];
      if (t.gold) continue;
      if (t.candidates.size() != 1)
        fail("MissingGold", "sentence " + s.id + " token " + std::to_string(i) + " is ambiguous and has no gold tag");
      t.gold = t.candidates.front();
    }
  return c;
}

inline AxisDB load_axes(const std::string &path) {
  auto f = open_in(path);
  return parse_axis_db(f);
}

inline JointDB load_joints(const std::string &path) {
  auto f = open_in(path);
  return parse_joint_db(f);
}

struct ParseRun {
  Corpus output;
  std::size_t joints_only = 0;
  std::size_t tokens = 0;
  double seconds = 0;
};

inline ParseRun parse_corpus(const Corpus &in, const AxisDB *axes, const JointDB *joints, const DisambiguationConfig &cfg,
                             unsigned threads) {
  auto start = std::chrono::steady_clock::now();
  ParseRun run;
  run.output.name = in.name;
  run.output.sentences.resize(in.sentences.size());
  std::vector<char> fallback(in.sentences.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= in.sentences.size()) return;
      try {
        const Sentence &s = in.sentences[i];
        ParseResult r = disambiguate_with_fallback(s, axes, joints, cfg);
        Sentence o{s.id, {}};
        for (std::size_t k = 0; k < s.tokens.size(); ++k) o.tokens.push_back(Token{s.tokens[k].form, {r.chosen[k]}, std::nullopt});
        run.output.sentences[i] = std::move(o);
        fallback[i] = r.joints_only;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = in.sentences.size();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  run.joints_only = static_cast<std::size_t>(std::count(fallback.begin(), fallback.end(), 1));
  run.tokens = in.token_count();
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

inline bool axis_mentions(const std::vector<AxisElement> &elems, const std::string &sym) {
  for (const auto &e : elems)
    if ((e.is_sym() && e.symbol() == sym) || (e.is_repeat() && axis_mentions(e.body(), sym))) return true;
  return false;
}

} // namespace detail

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Corpus-based sentence-axis and joint patterns for syntactic tag disambiguation", "patparse"};
  app.require_subcommand(1);

  std::string corpus_path, config_path, out_path, axes_path, joints_path, in_path, gold_path, pred_path, tag_filter;
  JointParams jp;
  std::string algorithm = "incremental";
  std::uint64_t reading_cap = 0;
  std::size_t beam_width = 0;
  bool strict_gaps = false, by_text = false, csv = false, stats = false, count_punct = false;
  unsigned threads = 1;
  SynthOptions synth;
  AmbiguateOptions amb;

  auto *build_axes = app.add_subcommand("build-axes", "Extract and generalise sentence axes from a gold corpus");
  build_axes->add_option("--corpus", corpus_path, "Gold corpus (.vrt)")->required();
  build_axes->add_option("--config", config_path, "Layer configuration")->required();
  build_axes->add_option("--out", out_path, "Axis database to write (.adb)")->required();

  auto *build_joints = app.add_subcommand("build-joints", "Mine joints from a disambiguated corpus");
  build_joints->add_option("--corpus", corpus_path, "Disambiguated corpus (.vrt)")->required();
  build_joints->add_option("--out", out_path, "Joint database to write (.jdb)")->required();
  build_joints->add_option("--error-margin", jp.error_margin, "Minimum relative frequency")->check(CLI::Range(0.0, 1.0));
  build_joints->add_option("--absolute-margin", jp.absolute_margin, "Minimum support count")->check(CLI::PositiveNumber);
  build_joints->add_option("--max-len", jp.max_len, "Maximum context length")->check(CLI::PositiveNumber);
  build_joints->add_option("--algorithm", algorithm, "exhaustive or incremental")->check(CLI::IsMember({"exhaustive", "incremental"}));

  auto *parse = app.add_subcommand("parse", "Disambiguate a corpus with axes and joints");
  parse->add_option("--axes", axes_path, "Axis database (.adb)");
  parse->add_option("--joints", joints_path, "Joint database (.jdb)");
  parse->add_option("--in", in_path, "Ambiguous corpus (.vrt)")->required();
  parse->add_option("--out", out_path, "Disambiguated corpus to write")->required();
  parse->add_option("--config", config_path, "Configuration with READING_CAP / STRICT_GAPS / LAYER_SKIP");
  parse->add_option("--reading-cap", reading_cap, "Readings per sentence before joints-only decoding")->check(CLI::PositiveNumber);
  parse->add_option("--beam-width", beam_width, "Beam width of joints-only decoding")->check(CLI::PositiveNumber);
  parse->add_flag("--strict-gaps", strict_gaps, "An axis gap must match exactly one gap");
  parse->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  parse->add_flag("--stats", stats, "Print throughput figures");

  auto *eval = app.add_subcommand("eval", "Ambiguity, error and success rates");
  eval->add_option("--gold", gold_path, "Analyser output with gold column (.vrt)")->required();
  eval->add_option("--pred", pred_path, "Disambiguated corpus (.vrt)")->required();
  eval->add_flag("--by-text", by_text, "One row per text (sentence id prefix before ':')");
  eval->add_flag("--csv", csv, "Comma-separated output");
  eval->add_flag("--count-punct", count_punct, "Count punctuation tokens as words");

  auto *inspect = app.add_subcommand("inspect", "Pretty-print axes or joints");
  auto *inspect_axes = inspect->add_option("--axes", axes_path, "Axis database (.adb)");
  auto *inspect_joints = inspect->add_option("--joints", joints_path, "Joint database (.jdb)");
  inspect_axes->excludes(inspect_joints);
  inspect->add_option("--tag", tag_filter, "Only patterns for this tag");

  auto *synth_cmd = app.add_subcommand("synth", "Generate a synthetic gold corpus");
  synth_cmd->add_option("--out", out_path, "Corpus to write")->required();
  synth_cmd->add_option("--sentences", synth.sentences, "Sentence count")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--max-words", synth.max_words, "Longest sentence in words")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--prefix", synth.id_prefix, "Sentence id prefix");

  auto *amb_cmd = app.add_subcommand("ambiguate", "Add distractor tags to a gold corpus");
  amb_cmd->add_option("--in", in_path, "Gold corpus")->required();
  amb_cmd->add_option("--out", out_path, "Ambiguous corpus with gold column")->required();
  amb_cmd->add_option("--seed", amb.seed, "Random seed");
  amb_cmd->add_option("--probability", amb.probability, "Chance that a word gains distractors")->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
    if (parse->parsed() && axes_path.empty() && joints_path.empty())
      throw CLI::ValidationError("parse", "at least one of --axes and --joints is required");
    if (inspect->parsed() && axes_path.empty() && joints_path.empty())
      throw CLI::ValidationError("inspect", "one of --axes and --joints is required");
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error[Usage]: " << e.what() << '\n';
    auto *sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  }

  try {
    if (build_axes->parsed()) {
      Corpus gold = detail::as_training_corpus(detail::load_corpus(corpus_path, ReadMode::ambiguous));
      auto cf = detail::open_in(config_path);
      PipelineConfig cfg = parse_config(cf, std::filesystem::path(config_path).parent_path());
      if (cfg.layers.empty()) fail("MalformedConfig", "configuration declares no layer");
      AxisDB db = build_axis_db(gold, cfg.layers);
      std::ostringstream os;
      render_axis_db(db, os);
      detail::write_file(out_path, os.str());
      for (const auto &l : db.layers) out << "layer " << l.id() << ": " << l.axes.size() << " axes\n";
    } else if (build_joints->parsed()) {
      jp.algorithm = parse_algorithm(algorithm);
      Corpus c = detail::as_training_corpus(detail::load_corpus(corpus_path, ReadMode::ambiguous));
      JointDB db = generate_joints(c, jp);
      std::ostringstream os;
      render_joint_db(db, os);
      detail::write_file(out_path, os.str());
      std::map<Tag, std::size_t> per_tag;
      for (const auto &j : db.joints()) ++per_tag[j.target()];
      for (const auto &[tag, n] : per_tag) out << tag.symbol() << '\t' << n << '\n';
      out << "total\t" << db.size() << '\n';
    } else if (parse->parsed()) {
      DisambiguationConfig dc;
      if (!config_path.empty()) {
        auto cf = detail::open_in(config_path);
        dc = parse_config(cf, std::filesystem::path(config_path).parent_path()).disambiguation;
      }
      if (reading_cap) dc.reading_cap = reading_cap;
      if (beam_width) dc.beam_width = beam_width;
      if (strict_gaps) dc.strict_gaps = true;
      std::optional<AxisDB> axes;
      std::optional<JointDB> joints;
      if (!axes_path.empty()) axes = detail::load_axes(axes_path);
      if (!joints_path.empty()) joints = detail::load_joints(joints_path);
      Corpus in = detail::load_corpus(in_path, ReadMode::ambiguous);
      auto run = detail::parse_corpus(in, axes ? &*axes : nullptr, joints ? &*joints : nullptr, dc, threads);
      std::ostringstream os;
      write_corpus(run.output, os, false);
      detail::write_file(out_path, os.str());
      if (run.joints_only)
        err << "warning: " << run.joints_only << " sentence(s) exceeded the reading cap of " << dc.reading_cap
            << " and were disambiguated with joints only\n";
      if (stats) {
        out << "sentences " << in.sentences.size() << '\n'
            << "tokens " << run.tokens << '\n'
            << "joints_only " << run.joints_only << '\n'
            << "seconds " << run.seconds << '\n'
            << "tokens_per_second " << (run.seconds > 0 ? double(run.tokens) / run.seconds : 0.0) << '\n';
      }
    } else if (eval->parsed()) {
      Corpus gold = detail::load_corpus(gold_path, ReadMode::ambiguous);
      Corpus pred = detail::load_corpus(pred_path, ReadMode::ambiguous);
      std::vector<Corpus> golds, preds;
      if (by_text) {
        golds = split_by_text(gold);
        preds = split_by_text(pred);
        if (golds.size() != preds.size()) fail("AlignmentMismatch", "gold and prediction contain different texts");
      } else {
        golds = {gold};
        preds = {pred};
      }
      std::vector<EvalSample> samples;
      for (std::size_t i = 0; i < golds.size(); ++i) samples.push_back({golds[i].name, &golds[i], &preds[i]});
      EvalReport report = build_report(samples, count_punct);
      if (csv) render_report_csv(report, out);
      else render_report_table(report, out);
    } else if (inspect->parsed()) {
      std::size_t shown = 0;
      if (!axes_path.empty()) {
        AxisDB db = detail::load_axes(axes_path);
        for (const auto &layer : db.layers) {
          std::vector<std::string> lines;
          for (const auto &a : layer.axes) {
            if (!tag_filter.empty()) {
              std::string sym = tag_filter;
              if (layer.spec.tagset.count(Tag{tag_filter})) sym = project_symbol(Tag{tag_filter}, layer.spec.eq);
              if (!detail::axis_mentions(a.elements, sym)) continue;
            }
            lines.push_back(render_axis(a));
          }
          if (lines.empty()) continue;
          std::sort(lines.begin(), lines.end());
          out << "LAYER " << layer.id() << " (" << lines.size() << " axes)\n";
          for (const auto &l : lines) out << "  " << l << '\n';
          shown += lines.size();
        }
      } else {
        JointDB db = detail::load_joints(joints_path);
        std::vector<const Joint *> list;
        for (const auto &j : db.joints())
          if (tag_filter.empty() || j.target().symbol() == tag_filter) list.push_back(&j);
        std::sort(list.begin(), list.end(), [](const Joint *a, const Joint *b) {
          if (a->target() != b->target()) return a->target() < b->target();
          if (a->length() != b->length()) return a->length() > b->length();
          if (a->support != b->support) return a->support > b->support;
          return a->context < b->context;
        });
        for (const Joint *j : list) {
          char freq[32];
          std::snprintf(freq, sizeof freq, "%.4f", j->freq);
          out << render_joint(*j) << " FREQ " << freq << '\n';
        }
        shown = list.size();
      }
      if (shown == 0) out << "no patterns\n";
    } else if (synth_cmd->parsed()) {
      std::ostringstream os;
      write_corpus(synthesize_corpus(synth), os, false);
      detail::write_file(out_path, os.str());
    } else if (amb_cmd->parsed()) {
      Corpus gold = detail::as_training_corpus(detail::load_corpus(in_path, ReadMode::ambiguous));
      std::ostringstream os;
      write_corpus(ambiguate(gold, amb), os, true);
      detail::write_file(out_path, os.str());
    }
  } catch (const Error &e) {
    err << "error[" << e.code() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    err << "error[Internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace patparse::cli
