// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Command-line front end for the corpus pipeline:
//   resample -> split -> augment -> mix -> enhance -> evaluate -> report

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seaug/seaug.hpp"

namespace fs = std::filesystem;
using seaug::Error;
using seaug::UsageError;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 0;
  bool jobs_given = false;
  bool dry_run = false;
  nlohmann::json config;  // parsed --config document (or empty object)

  void finalize() {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config file: " + config_path);
      try {
        in >> config;
      } catch (const nlohmann::json::exception& ex) {
        throw UsageError("config file is not valid JSON: " +
                         std::string(ex.what()));
      }
      if (!config.is_object()) throw UsageError("config root must be an object");
    } else {
      config = nlohmann::json::object();
    }
  }

  // Flag > config key > fallback; the seed has no fallback by design.
  std::uint64_t require_seed() const {
    if (seed_given) return seed;
    if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
    throw UsageError("a master seed is required (--seed or config \"seed\")");
  }

  int resolve_jobs() const {
    if (jobs_given) return std::max(1, jobs);
    if (config.contains("jobs"))
      return std::max(1, config.at("jobs").get<int>());
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }

  std::string str_or(const CLI::Option* opt, const std::string& flag_value,
                     const std::string& key, const std::string& fallback) const {
    if (opt->count() > 0) return flag_value;
    if (config.contains(key)) return config.at(key).get<std::string>();
    return fallback;
  }

  int int_or(const CLI::Option* opt, int flag_value, const std::string& key,
             int fallback) const {
    if (opt->count() > 0) return flag_value;
    if (config.contains(key)) return config.at(key).get<int>();
    return fallback;
  }

  double real_or(const CLI::Option* opt, double flag_value,
                 const std::string& key, double fallback) const {
    if (opt->count() > 0) return flag_value;
    if (config.contains(key)) return config.at(key).get<double>();
    return fallback;
  }

  seaug::StftConfig stft_config() const {
    seaug::StftConfig cfg;
    if (config.contains("stft")) {
      const auto& s = config.at("stft");
      if (s.contains("win_len")) cfg.win_len = s.at("win_len").get<int>();
      if (s.contains("hop")) cfg.hop = s.at("hop").get<int>();
    }
    seaug::check_stft_config(cfg);
    return cfg;
  }
};

seaug::Manifest load_root_manifest(const fs::path& root) {
  const fs::path path = root / "manifest.jsonl";
  if (!fs::exists(path))
    throw UsageError("no manifest.jsonl under " + root.string());
  return seaug::load_manifest(path);
}

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------- resample

int cmd_resample(const GlobalOpts& g, const std::string& in_dir,
                 const std::string& out_dir, int rate) {
  const seaug::Manifest manifest =
      seaug::resample_corpus(in_dir, out_dir, rate, g.resolve_jobs());
  seaug::save_manifest(manifest, fs::path(out_dir) / "manifest.jsonl");
  std::cout << "resampled " << manifest.entries.size() << " utterances to "
            << rate << " Hz under " << out_dir << "\n";
  return 0;
}

// ------------------------------------------------------------------- split

int cmd_split(const GlobalOpts& g, const std::string& root, int k,
              const std::string& out_file) {
  const seaug::Manifest manifest = load_root_manifest(root);
  const auto speakers = seaug::speakers_of(manifest);
  const seaug::FoldSplit split =
      seaug::build_folds(speakers, k, g.require_seed());
  const fs::path out =
      out_file.empty() ? fs::path(root) / "folds.json" : fs::path(out_file);
  seaug::save_fold_split(split, out);
  std::cout << "wrote " << split.fold_count << " folds over "
            << speakers.size() << " speakers to " << out.string() << "\n";
  return 0;
}

// ----------------------------------------------------------------- augment

int cmd_augment(const GlobalOpts& g, const std::string& root,
                const std::string& strategy_token, int ratio,
                const std::string& fold_file, int fold_index,
                const std::string& noise_dir, const std::string& synth_dir,
                const std::string& generator) {
  const seaug::Strategy strategy = seaug::strategy_from_string(strategy_token);
  if (strategy == seaug::Strategy::kNone)
    throw UsageError("strategy 'none' cannot be augmented");
  seaug::Manifest manifest = load_root_manifest(root);

  const fs::path folds_path =
      fold_file.empty() ? fs::path(root) / "folds.json" : fs::path(fold_file);
  if (!fs::exists(folds_path))
    throw UsageError("fold file missing (run split first): " +
                     folds_path.string());
  const seaug::FoldSplit split = seaug::load_fold_split(folds_path);
  if (fold_index < 0 || fold_index >= split.fold_count)
    throw UsageError("fold index out of range");
  const auto& fold = split.folds[static_cast<std::size_t>(fold_index)];

  const std::uint64_t seed = g.require_seed();

  if (strategy == seaug::Strategy::kSynthetic) {
    if (synth_dir.empty() || generator.empty())
      throw UsageError(
          "synthetic augmentation needs --synthetic-dir and --generator");
    // Probe the corpus rate from any clean file.
    if (manifest.entries.empty()) throw Error("manifest is empty");
    const int rate =
        seaug::wav_info(fs::path(root) / manifest.entries.front().clean_path)
            .sample_rate;
    auto pool = seaug::ingest_synthetic(synth_dir, generator, manifest, root,
                                        rate, g.resolve_jobs());
    std::cerr << "ingested " << pool.size() << " generated utterances\n";
    for (auto& e : pool) manifest.entries.push_back(std::move(e));
    seaug::validate_manifest(manifest);
  }

  const seaug::AugPlan plan =
      seaug::plan_augmentation(manifest, fold, strategy, ratio, seed);

  if (g.dry_run) {
    for (const auto& item : plan.items) {
      std::string params;
      for (const auto& [key, val] : item.params)
        params += " " + key + "=" + val;
      std::cout << "plan new=" << item.new_utt_id
                << " parent=" << item.parent_utt_id
                << " variant=" << item.variant_index << " seed=" << item.seed
                << params << "\n";
    }
    std::cout << "plan total=" << plan.items.size() << " strategy="
              << seaug::to_string(strategy) << " ratio=" << ratio << "%\n";
    return 0;
  }

  std::optional<seaug::NoiseCorpus> noise;
  if (strategy != seaug::Strategy::kSpecMix) {
    if (noise_dir.empty())
      throw UsageError("this strategy mixes fresh noise; pass --noise-dir");
    noise = seaug::NoiseCorpus::load(noise_dir);
  }

  seaug::MaterializeConfig mcfg;
  mcfg.root = root;
  mcfg.stft = g.stft_config();
  mcfg.jobs = g.resolve_jobs();
  const seaug::Manifest updated = seaug::materialize(
      plan, manifest, noise ? &*noise : nullptr, mcfg);
  seaug::save_manifest(updated, fs::path(root) / "manifest.jsonl");

  for (const auto& item : plan.items)
    std::cerr << "built " << item.new_utt_id << " parent=" << item.parent_utt_id
              << " seed=" << item.seed << "\n";
  std::cout << "materialized " << plan.items.size() << " items ("
            << seaug::to_string(strategy) << " @ " << ratio << "%)\n";
  return 0;
}

// --------------------------------------------------------------------- mix

int cmd_mix(const GlobalOpts& g, const std::string& root,
            const std::string& noise_dir) {
  if (noise_dir.empty()) throw UsageError("mix needs --noise-dir");
  const seaug::Manifest manifest = load_root_manifest(root);
  const seaug::NoiseCorpus noise = seaug::NoiseCorpus::load(noise_dir);
  const seaug::Manifest updated = seaug::mix_corpus(
      manifest, root, noise, g.require_seed(), g.resolve_jobs());
  seaug::save_manifest(updated, fs::path(root) / "manifest.jsonl");
  std::size_t mixed = 0;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i)
    if (!manifest.entries[i].noisy_path) ++mixed;
  std::cout << "mixed " << mixed << " utterances\n";
  return 0;
}

// ----------------------------------------------------------------- enhance

int cmd_enhance(const GlobalOpts& g, const std::string& root,
                const std::string& method_token, const std::string& out_dir) {
  seaug::EnhancerConfig cfg;
  cfg.method = seaug::enhancer_from_string(method_token);
  cfg.stft = g.stft_config();
  if (g.config.contains("enhancer")) {
    const auto& e = g.config.at("enhancer");
    if (e.contains("noise_frames"))
      cfg.noise_frames = e.at("noise_frames").get<int>();
    if (e.contains("floor")) cfg.floor = e.at("floor").get<double>();
    if (e.contains("smoothing"))
      cfg.smoothing = e.at("smoothing").get<double>();
  }
  seaug::check_enhancer_config(cfg);

  const seaug::Manifest manifest = load_root_manifest(root);
  const fs::path out = out_dir.empty()
                           ? fs::path(root) / "enhanced" / method_token
                           : fs::path(out_dir);
  std::vector<const seaug::ManifestEntry*> todo;
  for (const auto& e : manifest.entries)
    if (e.noisy_path) todo.push_back(&e);
  seaug::parallel_for(todo.size(), g.resolve_jobs(), [&](std::size_t i) {
    const auto& e = *todo[i];
    const seaug::AudioBuffer noisy =
        seaug::load_wav(fs::path(root) / *e.noisy_path);
    seaug::save_wav(seaug::enhance(noisy, cfg), out / (e.utt_id + ".wav"));
  });
  std::cout << "enhanced " << todo.size() << " utterances with "
            << method_token << " into " << out.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct DeltaRow {
  std::string utt_id;
  seaug::Group group;
  seaug::MetricKind metric;
  double noisy = 0.0;
  double enhanced = 0.0;
};

int cmd_evaluate(const GlobalOpts& g, const std::string& root,
                 const std::string& enhanced_dir, const std::string& out_dir,
                 bool allow_partial, double ci_flag,
                 const CLI::Option* ci_opt, const std::string& pesq_enhanced,
                 const std::string& pesq_noisy) {
  const double ci_level = g.real_or(ci_opt, ci_flag, "ci_level", 0.95);
  seaug::normal_critical_value(ci_level);  // validate early

  const seaug::Manifest manifest = load_root_manifest(root);
  if (enhanced_dir.empty()) throw UsageError("evaluate needs --enhanced-dir");
  const fs::path enh_root(enhanced_dir);
  const fs::path out = out_dir.empty()
                           ? fs::path(root) / "reports"
                           : fs::path(out_dir);

  std::vector<const seaug::ManifestEntry*> todo;
  std::vector<std::string> missing;
  for (const auto& e : manifest.entries) {
    if (!e.noisy_path) continue;
    if (fs::exists(enh_root / (e.utt_id + ".wav")))
      todo.push_back(&e);
    else
      missing.push_back(e.utt_id);
  }
  if (!missing.empty() && !allow_partial) {
    std::string names;
    for (const auto& m : missing) names += " " + m;
    throw Error("missing enhanced files for" + names +
                " (use --allow-partial to skip)");
  }
  for (const auto& m : missing)
    std::cerr << "skipping " << m << ": no enhanced file\n";
  if (todo.empty()) throw Error("nothing to evaluate");

  std::vector<std::vector<DeltaRow>> rows_per(todo.size());
  seaug::parallel_for(todo.size(), g.resolve_jobs(), [&](std::size_t i) {
    const auto& e = *todo[i];
    const seaug::AudioBuffer clean =
        seaug::load_wav(fs::path(root) / e.clean_path);
    const seaug::AudioBuffer noisy =
        seaug::load_wav(fs::path(root) / *e.noisy_path);
    const seaug::AudioBuffer enhanced =
        seaug::load_wav(enh_root / (e.utt_id + ".wav"));
    auto row = [&](seaug::MetricKind kind, double n, double en) {
      return DeltaRow{e.utt_id, e.group, kind, n, en};
    };
    rows_per[i].push_back(
        row(seaug::MetricKind::kFwSsnr,
            seaug::fwssnr(clean, noisy, e.utt_id).value,
            seaug::fwssnr(clean, enhanced, e.utt_id).value));
    rows_per[i].push_back(
        row(seaug::MetricKind::kSegSnr,
            seaug::seg_snr(clean, noisy, e.utt_id).value,
            seaug::seg_snr(clean, enhanced, e.utt_id).value));
  });

  std::vector<DeltaRow> rows;
  for (auto& r : rows_per)
    for (auto& x : r) rows.push_back(std::move(x));

  // Externally computed perceptual scores join the same delta machinery.
  if (!pesq_enhanced.empty() || !pesq_noisy.empty()) {
    if (pesq_enhanced.empty() || pesq_noisy.empty())
      throw UsageError(
          "external scores need both --pesq-enhanced and --pesq-noisy");
    std::map<std::string, double> enh_scores, noisy_scores;
    for (const auto& v : seaug::ingest_external_scores(pesq_enhanced))
      enh_scores[v.utt_id] = v.value;
    for (const auto& v : seaug::ingest_external_scores(pesq_noisy))
      noisy_scores[v.utt_id] = v.value;
    std::set<std::string> known;
    for (const auto* e : todo) known.insert(e->utt_id);
    for (const auto& [utt, score] : enh_scores) {
      if (known.count(utt) == 0) {
        std::cerr << "external score for unknown utterance " << utt
                  << ", skipped\n";
        continue;
      }
      auto it = noisy_scores.find(utt);
      if (it == noisy_scores.end()) {
        std::cerr << "no noisy-side external score for " << utt
                  << ", skipped\n";
        continue;
      }
      const auto* e = manifest.find(utt);
      rows.push_back(DeltaRow{utt, e->group, seaug::MetricKind::kExternalPesq,
                              it->second, score});
    }
  }

  std::sort(rows.begin(), rows.end(), [](const DeltaRow& a, const DeltaRow& b) {
    if (a.utt_id != b.utt_id) return a.utt_id < b.utt_id;
    return seaug::to_string(a.metric) < seaug::to_string(b.metric);
  });

  fs::create_directories(out);
  {
    std::ofstream csv(out / "deltas.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw Error("cannot write deltas.csv");
    csv << "utt_id,group,metric,noisy,enhanced,delta\n";
    for (const auto& r : rows)
      csv << r.utt_id << ',' << seaug::to_string(r.group) << ','
          << seaug::to_string(r.metric) << ',' << format_fixed(r.noisy) << ','
          << format_fixed(r.enhanced) << ','
          << format_fixed(r.enhanced - r.noisy) << "\n";
  }

  std::vector<seaug::DeltaValue> deltas;
  for (const auto& r : rows)
    deltas.push_back(
        seaug::DeltaValue{r.metric, r.enhanced - r.noisy, r.utt_id});
  const auto reports =
      seaug::aggregate(deltas, seaug::group_lookup(manifest), ci_level);
  seaug::write_report_csv(reports, out / "report.csv");
  const std::string table = seaug::render_report_table(reports);
  {
    std::ofstream txt(out / "report.txt", std::ios::binary | std::ios::trunc);
    if (!txt) throw Error("cannot write report.txt");
    txt << table;
  }
  std::cout << table;
  return 0;
}

// ------------------------------------------------------------------ report

int cmd_report(const GlobalOpts& g, const std::string& deltas_csv,
               const std::string& out_dir, double ci_flag,
               const CLI::Option* ci_opt) {
  const double ci_level = g.real_or(ci_opt, ci_flag, "ci_level", 0.95);
  std::ifstream in(deltas_csv);
  if (!in) throw UsageError("cannot open deltas csv: " + deltas_csv);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty deltas csv");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "utt_id,group,metric,noisy,enhanced,delta")
    throw Error("unexpected deltas csv header");
  std::vector<seaug::DeltaValue> deltas;
  std::map<std::string, seaug::Group> group_of;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 6)
      throw Error("malformed deltas row at line " + std::to_string(lineno));
    group_of[cols[0]] = seaug::group_from_string(cols[1]);
    deltas.push_back(seaug::DeltaValue{seaug::metric_from_string(cols[2]),
                                       std::stod(cols[5]), cols[0]});
  }
  const auto reports = seaug::aggregate(deltas, group_of, ci_level);
  const std::string table = seaug::render_report_table(reports);
  if (!out_dir.empty()) {
    seaug::write_report_csv(reports, fs::path(out_dir) / "report.csv");
    std::ofstream txt(fs::path(out_dir) / "report.txt",
                      std::ios::binary | std::ios::trunc);
    txt << table;
  }
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speech-enhancement data-augmentation corpus toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);

  GlobalOpts g;
  auto* seed_opt =
      app.add_option("--seed", g.seed, "master seed for all randomness");
  auto* jobs_opt = app.add_option("--jobs", g.jobs, "worker thread count");
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_flag("--dry-run", g.dry_run, "plan only, write nothing");

  // resample
  std::string rs_in, rs_out;
  int rs_rate = 16000;
  auto* rs = app.add_subcommand("resample", "resample a raw corpus");
  rs->add_option("--in", rs_in, "raw corpus dir (speakers.csv + clean/)")
      ->required();
  rs->add_option("--out", rs_out, "output corpus root")->required();
  auto* rs_rate_opt = rs->add_option("--rate", rs_rate, "target sample rate");

  // split
  std::string sp_root, sp_out;
  int sp_k = 10;
  auto* sp = app.add_subcommand("split", "build speaker-independent folds");
  sp->add_option("--root", sp_root, "corpus root")->required();
  auto* sp_k_opt = sp->add_option("--folds", sp_k, "fold count");
  sp->add_option("--out", sp_out, "fold file (default root/folds.json)");

  // augment
  std::string au_root, au_strategy, au_folds, au_noise, au_synth, au_gen;
  int au_ratio = 100, au_fold = 0;
  auto* au = app.add_subcommand("augment", "plan and materialize variants");
  au->add_option("--root", au_root, "corpus root")->required();
  au->add_option("--strategy", au_strategy,
                 "pitch_shift|time_stretch|specmix|noise|synthetic")
      ->required();
  au->add_option("--ratio", au_ratio, "25|100|400")->required();
  au->add_option("--fold-file", au_folds, "fold file");
  au->add_option("--fold", au_fold, "fold index (default 0)");
  au->add_option("--noise-dir", au_noise, "typed noise corpus root");
  au->add_option("--synthetic-dir", au_synth, "generated speech dir");
  au->add_option("--generator", au_gen, "generator name tag");

  // mix
  std::string mx_root, mx_noise;
  auto* mx = app.add_subcommand("mix", "add noise to unmixed entries");
  mx->add_option("--root", mx_root, "corpus root")->required();
  mx->add_option("--noise-dir", mx_noise, "typed noise corpus root");

  // enhance
  std::string en_root, en_method = "wiener", en_out;
  auto* en = app.add_subcommand("enhance", "run a baseline enhancer");
  en->add_option("--root", en_root, "corpus root")->required();
  en->add_option("--method", en_method, "identity|specsub|wiener");
  en->add_option("--out-dir", en_out, "enhanced output dir");

  // evaluate
  std::string ev_root, ev_enh, ev_out, ev_pesq_enh, ev_pesq_noisy;
  bool ev_partial = false;
  double ev_ci = 0.95;
  auto* ev = app.add_subcommand("evaluate", "score and aggregate deltas");
  ev->add_option("--root", ev_root, "corpus root")->required();
  ev->add_option("--enhanced-dir", ev_enh, "dir of enhanced wavs");
  ev->add_option("--out-dir", ev_out, "report output dir");
  ev->add_flag("--allow-partial", ev_partial,
               "skip utterances with missing enhanced files");
  auto* ev_ci_opt = ev->add_option("--ci-level", ev_ci, "0.90|0.95|0.99");
  ev->add_option("--pesq-enhanced", ev_pesq_enh,
                 "external scores CSV for enhanced signals");
  ev->add_option("--pesq-noisy", ev_pesq_noisy,
                 "external scores CSV for noisy signals");

  // report
  std::string rp_deltas, rp_out;
  double rp_ci = 0.95;
  auto* rp = app.add_subcommand("report", "re-aggregate a deltas csv");
  rp->add_option("--deltas", rp_deltas, "deltas.csv from evaluate")
      ->required();
  rp->add_option("--out-dir", rp_out, "report output dir");
  auto* rp_ci_opt = rp->add_option("--ci-level", rp_ci, "0.90|0.95|0.99");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }
    g.seed_given = seed_opt->count() > 0;
    g.jobs_given = jobs_opt->count() > 0;
    g.finalize();

    if (rs->parsed())
      return cmd_resample(g, rs_in, rs_out,
                          g.int_or(rs_rate_opt, rs_rate, "rate", 16000));
    if (sp->parsed())
      return cmd_split(g, sp_root, g.int_or(sp_k_opt, sp_k, "folds", 10),
                       sp_out);
    if (au->parsed())
      return cmd_augment(g, au_root, au_strategy, au_ratio, au_folds, au_fold,
                         au_noise, au_synth, au_gen);
    if (mx->parsed()) return cmd_mix(g, mx_root, mx_noise);
    if (en->parsed()) return cmd_enhance(g, en_root, en_method, en_out);
    if (ev->parsed())
      return cmd_evaluate(g, ev_root, ev_enh, ev_out, ev_partial, ev_ci,
                          ev_ci_opt, ev_pesq_enh, ev_pesq_noisy);
    if (rp->parsed()) return cmd_report(g, rp_deltas, rp_out, rp_ci, rp_ci_opt);
    throw UsageError("no subcommand given");
  } catch (const UsageError& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
