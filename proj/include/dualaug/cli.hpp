// Copyright 2026 The DualAug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line dispatcher: gen-data, train, ablate, sweep, score-dist.
//
// Settings resolve as: command-line flag > config file > built-in default.
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dualaug/config.hpp"
#include "dualaug/trainer.hpp"

namespace dualaug {

namespace detail {

/// Short flags, each an alias of exactly one config key.
inline const std::map<std::string, std::string>& flag_aliases() {
  static const std::map<std::string, std::string> aliases = {
      {"data.source", "--dataset"},      {"data.per_class", "--per-class"}, {"train.epochs", "--epochs"},
      {"train.seed", "--seed"},          {"train.batch_size", "--batch-size"}, {"train.variant", "--variant"},
      {"train.out", "--out"},            {"gate.lambda", "--lambda"},       {"gate.scorer", "--scorer"},
      {"gate.warmup_fraction", "--warmup"}, {"branch.m_upper", "--m-upper"}, {"branch.heavy_mode", "--heavy-mode"},
  };
  return aliases;
}

/// Collects the run settings of one subcommand.
struct RunOptions {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  int verbosity = 0;

  void attach(CLI::App& sub) {
    sub.add_option("-c,--config", config_path, "Config file with `section.key = value` lines");
    sub.add_flag("-v,--verbose", verbosity, "Print the resolved configuration");
    for (const std::string& key : config_keys()) {
      std::string names = "--" + key;
      if (auto it = flag_aliases().find(key); it != flag_aliases().end()) names += "," + it->second;
      options[key] = sub.add_option(names, values[key], std::string(config_key_help(key)));
    }
  }

  RunConfig resolve() const {
    RunConfig config;
    if (!config_path.empty()) dualaug::apply(config, load_config(config_path));
    Settings flags;
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) flags[key] = values.at(key);
    dualaug::apply(config, flags);
    return config;
  }
};

inline std::string describe(const RunConfig& c) {
  std::ostringstream os;
  os << "data.source=" << c.data.source << " classes=" << c.data.classes << " per_class=" << c.data.per_class
     << "\nbranch.heavy_mode=" << to_string(c.branch.heavy_mode) << " m_upper=" << c.branch.m_upper
     << " basic_ops=" << c.branch.basic_ops_per_sample << "\ngate.temperature=" << c.gate.temperature
     << " lambda=" << c.gate.lambda << " warmup_fraction=" << c.gate.warmup_fraction
     << " scorer=" << (c.gate.scorer == ScorerKind::online ? "online" : "offline:" + c.gate.checkpoint)
     << "\ntrain.variant=" << to_string(c.variant) << " epochs=" << c.epochs << " batch_size=" << c.batch_size
     << " lr=" << c.lr << " seed=" << c.seed << " out=" << c.out << '\n';
  return os.str();
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

/// Parses `argv`, runs the selected workflow and returns the exit code.
inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
  CLI::App app{"Dual-branch data augmentation with an out-of-distribution gate", "dualaug"};
  app.require_subcommand(1);

  detail::RunOptions gen_opts, train_opts, ablate_opts, sweep_opts, dist_opts;
  std::string data_file, axis, values, checkpoint, dist_file;
  std::uint32_t dist_epoch = 0;

  auto* gen = app.add_subcommand("gen-data", "Generate a dataset and write it in the binary format");
  gen_opts.attach(*gen);
  gen->add_option("--file", data_file, "Output dataset path")->required();

  auto* train_cmd = app.add_subcommand("train", "Train one model");
  train_opts.attach(*train_cmd);

  auto* ablate_cmd = app.add_subcommand("ablate", "Train all five ablation variants with shared seeds");
  ablate_opts.attach(*ablate_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Train once per value of one hyper-parameter");
  sweep_opts.attach(*sweep_cmd);
  sweep_cmd->add_option("--axis", axis, "lambda | m_upper | warmup_fraction | heavy_mode")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();

  auto* dist_cmd = app.add_subcommand("score-dist", "Histogram scores of a trained model over the training split");
  dist_opts.attach(*dist_cmd);
  dist_cmd->add_option("--checkpoint", checkpoint, "Model checkpoint to score with")->required();
  dist_cmd->add_option("--file", dist_file, "Output CSV path (default: standard output)");
  dist_cmd->add_option("--epoch", dist_epoch, "Epoch coordinate for the augmentation streams");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  RunConfig config;
  detail::RunOptions* chosen = nullptr;
  if (gen->parsed()) chosen = &gen_opts;
  if (train_cmd->parsed()) chosen = &train_opts;
  if (ablate_cmd->parsed()) chosen = &ablate_opts;
  if (sweep_cmd->parsed()) chosen = &sweep_opts;
  if (dist_cmd->parsed()) chosen = &dist_opts;
  try {
    config = chosen->resolve();
    if (sweep_cmd->parsed()) (void)sweep_axis_from_name(axis);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }
  if (chosen->verbosity > 0) err << detail::describe(config);

  try {
    if (gen->parsed()) {
      Dataset ds;
      if (config.data.source == "shapes")
        ds = gen_shapes(config.data.classes, config.data.size, config.data.per_class, config.seed);
      else if (config.data.source == "gauss")
        ds = gen_gauss(config.data.classes, config.data.dim, config.data.per_class, config.data.spread, config.seed);
      else
        throw ConfigError("gen-data needs data.source = shapes or gauss");
      save(ds, data_file);
      out << "wrote " << ds.size() << " samples to " << data_file << '\n';
    } else if (train_cmd->parsed()) {
      const TrainResult r = train(config);
      out << "final test accuracy: " << detail::format_number(r.final_accuracy) << '\n';
    } else if (ablate_cmd->parsed()) {
      out << format_ablation_table(ablate(config));
    } else if (sweep_cmd->parsed()) {
      const SweepAxis a = sweep_axis_from_name(axis);
      out << to_string(a) << ",final_accuracy\n";
      for (const SweepRow& r : sweep(config, a, detail::split_list(values)))
        out << r.value << ',' << detail::format_number(r.final_accuracy) << '\n';
    } else if (dist_cmd->parsed()) {
      const ModelParams<float> params = load_checkpoint(checkpoint);
      const Splits data = make_splits(config.data, config.seed);
      const ScoreDistribution dist =
          score_dist(params, data.train, config.branch, config.gate, config.seed, dist_epoch, config.batch_size);
      if (dist_file.empty()) {
        out << to_csv(dist);
      } else {
        std::ofstream f(dist_file, std::ios::trunc);
        if (!f) throw Error("cannot write " + dist_file);
        f << to_csv(dist);
        out << "wrote score distribution of " << dist.sample_count << " samples to " << dist_file << '\n';
      }
      if (dist.audit_violations != 0) {
        err << "gate audit failed: " << dist.audit_violations << " violations\n";
        return 2;
      }
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace dualaug
