// SPDX-License-Identifier: Apache-2.0
//
// fssim - frequency-selective SDMA-OFDMA downlink scheduling simulator
// Copyright (C) 2026 The fssim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "fssim/channel.hpp"
#include "fssim/experiment.hpp"
#include "fssim/frame.hpp"

namespace fs = std::filesystem;
using namespace fssim;

namespace {

constexpr const char* kVersion = "fssim 0.1.0";
constexpr int kConfigError = 2;

/// "a-b" or "n" (n seeds from the config's first_seed).
std::vector<std::uint64_t> parse_seeds(const std::string& spec, const ScenarioConfig& cfg) {
  if (spec.empty()) return cfg.seed_list();
  const auto dash = spec.find('-');
  if (dash == std::string::npos) {
    ScenarioConfig c = cfg;
    c.seeds = std::stoi(spec);
    return c.seed_list();
  }
  const auto lo = std::stoull(spec.substr(0, dash));
  const auto hi = std::stoull(spec.substr(dash + 1));
  if (hi < lo) throw std::invalid_argument("empty seed range '" + spec + "'");
  std::vector<std::uint64_t> out;
  for (auto s = lo; s <= hi; ++s) out.push_back(s);
  return out;
}

void write_outputs(const fs::path& dir, const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                   const std::vector<RunMetrics>& rows) {
  fs::create_directories(dir);
  std::ofstream csv(dir / "rows.csv");
  write_csv(csv, rows);
  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = config_to_json(cfg);
  manifest["seeds"] = seeds;
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-selective SDMA-OFDMA downlink scheduling simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path, out_dir, seeds_spec, dump_channel, dump_frames, input;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "Simulate a single scenario");
  run->add_option("-c,--config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "Output directory for rows.csv and manifest.json");
  auto* seed_opt = run->add_option("-s,--seed", seed, "Single seed (default: the config's seeds)");
  run->add_option("--seeds", seeds_spec, "Seed range a-b or a count");
  run->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--dump-channel", dump_channel, "Write the first seed's channel as a binary dump");
  run->add_option("--dump-frames", dump_frames, "Write a text rendering of every frame of the first seed");

  auto* sweep = app.add_subcommand("sweep", "Simulate the config's sweep grid");
  sweep->add_option("-c,--config", config_path, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", out_dir, "Output directory")->required();
  sweep->add_option("--seeds", seeds_spec, "Seed range a-b or a count");
  sweep->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* rep = app.add_subcommand("report", "Aggregate a rows.csv file");
  rep->add_option("-i,--input", input, "rows.csv from run or sweep")->required()->check(CLI::ExistingFile);
  rep->add_option("-o,--out", out_dir, "Directory for summary.csv");

  CLI11_PARSE(app, argc, argv);
  have_seed = seed_opt->count() > 0;

  try {
    if (*rep) {
      std::ifstream in(input);
      const auto cells = summarize(read_csv(in));
      std::cout << report(cells);
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream csv(fs::path(out_dir) / "summary.csv");
        write_summary_csv(csv, cells);
      }
      return 0;
    }

    ScenarioConfig cfg;
    try {
      cfg = load_config(config_path);
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      std::cerr << "configuration error: " << e.what() << '\n';
      return kConfigError;
    }
    const auto seeds = have_seed ? std::vector<std::uint64_t>{seed} : parse_seeds(seeds_spec, cfg);

    if (*run) {
      ScenarioConfig single = cfg;
      single.sweep = {};
      if (!dump_channel.empty() && single.users > 0) {
        std::ofstream out(dump_channel, std::ios::binary);
        write_channel_dump(out, generate_channel(single.channel_model(), seeds.front()));
      }
      if (!dump_frames.empty()) {
        std::ofstream out(dump_frames);
        RunHooks hooks;
        hooks.on_frame = [&](const FrameEvent& ev) {
          out << "# frame " << ev.frame_index << '\n' << render_frame(ev.result->frame, ev.candidates) << '\n';
        };
        run_drop(single, seeds.front(), hooks);
      }
      const auto rows = run_sweep(single, seeds, jobs);
      if (!out_dir.empty()) write_outputs(out_dir, single, seeds, rows);
      std::cout << report(summarize(rows));
      for (const auto& r : rows)
        if (r.status != "ok") std::cerr << "seed " << r.seed << ": " << r.status << '\n';
      return 0;
    }

    const auto rows = run_sweep(cfg, seeds, jobs);
    write_outputs(out_dir, cfg, seeds, rows);
    std::cout << report(summarize(rows));
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
