// Copyright 2026 The shallowlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "lab.hpp"

namespace {

using namespace shallowlab::lab;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << data;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string describe(const Experiment& e) {
  std::string out = e.name + ": " + e.summary + "\n";
  for (const auto& k : e.keys) out += "  " + k.name + " = " + k.fallback + "    " + k.help + "\n";
  return out;
}

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  uint64_t seed = 1;
  std::string out;
  unsigned jobs = 1;
  bool show_keys = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shallowlab experiment runner"};
  app.require_subcommand(1);
  Options opt;
  for (const auto& e : experiments()) {
    CLI::App* sub = app.add_subcommand(e.name, e.summary);
    sub->add_option("--config", opt.config_path, "key = value config file");
    sub->add_option("--set", opt.sets, "override one key, as key=value");
    sub->add_option("--seed", opt.seed, "master seed");
    sub->add_option("--out", opt.out, "CSV output path (stdout if omitted)");
    sub->add_option("--jobs", opt.jobs, "worker threads; 0 uses all cores")->check(CLI::Range(0u, 1024u));
    sub->add_flag("--keys", opt.show_keys, "list config keys with defaults and exit");
  }
  CLI11_PARSE(app, argc, argv);

  const Experiment& e = find_experiment(app.get_subcommands().front()->get_name());
  if (opt.show_keys) {
    std::cout << describe(e);
    return 0;
  }
  try {
    Config config = opt.config_path.empty() ? Config() : Config::parse(read_file(opt.config_path));
    for (const auto& s : opt.sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + s);
      config.set(s.substr(0, eq), s.substr(eq + 1));
    }
    unsigned jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    Table t = run_experiment(e.name, config, opt.seed, jobs);
    if (opt.out.empty())
      std::cout << t.csv();
    else
      write_atomically(opt.out, t.csv());
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
