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


#ifndef SHALLOWLAB_TOOLS_LAB_HPP
#define SHALLOWLAB_TOOLS_LAB_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace shallowlab::lab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "key = value" lines; '#' starts a comment.
class Config {
 public:
  static Config parse(const std::string& text);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct KeySpec {
  std::string name;
  std::string fallback;
  std::string help;
};

// Config checked against an experiment's keys; every accessor validates its range.
class Params {
 public:
  Params(const Config& config, const std::vector<KeySpec>& keys);
  std::string text(const std::string& key) const;
  size_t count(const std::string& key, size_t lo, size_t hi) const;
  double real(const std::string& key, double lo, double hi) const;
  std::string choice(const std::string& key, const std::vector<std::string>& allowed) const;
  std::vector<size_t> count_list(const std::string& key, size_t lo, size_t hi) const;
  std::vector<double> real_list(const std::string& key, double lo, double hi) const;

 private:
  std::map<std::string, std::string> values_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string csv() const;
  // Index of a header column; throws if absent.
  size_t column(const std::string& name) const;
};

struct Experiment {
  std::string name;
  std::string summary;
  std::vector<KeySpec> keys;
  std::function<Table(const Params&, uint64_t seed, unsigned jobs)> run;
};

const std::vector<Experiment>& experiments();
const Experiment& find_experiment(const std::string& name);
Table run_experiment(const std::string& name, const Config& config, uint64_t seed, unsigned jobs = 1);

std::string format_real(double v);
// Upper tail of the chi-square distribution (Wilson-Hilferty).
double chi2_upper_tail(double x, double df);

}  // namespace shallowlab::lab

#endif
