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


// Runs every acceptance experiment through the lab registry and prints one line per criterion.
// Usage: shallowlab-acceptance [csv-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "lab.hpp"
#include "shallowlab/parity.hpp"

using namespace shallowlab;
using namespace shallowlab::lab;

namespace {

struct Recorded {
  std::string experiment;
  Config config;
  uint64_t seed;
  std::string csv;
  // Instance prefix rerun for the long solver runs; 0 reruns everything.
  size_t prefix = 0;
};

std::vector<Recorded> recorded;
std::string csv_dir;
int failures = 0;

Table run(const std::string& experiment, const std::map<std::string, std::string>& sets, uint64_t seed,
          const std::string& file, size_t prefix = 0) {
  Config c;
  for (const auto& [k, v] : sets) c.set(k, v);
  Table t = run_experiment(experiment, c, seed, 1);
  recorded.push_back({experiment, c, seed, t.csv(), prefix});
  if (!csv_dir.empty()) std::ofstream(csv_dir + "/" + file + ".csv") << t.csv();
  return t;
}

size_t col_sum(const Table& t, const std::string& name) {
  size_t c = t.column(name), s = 0;
  for (const auto& r : t.rows) s += std::stoull(r[c]);
  return s;
}

size_t count_if_equal(const Table& t, const std::string& name, const std::string& value) {
  size_t c = t.column(name), s = 0;
  for (const auto& r : t.rows) s += r[c] == value;
  return s;
}

// For tables with (check, expected, actual, pass) rows: failing check names, or "" if all pass.
std::string failing_checks(const Table& t, const std::string& prefix = "") {
  std::string out;
  for (const auto& r : t.rows)
    if (r[0].rfind(prefix, 0) == 0 && r[3] != "1") out += (out.empty() ? "" : " ") + r[0] + "=" + r[2] + "/" + r[1];
  return out;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int id, bool pass, double seconds, double limit, const std::string& detail) {
  // A limit of 0 means the criterion has no runtime bound.
  bool in_time = limit <= 0 || seconds < limit;
  std::ostringstream line;
  line << "criterion " << id << " " << (pass && in_time ? "PASS" : "FAIL") << " (" << detail;
  char buf[64];
  if (limit > 0)
    std::snprintf(buf, sizeof buf, "; %.1fs of %.0fs", seconds, limit);
  else
    std::snprintf(buf, sizeof buf, "; %.1fs", seconds);
  line << buf << (in_time ? "" : ", over time limit") << ")";
  std::cout << line.str() << std::endl;
  failures += !(pass && in_time);
}

void criterion1() {
  Timer tm;
  Table t = run("tableau-fuzz", {{"circuits", "1000"}, {"max_qubits", "5"}}, 101, "c01_tableau_fuzz");
  size_t bad = col_sum(t, "mismatches");
  report(1, bad == 0, tm.seconds(), 60,
         std::to_string(t.rows.size()) + " circuits, " + std::to_string(col_sum(t, "measurements")) +
             " measurements, " + std::to_string(bad) + " mismatches");
}

void criterion2() {
  Timer tm;
  Table t = run("audit", {{"section", "constants"}}, 102, "c02_constants");
  std::string bad = failing_checks(t);
  report(2, bad.empty(), tm.seconds(), 1, bad.empty() ? "all constants match" : "mismatched: " + bad);
}

void criterion3() {
  Timer tm;
  Table t = run("mbqc-check", {{"words", "500"}, {"max_wires", "4"}}, 103, "c03_mbqc");
  size_t ok = col_sum(t, "match");
  report(3, ok == t.rows.size(), tm.seconds(), 60, std::to_string(ok) + "/" + std::to_string(t.rows.size()) + " words");
}

void criterion4() {
  Timer tm;
  Table ex = run("noise-sweep", {{"mode", "exhaustive"}, {"d", "3"}}, 104, "c04_exhaustive");
  Table mc = run("noise-sweep", {{"mode", "memory"}, {"d", "3,5"}, {"p", "1e-2"}, {"trials", "10000"}}, 104,
                 "c04_memory");
  size_t ex_fail = col_sum(ex, "failures");
  double f3 = std::stod(mc.rows[0][3]), f5 = std::stod(mc.rows[1][3]), n = 1e4;
  double p3 = f3 / n, p5 = f5 / n, pool = (p3 + p5) / 2;
  double z = pool > 0 ? (p3 - p5) / std::sqrt(pool * (1 - pool) * 2 / n) : 0.0;
  double pval = 0.5 * std::erfc(z / std::sqrt(2.0));
  char buf[200];
  std::snprintf(buf, sizeof buf, "d=3 single flips %zu/%s decoded unchanged; failures d=3 %.0f, d=5 %.0f, p-value %.2e",
                size_t(std::stoull(ex.rows[0][2]) - ex_fail), ex.rows[0][2].c_str(), f3, f5, pval);
  report(4, ex_fail == 0 && f5 < f3 && pval < 0.01, tm.seconds(), 300, buf);
}

void criterion5() {
  Timer tm;
  Table t = run("noise-sweep", {{"mode", "graph"}, {"d", "5"}, {"p", "0,1e-3"}, {"trials", "1000"}}, 105,
               "c05_noisy_extension");
  size_t rej0 = std::stoull(t.rows[0][3]), rej1 = std::stoull(t.rows[1][3]);
  report(5, rej0 == 0 && rej1 <= 10, tm.seconds(), 600,
         "accepted " + std::to_string(1000 - rej0) + "/1000 at p=0, " + std::to_string(1000 - rej1) +
             "/1000 at p=1e-3");
}

// One half-rand-audit run serves criteria 6 to 9.
Table half_rand;
double half_rand_seconds = 0;

void criterion6() {
  Timer tm;
  half_rand = run("half-rand-audit", {{"randomize_trials", "10000"}, {"efrak_random", "1000"}}, 106, "c06_09_half_rand");
  half_rand_seconds = tm.seconds();
  std::string bad = failing_checks(half_rand, "det_encoding_");
  report(6, bad.empty(), half_rand_seconds, 60, bad.empty() ? "all DAGs up to n=5 agree" : "mismatched: " + bad);
}

void criterion7() {
  std::string bad = failing_checks(half_rand, "randomize_") + failing_checks(half_rand, "dfrak_") +
                    failing_checks(half_rand, "orbit_") + failing_checks(half_rand, "half_randomization_");
  report(7, bad.empty(), half_rand_seconds, 300, bad.empty() ? "determinant kept in 10000 trials, orbit and half-randomization exact" : "failed: " + bad);
}

void criterion8() {
  ShareMatrix k(2, 2);
  k.set_share(0, 0, 0, true);
  k.set_share(0, 1, 0, true);
  k.set_share(0, 1, 1, true);
  k.set_share(1, 1, 1, true);
  std::ifstream in(std::string(SHALLOWLAB_TEST_DATA) + "/layered_example.txt");
  std::stringstream golden;
  golden << in.rdbuf();
  bool golden_ok = in.good() || in.eof();
  golden_ok = golden_ok && build_layered(k).dump() == golden.str();
  std::string bad = failing_checks(half_rand, "layered_");
  report(8, golden_ok && bad.empty(), half_rand_seconds, 60,
         std::string(golden_ok ? "worked example matches golden file" : "worked example differs from golden file") +
             (bad.empty() ? ", parity kept on all 64 n=3 share matrices" : ", failed: " + bad));
}

void criterion9() {
  std::string bad = failing_checks(half_rand, "efrak_");
  report(9, bad.empty(), half_rand_seconds, 120, bad.empty() ? "64 exhaustive n=3 words injective, 1000 random n<=6 words correct" : "failed: " + bad);
}

void criterion10() {
  Timer tm;
  Table t = run("audit", {{"section", "gamma"}, {"gamma_draws", "10000"}}, 110, "c10_gamma");
  std::string bad = failing_checks(t);
  report(10, bad.empty(), tm.seconds(), 120, bad.empty() ? "10000 draws and dense checks all hold" : "failed: " + bad);
}

void criterion11() {
  Timer tm;
  Table t = run("pentagram-dist", {{"runs", "10000"}, {"f_values", "3"}}, 111, "c11_pentagram");
  const size_t cf = t.column("f"), cb = t.column("back"), cc = t.column("count");
  size_t none = 0, outside = 0, stab_f0 = 0, back_stab = 0, total = 0;
  std::map<std::string, std::map<std::string, double>> table;
  std::map<std::string, double> f_total, back_total;
  for (const auto& r : t.rows) {
    size_t c = std::stoull(r[cc]);
    total += c;
    if (r[t.column("pauli")] == "NONE") {
      none += c;
      continue;
    }
    if (r[t.column("in_s")] != "1") outside += c;
    if (r[cf] == "0" && r[t.column("stabilizer")] == "1") stab_f0 += c;
    if (r[t.column("back_nonstabilizer")] != "1") back_stab += c;
    table[r[cf]][r[cb]] += double(c);
    f_total[r[cf]] += double(c);
    back_total[r[cb]] += double(c);
  }
  double stat = 0;
  for (const auto& [f, ft] : f_total)
    for (const auto& [b, bt] : back_total) {
      double expect = ft * bt / double(total - none);
      double obs = table[f].count(b) ? table[f][b] : 0.0;
      stat += (obs - expect) * (obs - expect) / expect;
    }
  double df = double((back_total.size() - 1) * (f_total.size() - 1));
  double pval = chi2_upper_tail(stat, df);
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "%zu runs, %zu outside S, %zu stabilizers at f=I, %zu pulled back to stabilizers, %zu without an "
                "inconsistent Pauli; D_R independence chi2 %.1f on %.0f df, p %.3f",
                total, outside, stab_f0, back_stab, none, stat, df, pval);
  report(11, outside == 0 && stab_f0 == 0 && back_stab == 0 && none == 0 && pval > 0.01, tm.seconds(), 600, buf);
}

void criterion12() {
  Timer tm;
  Table t = run("audit", {{"section", "blocking"}}, 112, "c12_blocking");
  std::string bad = failing_checks(t);
  size_t found = count_if_equal(t, "pass", "1");
  report(12, bad.empty() && t.rows.size() == 20, tm.seconds(), 300,
         std::to_string(found) + "/" + std::to_string(t.rows.size()) + " nonstabilizers have a blocking f" +
             (bad.empty() ? "" : "; none for " + bad));
}

void criterion13() {
  Timer tm;
  struct Case {
    std::string eps, policy, file;
    double need;
  };
  std::vector<Case> cases{{"0", "uniform", "c13_honest", 0.99},
                          {"0.002", "uniform", "c13_uniform_1_500", 0.95},
                          {"0.002", "fixed-set", "c13_fixed_set_1_500", 0.95},
                          {"0.002", "concentrate", "c13_concentrate_1_500", 0.95},
                          {"0.02", "concentrate", "c13_concentrate_1_50", -1}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    Table t = run("solve-parityl",
                  {{"n", "6"}, {"instances", "100"}, {"k", "15"}, {"epsilon", c.eps}, {"policy", c.policy}}, 113,
                  c.file, 10);
    size_t ok = col_sum(t, "correct");
    if (c.need > 0) pass = pass && double(ok) >= c.need * double(t.rows.size());
    std::string name = c.eps == "0" ? "honest" : c.policy + "@" + c.eps;
    detail += (detail.empty() ? "" : ", ") + name + " " + std::to_string(ok) + "/" + std::to_string(t.rows.size()) +
              (c.need > 0 ? "" : " (reported only)");
  }
  report(13, pass, tm.seconds(), 1800, detail);
}

void criterion14() {
  Timer tm;
  Table a = run("nc1-estimate", {{"epsilon", "0"}, {"samples", "100000"}, {"reps", "20"}}, 114, "c14_eps0");
  double worst = 0;
  for (const auto& r : a.rows) worst = std::max(worst, std::stod(r[a.column("max_nonstabilizer_deviation")]));
  size_t ok0 = col_sum(a, "correct");
  Table b = run("nc1-estimate", {{"epsilon", "0.02"}, {"adversary", "fixed-stabilizer"}, {"reps", "200"}}, 114,
                "c14_eps002");
  size_t ok1 = col_sum(b, "correct");
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "eps=0: %zu/%zu decided correctly, max deviation from 1/12 %.4f; eps=0.02 fixed-stabilizer: %zu/%zu "
                "correct at %s samples",
                ok0, a.rows.size(), worst, ok1, b.rows.size(), b.rows[0][b.column("samples")].c_str());
  report(14, ok0 == a.rows.size() && worst <= 0.01 && 3 * ok1 >= 2 * b.rows.size(), tm.seconds(), 600, buf);
}

void criterion15() {
  Timer tm;
  size_t same = 0;
  std::string differ;
  for (const auto& r : recorded) {
    Config c = r.config;
    std::string want = r.csv;
    if (r.prefix) {
      c.set("instances", std::to_string(r.prefix));
      std::istringstream in(r.csv);
      std::string line;
      want.clear();
      for (size_t i = 0; i <= r.prefix && std::getline(in, line); ++i) want += line + "\n";
    }
    // A different worker count must not change the bytes either.
    std::string got = run_experiment(r.experiment, c, r.seed, 2).csv();
    if (got == want)
      ++same;
    else
      differ += " " + r.experiment;
  }
  report(15, same == recorded.size(), tm.seconds(), 0,
         std::to_string(same) + "/" + std::to_string(recorded.size()) + " reruns byte-identical" +
             (differ.empty() ? "" : "; differ:" + differ));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    csv_dir = argv[1];
    std::filesystem::create_directories(csv_dir);
  }
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  criterion13();
  criterion14();
  criterion15();
  std::cout << (15 - failures) << "/15 criteria pass" << std::endl;
  return failures ? 1 : 0;
}
