// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include "beliefnet/cli.hpp"
#include "beliefnet/combination.hpp"
#include "beliefnet/io.hpp"
#include "oracles.hpp"

using namespace beliefnet;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "beliefnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

const Frame kAB({"A", "B"});

std::vector<MassFunction> worked_inputs() {
  return {MassFunction::from_labels(kAB, {{"A", 0.6}, {"A|B", 0.4}}),
          MassFunction::from_labels(kAB, {{"A", 0.3}, {"B", 0.2}, {"A|B", 0.5}})};
}

Outcome worked_conjunctive() {
  const auto t0 = Clock::now();
  const auto m = conjunctive_combine(worked_inputs());
  const FocalSet a = kAB.parse("A"), b = kAB.parse("B"), ab = kAB.full();
  bool ok = near(m.empty_mass(), 0.12, 1e-9) && near(m.mass(a), 0.6, 1e-9) && near(m.mass(b), 0.08, 1e-9) &&
            near(m.mass(ab), 0.2, 1e-9);
  ok = ok && near(credibility(m, a), 0.6, 1e-9) && near(credibility(m, b), 0.08, 1e-9) &&
       near(credibility(m, ab), 0.88, 1e-9) && credibility(m, FocalSet::empty()) == 0.0;
  ok = ok && near(plausibility(m, a), 0.8, 1e-9) && near(plausibility(m, b), 0.28, 1e-9) &&
       near(plausibility(m, ab), 0.88, 1e-9) && plausibility(m, FocalSet::empty()) == 0.0;
  const double pa = pignistic(m, a), pb = pignistic(m, b);
  ok = ok && near(pa, 0.7955, 5e-5) && near(pb, 0.2045, 5e-5) && near(pignistic(m, ab), 1.0, 1e-9);
  char buf[160];
  std::snprintf(buf, sizeof buf, "m(empty)=%.12g betP(A)=%.6f betP(B)=%.6f (%.3f ms)", m.empty_mass(), pa, pb,
                seconds_since(t0) * 1e3);
  return {ok, buf};
}

Outcome worked_pcr() {
  const auto t0 = Clock::now();
  const auto in = worked_inputs();
  const auto m = pcr_combine(in);
  const auto c = conjunctive_combine(in);
  const FocalSet a = kAB.parse("A"), b = kAB.parse("B"), ab = kAB.full();
  bool ok = m.empty_mass() == 0.0 && near(m.mass(a), 0.69, 1e-9) && near(m.mass(b), 0.11, 1e-9) &&
            near(m.mass(ab), 0.2, 1e-9);
  const double gain_a = m.mass(a) - c.mass(a), gain_b = m.mass(b) - c.mass(b);
  ok = ok && near(c.mass(a), 0.60, 1e-9) && near(gain_a, 0.09, 1e-9) && near(c.mass(b), 0.08, 1e-9) &&
       near(gain_b, 0.03, 1e-9);
  ok = ok && near(credibility(m, a), 0.69, 1e-9) && near(plausibility(m, a), 0.89, 1e-9) &&
       near(plausibility(m, b), 0.31, 1e-9) && near(credibility(m, ab), 1.0, 1e-9);
  const double pa = pignistic(m, a), pb = pignistic(m, b);
  ok = ok && near(pa, 0.79, 5e-3) && near(pb, 0.21, 5e-3);
  char buf[200];
  std::snprintf(buf, sizeof buf, "A=%.2f+%.2f B=%.2f+%.2f betP(A)=%.4f betP(B)=%.4f (%.3f ms)", c.mass(a), gain_a,
                c.mass(b), gain_b, pa, pb, seconds_since(t0) * 1e3);
  return {ok, buf};
}

Outcome rule_properties() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20240601);
  int failures = 0;
  double worst_pcr = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Frame frame = oracle::letters(1 + trial % 4);
    const int sources = 2 + trial % 2;
    std::vector<MassFunction> in;
    for (int k = 0; k < sources; ++k) in.push_back(oracle::random_mass(frame, gen, false));
    for (auto rule : {CombinationRule::conjunctive, CombinationRule::dubois_prade, CombinationRule::pcr}) {
      const auto out = combine(rule, in);
      if (!near(out.total(), 1.0, 1e-9)) ++failures;
      if (rule != CombinationRule::conjunctive && out.empty_mass() != 0.0) ++failures;
    }
    std::vector<oracle::Dense> dense;
    for (const auto& m : in) dense.push_back(oracle::to_dense(m));
    const auto got = oracle::to_dense(pcr_combine(in));
    const auto want = oracle::pcr_literal(dense);
    for (std::size_t x = 0; x < want.size(); ++x) worst_pcr = std::max(worst_pcr, std::abs(got[x] - want[x]));

    std::vector<MassFunction> calm;
    for (int k = 0; k < sources; ++k) calm.push_back(oracle::anchored_mass(frame, gen));
    const auto c = oracle::to_dense(conjunctive_combine(calm));
    const auto dp = oracle::to_dense(dubois_prade_combine(calm));
    const auto pcr = oracle::to_dense(pcr_combine(calm));
    for (std::size_t x = 0; x < c.size(); ++x)
      if (!near(dp[x], c[x], 1e-12) || !near(pcr[x], c[x], 1e-12)) ++failures;
  }
  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "violations=%d max|pcr-oracle|=%.3g (%.2f s)", failures, worst_pcr, elapsed);
  return {failures == 0 && worst_pcr <= 1e-9 && elapsed < 10.0, buf};
}

Outcome gradients() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.0, 1.0);
  double worst = 0.0;
  for (const std::vector<int>& sizes : {std::vector<int>{4, 3, 2}, std::vector<int>{24, 10, 7}}) {
    for (int k = 0; k < 20; ++k) {
      const auto net = init_network<double>(sizes, 1000 + k, 1.0);
      Eigen::VectorXd x(sizes.front()), d(sizes.back());
      for (auto& v : x) v = u(gen);
      for (auto& v : d) v = t(gen);
      worst = std::max(worst, oracle::gradient_gap(net, x, d));
    }
  }
  const double elapsed = seconds_since(t0);
  char buf[120];
  std::snprintf(buf, sizeof buf, "max relative error=%.3g over 40 nets (%.2f s)", worst, elapsed);
  return {worst < 1e-4 && elapsed < 5.0, buf};
}

Outcome argmax_invariance() {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int agree = 0, total = 0;
  while (total < 1000) {
    const int k = 2 + total % 6;
    Eigen::VectorXd v(k);
    for (auto& x : v) x = u(gen);
    Eigen::Index arg;
    const double top = v.maxCoeff(&arg);
    if ((v.array() == top).count() != 1) continue;
    const Frame frame = oracle::letters(static_cast<std::size_t>(k));
    agree += decide(outputs_to_mass(v, frame).mass, DecisionCriterion::max_betp) ==
             FocalSet::singleton(static_cast<std::size_t>(arg));
    ++total;
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " decisions equal the raw argmax"};
}

double summary_mean(const std::string& csv, const std::string& row) {
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind(row + ",", 0) == 0) return std::stod(line.substr(row.size() + 1));
  throw std::runtime_error("report has no '" + row + "' row");
}

Outcome end_to_end(const fs::path& dir) {
  const auto corpus = (dir / "corpus").string();
  if (run({"synth", "--out", corpus, "--classes", "3", "--tiles-per-class", "100", "--experts", "3", "--error-rate",
           "0.1", "--seed", "1"}) != 0)
    return {false, "synth failed"};
  const auto t0 = Clock::now();
  if (run({"eval", "--corpus", corpus, "--trials", "5", "--seed", "1", "--out", (dir / "eval.csv").string()}) != 0)
    return {false, "eval failed"};
  const double elapsed = seconds_since(t0);
  const auto csv = read_text(dir / "eval.csv");
  const double truth = summary_mean(csv, "truth"), reference = summary_mean(csv, "reference");
  char buf[160];
  std::snprintf(buf, sizeof buf, "truth mean=%.4f reference mean=%.4f (eval %.1f s)", truth, reference, elapsed);
  return {truth >= 0.90 && elapsed < 120.0, buf};
}

Outcome determinism(const fs::path& dir) {
  const auto in = [&](const char* name) { return (dir / name).string(); };
  write_text(dir / "pair.json", R"([{"frame":["A","B"],"masses":{"A":0.6,"A|B":0.4}},
{"frame":["A","B"],"masses":{"A":0.3,"B":0.2,"A|B":0.5}}])");

  // Each command writes into run<k>/, and the two directories are compared file by file.
  auto pipeline = [&](const std::string& k) {
    const auto out = [&](const char* name) { return (dir / ("run" + k) / name).string(); };
    return run({"synth", "--out", out("corpus"), "--tiles-per-class", "20", "--tile-size", "32", "--seed", "9"}) == 0 &&
           run({"features", "--in", out("corpus/tiles"), "--out", out("features.csv")}) == 0 &&
           run({"reality", "--in", out("corpus/annotations.json"), "--out", out("reference.csv"), "--compare",
                "conjunctive"}) == 0 &&
           run({"fuse", "--in", in("pair.json"), "--out", out("fused.json"), "--rule", "pcr", "--report",
                out("fuse.csv")}) == 0 &&
           run({"train", "--features", out("features.csv"), "--targets", out("reference.json"), "--out",
                out("model.json"), "--hidden", "10", "--epochs", "30", "--seed", "3", "--trace", out("trace.csv")}) ==
               0 &&
           run({"classify", "--model", out("model.json"), "--features", out("features.csv"), "--out",
                out("labels.csv")}) == 0 &&
           run({"eval", "--corpus", out("corpus"), "--trials", "3", "--hidden", "10", "--epochs", "30", "--out",
                out("eval.csv")}) == 0;
  };
  if (!pipeline("1") || !pipeline("2")) return {false, "a command failed"};

  int files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "run1")) {
    if (!entry.is_regular_file()) continue;
    const auto twin = dir / "run2" / fs::relative(entry.path(), dir / "run1");
    ++files;
    if (!fs::exists(twin) || read_text(entry.path()) != read_text(twin)) ++differing;
  }
  return {differing == 0 && files > 0,
          std::to_string(files) + " files from 7 commands, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  const auto dir = fs::temp_directory_path() / "beliefnet_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 worked example, conjunctive rule", worked_conjunctive},
      {"2 worked example, PCR rule", worked_pcr},
      {"3 rule property suite", rule_properties},
      {"4 gradient check", gradients},
      {"5 argmax invariance", argmax_invariance},
      {"6 end-to-end synthetic run", [&] { return end_to_end(dir); }},
      {"7 CLI determinism", [&] { return determinism(dir); }},
  };

  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(dir);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
