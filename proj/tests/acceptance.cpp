// Acceptance gate: one pass/fail line per criterion, exit code = #failures.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "percolab/experiments.hpp"

using namespace percolab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

std::string fmt(double v) { return format_double(v); }

EdgeId lat_edge(int64_t x, int64_t y, int dir) {
  return EdgeId{GroupElement::lattice({x, y}), dir};
}

// ---------------------------------------------------------------- criterion 1

Outcome oracle_equivalence() {
  auto spec = GroupSpec::from_id("z2");
  Window win(spec, 1);
  struct Case {
    const char* id;
  } cases[] = {{"isolated-origin"}, {"full-plus"}, {"vertical-path"}};
  const int64_t n = 100000;
  int checked = 0;
  double worst = 0.0;
  for (const auto& c : cases) {
    auto event = make_event(c.id, spec);
    for (double p : {0.3, 0.5, 0.7}) {
      BernoulliLaw law(p);
      const double exact = brute_force_probability(win, law, event);
      SampleSpec ss{1, law, 1000 + static_cast<uint64_t>(checked), n};
      auto row = estimate_probability(spec, ss, event, 0);
      const double sigma = std::max(row.std_error, 1e-9);
      const double gap = std::abs(row.estimate - exact) / sigma;
      worst = std::max(worst, gap);
      require(gap < 4.0, std::string(c.id) + " at p=" + fmt(p) + ": estimate " +
                             fmt(row.estimate) + " vs exact " + fmt(exact) + " is " + fmt(gap) +
                             " sigmas off");
      ++checked;
    }
  }
  return {true, "9 event/p pairs, n=100000 each, worst gap " + fmt(worst) + " sigmas"};
}

// ---------------------------------------------------------------- criterion 2

Outcome singularity_decay() {
  auto even = make_model("even-rows");

  auto lib1 = patterns(*even, 1, 64);
  Window probe(GroupSpec::from_id("z2"), 1);
  BernoulliLaw law(0.6);
  auto match1 = [&](const Configuration& w) {
    return in_closure(cluster_of(w, w.window().spec().identity()), lib1);
  };
  const double oracle = brute_force_probability(probe, law, match1);
  require(std::abs(oracle - 0.1872) < 1e-12,
          "4-edge oracle value drifted: " + fmt(oracle) + " != 0.1872");

  MatchOptions opt;
  opt.scan_radius = 64;
  opt.threads = 0;
  auto rows = match_probabilities(*even, {1, 2, 3, 4}, law, 10000, 2024, opt);
  require(rows.size() == 4, "expected 4 rows");
  const double sigma = std::max(rows[0].std_error, 1e-9);
  const double gap = std::abs(rows[0].estimate - oracle) / sigma;
  require(gap < 4.0, "m1=" + fmt(rows[0].estimate) + " vs oracle " + fmt(oracle) + " is " +
                         fmt(gap) + " sigmas off");
  for (size_t i = 1; i < rows.size(); ++i)
    require(rows[i].estimate <= rows[i - 1].estimate,
            "m_r increased from r=" + fmt(rows[i - 1].parameter));
  require(rows[3].estimate < 0.05, "m4=" + fmt(rows[3].estimate) + " not below 0.05");
  return {true, "m1=" + fmt(rows[0].estimate) + " (oracle " + fmt(oracle) + ", " + fmt(gap) +
                    " sigmas), m4=" + fmt(rows[3].estimate) + ", nonincreasing"};
}

// ---------------------------------------------------------------- criterion 3

Outcome degenerate_dichotomy() {
  auto full = make_model("full");
  MatchOptions opt;
  opt.scan_radius = 64;
  auto ones = match_probabilities(*full, {1, 2, 3, 4, 5}, BernoulliLaw(1.0), 200, 7, opt);
  for (const auto& row : ones)
    require(row.estimate == 1.0,
            "full model at p=1, r=" + fmt(row.parameter) + ": " + fmt(row.estimate));
  auto even = make_model("even-rows");
  auto zero = match_probability(*even, 2, BernoulliLaw(1.0), 200, 7, opt);
  require(zero.estimate == 0.0, "even-rows at p=1, r=2: " + fmt(zero.estimate));
  return {true, "full: m_r=1 for r=1..5; even-rows: m_2=0 (n=200 exact)"};
}

// ---------------------------------------------------------------- criterion 4

Outcome saturation_probe() {
  auto spec = GroupSpec::from_id("z2");
  SaturationOptions opt;
  opt.condition = true;
  opt.threads = 0;
  auto rows = saturation_probabilities(spec, {5, 10, 20, 40}, BernoulliLaw(0.7), 2000, 99, opt);
  require(rows.size() == 4, "expected 4 rows");
  require(rows[0].n > 0, "conditioning left no samples");
  for (size_t i = 1; i < rows.size(); ++i) {
    require(rows[i].n == rows[0].n, "conditioned denominators differ across R");
    require(rows[i].estimate >= rows[i - 1].estimate,
            "s_hat decreased at R=" + fmt(rows[i].parameter));
  }
  require(rows[3].estimate >= 0.95,
          "s_hat(40)=" + fmt(rows[3].estimate) + " below 0.95");
  std::string detail = "n_kept=" + std::to_string(rows[0].n) + ", s_hat:";
  for (const auto& row : rows) detail += " " + fmt(row.estimate);
  return {true, detail};
}

// ---------------------------------------------------------------- criterion 5

Outcome metric_axioms() {
  Window win(GroupSpec::from_id("z2"), 8);
  const auto origin = GroupElement::lattice({0, 0});
  std::vector<RootedGraph> pool;
  pool.reserve(1002);
  for (uint64_t i = 0; i < 1002; ++i)
    pool.push_back(cluster_of(sample(win, BernoulliLaw(0.5), i, 555), origin));

  int exact_triples = 0;
  for (size_t i = 0; i + 2 < pool.size(); ++i) {
    const auto& a = pool[i];
    const auto& b = pool[i + 1];
    const auto& c = pool[i + 2];
    auto ab = gh_distance(a, b);
    auto ba = gh_distance(b, a);
    require(ab.value == ba.value && ab.exact == ba.exact && ab.agreement == ba.agreement,
            "asymmetric distance at triple " + std::to_string(i));
    require((ab.value == 1.0) == (ab.agreement == 0),
            "distance-1 mismatch at triple " + std::to_string(i));
    require(ab.value == std::exp(-static_cast<double>(ab.agreement)),
            "value is not exp(-agreement) at triple " + std::to_string(i));
    auto bc = gh_distance(b, c);
    auto ac = gh_distance(a, c);
    if (ab.exact && bc.exact && ac.exact) {
      ++exact_triples;
      require(ac.agreement >= std::min(ab.agreement, bc.agreement),
              "strong triangle inequality failed at triple " + std::to_string(i));
    }
  }
  require(exact_triples >= 100, "too few exact triples to be meaningful: " +
                                    std::to_string(exact_triples));
  return {true, "1000 triples, " + std::to_string(exact_triples) +
                    " fully exact, symmetry + ultrametric + distance-1 law hold"};
}

// ---------------------------------------------------------------- criterion 6

Outcome action_laws() {
  auto spec = GroupSpec::from_id("z2");
  Window win(spec, 3);
  const auto origin = GroupElement::lattice({0, 0});
  std::mt19937_64 gen(404);
  std::uniform_int_distribution<int64_t> coord(-3, 3);

  for (int i = 0; i < 1000; ++i) {
    auto w = sample(win, BernoulliLaw(0.5), static_cast<uint64_t>(i), 777);
    auto g = GroupElement::lattice({coord(gen), coord(gen)});
    auto h = GroupElement::lattice({coord(gen), coord(gen)});
    auto lhs = shift(shift(w, g), h);
    auto rhs = shift(w, multiply(h, g));
    require(lhs.window() == rhs.window() && lhs.open_edges() == rhs.open_edges(),
            "shift composition broke at instance " + std::to_string(i));
  }

  int rerooted = 0;
  for (uint64_t i = 0; rerooted < 1000; ++i) {
    require(i < 20000, "could not draw enough non-trivial clusters");
    auto w = sample(win, BernoulliLaw(0.55), i, 888);
    auto home = cluster_of(w, origin);
    if (home.vertices.size() < 2) continue;
    for (const auto& g : home.vertices) {
      if (g.is_identity()) continue;
      auto direct = cluster_of(w, g);
      auto via = cluster_of(reroot(w, g), origin);
      require(same_graph(direct, via) && direct.truncation == via.truncation,
              "equivariance broke at sample " + std::to_string(i));
      ++rerooted;
      break;
    }
  }
  return {true, "1000 shift compositions and 1000 re-rootings, all exact"};
}

// ---------------------------------------------------------------- criterion 7

Outcome repetitive_models() {
  auto even = make_model("even-rows");
  auto lib = patterns(*even, 1, 64);
  require(lib.patterns.size() == 2,
          "patterns(even-rows,1) has " + std::to_string(lib.patterns.size()) + " patterns");
  require(is_repetitive(*even, 1, 3, 64).ok, "is_repetitive(even-rows,1,3) failed");

  for (int len = 1; len <= 12; ++len) {
    std::set<std::string> factors;
    for (int64_t i = 0; i < 10000; ++i) {
      std::string f;
      for (int k = 0; k < len; ++k) f.push_back(static_cast<char>('0' + sturmian_bit(i + k)));
      factors.insert(f);
    }
    require(factors.size() == static_cast<size_t>(len + 1),
            "factor count at length " + std::to_string(len) + " is " +
                std::to_string(factors.size()));
  }

  auto fence = make_model("fib-fence");
  std::string sizes;
  for (int r = 1; r <= 4; ++r) {
    auto flib = patterns(*fence, r, 64);
    require(flib.patterns.size() <= static_cast<size_t>(2 * r + 2),
            "fence pattern count at r=" + std::to_string(r) + " is " +
                std::to_string(flib.patterns.size()));
    sizes += (r > 1 ? "," : "") + std::to_string(flib.patterns.size());
  }
  require(is_repetitive(*fence, 1, 20, 200).ok, "is_repetitive(fib-fence,1,20,200) failed");
  return {true, "even-rows: 2 patterns, repetitive at reach 3; fence sizes " + sizes +
                    " within 2r+2, repetitive at reach 20"};
}

// ---------------------------------------------------------------- criterion 8

Outcome insertion_tolerance() {
  struct Setup {
    const char* group;
    int radius;
    std::vector<EdgeId> F;
    std::vector<EdgeId> B;
  };
  std::vector<Setup> setups;
  setups.push_back({"z2", 2, {lat_edge(0, 0, 0)}, {lat_edge(0, -2, 1)}});
  setups.push_back({"z2", 2, {lat_edge(0, 0, 1)}, {lat_edge(-2, 0, 0), lat_edge(1, 1, 0)}});
  setups.push_back({"z1",
                    4,
                    {EdgeId{GroupElement::lattice({0}), 0}},
                    {EdgeId{GroupElement::lattice({-3}), 0}, EdgeId{GroupElement::lattice({2}), 0}}});
  double worst = 0.0;
  for (const auto& s : setups) {
    auto spec = GroupSpec::from_id(s.group);
    Window win(spec, s.radius);
    require(win.edge_count() <= 24, "window too wide for the brute-force oracle");
    auto base = [B = s.B](const Configuration& w) { return cylinder_contains(w, B); };
    for (double p : {0.3, 0.7}) {
      BernoulliLaw law(p);
      auto image = insertion_image_event(win, s.F, base);
      const double lhs = brute_force_probability(win, law, image);
      const double rhs = std::pow(p, s.F.size()) * brute_force_probability(win, law, base);
      const double err = std::abs(lhs - rhs);
      worst = std::max(worst, err);
      require(err < 1e-12, std::string(s.group) + " at p=" + fmt(p) + ": |" + fmt(lhs) + " - " +
                               fmt(rhs) + "| = " + fmt(err));
    }
  }
  return {true, "3 setups x 2 p-values, worst |P(i_F(B)) - p^|F| P(B)| = " + fmt(worst)};
}

// ---------------------------------------------------------------- criterion 9

struct CliRun {
  int exit_code = -1;
  std::string output;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CliRun run_cli(const std::string& cli, const std::string& args, const fs::path& dir, int tag) {
  const fs::path out = dir / ("stdout-" + std::to_string(tag) + ".txt");
  const fs::path err = dir / ("stderr-" + std::to_string(tag) + ".txt");
  const std::string cmd =
      "\"" + cli + "\" " + args + " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = slurp(out);
  return r;
}

std::string tree_bytes(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += f.filename().string() + "\n" + slurp(f) + "\n";
  return all;
}

Outcome cli_reproducibility() {
  const char* cli = std::getenv("PERCOLAB_CLI");
  require(cli != nullptr && *cli, "PERCOLAB_CLI is not set");
  const fs::path dir =
      fs::temp_directory_path() / ("percolab-accept-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);

  int tag = 0;
  int commands = 0;
  auto rerun_identical = [&](const std::string& args) {
    auto first = run_cli(cli, args, dir, tag++);
    auto second = run_cli(cli, args, dir, tag++);
    require(first.exit_code == 0,
            "exit " + std::to_string(first.exit_code) + " from: " + args);
    require(second.exit_code == 0, "rerun exit code changed: " + args);
    require(!first.output.empty(), "empty output from: " + args);
    require(first.output == second.output, "stdout differs across reruns: " + args);
    ++commands;
    return first.output;
  };

  rerun_identical("sample --group z2 --radius 3 --p 0.5 --samples 20 --seed 11");
  rerun_identical("repetitive-check --model fib-fence --radius 1 --reach 20 --scan 100");
  rerun_identical("oracle --event cluster-min:3 --radius 1 --p 0.5 --samples 2000 --seed 9");
  rerun_identical("dump --what sample --group z2 --radius 2 --p 0.5 --seed 13 --index 2");
  rerun_identical("dump --what model --model fib-fence --radius 4");
  rerun_identical("saturation --p 0.7 --radii 2,4,8 --samples 400 --seed 5 --condition");

  const std::string sing_args = "singularity --model even-rows --p 0.6 --radii 1,2 --samples 600";
  auto sing1 = run_cli(cli, sing_args + " --seed 5 --threads 1", dir, tag++);
  auto sing2 = run_cli(cli, sing_args + " --seed 5 --threads 4", dir, tag++);
  require(sing1.exit_code == 0 && sing2.exit_code == 0, "singularity run failed");
  require(sing1.output == sing2.output, "singularity output depends on the thread count");
  ++commands;

  const fs::path lib1 = dir / "lib1";
  const fs::path lib2 = dir / "lib2";
  const std::string pat = "patterns --model fib-fence --radius 2 --scan 32 --out ";
  auto pat1 = run_cli(cli, pat + "\"" + lib1.string() + "\"", dir, tag++);
  auto pat2 = run_cli(cli, pat + "\"" + lib2.string() + "\"", dir, tag++);
  require(pat1.exit_code == 0 && pat2.exit_code == 0, "patterns run failed");
  require(pat1.output == pat2.output, "patterns summary differs across reruns");
  require(tree_bytes(lib1) == tree_bytes(lib2), "saved libraries differ across reruns");
  ++commands;

  const fs::path cfg = dir / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({"group":"z2","p":0.7,"radii":[2,4],"samples":300,"seed":21,"condition":true})";
  }
  const fs::path csv1 = dir / "sat1.csv";
  const fs::path csv2 = dir / "sat2.csv";
  auto cfg1 = run_cli(
      cli, "saturation --config \"" + cfg.string() + "\" --out \"" + csv1.string() + "\"", dir,
      tag++);
  auto cfg2 = run_cli(
      cli, "saturation --config \"" + cfg.string() + "\" --out \"" + csv2.string() + "\"", dir,
      tag++);
  require(cfg1.exit_code == 0 && cfg2.exit_code == 0, "config-file run failed");
  require(slurp(csv1) == slurp(csv2) && !slurp(csv1).empty(),
          "config-file CSV differs across reruns");
  ++commands;

  auto usage = run_cli(cli, "singularity --p 0.5 --radii 1", dir, tag++);
  require(usage.exit_code == 2, "missing --model should exit 2, got " +
                                    std::to_string(usage.exit_code));

  const fs::path motif = dir / "sparse-motif.txt";
  {
    std::ofstream out(motif);
    for (int y = 0; y < 13; ++y) out << "0 " << y << " 0 " << y + 1 << "\n";
    out << "0 6 1 6\n";
  }
  auto unstable = run_cli(cli,
                          "singularity --model \"periodic:1,0;0,13;" + motif.string() +
                              "\" --p 0.5 --radii 1 --samples 10 --scan 4",
                          dir, tag++);
  require(unstable.exit_code == 4, "unstable library should exit 4, got " +
                                       std::to_string(unstable.exit_code));

  fs::remove_all(dir);
  return {true, std::to_string(commands) + " commands byte-identical across reruns; usage and " +
                    "instability exit codes verified"};
}

}  // namespace

int main() {
  struct Entry {
    int number;
    const char* name;
    std::function<Outcome()> body;
    double budget_seconds;
  };
  const std::vector<Entry> entries = {
      {1, "oracle equivalence", oracle_equivalence, 30.0},
      {2, "singularity decay", singularity_decay, 120.0},
      {3, "degenerate dichotomy", degenerate_dichotomy, 0.0},
      {4, "saturation probe", saturation_probe, 120.0},
      {5, "metric axioms", metric_axioms, 0.0},
      {6, "action laws", action_laws, 0.0},
      {7, "repetitive models", repetitive_models, 60.0},
      {8, "insertion tolerance", insertion_tolerance, 0.0},
      {9, "CLI reproducibility", cli_reproducibility, 0.0},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.body();
    } catch (const Failure& f) {
      outcome = {false, f.why};
    } catch (const std::exception& e) {
      outcome = {false, std::string("unexpected exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.pass && entry.budget_seconds > 0 && seconds > entry.budget_seconds) {
      outcome.pass = false;
      outcome.detail = "over the " + fmt(entry.budget_seconds) + " s budget";
    }
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.1fs", seconds);
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << entry.number << " ("
              << entry.name << ", " << timing << "): " << outcome.detail << std::endl;
    if (!outcome.pass) ++failures;
  }
  if (failures == 0)
    std::cout << "all 9 acceptance criteria passed" << std::endl;
  else
    std::cout << failures << " acceptance criteria failed" << std::endl;
  return failures;
}
