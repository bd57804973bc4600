// Drives the installed CLI end to end: exit codes, output shapes, ordering,
// and determinism. argv[1] is the qacoder binary path.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string g_bin;
int g_failures = 0;
int g_checks = 0;

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = g_bin + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    std::cerr << "popen failed for: " << cmd << "\n";
    std::exit(3);
  }
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

void expect(bool ok, const std::string& what) {
  ++g_checks;
  if (!ok) {
    ++g_failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

void expect_code(const RunResult& r, int want, const std::string& what) {
  expect(r.code == want,
         what + " (exit " + std::to_string(r.code) + ", want " + std::to_string(want) + ")\n" +
             r.out);
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Column `col` of the data rows of a TSV report (header + n rows + summary).
std::vector<std::string> tsv_column(const std::string& out, std::size_t col) {
  std::vector<std::string> vals;
  std::istringstream in(out);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, '\t')) cells.push_back(cell);
    if (col < cells.size()) vals.push_back(cells[col]);
  }
  return vals;
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& body) {
  std::string path = dir + "/" + name;
  std::ofstream f(path);
  f << body;
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_driver_test <qacoder-binary>\n";
    return 2;
  }
  g_bin = argv[1];

  char dir_template[] = "/tmp/qac_cli_XXXXXX";
  char* dir_c = mkdtemp(dir_template);
  if (!dir_c) {
    std::cerr << "mkdtemp failed\n";
    return 3;
  }
  std::string dir = dir_c;

  std::string quarters = write_file(dir, "quarters.txt", "0.5\n0.2\n0.2\n0.1\n");
  std::string shuffled = write_file(dir, "shuffled.txt", "0.1\n0.5\n0.2\n0.2\n");
  std::string counts = write_file(dir, "counts.txt", "2\n1\n1\n");
  std::string pair = write_file(dir, "pair.txt", "0.75\n0.25\n");
  std::string trio = write_file(dir, "trio.txt", "0.5\n0.3\n0.2\n");
  std::string single = write_file(dir, "single.txt", "1\n");
  std::string commented =
      write_file(dir, "commented.txt", "# weights\n0.5 0.25   # inline\n\n0.25\n");

  // The square-cost example under lmax 3: a flat code from both engines.
  {
    auto r = run("code --penalty moment:a=2 --lmax 3 " + quarters);
    expect_code(r, 0, "moment code run");
    expect(tsv_column(r.out, 2) == std::vector<std::string>{"2", "2", "2", "2"},
           "moment lengths are flat");
    expect(contains(r.out, "# raw_sum\t4"), "raw sum 4");
    expect(contains(r.out, "# campbell\t2"), "campbell mean 2");
    expect(contains(r.out, "# kraft\t1"), "kraft 1");
    auto ls = run("code --penalty moment:a=2 --lmax 3 --engine linear-space " + quarters);
    expect_code(ls, 0, "linear-space code run");
    // Engines agree row for row; the engine tag differs in the summary.
    expect(tsv_column(ls.out, 2) == tsv_column(r.out, 2), "engines agree on lengths");
    expect(tsv_column(ls.out, 3) == tsv_column(r.out, 3), "engines agree on codewords");
    // Byte determinism across consecutive runs.
    auto again = run("code --penalty moment:a=2 --lmax 3 " + quarters);
    expect(again.out == r.out, "code output is byte-stable");
  }

  // Output rows preserve the original input order.
  {
    auto r = run("code --penalty linear " + shuffled);
    expect_code(r, 0, "shuffled code run");
    expect(tsv_column(r.out, 1) == std::vector<std::string>{"0.1", "0.5", "0.2", "0.2"},
           "weights in input order");
    expect(tsv_column(r.out, 2) == std::vector<std::string>{"3", "1", "2", "3"},
           "lengths follow their symbols");
    // Canonical words are dealt on the sorted view, then mapped back: the
    // 0.2 at input position 2 sorts before the 0.2 at position 3.
    expect(tsv_column(r.out, 3) == std::vector<std::string>{"111", "0", "10", "110"},
           "codewords follow their symbols");
  }

  // Comments, blanks, several weights per line.
  {
    auto r = run("code --penalty linear " + commented);
    expect_code(r, 0, "commented file loads");
    expect(tsv_column(r.out, 2).size() == 3, "three symbols parsed");
  }

  // Normalization contract.
  {
    auto r = run("code --penalty linear " + counts, true);
    expect_code(r, 2, "non-normalized weights are rejected");
    expect(contains(r.out, "--normalize"), "diagnostic suggests --normalize");
    auto n = run("code --penalty linear --normalize " + counts);
    expect_code(n, 0, "normalize accepts count weights");
    expect(tsv_column(n.out, 1) == std::vector<std::string>{"0.5", "0.25", "0.25"},
           "weights normalized to halves and quarters");
    expect(tsv_column(n.out, 2) == std::vector<std::string>{"1", "2", "2"},
           "normalized code lengths");
  }

  // Length-limit feasibility.
  {
    auto ok = run("code --penalty limit:lmax=2 " + quarters);
    expect_code(ok, 0, "limit 2 feasible");
    expect(tsv_column(ok.out, 2) == std::vector<std::string>{"2", "2", "2", "2"},
           "limit 2 forces the flat code");
    auto bad = run("code --penalty limit:lmax=1 " + quarters, true);
    expect_code(bad, 1, "limit 1 infeasible");
    expect(contains(bad.out, "infeasible"), "infeasible diagnostic prefix");
  }

  // Parameter and input failures map to exit 2.
  {
    expect_code(run("code --penalty exp:t=0 " + quarters, true), 2, "exp:t=0 rejected");
    expect_code(run("code --penalty frob " + quarters, true), 2, "unknown penalty rejected");
    expect_code(run("code --penalty exp:t=1,z=2 " + quarters, true), 2,
                "unknown key rejected");
    expect_code(run("code " + dir + "/missing.txt", true), 2, "missing file");
    std::string neg = write_file(dir, "neg.txt", "0.5\n-0.1\n0.6\n");
    auto r = run("code " + neg, true);
    expect_code(r, 2, "negative weight rejected");
    expect(contains(r.out, "line 2"), "line number in diagnostic");
    expect_code(run("frobnicate", true), 2, "unknown subcommand is a usage error");
    expect_code(run("code", true), 2, "missing input is a usage error");
  }

  // Entropy command: Renyi value for the exponential penalty.
  {
    auto r = run("entropy --penalty exp:t=1 " + pair);
    expect_code(r, 0, "entropy run");
    expect(contains(r.out, "# entropy\t0.8999686"), "Renyi order-1/2 entropy");
    expect(contains(r.out, "# converged\t1"), "entropy converged");
    auto again = run("entropy --penalty exp:t=1 " + pair);
    expect(again.out == r.out, "entropy output is byte-stable");
    expect_code(run("entropy --penalty limit:lmax=3 " + pair, true), 1,
                "entropy needs a companion function");
  }

  // Property checks: verdicts and counterexamples.
  {
    auto fail = run("check --penalty custom:cubic11 --property subtranslatory"
                    " --samples 10000 --seed 42");
    expect_code(fail, 0, "cubic11 check runs");
    expect(contains(fail.out, "verdict\tFAIL"), "cubic11 verdict FAIL");
    expect(contains(fail.out, "counterexample_p"), "cubic11 counterexample present");
    expect(contains(fail.out, "gradient_sum"), "cubic11 gradient reported");

    auto pass = run("check --penalty moment:a=2 --property subtranslatory"
                    " --samples 2000 --seed 42");
    expect_code(pass, 0, "moment check runs");
    expect(contains(pass.out, "verdict\tPASS"), "moment verdict PASS");
    expect(contains(pass.out, "analytic\t1"), "moment known subtranslatory");

    auto flat = run("check --penalty exp:t=1 --property flatter --penalty2 linear"
                    " --samples 4000");
    expect_code(flat, 0, "flatter check runs");
    expect(contains(flat.out, "verdict\tPASS"), "exp flatter than linear");
    auto steep = run("check --penalty linear --property flatter --penalty2 exp:t=1"
                     " --samples 4000");
    expect(contains(steep.out, "verdict\tFAIL"), "linear not flatter than exp");
    expect(contains(steep.out, "lhs"), "flatter counterexample rendered");

    expect_code(run("check --property nonsense", true), 2, "unknown property rejected");
  }

  // Oracle command mirrors the engines.
  {
    auto h = run("oracle --method huffman " + quarters);
    expect_code(h, 0, "huffman oracle runs");
    expect(tsv_column(h.out, 2) == std::vector<std::string>{"1", "2", "3", "3"},
           "huffman lengths in input order");
    auto b = run("oracle --method brute --penalty moment:a=2 --lmax 3 " + quarters);
    expect_code(b, 0, "brute oracle runs");
    expect(tsv_column(b.out, 2) == std::vector<std::string>{"2", "2", "2", "2"},
           "brute agrees with the engines");
    auto e = run("oracle --method exp-huffman --penalty exp:t=1 " + trio);
    expect_code(e, 0, "exp-huffman oracle runs");
    expect(tsv_column(e.out, 2) == std::vector<std::string>{"1", "2", "2"},
           "exp-huffman lengths");
    expect_code(run("oracle --method exp-huffman --penalty linear " + trio, true), 2,
                "exp-huffman needs an exponential penalty");
    expect_code(run("oracle --method huffman --penalty moment:a=2 " + quarters, true), 2,
                "huffman oracle is linear only");
    expect_code(run("oracle --method unknown " + quarters, true), 2, "unknown method");
  }

  // Bench prints counters; the default engine is linear-space.
  {
    auto r = run("bench --n 64 --reps 2 --penalty moment:a=2");
    expect_code(r, 0, "bench runs");
    expect(contains(r.out, "engine\tlinear-space"), "bench defaults to linear-space");
    expect(contains(r.out, "node_touches\t"), "bench reports touches");
    expect(contains(r.out, "live_per_symbol\t"), "bench reports live records");
    auto g = run("bench --n 64 --engine general");
    expect_code(g, 0, "bench general engine");
    expect(contains(g.out, "engine\tgeneral"), "bench engine override");
    expect_code(run("bench --n 1", true), 2, "bench needs n >= 2");
  }

  // Table format is advisory but must render.
  {
    auto r = run("code --penalty linear --format table " + quarters);
    expect_code(r, 0, "table format runs");
    expect(r.out.rfind("index", 0) == 0, "table header first");
    expect(!contains(r.out, "\t"), "table has no tabs");
  }

  // Degenerate single-symbol source gets the empty codeword.
  {
    auto r = run("code --penalty linear " + single);
    expect_code(r, 0, "single symbol runs");
    expect(tsv_column(r.out, 2) == std::vector<std::string>{"0"}, "single symbol length 0");
  }

  // Seed control: the environment default matches an explicit --seed.
  {
    auto a = run("check --penalty custom:sqrt --property subtranslatory --samples 100"
                 " --seed 7");
    std::string saved = g_bin;
    g_bin = "QA_CODER_SEED=7 " + saved;
    auto b = run("check --penalty custom:sqrt --property subtranslatory --samples 100");
    g_bin = saved;
    expect_code(a, 0, "seeded check runs");
    expect_code(b, 0, "env-seeded check runs");
    expect(a.out == b.out, "QA_CODER_SEED matches --seed");
  }

  std::cout << (g_failures == 0 ? "PASS" : "FAIL") << ": " << (g_checks - g_failures) << "/"
            << g_checks << " cli checks\n";
  return g_failures == 0 ? 0 : 1;
}
