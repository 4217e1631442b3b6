#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace negdep::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("negdep_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path file(const std::string& name, const std::string& contents) const {
    const fs::path p = path / name;
    std::ofstream f(p, std::ios::binary);
    f << contents;
    return p;
  }
};

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("csv input parsing with all columns") {
  TempDir dir;
  const auto p = dir.file("t.csv", "p,weight,group,is_null\n0.1,2,a,1\n0.9,0,b,0\n");
  const InputTable t = read_input_table(p.string());
  CHECK(t.p == std::vector<double>{0.1, 0.9});
  CHECK(t.weight == std::vector<double>{2.0, 0.0});
  CHECK(t.group == std::vector<std::string>{"a", "b"});
  CHECK(t.is_null == std::vector<bool>{true, false});
}

TEST_CASE("csv errors carry line numbers") {
  TempDir dir;
  const auto bad_number = dir.file("bad.csv", "p\n0.1\nxyz\n");
  try {
    read_input_table(bad_number.string());
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  const auto bad_col = dir.file("col.csv", "q\n0.1\n");
  CHECK_THROWS_AS(read_input_table(bad_col.string()), InputError);
  const auto empty = dir.file("empty.csv", "");
  CHECK_THROWS_AS(read_input_table(empty.string()), InputError);
  const auto ragged = dir.file("ragged.csv", "p,weight\n0.1\n");
  CHECK_THROWS_AS(read_input_table(ragged.string()), InputError);
  CHECK_THROWS_AS(read_input_table((dir.path / "missing.csv").string()), InputError);
}

TEST_CASE("json input parses to the same table as csv") {
  TempDir dir;
  const auto c = dir.file("t.csv", "p,weight\n0.1,2\n0.9,0\n");
  const auto j = dir.file("t.json", R"({"p":[0.1,0.9],"weight":[2,0]})");
  const InputTable tc = read_input_table(c.string());
  const InputTable tj = read_input_table(j.string());
  CHECK(tc.p == tj.p);
  CHECK(tc.weight == tj.weight);
  const auto badj = dir.file("bad.json", R"({"p":[0.1)");
  CHECK_THROWS_AS(read_input_table(badj.string()), InputError);
  const auto both = dir.file("both.json", R"({"p":[0.1],"e":[2.0]})");
  CHECK_THROWS_AS(read_input_table(both.string()), InputError);
}

TEST_CASE("merge simes prints value, corrected p and record") {
  TempDir dir;
  const auto p = dir.file("p.csv", "p\n0.02\n0.9\n");
  const auto r = run_cli({"merge", "simes", "--input", p.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("simes = 0.04") != std::string::npos);
  CHECK(r.out.find("corrected p-value = 0.06") != std::string::npos);
  CHECK(r.out.find("\"command\":\"merge\"") != std::string::npos);
}

TEST_CASE("merge weighted-simes: unit weights equal plain simes") {
  TempDir dir;
  const auto p = dir.file("p.csv", "p\n0.1\n0.7\n0.4\n");
  const auto plain = run_cli({"merge", "simes", "--input", p.string()});
  const auto weighted =
      run_cli({"merge", "weighted-simes", "--input", p.string(), "--weights", "1,1,1"});
  CHECK(weighted.code == kExitOk);
  auto value_of = [](const std::string& out) {
    const auto at = out.find("\"value\":");
    return out.substr(at, out.find(',', at) - at);
  };
  CHECK(value_of(plain.out) == value_of(weighted.out));
  // weight column fallback
  const auto wcol = dir.file("w.csv", "p,weight\n0.1,2\n0.1,0\n");
  const auto r = run_cli({"merge", "weighted-simes", "--input", wcol.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("weighted simes = 0.1\n") != std::string::npos);
  // simplex violation is a domain error
  const auto bad = run_cli({"merge", "weighted-simes", "--input", p.string(), "--weights",
                            "0.5,0.5,0.5"});
  CHECK(bad.code == kExitDomainError);
}

TEST_CASE("merge simes-of-simes via group labels") {
  TempDir dir;
  const auto p = dir.file("g.csv", "p,group\n0.02,a\n0.9,a\n0.02,b\n0.9,b\n");
  const auto r = run_cli({"merge", "simes-of-simes", "--input", p.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("simes-of-simes = 0.04") != std::string::npos);
  CHECK(r.out.find("\"na_factor_total\":") != std::string::npos);
}

TEST_CASE("merge handles malformed and empty input with exit 2") {
  TempDir dir;
  const auto empty = dir.file("empty.csv", "");
  CHECK(run_cli({"merge", "simes", "--input", empty.string()}).code == kExitInputError);
  const auto eonly = dir.file("e.csv", "e\n2\n");
  CHECK(run_cli({"merge", "simes", "--input", eonly.string()}).code == kExitInputError);
  CHECK(run_cli({"merge", "simes", "--input", (dir.path / "nope.csv").string()}).code ==
        kExitInputError);
}

TEST_CASE("bh command matches the hand example and exit codes") {
  TempDir dir;
  const auto p = dir.file("p.csv", "p\n0.01\n0.04\n0.5\n");
  const auto r = run_cli({"bh", "--input", p.string(), "--alpha", "0.05"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("k* = 1") != std::string::npos);
  CHECK(r.out.find("rejected: 1") != std::string::npos);

  const auto ones = dir.file("ones.csv", "p\n1\n1\n");
  const auto none = run_cli({"bh", "--input", ones.string(), "--alpha", "0.05"});
  CHECK(none.code == kExitOk);
  CHECK(none.out.find("no discoveries") != std::string::npos);

  const auto bad_alpha = run_cli({"bh", "--input", p.string(), "--alpha", "1.5"});
  CHECK(bad_alpha.code == kExitDomainError);
}

TEST_CASE("bh --correction by equals bh at alpha/ell_K") {
  TempDir dir;
  const auto p = dir.file("p.csv", "p\n0.02\n0.6\n");
  const auto by_run = run_cli({"bh", "--input", p.string(), "--alpha", "0.06",
                               "--correction", "by"});
  const auto bh_run = run_cli({"bh", "--input", p.string(), "--alpha", "0.04"});
  auto k_of = [](const std::string& out) {
    const auto at = out.find("\"k_star\":");
    return out.substr(at, out.find(',', at) - at);
  };
  CHECK(by_run.code == kExitOk);
  CHECK(k_of(by_run.out) == k_of(bh_run.out));
}

TEST_CASE("bh --groups runs the group-level procedure") {
  TempDir dir;
  const auto p = dir.file("g.csv", "p,group\n0.01,a\n0.9,a\n0.6,b\n0.8,b\n");
  const auto r = run_cli({"bh", "--input", p.string(), "--alpha", "0.05", "--groups"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("group k* = 1") != std::string::npos);
  CHECK(r.out.find("rejected groups: 1") != std::string::npos);
}

TEST_CASE("merge-e methods and error paths") {
  TempDir dir;
  const auto e = dir.file("e.csv", "e\n2\n0.5\n1\n");
  const auto u2 = run_cli({"merge-e", "--input", e.string(), "--method", "ustat:2"});
  CHECK(u2.code == kExitOk);
  CHECK(u2.out.find("merged e-value = 1.16667") != std::string::npos);

  const auto ones = dir.file("ones.csv", "e\n1\n1\n1\n");
  const auto avg = run_cli({"merge-e", "--input", ones.string(), "--method", "average"});
  CHECK(avg.out.find("merged e-value = 1\n") != std::string::npos);

  const auto zero = dir.file("zero.csv", "e\n3\n1\n0\n");
  const auto prod = run_cli({"merge-e", "--input", zero.string(), "--method", "product"});
  CHECK(prod.out.find("merged e-value = 0\n") != std::string::npos);

  const auto neg = dir.file("neg.csv", "e\n-1\n2\n");
  CHECK(run_cli({"merge-e", "--input", neg.string(), "--method", "average"}).code ==
        kExitDomainError);

  const auto lam = run_cli({"merge-e", "--input", e.string(), "--method", "lambda",
                            "--lambdas", "0.5"});
  CHECK(lam.code == kExitOk);

  const auto cx = run_cli({"merge-e", "--input", e.string(), "--method", "convex", "--terms",
                           "1,2:0.5;:0.5"});
  CHECK(cx.code == kExitOk);
  CHECK(run_cli({"merge-e", "--input", e.string(), "--method", "nope"}).code ==
        kExitInputError);
}

TEST_CASE("bounds command prints reports and the byte-stable tables") {
  const auto r = run_cli({"bounds", "--alpha", "0.05", "--K", "100"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("tilde_s          = 0.0556413") != std::string::npos);
  CHECK(r.out.find("su_neg   = 0.308747") != std::string::npos);

  TempDir dir;
  const auto tables = run_cli({"bounds", "--paper-tables", "--out", dir.path.string()});
  CHECK(tables.code == kExitOk);
  const std::string t1 = slurp(dir.path / "table1.csv");
  CHECK(t1.find("0.0500,0.0556,0.0558,1.112") != std::string::npos);
  const std::string t2 = slurp(dir.path / "table2.csv");
  CHECK(t2.find("0.01,0.07784,7.784") != std::string::npos);
  // twice produces identical bytes
  TempDir dir2;
  run_cli({"bounds", "--paper-tables", "--out", dir2.path.string()});
  CHECK(slurp(dir2.path / "table1.csv") == t1);

  CHECK(run_cli({"bounds", "--alpha", "0.05", "--which", "weird"}).code == kExitInputError);
  CHECK(run_cli({"bounds", "--alpha", "2.0"}).code == kExitDomainError);
}

TEST_CASE("csv and json inputs give identical command output") {
  TempDir dir;
  const auto c = dir.file("t.csv", "p\n0.02\n0.9\n");
  const auto j = dir.file("t.json", R"({"p":[0.02,0.9]})");
  const auto rc = run_cli({"merge", "simes", "--input", c.string()});
  const auto rj = run_cli({"merge", "simes", "--input", j.string()});
  CHECK(rc.out == rj.out);

  const auto cb = run_cli({"bh", "--input", c.string(), "--alpha", "0.05"});
  const auto jb = run_cli({"bh", "--input", j.string(), "--alpha", "0.05"});
  CHECK(cb.out == jb.out);
}

TEST_CASE("simulate rejects unknown scenarios with exit 2") {
  const auto r = run_cli({"simulate", "--scenario", "does-not-exist"});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("unknown scenario") != std::string::npos);
  CHECK(run_cli({"simulate"}).code == kExitInputError);
}

TEST_CASE("simulate --list names every scenario") {
  const auto r = run_cli({"simulate", "--list"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("bivariate-gaussian-scan") != std::string::npos);
  CHECK(r.out.find("explore-bh-conjecture [exploratory]") != std::string::npos);
}

TEST_CASE("simulate writes JSONL and CSV records") {
  TempDir dir;
  const auto out = dir.path / "r.jsonl";
  const auto csv = dir.path / "r.csv";
  const auto r = run_cli({"simulate", "--scenario", "counter-monotonic-k2", "--reps", "500",
                          "--out", out.string(), "--csv", csv.string()});
  CHECK(r.code == kExitOk);
  const std::string records = slurp(out);
  CHECK(records.find("\"schema_version\":1") != std::string::npos);
  CHECK(records.find("\"scenario\":\"counter-monotonic-k2\"") != std::string::npos);
  const std::string table = slurp(csv);
  CHECK(table.rfind("scenario,check,direction", 0) == 0);
}

TEST_CASE("simulate --spec runs a custom experiment") {
  TempDir dir;
  const auto spec = dir.file("spec.json", R"({
    "sampler": {"kind": "neg_gaussian", "K": 4, "equicorrelation": -0.2},
    "procedure": "simes",
    "alpha": 0.05,
    "reps": 2000,
    "seed": {"seed": 7, "stream": 0}
  })");
  const auto r = run_cli({"simulate", "--spec", spec.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\"scenario\":\"spec-experiment\"") != std::string::npos);

  const auto bad = dir.file("bad.json", R"({"sampler": {"kind": "nope", "K": 2}})");
  CHECK(run_cli({"simulate", "--spec", bad.string()}).code == kExitInputError);
}

TEST_CASE("simulate detects an invalid e-value construction with exit 1") {
  // Comonotonic p-values are positively dependent, so the product of their
  // calibrated e-values has mean kappa^2 / (2 kappa - 1) = 1.225 > 1; the
  // harness must flag it rather than rubber-stamp the bound.
  TempDir dir;
  const auto spec = dir.file("spec.json", R"({
    "sampler": {"kind": "neg_gaussian", "K": 2, "equicorrelation": 1.0,
                 "allow_mixed_signs": true},
    "procedure": "evalue_pipeline",
    "pipeline": {"kappa": 0.7, "method": "product"},
    "reps": 20000,
    "seed": {"seed": 11, "stream": 0}
  })");
  const auto r = run_cli({"simulate", "--spec", spec.string()});
  CHECK(r.code == kExitVerificationFailure);
  CHECK(r.out.find("[FAIL]") != std::string::npos);
  CHECK(r.out.find("1 failed") != std::string::npos);
}

TEST_CASE("unknown flags exit 2") {
  CHECK(run_cli({"merge", "simes", "--nope", "x"}).code == kExitInputError);
  CHECK(run_cli({"frobnicate"}).code == kExitInputError);
}
