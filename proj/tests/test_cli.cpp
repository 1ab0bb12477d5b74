#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

const std::string kCli = BIOBIG_CLI_PATH;
const std::string kData = BIOBIG_DATA_DIR;

fs::path tmpDir() {
  fs::path d = fs::temp_directory_path() / "biobig_cli";
  fs::create_directories(d);
  return d;
}

std::string readFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path writeTemp(const std::string& name, const std::string& content) {
  fs::path p = tmpDir() / name;
  std::ofstream(p) << content;
  return p;
}

// Runs the binary with the given argument string, capturing stdout through the
// pipe and stderr through a scratch file.
RunResult runCli(const std::string& args) {
  static int call = 0;
  fs::path errFile = tmpDir() / ("stderr_" + std::to_string(call++) + ".txt");
  std::string cmd = kCli + " " + args + " 2>" + errFile.string();
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int wait = pclose(pipe);
  r.status = WIFEXITED(wait) ? WEXITSTATUS(wait) : -1;
  r.err = readFile(errFile);
  return r;
}

size_t countOf(const std::string& hay, const std::string& needle) {
  size_t n = 0;
  for (size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

const std::string kVesicle = kData + "/vesicle.biobig";
const std::string kPhago = kData + "/phago.biobig";

}  // namespace

TEST_CASE("validate accepts the bundled models silently") {
  for (const std::string& f : {kVesicle, kPhago}) {
    RunResult r = runCli("validate " + f);
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    CHECK(r.err.empty());
  }
}

TEST_CASE("validate reports violations as predicate rows and exits 1") {
  fs::path bad = writeTemp("single_layer.biobig", "init : m^ext[ 1 ];\n");
  RunResult r = runCli("validate " + bad.string());
  CHECK(r.status == 1);
  CHECK(r.out.empty());
  REQUIRE_FALSE(r.err.empty());
  bool sawBilayer = false;
  for (const std::string& l : lines(r.err)) {
    CHECK(countOf(l, "\t") == 2);
    if (l.rfind("bilayer\t", 0) == 0) sawBilayer = true;
  }
  CHECK(sawBilayer);
}

TEST_CASE("validate --term checks a term over the model signature") {
  RunResult ok = runCli("validate " + kVesicle + " --term 'm^ext[ m^cys[ 1 ] ]'");
  CHECK(ok.status == 0);
  CHECK(ok.err.empty());

  RunResult bad = runCli("validate " + kVesicle + " --term 'm^ext[ 1 ]'");
  CHECK(bad.status == 1);
  CHECK(bad.err.find("bilayer\t") != std::string::npos);
}

TEST_CASE("bad inputs exit 1, usage mistakes exit 2") {
  CHECK(runCli("validate /nonexistent/path.biobig").status == 1);
  fs::path garbage = writeTemp("garbage.biobig", "this is not a model\n");
  RunResult g = runCli("parse " + garbage.string());
  CHECK(g.status == 1);
  CHECK_FALSE(g.err.empty());

  CHECK(runCli("frobnicate").status == 2);
  CHECK(runCli("run " + kVesicle + " --no-such-flag").status == 2);
  CHECK(runCli("run " + kVesicle + " --strategy sideways").status == 2);
  CHECK(runCli("").status == 2);

  CHECK(runCli("--help").status == 0);
  CHECK(runCli("run --help").status == 0);
}

TEST_CASE("encode from an inline solution") {
  RunResult r = runCli("encode --proteins 'A:1,B:1' --kappa 'A(1),B(1)'");
  CHECK(r.status == 0);
  CHECK(r.err.empty());
  CHECK(r.out.find("A_") != std::string::npos);
  CHECK(r.out.find("B_") != std::string::npos);
  CHECK(countOf(r.out, ":v") >= 2);

  RunResult again = runCli("encode --proteins 'A:1,B:1' --kappa 'A(1),B(1)'");
  CHECK(again.out == r.out);

  RunResult dot = runCli("encode --proteins 'A:1,B:1' --kappa 'A(1),B(1)' --dot");
  CHECK(dot.status == 0);
  CHECK(dot.out.rfind("graph", 0) == 0);
}

TEST_CASE("encode from a kappa file matches the inline encoding") {
  fs::path kf = writeTemp("pair.kappa",
                          "protein A 1;\n"
                          "protein B 1;\n"
                          "init : A(1),B(1);\n");
  RunResult fromFile = runCli("encode " + kf.string());
  RunResult inline_ = runCli("encode --proteins 'A:1,B:1' --kappa 'A(1),B(1)'");
  CHECK(fromFile.status == 0);
  CHECK(fromFile.out == inline_.out);

  // A file may also provide the dictionary for an ad-hoc solution.
  RunResult override_ = runCli("encode " + kf.string() + " --kappa 'A(1^x),B(1^x)'");
  CHECK(override_.status == 0);
  CHECK(override_.out != fromFile.out);
}

TEST_CASE("encode validates its kappa input") {
  // A free bond name may occur once (an open bond to the context)...
  RunResult open = runCli("encode --proteins 'A:1,B:1' --kappa 'A(1^x),B(1)'");
  CHECK(open.status == 0);
  CHECK(open.out.find("x:b") != std::string::npos);

  // ...but never three times.
  RunResult crowded = runCli("encode --proteins 'A:1' --kappa 'A(1^x),A(1^x),A(1^x)'");
  CHECK(crowded.status == 1);
  CHECK(crowded.err.find("graph-like") != std::string::npos);

  fs::path badRule = writeTemp("shrink.kappa",
                               "protein A 1;\n"
                               "rule bad : A(1^x),A(1^x) -> (x,y) A(1);\n");
  CHECK(runCli("encode " + badRule.string() + " --kappa 'A(1)'").status == 1);

  CHECK(runCli("encode --kappa 'A(1)'").status == 2);
  CHECK(runCli("encode").status == 2);
}

TEST_CASE("run prints the trace and mirrors it into --dot-dir") {
  fs::path dir = tmpDir() / "vesicle_run";
  fs::remove_all(dir);
  RunResult r = runCli("run " + kVesicle + " --steps 10 --strategy first --dot-dir " +
                       dir.string());
  CHECK(r.status == 0);

  std::vector<std::string> rows = lines(r.out);
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "step\trule\twitness");
  CHECK(rows[1].rfind("1\trec\t", 0) == 0);
  CHECK(rows[5].rfind("5\tpinch\t", 0) == 0);

  CHECK(readFile(dir / "trace.tsv") == r.out);
  for (int i = 0; i <= 10; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%04d.dot", i);
    CHECK(fs::exists(dir / name));
  }
  CHECK_FALSE(fs::exists(dir / "state_0011.dot"));

  RunResult again = runCli("run " + kVesicle + " --steps 10 --strategy first");
  CHECK(again.out == r.out);
}

TEST_CASE("run with a seeded strategy is reproducible") {
  RunResult a = runCli("run " + kVesicle + " --steps 6 --strategy random:42");
  RunResult b = runCli("run " + kVesicle + " --steps 6 --strategy random:42");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 7);
}

TEST_CASE("project --view prints the requested side of a state") {
  RunResult mob = runCli("project " + kVesicle + " --view mobility --steps 5");
  CHECK(mob.status == 0);
  CHECK(mob.out == "m^ext[m^cys[m^ext[m^cys]]]\n");

  RunResult prot = runCli("project " + kVesicle + " --view protein");
  CHECK(prot.status == 0);
  CHECK(prot.out.find("cargo") != std::string::npos);
  CHECK(prot.out.find("m^ext") == std::string::npos);
}

TEST_CASE("project --check-theorem reports every step as justified") {
  for (const std::string& f : {kVesicle, kPhago}) {
    RunResult r = runCli("project " + f + " --check-theorem --steps 10");
    CHECK(r.status == 0);
    std::vector<std::string> rows = lines(r.out);
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0] ==
          "step\trule\tproteinChanged\tmobilityChanged\tproteinStepValid\tmobilityStepValid");
    for (size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].size() > 4);
      CHECK(rows[i].compare(rows[i].size() - 4, 4, "\t1\t1") == 0);
    }
  }
  CHECK(runCli("project " + kVesicle + " --view protein --check-theorem").status == 2);
  CHECK(runCli("project " + kVesicle).status == 2);
}

TEST_CASE("parse canonicalises a model file to a fixed point") {
  RunResult first = runCli("parse " + kVesicle);
  CHECK(first.status == 0);
  CHECK(first.out.find("rule rec") != std::string::npos);
  CHECK(first.out.find("init") != std::string::npos);

  fs::path echo = writeTemp("vesicle_echo.biobig", first.out);
  RunResult second = runCli("parse " + echo.string());
  CHECK(second.status == 0);
  CHECK(second.out == first.out);

  RunResult term = runCli("parse " + kVesicle + " --term 'm^ext[ m^cys[ cargo_{x:b} ] ] | ~{x:b}'");
  CHECK(term.status == 0);
  CHECK(term.out.find("cargo") != std::string::npos);
}

TEST_CASE("export-dot emits stable Graphviz text") {
  RunResult a = runCli("export-dot " + kVesicle);
  RunResult b = runCli("export-dot " + kVesicle);
  CHECK(a.status == 0);
  CHECK(a.out.rfind("graph", 0) == 0);
  CHECK(a.out == b.out);

  RunResult t = runCli("export-dot " + kVesicle + " --term 'm^ext[ m^cys[ 1 ] ]'");
  CHECK(t.status == 0);
  CHECK(t.out.find("m^cys") != std::string::npos);
}
