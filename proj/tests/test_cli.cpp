#include "doctest.h"

#include "helpers.hpp"
#include "phc/cli.hpp"
#include "phc/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace phc;
using namespace phc::testing;

namespace {

struct TempDir {
    std::filesystem::path dir;

    TempDir() {
        dir = std::filesystem::temp_directory_path() /
              ("phc_cli_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter()++));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }

    static int& counter() {
        static int n = 0;
        return n;
    }

    std::string file(const std::string& name, const std::string& content) const {
        std::string p = (dir / name).string();
        std::ofstream f(p);
        f << content;
        return p;
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_colouring(const TempDir& td, const std::string& name, const Colouring& col) {
    std::ostringstream s;
    serialize_colouring(col, s);
    return td.file(name, s.str());
}

int count_lines(const std::string& path) {
    std::ifstream f(path);
    int n = 0;
    std::string line;
    while (std::getline(f, line)) ++n;
    return n;
}

const char* kMono = "phc 1 colouring\n2 3 3\n0 0 0\n0 1 0\n0 2 0\n1 0 0\n1 1 0\n1 2 0\n"
                    "2 0 0\n2 1 0\n2 2 0\n";
const char* kBox22 = "phc 1 box\n2\n0 1\n0 1\n";

} // namespace

TEST_CASE("verify exits 0 on a canonical box and 1 otherwise") {
    TempDir td;
    std::string col = td.file("mono.phc", kMono);
    std::string box = td.file("box.txt", kBox22);
    RunResult r = run({"verify", "--colouring", col, "--box", box});
    CHECK(r.code == 0);
    CHECK(r.out.find("canonical J={}") != std::string::npos);

    Colouring nc = from_rgs({0, 0, 0, 1}, {2, 2});
    std::string bad = write_colouring(td, "bad.phc", nc);
    RunResult r2 = run({"verify", "--colouring", bad, "--box", box});
    CHECK(r2.code == 1);
    CHECK(r2.out.find("verdict canonical=false") != std::string::npos);
}

TEST_CASE("parse problems exit 2") {
    TempDir td;
    std::string junk = td.file("junk.phc", "phc 2 nonsense\n");
    std::string box = td.file("box.txt", kBox22);
    RunResult r = run({"verify", "--colouring", junk, "--box", box});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());

    RunResult r2 = run({"verify", "--colouring", junk});
    CHECK(r2.code == 2); // needs --box or --witness

    RunResult r3 = run({"no-such-command"});
    CHECK(r3.code == 2);
}

TEST_CASE("budget runs exit 3") {
    RunResult r = run({"er-search", "--k", "2", "--t", "2", "--n-max", "4",
                       "--node-budget", "40"});
    CHECK(r.code == 3);
    CHECK(r.out.find("er=budget-exceeded") != std::string::npos);
}

TEST_CASE("every invocation writes exactly one journal record") {
    TempDir td;
    std::string journal = td.path("j.log");
    std::string col = td.file("mono.phc", kMono);
    std::string box = td.file("box.txt", kBox22);

    run({"verify", "--colouring", col, "--box", box, "--journal", journal});
    CHECK(count_lines(journal) == 1);
    run({"classify", "--colouring", col, "--delta", "1/2,1/2", "--journal", journal});
    CHECK(count_lines(journal) == 2);
    run({"bogus", "--journal", journal});
    CHECK(count_lines(journal) == 2); // journal path not parsed on config errors

    std::ifstream f(journal);
    std::string line;
    std::getline(f, line);
    CHECK(line.find("command=verify") != std::string::npos);
    CHECK(line.find("exit=0") != std::string::npos);
}

TEST_CASE("schedule certification via the CLI") {
    RunResult good = run({"schedule", "--k", "3", "--t", "129", "--variant", "general",
                          "--format", "structured"});
    CHECK(good.code == 0);
    CHECK(good.out.find("schedule_valid true") != std::string::npos);

    RunResult bad = run({"schedule", "--k", "3", "--t", "128", "--variant", "general"});
    CHECK(bad.code == 1);

    RunResult scan = run({"schedule", "--k", "3", "--variant", "general",
                          "--scan-max", "200"});
    CHECK(scan.code == 0);
    CHECK(scan.out.find("minimal_t 129") != std::string::npos);
}

TEST_CASE("pipeline subcommand round-trips a witness file") {
    TempDir td;
    std::string col = td.file("mono.phc", kMono);
    std::string wpath = td.path("w.phc");
    RunResult r = run({"pipeline", "--colouring", col, "--t", "2", "--delta", "1/8,1/8",
                       "--seed", "5", "--out", wpath});
    CHECK(r.code == 0);
    CHECK(r.out.find("outcome witness") != std::string::npos);

    RunResult v = run({"verify", "--colouring", col, "--witness", wpath});
    CHECK(v.code == 0);
    CHECK(v.out.find("witness=valid") != std::string::npos);
}

TEST_CASE("identical seeds give byte-identical structured output") {
    TempDir td;
    Rng rng(1212);
    Colouring col = random_colouring(rng, {4, 4}, 6);
    std::string path = write_colouring(td, "c.phc", col);
    std::vector<std::string> args = {"pipeline", "--colouring", path, "--t", "2",
                                     "--delta", "1/4,1/4", "--seed", "99",
                                     "--format", "structured"};
    RunResult a = run(args);
    RunResult b = run(args);
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);

    std::vector<std::string> lb = {"random-lb", "--k", "2", "--t", "2", "--n", "2",
                                   "--palette", "3", "--trials", "2000", "--seed", "3"};
    CHECK(run(lb).out == run(lb).out);
}

TEST_CASE("auto seeds are recorded in the journal") {
    TempDir td;
    std::string journal = td.path("j.log");
    run({"random-lb", "--k", "2", "--t", "2", "--n", "2", "--palette", "2",
         "--trials", "10", "--journal", journal});
    std::ifstream f(journal);
    std::string line;
    std::getline(f, line);
    CHECK(line.find("seed=") != std::string::npos);
}

TEST_CASE("extract and census cover their exit paths") {
    TempDir td;
    std::string h = td.file("h.phc", "phc 1 hypergraph\n2 3 3\n0 0\n0 1\n1 0\n1 1\n");
    RunResult r = run({"extract", "--hypergraph", h, "--t", "2,2", "--count"});
    CHECK(r.code == 0);
    CHECK(r.out.find("count boxes=1") != std::string::npos);

    std::string sparse = td.file("s.phc", "phc 1 hypergraph\n2 3 3\n0 0\n1 1\n");
    RunResult none = run({"extract", "--hypergraph", sparse, "--t", "2,2"});
    CHECK(none.code == 1);
    CHECK(none.out.find("box=none") != std::string::npos);

    std::string col = td.file("mono.phc", kMono);
    RunResult census = run({"census", "--colouring", col, "--j", "{1}",
                            "--delta", "1"});
    CHECK(census.code == 0);
    CHECK(census.out.find("verdict=holds") != std::string::npos);
}

TEST_CASE("er-search single-n decisions exit 0 either way") {
    RunResult found = run({"er-search", "--k", "2", "--t", "2", "--n", "2"});
    CHECK(found.code == 0);
    CHECK(found.out.find("avoider=found") != std::string::npos);

    RunResult counted = run({"er-search", "--k", "2", "--t", "2", "--n", "2",
                             "--no-prune"});
    CHECK(counted.code == 0);
}
