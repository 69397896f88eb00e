#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cluspath/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using cluspath::cli::run;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("cluspath_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "cluspath");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json load_json(const std::string& path) { return json::parse(slurp(path)); }

// Planted dataset written by the synth subcommand.
std::string make_data(const TempDir& dir, const std::string& seed = "1") {
    const Outcome o = call({"synth", "--seed", seed, "--out", dir / ("synth" + seed)});
    REQUIRE(o.code == 0);
    return dir / ("synth" + seed + "/data.csv");
}

}  // namespace

TEST_CASE("fit writes every artifact") {
    TempDir dir;
    const std::string data = make_data(dir);
    const Outcome o = call({"fit", "--input", data, "--k", "5", "--alpha", "0.5", "--beta", "2e-4",
                            "--delta", "3", "--lambda", "1,1,1", "--seed", "7", "--out",
                            dir / "fit"});
    REQUIRE(o.code == 0);
    for (const char* name : {"model.json", "transitions.json", "paths.json", "graph.dot",
                             "measures.json", "measures.csv", "population.csv", "manifest.json"}) {
        CHECK(fs::exists(dir / ("fit/" + std::string(name))));
    }
    const json model = load_json(dir / "fit/model.json");
    CHECK(model["hyperparameters"]["alpha"] == 0.5);
    CHECK(model["hyperparameters"]["lambda2"] == 1.0);
    CHECK(model["seed"] == 7);
    const json manifest = load_json(dir / "fit/manifest.json");
    CHECK(manifest["command"] == "fit");
    CHECK(manifest["dataset_fingerprint"] == model["dataset_fingerprint"]);
    CHECK(manifest["tool_version"] == cluspath::cli::kToolVersion);
    CHECK(manifest["seed"] == 7);
}

TEST_CASE("manifest replay reproduces the artifacts") {
    TempDir dir;
    const std::string data = make_data(dir);
    REQUIRE(call({"fit", "--input", data, "--k", "4", "--seed", "3", "--out", dir / "a"}).code == 0);
    const json manifest = load_json(dir / "a/manifest.json");
    std::vector<std::string> argv = manifest["argv"].get<std::vector<std::string>>();
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
        if (argv[i] == "--out") argv[i + 1] = dir / "b";
    }
    argv.erase(argv.begin());
    REQUIRE(call(argv).code == 0);
    for (const char* name : {"model.json", "graph.dot", "measures.csv", "paths.json"}) {
        CHECK(slurp(dir / ("a/" + std::string(name))) == slurp(dir / ("b/" + std::string(name))));
    }
}

TEST_CASE("usage errors exit with 2") {
    TempDir dir;
    const std::string data = make_data(dir);
    CHECK(call({"fit", "--input", data, "--out", dir / "x"}).code == 2);
    CHECK(call({"fit", "--input", data, "--k", "1", "--out", dir / "x"}).code == 2);
    CHECK(call({"fit", "--input", data, "--k", "3", "--alpha", "2", "--out", dir / "x"}).code == 2);
    CHECK(call({"fit", "--input", data, "--k", "3", "--lambda", "1,2", "--out", dir / "x"}).code == 2);
    CHECK(call({"fit", "--input", data, "--k", "3", "--preset", "nope"}).code == 2);
    CHECK(call({"fit", "--k", "3"}).code == 2);
    CHECK(call({"tune", "--input", data, "--k", "3", "--pop", "0"}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({}).code == 2);
    CHECK(call({"synth", "--timestamps", "1", "--out", dir / "s"}).code == 2);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("data errors exit with 1") {
    TempDir dir;
    std::ofstream(dir / "bad.csv") << "entity,time,x\na,1,1\na,1,2\n";
    const Outcome o = call({"fit", "--input", dir / "bad.csv", "--k", "2", "--out", dir / "x"});
    CHECK(o.code == 1);
    CHECK(o.err.find("line 3") != std::string::npos);
    CHECK(call({"fit", "--input", dir / "missing.csv", "--k", "2"}).code == 1);
}

TEST_CASE("presets set the published parameters") {
    TempDir dir;
    const std::string data = make_data(dir);
    REQUIRE(call({"fit", "--input", data, "--k", "5", "--preset", "tdck", "--out", dir / "t"}).code == 0);
    const json hp = load_json(dir / "t/model.json")["hyperparameters"];
    CHECK(hp["alpha"] == 0.95);
    CHECK(hp["beta"] == 0.0002);
    CHECK(hp["delta"] == 3.0);
    CHECK(hp["lambda1"] == 1.0);
    CHECK(hp["lambda2"] == 0.0);
    CHECK(hp["lambda3"] == 0.0);

    cluspath::cli::ParamFlags flags;
    flags.k = 3;
    flags.preset = "kmeans";
    CHECK(cluspath::cli::resolve_params(flags).alpha == 1.0);
    CHECK(cluspath::cli::resolve_params(flags).beta == 0.0);
    flags.preset = "ckm";
    CHECK(cluspath::cli::resolve_params(flags).beta == 0.0005);
    flags.preset = "tdkm";
    flags.beta = 0.1;
    CHECK(cluspath::cli::resolve_params(flags).alpha == 0.0);
    CHECK(cluspath::cli::resolve_params(flags).beta == 0.1);
}

TEST_CASE("eval reports measures and the seeded protocol") {
    TempDir dir;
    const std::string data = make_data(dir);
    REQUIRE(call({"fit", "--input", data, "--k", "5", "--out", dir / "m"}).code == 0);
    Outcome o = call({"eval", "--input", data, "--model", dir / "m/model.json"});
    REQUIRE(o.code == 0);
    json report = json::parse(o.out);
    CHECK(report["measures"].size() == 4);
    CHECK(report["measures"] == load_json(dir / "m/measures.json"));

    o = call({"eval", "--input", data, "--preset", "kmeans", "--k", "5", "--seeds", "4", "--out",
              dir / "e"});
    REQUIRE(o.code == 0);
    report = json::parse(o.out);
    CHECK(report["protocol"]["mean"].size() == 4);
    CHECK(report["protocol"]["stdev"].size() == 4);
    CHECK(report["protocol"]["runs"].size() == 4);
    CHECK(fs::exists(dir / "e/eval.json"));
    CHECK(fs::exists(dir / "e/manifest.json"));

    const std::string other = make_data(dir, "2");
    o = call({"eval", "--input", other, "--model", dir / "m/model.json"});
    CHECK(o.code == 1);
    CHECK(o.err.find("fingerprint") != std::string::npos);
    CHECK(call({"eval", "--input", data}).code == 2);
}

TEST_CASE("graph subcommand rebuilds the display artifacts") {
    TempDir dir;
    const std::string data = make_data(dir);
    REQUIRE(call({"fit", "--input", data, "--k", "4", "--out", dir / "m"}).code == 0);
    REQUIRE(call({"graph", "--input", data, "--model", dir / "m/model.json", "--out", dir / "g"}).code == 0);
    CHECK(slurp(dir / "g/graph.dot") == slurp(dir / "m/graph.dot"));
    CHECK(fs::exists(dir / "g/manifest.json"));
}

TEST_CASE("synth output is reproducible") {
    TempDir dir;
    REQUIRE(call({"synth", "--entities", "3", "--noise", "0", "--seed", "5", "--out", dir / "a"}).code == 0);
    REQUIRE(call({"synth", "--entities", "3", "--noise", "0", "--seed", "5", "--out", dir / "b"}).code == 0);
    CHECK(slurp(dir / "a/data.csv") == slurp(dir / "b/data.csv"));
    const json labels = load_json(dir / "a/labels.json");
    CHECK(labels["paths"].size() == 3);
    CHECK(labels["assignment"].size() == 36);
}

TEST_CASE("tune writes a reproducible front") {
    TempDir dir;
    const std::string data = make_data(dir);
    const std::vector<std::string> base{"tune", "--input", data, "--k", "5", "--pop", "20", "--gens",
                                        "10", "--seed", "7", "--out"};
    auto a = base;
    a.push_back(dir / "a");
    auto b = base;
    b.push_back(dir / "b");
    REQUIRE(call(a).code == 0);
    REQUIRE(call(b).code == 0);
    const std::string front = slurp(dir / "a/front.csv");
    CHECK(front == slurp(dir / "b/front.csv"));
    std::size_t rows = 0;
    for (char c : front) rows += c == '\n' ? 1 : 0;
    CHECK(rows - 1 <= 20);
    for (const char* name : {"best_params.json", "history.json", "model.json", "manifest.json"}) {
        CHECK(fs::exists(dir / ("a/" + std::string(name))));
    }
}
