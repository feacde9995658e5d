// End-to-end exercise of the command-line binary. The path to the built tool
// comes from the OWAL_BIN environment variable (set by ctest).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_bin;
fs::path g_dir;

void check(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run(const std::string& args) {
  const std::string command = g_bin + " " + args + " >" + (g_dir / "stdout.txt").string() +
                              " 2>" + (g_dir / "stderr.txt").string();
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string stderr_text() { return read_file(g_dir / "stderr.txt"); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

int main() {
  const char* bin = std::getenv("OWAL_BIN");
  if (bin == nullptr) {
    std::cerr << "OWAL_BIN not set\n";
    return 1;
  }
  g_bin = bin;
  g_dir = fs::temp_directory_path() / "owal-cli-smoke";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  write_file(g_dir / "catalog.json", R"({"known_ids":[1,2],"unknown_ids":[]})");

  // The three reference frames: entropies 0, 1.039721, ln 3.
  const std::string dump =
      R"({"frame_id":"fa","boxes":[{"label":1,"confidence":1.0,"center":[0,0,0],"size":[1,1,1],"heading":0.0}]})"
      "\n"
      R"({"frame_id":"fb","boxes":[{"label":1,"confidence":0.5,"center":[0,0,0],"size":[1,1,1],"heading":0.0},{"label":2,"confidence":0.5,"center":[4,4,0],"size":[1,1,1],"heading":0.0}]})"
      "\n"
      R"({"frame_id":"fc","boxes":[{"label":1,"confidence":1.0,"center":[0,0,0],"size":[1,1,1],"heading":0.0},{"label":2,"confidence":1.0,"center":[4,4,0],"size":[1,1,1],"heading":0.0},{"label":1,"confidence":0.0,"center":[8,8,0],"size":[1,1,1],"heading":0.0}]})"
      "\n";
  write_file(g_dir / "preds.jsonl", dump);

  // score: descending entropy order with the expected values.
  {
    const int code = run("score --policy olc --dump " + (g_dir / "preds.jsonl").string() +
                         " --catalog " + (g_dir / "catalog.json").string() + " --out " +
                         (g_dir / "scores.csv").string());
    check(code == 0, "score exits 0");
    const std::string csv = read_file(g_dir / "scores.csv");
    std::istringstream lines(csv);
    std::string header, first, second, third;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    std::getline(lines, third);
    check(header == "frame_id,score,n_boxes,p_unknown", "score csv header");
    check(contains(first, "fc,1.09861228866810"), "top frame is the uniform three-box frame");
    check(contains(second, "fb,1.0397207708399179"), "second frame matches the frozen entropy");
    check(contains(third, "fa,0"), "confident single box scores zero");
  }

  // score with diagnostics columns.
  {
    const int code = run("score --policy olc --dump " + (g_dir / "preds.jsonl").string() +
                         " --catalog " + (g_dir / "catalog.json").string() + " --diagnostics" +
                         " --out " + (g_dir / "diag.csv").string());
    check(code == 0, "score --diagnostics exits 0");
    const std::string csv = read_file(g_dir / "diag.csv");
    check(contains(csv, "mean_confidence_1"), "diagnostics include per-class mean confidence");
    check(contains(csv, "max_entropy"), "diagnostics include the balance flag");
  }

  // score with an empty dump: header-only CSV.
  {
    write_file(g_dir / "empty.jsonl", "");
    const int code = run("score --policy olc --dump " + (g_dir / "empty.jsonl").string() +
                         " --catalog " + (g_dir / "catalog.json").string() + " --out " +
                         (g_dir / "empty.csv").string());
    check(code == 0, "score on empty dump exits 0");
    check(read_file(g_dir / "empty.csv") == "frame_id,score,n_boxes,p_unknown\n",
          "empty dump gives header-only csv");
  }

  // score with an unlisted class: data error naming the class.
  {
    write_file(g_dir / "bad.jsonl",
               R"({"frame_id":"fx","boxes":[{"label":9,"confidence":0.5,"center":[0,0,0],"size":[1,1,1],"heading":0.0}]})"
               "\n");
    const int code = run("score --policy olc --dump " + (g_dir / "bad.jsonl").string() +
                         " --catalog " + (g_dir / "catalog.json").string());
    check(code == 3, "unlisted class exits 3");
    check(contains(stderr_text(), "9"), "error names the class id");
  }

  // select: random is deterministic under a fixed seed.
  {
    const std::string base = "select --policy random --dump " + (g_dir / "preds.jsonl").string() +
                             " --k 2 --seed 1 --out ";
    check(run(base + (g_dir / "sel1.csv").string()) == 0, "select exits 0");
    check(run(base + (g_dir / "sel2.csv").string()) == 0, "select exits 0 again");
    check(read_file(g_dir / "sel1.csv") == read_file(g_dir / "sel2.csv"),
          "random selection is deterministic under the same seed");
  }

  // select: coreset without embeddings names the missing field.
  {
    const int code = run("select --policy coreset --dump " + (g_dir / "preds.jsonl").string() +
                         " --k 1");
    check(code == 3, "coreset without embeddings exits 3");
    check(contains(stderr_text(), "embedding"), "error mentions the embedding field");
  }

  // select: labeled id not present in the dump.
  {
    write_file(g_dir / "labeled.txt", "nonexistent\n");
    const int code = run("select --policy random --dump " + (g_dir / "preds.jsonl").string() +
                         " --k 1 --labeled " + (g_dir / "labeled.txt").string());
    check(code == 3, "unknown labeled id exits 3");
  }

  // evaluate: predictions equal to truth give AP 1 everywhere.
  {
    write_file(g_dir / "truth.jsonl",
               R"({"frame_id":"fa","boxes":[{"label":1,"center":[0,0,0],"size":[1,1,1],"heading":0.0}]})"
               "\n"
               R"({"frame_id":"fb","boxes":[{"label":1,"center":[0,0,0],"size":[1,1,1],"heading":0.0},{"label":2,"center":[4,4,0],"size":[1,1,1],"heading":0.0}]})"
               "\n");
    write_file(g_dir / "perfect.jsonl",
               R"({"frame_id":"fa","boxes":[{"label":1,"confidence":1.0,"center":[0,0,0],"size":[1,1,1],"heading":0.0}]})"
               "\n"
               R"({"frame_id":"fb","boxes":[{"label":1,"confidence":1.0,"center":[0,0,0],"size":[1,1,1],"heading":0.0},{"label":2,"confidence":1.0,"center":[4,4,0],"size":[1,1,1],"heading":0.0}]})"
               "\n");
    const int code = run("evaluate --pred " + (g_dir / "perfect.jsonl").string() + " --truth " +
                         (g_dir / "truth.jsonl").string() + " --tau 0.5 --out " +
                         (g_dir / "eval.csv").string());
    check(code == 0, "evaluate exits 0");
    const std::string csv = read_file(g_dir / "eval.csv");
    check(contains(csv, "ap_1,1"), "class 1 AP is 1");
    check(contains(csv, "ap_2,1"), "class 2 AP is 1");
  }

  // simulate: writes all three files; byte-identical on a repeat run; the
  // seed override changes the outputs.
  {
    write_file(g_dir / "config.json", R"({
      "world": {"n_frames": 150, "n_test": 30, "seed": 5},
      "protocol": {"m": 20, "n_r": 10, "rounds": 2, "seed": 5},
      "policy": {"name": "open-crb"},
      "crb": {"k1": 40, "k2": 30}
    })");
    const std::string config = (g_dir / "config.json").string();
    check(run("simulate --config " + config + " --out " + (g_dir / "out1").string()) == 0,
          "simulate exits 0");
    for (const char* name : {"trace.json", "metrics.csv", "selections.csv"}) {
      check(fs::exists(g_dir / "out1" / name), std::string("simulate wrote ") + name);
    }
    check(run("simulate --config " + config + " --out " + (g_dir / "out2").string()) == 0,
          "simulate exits 0 again");
    check(read_file(g_dir / "out1" / "metrics.csv") == read_file(g_dir / "out2" / "metrics.csv"),
          "metrics.csv is byte-identical across runs");

    const std::string with_env = "OWAL_SEED=99 " + g_bin + " simulate --config " + config +
                                 " --out " + (g_dir / "out3").string() + " >/dev/null 2>&1";
    check(std::system(with_env.c_str()) == 0, "simulate honors OWAL_SEED");
    check(read_file(g_dir / "out1" / "metrics.csv") != read_file(g_dir / "out3" / "metrics.csv"),
          "seed override changes the outputs");
  }

  // simulate: config errors exit 2.
  {
    check(run("simulate --config " + (g_dir / "missing.json").string() + " --out " +
              (g_dir / "outx").string()) == 2,
          "missing config exits 2");
    write_file(g_dir / "bad_config.json", R"({"protocol": {"m": 20, "rounds": 2, "bogus": 1}})");
    const int code = run("simulate --config " + (g_dir / "bad_config.json").string() + " --out " +
                         (g_dir / "outy").string());
    check(code == 2, "unknown config key exits 2");
    check(contains(stderr_text(), "bogus"), "error names the offending key");
    write_file(g_dir / "infeasible.json",
               R"({"world": {"n_frames": 50, "n_test": 10}, "protocol": {"m": 40, "n_r": 20, "rounds": 4}})");
    check(run("simulate --config " + (g_dir / "infeasible.json").string() + " --out " +
              (g_dir / "outz").string()) == 2,
          "infeasible budget exits 2");
  }

  // The bundled default config parses and simulates when available.
  if (const char* bundled = std::getenv("OWAL_DEFAULT_CONFIG")) {
    check(run(std::string("simulate --config ") + bundled + " --out " +
              (g_dir / "bundled").string()) == 0,
          "bundled default config simulates");
    for (const char* name : {"trace.json", "metrics.csv", "selections.csv"}) {
      check(fs::exists(g_dir / "bundled" / name), std::string("bundled run wrote ") + name);
    }
  }

  if (g_failures == 0) {
    std::printf("cli smoke: all checks passed\n");
    fs::remove_all(g_dir);
    return 0;
  }
  std::printf("cli smoke: %d failures (artifacts in %s)\n", g_failures, g_dir.string().c_str());
  return 1;
}
