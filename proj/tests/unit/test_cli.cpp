// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "gpf/cli/cli.hpp"
#include "gpf/cli/manifest.hpp"
#include "gpf/scene/scene_io.hpp"

using namespace gpf;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("gpf_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& f) const { return (path / f).string(); }
};

struct Run {
    int code;
    std::string err;
    std::string out;
};

Run run(std::vector<std::string> args) {
    std::ostringstream err, out;
    auto* old_err = std::cerr.rdbuf(err.rdbuf());
    auto* old_out = std::cout.rdbuf(out.rdbuf());
    const int code = run_cli(args);
    std::cerr.rdbuf(old_err);
    std::cout.rdbuf(old_out);
    return {code, err.str(), out.str()};
}

std::string slurp(const std::string& p) { return read_text_file(p); }

json load_json(const std::string& p) { return json::parse(slurp(p)); }

void write_views(const std::string& path) {
    json views = json::array();
    for (double x : {0.0, 0.6}) {
        views.push_back({{"position", {x, 0.1, 3.6}}, {"look_at", {0, 0, 0}}, {"fov", 40}, {"resolution", {10, 10}}});
    }
    write_text_file(path, views.dump());
}

}  // namespace

TEST_CASE("git blob hashes") {
    CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("render-pt is reproducible and writes a manifest") {
    TempDir d("pt");
    const std::vector<std::string> base = {"render-pt", "--scene", "builtin:cornell-box", "--resolution", "12x10",
                                           "--spp", "4", "--seed", "3"};
    auto with = [&](std::vector<std::string> extra, const std::string& out) {
        std::vector<std::string> a = extra;
        a.insert(a.end(), base.begin(), base.end());
        a.insert(a.end(), {"--out", out, "--ppm", out + ".ppm"});
        return a;
    };
    REQUIRE(run(with({"--threads", "1"}, d / "a.pfm")).code == 0);
    REQUIRE(run(with({"--threads", "3"}, d / "b.pfm")).code == 0);
    CHECK(slurp(d / "a.pfm") == slurp(d / "b.pfm"));
    CHECK(slurp(d / "a.pfm.ppm") == slurp(d / "b.pfm.ppm"));

    const json man = load_json(d / "a.pfm.manifest.json");
    CHECK(man["format"] == "gpf-manifest/1");
    CHECK(man["command"] == "render-pt");
    CHECK(man["options"]["spp"] == "4");
    CHECK(man["options"]["seed"] == "3");
    CHECK(man["threads"] == 1);
    CHECK(man["scene"]["source"] == "builtin:cornell-box");
    CHECK(man["scene"]["sha1"] == git_blob_sha1(canonical_scene_text(builtin_scene("cornell-box"))));
    REQUIRE(man["outputs"].size() == 2);
    CHECK(man["outputs"][0]["sha1"] == git_blob_sha1(slurp(d / "a.pfm")));
    CHECK(man["outputs"][0]["bytes"] == fs::file_size(d / "a.pfm"));
    CHECK(man["time_seconds"].get<double>() >= 0);

    // Re-execution reproduces the output bytes.
    REQUIRE(run({"rerun", "--manifest", d / "a.pfm.manifest.json", "--out-dir", d / "again"}).code == 0);
    CHECK(slurp(d / "again/a.pfm") == slurp(d / "a.pfm"));
    CHECK(slurp(d / "again/a.pfm.ppm") == slurp(d / "a.pfm.ppm"));
}

TEST_CASE("render-sppm is reproducible and reports storage") {
    TempDir d("sppm");
    auto args = [&](const std::string& threads, const std::string& out) {
        return std::vector<std::string>{"--threads", threads, "render-sppm", "--scene", "builtin:caustic-sphere",
                                        "--resolution", "16x16", "--iterations", "2", "--photons", "3000",
                                        "--seed", "2", "--out", out, "--photon-dump", out + ".gpp"};
    };
    REQUIRE(run(args("1", d / "a.pfm")).code == 0);
    REQUIRE(run(args("2", d / "b.pfm")).code == 0);
    CHECK(slurp(d / "a.pfm") == slurp(d / "b.pfm"));
    CHECK(slurp(d / "a.pfm.gpp") == slurp(d / "b.pfm.gpp"));
    const json man = load_json(d / "a.pfm.manifest.json");
    CHECK(man["storage_bytes"] == fs::file_size(d / "a.pfm.gpp"));
    CHECK(slurp(d / "a.pfm.gpp").substr(0, 4) == "GPP1");

    REQUIRE(run({"rerun", "--manifest", d / "a.pfm.manifest.json", "--out-dir", d / "again"}).code == 0);
    CHECK(slurp(d / "again/a.pfm") == slurp(d / "a.pfm"));
}

TEST_CASE("field pipeline: init, train, render, compare") {
    TempDir d("field");
    write_views(d / "views.json");
    const std::string scene = "builtin:cornell-box";
    REQUIRE(run({"gpf-init", "--scene", scene, "--photons", "3000", "--gaussians", "500", "--seed", "4",
                 "--out-checkpoint", d / "init.gpf"})
                .code == 0);
    CHECK(fs::file_size(d / "init.gpf") == 8 + 52 * 500);

    auto train_args = [&](const std::string& threads, const std::string& out) {
        return std::vector<std::string>{"--threads", threads, "gpf-train", "--scene", scene, "--views", d / "views.json",
                                        "--sppm-iterations", "2", "--photons", "3000", "--steps", "20", "--batch",
                                        "32", "--rebuild-every", "5", "--seed", "4", "--in-checkpoint", d / "init.gpf",
                                        "--out-checkpoint", out, "--log", out + ".csv", "--dataset-out", out + ".gpd"};
    };
    REQUIRE(run(train_args("1", d / "t1.gpf")).code == 0);
    REQUIRE(run(train_args("3", d / "t3.gpf")).code == 0);
    CHECK(slurp(d / "t1.gpf") == slurp(d / "t3.gpf"));
    CHECK(slurp(d / "t1.gpf.csv") == slurp(d / "t3.gpf.csv"));
    CHECK(slurp(d / "t1.gpf.csv").rfind("step,loss\n", 0) == 0);
    const json tman = load_json(d / "t1.gpf.manifest.json");
    CHECK(tman["inputs"]["in-checkpoint"][0]["sha1"] == git_blob_sha1(slurp(d / "init.gpf")));
    CHECK(tman["embedded"]["views"] == slurp(d / "views.json"));

    // Training from the saved (f32) dataset is reproducible on its own.
    auto from_dataset = [&](const std::string& threads, const std::string& out) {
        return std::vector<std::string>{"--threads", threads, "gpf-train", "--scene", scene, "--dataset",
                                        d / "t1.gpf.gpd", "--steps", "20", "--batch", "32", "--seed", "4",
                                        "--in-checkpoint", d / "init.gpf", "--out-checkpoint", out};
    };
    REQUIRE(run(from_dataset("1", d / "ds1.gpf")).code == 0);
    REQUIRE(run(from_dataset("2", d / "ds2.gpf")).code == 0);
    CHECK(slurp(d / "ds1.gpf") == slurp(d / "ds2.gpf"));
    CHECK(load_json(d / "ds1.gpf.manifest.json")["inputs"]["dataset"][0]["sha1"] ==
          git_blob_sha1(slurp(d / "t1.gpf.gpd")));

    REQUIRE(run({"rerun", "--manifest", d / "t1.gpf.manifest.json", "--out-dir", d / "again"}).code == 0);
    CHECK(slurp(d / "again/t1.gpf") == slurp(d / "t1.gpf"));

    auto render_args = [&](const std::string& threads, const std::string& out) {
        return std::vector<std::string>{"--threads", threads, "gpf-render", "--scene", scene, "--resolution", "16x16",
                                        "--checkpoint", d / "t1.gpf", "--spp", "2", "--out", out};
    };
    REQUIRE(run(render_args("1", d / "g1.pfm")).code == 0);
    REQUIRE(run(render_args("2", d / "g2.pfm")).code == 0);
    CHECK(slurp(d / "g1.pfm") == slurp(d / "g2.pfm"));
    CHECK(load_json(d / "g1.pfm.manifest.json")["storage_bytes"] == fs::file_size(d / "t1.gpf"));

    const Run cmp = run({"compare", "--ref", d / "g1.pfm", "--test", d / "g2.pfm", d / "g1.pfm"});
    REQUIRE(cmp.code == 0);
    const json table = json::parse(cmp.out);
    REQUIRE(table["rows"].size() == 2);
    CHECK(table["rows"][0]["psnr"] == "inf");
    CHECK(table["rows"][0]["ssim"] == 1.0);
    CHECK(table["rows"][0]["storage_bytes"] == fs::file_size(d / "t1.gpf"));
}

TEST_CASE("sweep over k produces one row per value") {
    TempDir d("sweep");
    write_views(d / "views.json");
    const Run r = run({"sweep", "--scene", "builtin:cornell-box", "--resolution", "12x12", "--param", "k", "--values",
                       "1,3,5,10", "--views", d / "views.json", "--sppm-iterations", "2", "--ref-iterations", "2",
                       "--photons", "2000", "--gaussians", "300", "--steps", "5", "--batch", "32", "--render-spp", "1",
                       "--out", d / "sweep.json"});
    REQUIRE(r.code == 0);
    const json table = load_json(d / "sweep.json");
    CHECK(table["param"] == "k");
    REQUIRE(table["rows"].size() == 4);
    CHECK(table["rows"][3]["value"] == 10);
    for (const json& row : table["rows"]) {
        CHECK(row.contains("psnr"));
        CHECK(row["ssim"].get<double>() <= 1.0);
        CHECK(row["storage_bytes"] == 8 + 52 * 300);
    }
}

TEST_CASE("exit codes and diagnostics") {
    TempDir d("errors");
    CHECK(run({}).code == kExitParse);
    CHECK(run({"render-pt", "--scene", "builtin:cornell-box", "--out", d / "x.pfm", "--bogus"}).code == kExitParse);
    CHECK(run({"frobnicate"}).code == kExitParse);
    CHECK(run({"render-pt", "--scene", "builtin:cornell-box", "--out", d / "x.pfm", "--resolution", "12by3"}).code ==
          kExitParse);
    CHECK(run({"render-pt", "--scene", "builtin:cornell-box", "--out", d / "x.pfm", "--spp", "0"}).code ==
          kExitValidation);
    CHECK(run({"render-pt", "--scene", "builtin:nope", "--out", d / "x.pfm"}).code == kExitValidation);

    const std::string missing = d / "no-such-scene.json";
    const Run m = run({"render-pt", "--scene", missing, "--out", d / "x.pfm"});
    CHECK(m.code == kExitRuntime);
    CHECK(m.err.find(missing) != std::string::npos);

    write_text_file(d / "broken.json", "{\"camera\": [1, 2,\n");
    const Run b = run({"render-pt", "--scene", d / "broken.json", "--out", d / "x.pfm"});
    CHECK(b.code == kExitParse);
    CHECK(b.err.find("broken.json") != std::string::npos);

    const Run ck = run({"gpf-render", "--scene", "builtin:cornell-box", "--checkpoint", d / "none.gpf", "--out",
                        d / "x.pfm"});
    CHECK(ck.code == kExitRuntime);
    CHECK(ck.err.find("none.gpf") != std::string::npos);

    write_text_file(d / "bad.gpf", "GPF1garbage");
    CHECK(run({"gpf-render", "--scene", "builtin:cornell-box", "--checkpoint", d / "bad.gpf", "--out", d / "x.pfm"})
              .code == kExitParse);
    CHECK(!fs::exists(d / "x.pfm"));
}
