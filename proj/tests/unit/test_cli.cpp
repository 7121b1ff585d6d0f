// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

const std::string kData{TRITTERLAB_DATA_DIR};

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = tritterlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("ideal distribution as text") {
    const auto r = run({"ideal"});
    CHECK(r.code == 0);
    CHECK(r.out.find("P(1,1,1)=0.333333333333\n") != std::string::npos);
    CHECK(r.out.find("P(2,1,0)=0\n") != std::string::npos);
    CHECK(r.out.find("P(3,0,0)=0.222222222222\n") != std::string::npos);
    const auto c = run({"ideal", "--classical"});
    CHECK(c.out.find("P(1,1,1)=0.222222222222\n") != std::string::npos);
}

TEST_CASE("ideal distribution as json") {
    const auto r = run({"--format", "json", "ideal"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    double total = 0.0;
    for (const auto& o : doc.at("outcomes")) total += o.at("p").get<double>();
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("coupler") {
    const auto r = run({"coupler", "--k", "1"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("two_coupler_reflectivity").get<double>() == doctest::Approx(0.41318).epsilon(1e-4));
    CHECK(run({"coupler", "--k", "-1"}).code == 1);
}

TEST_CASE("surface") {
    const auto r = run({"surface", "--outcome", "2,1,0", "--grid", "3", "--range", "1.0"});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 10);
    CHECK(r.out.rfind("x1,x2,P\n", 0) == 0);
    CHECK(r.out.find("\n0,0,0\n") != std::string::npos);
    const auto full = run({"surface", "--outcome", "1,1,1", "--grid", "5"});
    CHECK(full.out.find("\n0,0,0.333333333333\n") != std::string::npos);
}

TEST_CASE("reconstruct the shipped 795 nm data") {
    const auto r = run({"reconstruct", "--visibilities", kData + "/visibilities_795.csv", "--singles",
                        kData + "/singles_795.csv", "--q", "0.94"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(std::abs(doc.at("similarity_vs_ideal").get<double>() - 0.9768) < 0.002);
    CHECK(doc.at("residual").get<double>() < 1e-8);
    CHECK(doc.at("similarity_vs_measured").get<double>() > 0.9999);
    // the output is itself a loadable matrix
    const auto path = (std::filesystem::temp_directory_path() / "tritterlab_cli_fit.json").string();
    REQUIRE(run({"-o", path, "reconstruct", "--visibilities", kData + "/visibilities_795.csv", "--singles",
                 kData + "/singles_795.csv", "--q", "0.94"}).code == 0);
    const auto vis = run({"visibilities", "--matrix", path});
    CHECK(vis.code == 0);
    CHECK(std::count(vis.out.begin(), vis.out.end(), '\n') == 10);
    std::filesystem::remove(path);
}

TEST_CASE("classical and predict") {
    const auto c = run({"classical", "--outcome", "1,1,1", "--delayed", "2"});
    REQUIRE(c.code == 0);
    CHECK(nlohmann::json::parse(c.out).at("visibility").get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    const auto p = run({"predict", "--matrix", kData + "/u785_reconstructed.json", "--p", "0.65", "--g", "0.12",
                        "--scenario", "A"});
    REQUIRE(p.code == 0);
    const auto doc = nlohmann::json::parse(p.out);
    CHECK(doc.at("six_photon_share").get<double>() < 0.1);
    CHECK(p.err.empty());

    const auto warned = run({"predict", "--g", "0.7", "--scenario", "A"});
    CHECK(warned.code == 0);
    CHECK(warned.err.find("warning") != std::string::npos);

    const auto ladder = run({"ladder", "--matrix", kData + "/u785_reconstructed.json", "--p", "0.65"});
    CHECK(ladder.code == 0);
    CHECK(nlohmann::json::parse(ladder.out).at("steps").size() == 5);
}

TEST_CASE("exit codes") {
    const auto missing = run({"reconstruct", "--visibilities", "/nonexistent.csv", "--singles", "/nonexistent.csv"});
    CHECK(missing.code == 2);
    CHECK(missing.err.rfind("tritterlab: error: ", 0) == 0);

    const auto bad = std::filesystem::temp_directory_path() / "tritterlab_cli_bad.json";
    {
        std::ofstream f(bad);
        f << "[[1, 2], [3]]";
    }
    CHECK(run({"visibilities", "--matrix", bad.string()}).code == 3);
    std::filesystem::remove(bad);

    CHECK(run({}).code != 0);
    CHECK(run({"frobnicate"}).code != 0);
    CHECK(run({"predict", "--scenario", "Z"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("reruns are byte-identical") {
    const std::vector<std::string> mc{"--seed", "5", "classical", "--outcome", "2,1,0", "--method", "mc:20000"};
    CHECK(run(mc).out == run(mc).out);
    const std::vector<std::string> boot{"--seed", "3", "reconstruct", "--visibilities", kData + "/visibilities_785.csv",
                                        "--singles", kData + "/singles_785.csv", "--q", "0.94", "--bootstrap", "4",
                                        "--restarts", "2"};
    const auto a = run(boot);
    REQUIRE(a.code == 0);
    CHECK(a.out == run(boot).out);
}
