#include "msentropy/dataio.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

using namespace msentropy;
namespace fs = std::filesystem;

namespace {

const fs::path kCli = MSENTROPY_CLI;
const fs::path kFixtures = MSENTROPY_FIXTURES;

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("msentropy_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run(const std::string& args, const std::string& env = "") {
    const auto out = work_dir() / "stdout.txt";
    const auto err = work_dir() / "stderr.txt";
    const std::string cmd = "cd '" + work_dir().string() + "' && " + env + " '" + kCli.string() + "' " + args +
                            " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("generate is deterministic") {
    const auto a = run("generate --kind ar3 --n 3000 --sd 1 --seed 7 --output gen_a.csv");
    const auto b = run("generate --kind ar3 --n 3000 --sd 1 --seed 7 --output gen_b.csv");
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    CHECK(slurp(work_dir() / "gen_a.csv") == slurp(work_dir() / "gen_b.csv"));
    const auto rec = load_record(work_dir() / "gen_a.csv");
    CHECK(rec.channel_count() == 1);
    CHECK(rec.length() == 3000);
    const auto c = run("generate --kind ar3 --n 3000 --sd 1 --seed 8");
    CHECK(c.out != slurp(work_dir() / "gen_a.csv"));
}

TEST_CASE("compute happy path and resolved config") {
    REQUIRE(run("generate --kind wgn,ar1 --n 600 --seed 1 --output pair.csv").status == 0);
    const auto r = run("compute --estimator vemse --m 2 --r 0.15 --scales 1..20 --input pair.csv --output curve.csv");
    CHECK(r.status == 0);
    CHECK(r.err.find("resolved radius") != std::string::npos);
    CHECK(r.err.find("equal_template_count = false") != std::string::npos);
    const auto curve = curve_from_result(read_result(work_dir() / "curve.csv"));
    CHECK(curve.size() == 20);
    CHECK(curve.at_scale(1).defined());
}

TEST_CASE("undefined points do not fail the run") {
    REQUIRE(run("generate --kind wgn,wgn --n 60 --seed 1 --output short.csv").status == 0);
    const auto r = run("compute --scales 1..30 --input short.csv");
    CHECK(r.status == 0);
    CHECK(r.out.find("\n30,,") != std::string::npos);
}

TEST_CASE("single channel: vemse and mse agree") {
    REQUIRE(run("generate --kind ar2 --n 800 --seed 3 --output one.csv").status == 0);
    REQUIRE(run("compute --estimator vemse --scales 1..8 --input one.csv --output v.csv").status == 0);
    REQUIRE(run("compute --estimator mse --scales 1..8 --input one.csv --output u.csv").status == 0);
    const auto v = read_result(work_dir() / "v.csv");
    const auto u = read_result(work_dir() / "u.csv");
    CHECK(v.data_text() == u.data_text());
    CHECK(v.get("estimator") == "vemse");
    CHECK(u.get("estimator") == "mse");
}

TEST_CASE("exit statuses") {
    SUBCASE("invalid configuration") {
        const auto r = run("compute --r 0 --input one.csv");
        CHECK(r.status == 2);
        CHECK(r.err.find("--r") != std::string::npos);
        CHECK(run("compute --estimator apen --input one.csv").status == 2);
        CHECK(run("compute --scales 3..1 --input one.csv").status == 2);
        CHECK(run("sweep --models wgn,pink --realizations 1").status == 2);
        CHECK(run("sweep --values 1,x").status == 2);
        CHECK(run("frobnicate").status == 2);
        CHECK(run("").status == 2);
    }
    SUBCASE("unreadable or malformed input") {
        CHECK(run("compute --input '" + (kFixtures / "ragged.csv").string() + "'").status == 3);
        const auto r = run("compute --input '" + (kFixtures / "nonnumeric.csv").string() + "'");
        CHECK(r.status == 3);
        CHECK(r.err.find("column 2") != std::string::npos);
        CHECK(run("compute --input does_not_exist.csv").status == 3);
        CHECK(run("compute --input '" + (kFixtures / "empty.csv").string() + "'").status == 3);
    }
    SUBCASE("constant input cannot resolve a trace radius") {
        std::ofstream(work_dir() / "flat.csv") << "a\n1\n1\n1\n1\n";
        CHECK(run("compute --input flat.csv").status == 2);
        CHECK(run("compute --input flat.csv --tolerance absolute --r 0.1 --m 1").status == 0);
    }
}

TEST_CASE("column selection and row limits") {
    const std::string in = "'" + (kFixtures / "wind3.csv").string() + "'";
    const auto r = run("compute --m 1 --input " + in + " --columns 3,1 --max-rows 4 --r 0.5");
    CHECK(r.status == 0);
    CHECK(r.err.find("(2 channels, 4 samples)") != std::string::npos);
    CHECK(run("compute --input " + in + " --columns 0").status == 2);
}

TEST_CASE("sweep over the r grid") {
    const auto r = run("sweep --vary r --values 0.1:0.1:1.5 --models wgn,wgn --n 200 --realizations 2 --output r.csv");
    REQUIRE(r.status == 0);
    const auto res = ensemble_from_result(read_result(work_dir() / "r.csv"));
    CHECK(res.points.size() == 15);
    CHECK(res.points.back().sweep_value == 1.5);
    CHECK(res.points[2].sweep_value == 0.3);
    const auto replayed = run("replay --input r.csv --output r2.csv");
    REQUIRE(replayed.status == 0);
    CHECK(read_result(work_dir() / "r2.csv").data_text() == read_result(work_dir() / "r.csv").data_text());
}

TEST_CASE("studies") {
    auto r = run("study --kind noise --n 300 --realizations 2 --scales 1..4 --output noise.csv");
    REQUIRE(r.status == 0);
    CHECK(ensemble_from_result(read_result(work_dir() / "noise.csv")).model_labels.size() == 6);
    r = run("study --kind directionality --pairs wgn,ar1 --n 300 --realizations 2 --scales 1..4");
    CHECK(r.status == 0);
    CHECK(r.out.find("model.1 = ar1,wgn") != std::string::npos);
    CHECK(run("study --kind directionality --pairs wgn --n 300 --realizations 2").status == 2);
}

TEST_CASE("bench writes a timing table") {
    const auto r = run("bench --vary channels --values 2..3 --n 300 --runs 2 --output t.csv --emit-plot");
    REQUIRE(r.status == 0);
    const auto t = timing_from_result(read_result(work_dir() / "t.csv"));
    REQUIRE(t.points.size() == 2);
    CHECK(t.points[0].vemse_mean_s > 0.0);
    CHECK(fs::exists(work_dir() / "t.csv.gp"));
}

TEST_CASE("surrogate shuffles each channel") {
    REQUIRE(run("generate --kind ar3,ar1 --n 500 --seed 2 --output orig.csv").status == 0);
    REQUIRE(run("surrogate --input orig.csv --seed 4 --output shuf.csv").status == 0);
    const auto a = load_record(work_dir() / "orig.csv");
    const auto b = load_record(work_dir() / "shuf.csv");
    REQUIRE(b.channel_count() == 2);
    for (std::size_t c = 0; c < 2; ++c) {
        auto x = a.channels()[c];
        auto y = b.channels()[c];
        CHECK(x != y);
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        CHECK(x == y);
    }
    REQUIRE(run("surrogate --input orig.csv --seed 4 --output shuf2.csv").status == 0);
    CHECK(slurp(work_dir() / "shuf.csv") == slurp(work_dir() / "shuf2.csv"));
}

TEST_CASE("output directory override is echoed") {
    fs::create_directories(work_dir() / "elsewhere");
    const auto r = run("generate --n 10 --output redirected.csv",
                       "MSENTROPY_OUTPUT_DIR='" + (work_dir() / "elsewhere").string() + "'");
    CHECK(r.status == 0);
    CHECK(r.err.find("MSENTROPY_OUTPUT_DIR") != std::string::npos);
    CHECK(fs::exists(work_dir() / "elsewhere" / "redirected.csv"));
}

TEST_CASE("plot scripts") {
    REQUIRE(run("compute --input pair.csv --scales 1..3 --output plotted.csv --emit-plot").status == 0);
    const auto gp = slurp(work_dir() / "plotted.csv.gp");
    CHECK(gp.find("plotted.csv") != std::string::npos);
    CHECK(run("compute --input pair.csv --emit-plot").status == 2);
}
