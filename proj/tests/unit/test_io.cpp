#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qwalk/csv_io.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qwalk_io_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("density csv round trip is exact") {
    TempDir tmp;
    Density d;
    d.values = {0.0, 0.25, 0.5, 1.0 / 3.0, 0.0};
    d.origin_index = 2;
    d.time = 7;
    const fs::path p = tmp.path / "density.csv";
    write_density_csv(p, d);
    const Density back = read_density_csv(p);
    CHECK(back.time == 7);
    CHECK(back.origin_index == 2);
    CHECK(back.values == d.values);  // %.17g round trips doubles exactly
}

TEST_CASE("moments csv round trip is exact") {
    TempDir tmp;
    MomentSeries m;
    m.mean = {0.0, -0.9428090415820634, -1.23456789e-3};
    m.second_moment = {0.0, 1.0, 3.14159265358979};
    const fs::path p = tmp.path / "moments.csv";
    write_moments_csv(p, m);
    const MomentSeries back = read_moments_csv(p);
    CHECK(back.mean == m.mean);
    CHECK(back.second_moment == m.second_moment);
}

TEST_CASE("writing the same data twice produces identical bytes") {
    TempDir tmp;
    Density d;
    d.values = {0.1, 0.2, 0.7};
    d.origin_index = 1;
    d.time = 3;
    write_density_csv(tmp.path / "a.csv", d);
    write_density_csv(tmp.path / "b.csv", d);
    std::ifstream a(tmp.path / "a.csv"), b(tmp.path / "b.csv");
    const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
}

TEST_CASE("meta json round trip") {
    TempDir tmp;
    RunMeta meta;
    meta.command = "simulate";
    meta.argv = {"qwalk", "simulate", "--tmax", "64"};
    meta.schedule = "random:alpha=0.5,n=1";
    meta.spinor = {0.5773502691896257, 0.0, 0.816496580927726, 0.0};
    meta.t_max = 64;
    meta.n_realizations = 100;
    meta.seed = 42;
    meta.snapshot_times = {1, 2, 4};
    meta.threads = 2;
    meta.outputs = {"moments.csv"};
    const fs::path p = tmp.path / "run_meta.json";
    write_meta_json(p, meta);
    const RunMeta back = read_meta_json(p);
    CHECK(back.command == meta.command);
    CHECK(back.argv == meta.argv);
    CHECK(back.schedule == meta.schedule);
    CHECK(back.spinor == meta.spinor);
    CHECK(back.t_max == meta.t_max);
    CHECK(back.n_realizations == meta.n_realizations);
    CHECK(back.seed == meta.seed);
    CHECK(back.snapshot_times == meta.snapshot_times);
    CHECK(back.threads == meta.threads);
    CHECK(back.outputs == meta.outputs);
}

TEST_CASE("re-running the sidecar argv reproduces every csv byte for byte") {
    const char* cli = std::getenv("QWALK_CLI");
    if (cli == nullptr || !fs::exists(cli)) {
        MESSAGE("QWALK_CLI not set; run through ctest to exercise the CLI round trip");
        return;
    }
    TempDir tmp;
    const fs::path first = tmp.path / "first";
    const std::string cmd = std::string(cli) +
                            " simulate --schedule random:alpha=0.7,n=1 --tmax 64"
                            " --realizations 20 --seed 9 --snapshots 64 -o " +
                            first.string() + " > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);

    const RunMeta meta = read_meta_json(first / "run_meta.json");
    REQUIRE(!meta.argv.empty());
    // replay the recorded argv into a fresh directory
    const fs::path second = tmp.path / "second";
    std::string replay;
    for (std::size_t i = 0; i < meta.argv.size(); ++i) {
        std::string arg = meta.argv[i];
        if (i > 0 && (meta.argv[i - 1] == "-o" || meta.argv[i - 1] == "--output-dir"))
            arg = second.string();
        replay += (i ? " " : "") + arg;
    }
    replay += " > /dev/null 2>&1";
    REQUIRE(std::system(replay.c_str()) == 0);

    int compared = 0;
    for (const auto& entry : fs::directory_iterator(first)) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        std::ifstream a(entry.path(), std::ios::binary);
        std::ifstream b(second / entry.path().filename(), std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(a)),
                             std::istreambuf_iterator<char>());
        const std::string sb((std::istreambuf_iterator<char>(b)),
                             std::istreambuf_iterator<char>());
        CHECK(sa == sb);
    }
    CHECK(compared > 0);
}

TEST_CASE("sweep csv has a header and one row per alpha") {
    TempDir tmp;
    std::vector<SweepRow> rows(2);
    rows[0].alpha = 0.5;
    rows[1].alpha = 0.9;
    rows[1].min_flag = true;
    const fs::path p = tmp.path / "sweep.csv";
    write_sweep_csv(p, rows);
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    CHECK(line == "alpha,b1,b2,b3,b4,slope_x2,x2_at_tmax,residual_mean,residual_second,min_flag");
    int count = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++count;
    CHECK(count == 2);
}
