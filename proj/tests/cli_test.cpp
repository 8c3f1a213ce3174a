#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the installed command surface: exit codes, emitted
// files, and determinism, all against a small fast scene.

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(NH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "nh_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

// Small scene so every invocation stays fast.
void write_small_config(const fs::path& path) {
    std::ofstream os(path);
    os << "width = 80\nheight = 60\n"
       << "culvert_in_m = 5\nculvert_out_m = 40\n"
       << "path_end_m = 12\npath_step_m = 1\n"
       << "max_evals = 10\nsweep_frames = 12\n";
}

} // namespace

TEST_CASE("help and argument errors") {
    CHECK(run("--help") == 0);
    CHECK(run("") != 0);               // a subcommand is required
    CHECK(run("--bogus simulate") == 2);
    CHECK(run("mission --mode warp-drive") == 2);
}

TEST_CASE("invalid config files exit with code 2") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "bad.cfg";
    std::ofstream(cfg) << "not_a_key = 1\n";
    CHECK(run("--config " + cfg.string() + " simulate --frames 1") == 2);
    CHECK(run("--config /no/such/file.cfg simulate") == 2);
}

TEST_CASE("simulate renders numbered PGM frames") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "small.cfg";
    write_small_config(cfg);
    CHECK(run("--config " + cfg.string() + " --out " + tmp.str() +
              " simulate --frames 3 --light 0.6 --exposure-ms 8") == 0);
    CHECK(fs::exists(tmp.path / "frame_00000.pgm"));
    CHECK(fs::exists(tmp.path / "frame_00002.pgm"));
    const std::string pgm = slurp(tmp.path / "frame_00000.pgm");
    CHECK(pgm.starts_with("P5\n80 60\n255\n"));
    CHECK(pgm.size() == 12 + 80 * 60);
}

TEST_CASE("optimize emits a trace and oracle emits the grid") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "small.cfg";
    write_small_config(cfg);
    CHECK(run("--config " + cfg.string() + " --out " + tmp.str() + " optimize --pose 20") == 0);
    const std::string trace = slurp(tmp.path / "optimize_trace.csv");
    CHECK(trace.starts_with("eval_index,P,dt_ms,y,best_so_far,stop_reason\n"));

    CHECK(run("--config " + cfg.string() + " --out " + tmp.str() +
              " oracle --pose 20 --resolution 7") == 0);
    const std::string grid = slurp(tmp.path / "oracle_grid.csv");
    CHECK(grid.starts_with("index,P,dt_ms,y\n"));
    // Header plus one row per grid node.
    CHECK(std::count(grid.begin(), grid.end(), '\n') == 1 + 7 * 7);
}

TEST_CASE("mission emits per-mode CSVs deterministically") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "small.cfg";
    write_small_config(cfg);
    const std::string base = "--config " + cfg.string() + " --seed 9 ";
    CHECK(run(base + "--out " + (tmp.path / "a").string() + " mission --mode nighthawk") == 0);
    CHECK(run(base + "--out " + (tmp.path / "b").string() + " mission --mode nighthawk") == 0);
    const std::string a = slurp(tmp.path / "a" / "mission_nighthawk.csv");
    const std::string b = slurp(tmp.path / "b" / "mission_nighthawk.csv");
    CHECK(a == b);
    CHECK(a.starts_with("frame_index,d,P,dt_ms,m_feat,mean_intensity,mode,action\n"));
}

TEST_CASE("bench-metrics and plot round-trip") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "small.cfg";
    write_small_config(cfg);
    CHECK(run("--config " + cfg.string() + " --out " + tmp.str() + " bench-metrics") == 0);
    CHECK(fs::exists(tmp.path / "bench_frames.csv"));
    CHECK(slurp(tmp.path / "bench_correlations.csv").starts_with("metric,spearman\n"));

    CHECK(run("--out " + tmp.str() + " plot --in " + (tmp.path / "bench_frames.csv").string() +
              " --x frame_index --y m_feat,m_shim --of bench.svg") == 0);
    const std::string svg = slurp(tmp.path / "bench.svg");
    CHECK(svg.starts_with("<svg"));
    CHECK(svg.find("m_shim") != std::string::npos);

    // Unknown column is a config-class failure.
    CHECK(run("--out " + tmp.str() + " plot --in " + (tmp.path / "bench_frames.csv").string() +
              " --x frame_index --y nope") == 3);
}
