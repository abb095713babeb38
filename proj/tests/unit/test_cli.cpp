#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include "cli.hpp"
#include "fixtures.hpp"
#include "specmerge/json_format.hpp"
#include "specmerge/sparse.hpp"

using namespace specmerge;
using namespace specmerge::testing;
namespace fs = std::filesystem;

namespace {

struct Workdir {
    fs::path root;

    Workdir() {
        std::random_device rd;
        root = fs::temp_directory_path() / ("specmerge_cli_" + std::to_string(rd()));
        fs::create_directories(root);
    }
    ~Workdir() { fs::remove_all(root); }

    std::string operator/(const std::string& name) const { return (root / name).string(); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

void write_pgm_file(const std::string& path, const ImagePlane& plane) { write_bytes(path, write_pgm(plane)); }

}  // namespace

TEST_CASE("spectral and spatial merges write identical bytes") {
    Workdir dir;
    std::mt19937_64 rng(60);
    write_pgm_file(dir / "a.pgm", random_8bit_plane(rng, 32, 32));
    write_pgm_file(dir / "b.pgm", random_8bit_plane(rng, 32, 32));
    REQUIRE(invoke({"merge", "--mode", "spectral", "--coeffs", "1,1", "--threshold-frac", "0", "-o", dir / "m.pgm",
                    dir / "a.pgm", dir / "b.pgm"})
                .code == 0);
    REQUIRE(invoke({"merge", "--mode", "spatial", "-o", dir / "s.pgm", dir / "a.pgm", dir / "b.pgm"}).code == 0);
    CHECK(read_bytes(dir / "m.pgm") == read_bytes(dir / "s.pgm"));
}

TEST_CASE("inspect geometry prints JSON") {
    const Outcome r = invoke({"inspect", "geometry", "--u", "1", "--v", "1", "--rows", "4", "--cols", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"lambda_wf\": 5.6568") != std::string::npos);
    CHECK(invoke({"inspect", "geometry", "--u", "4", "--v", "1", "--rows", "4", "--cols", "4"}).code == 1);
}

TEST_CASE("usage errors exit 1") {
    const Outcome unknown = invoke({"merge", "--mode", "spatial", "--bogus", "-o", "x.pgm", "a.pgm"});
    CHECK(unknown.code == 1);
    CHECK_FALSE(unknown.err.empty());
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"merge", "--mode", "sideways", "-o", "x.pgm", "a.pgm"}).code == 1);
    CHECK(invoke({"merge", "--mode", "spatial", "--coeffs", "1,2", "-o", "x.pgm", "a.pgm", "b.pgm"}).code == 1);
}

TEST_CASE("coefficient count mismatch is a usage error") {
    Workdir dir;
    write_pgm_file(dir / "a.pgm", ImagePlane(2, 2));
    write_pgm_file(dir / "b.pgm", ImagePlane(2, 2));
    const Outcome r = invoke({"merge", "--mode", "spectral", "--coeffs", "1,1,1", "-o", dir / "m.pgm", dir / "a.pgm",
                              dir / "b.pgm"});
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(dir / "m.pgm"));
    CHECK(invoke({"merge", "--mode", "spectral", "--threshold-frac", "1", "-o", dir / "m.pgm", dir / "a.pgm"}).code == 1);
}

TEST_CASE("I/O and format errors exit 2 and name the file") {
    Workdir dir;
    const Outcome missing = invoke({"merge", "--mode", "spatial", "-o", dir / "m.pgm", dir / "nope.pgm"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("nope.pgm") != std::string::npos);

    write_bytes(dir / "bad.pgm", {'P', '5', '\n', '9'});
    const Outcome bad = invoke({"merge", "--mode", "spectral", "-o", dir / "m.pgm", "--sparse", dir / "m.fmg",
                                dir / "bad.pgm"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("bad.pgm") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "m.pgm"));
    CHECK_FALSE(fs::exists(dir / "m.fmg"));
}

TEST_CASE("unwritable output leaves nothing behind") {
    Workdir dir;
    write_pgm_file(dir / "a.pgm", ImagePlane(2, 2));
    const Outcome r = invoke({"merge", "--mode", "spatial", "-o", dir / "missing_dir/m.pgm", dir / "a.pgm"});
    CHECK(r.code == 2);
    CHECK(std::distance(fs::directory_iterator(dir.root), fs::directory_iterator{}) == 1);
}

TEST_CASE("spectral merge writes sparse and report files") {
    Workdir dir;
    std::mt19937_64 rng(61);
    write_pgm_file(dir / "a.pgm", random_8bit_plane(rng, 16, 16));
    REQUIRE(invoke({"merge", "--mode", "spectral", "--threshold-frac", "0.1", "-o", dir / "m.pgm", "--sparse",
                    dir / "m.fmg", "--report", dir / "r.json", dir / "a.pgm"})
                .code == 0);
    const auto report = report_from_json([&] {
        const auto b = read_bytes(dir / "r.json");
        return std::string(b.begin(), b.end());
    }());
    const auto sparse = decode_fmg(read_bytes(dir / "m.fmg"));
    CHECK(sparse.entries.size() == report.retained_units);
    CHECK(report.total_units == 256);
    CHECK(report.threshold_fraction == 0.1);
}

TEST_CASE("reduce hits the requested ratio") {
    Workdir dir;
    std::mt19937_64 rng(62);
    write_pgm_file(dir / "a.pgm", random_8bit_plane(rng, 32, 32));
    write_pgm_file(dir / "b.pgm", random_8bit_plane(rng, 32, 32));
    REQUIRE(invoke({"reduce", "--target-ratio", "8", "-o", dir / "m.pgm", "--sparse", dir / "m.fmg", "--report",
                    dir / "r.json", dir / "a.pgm", dir / "b.pgm"})
                .code == 0);
    const auto b = read_bytes(dir / "r.json");
    const auto report = report_from_json(std::string(b.begin(), b.end()));
    CHECK(report.reduction_ratio >= 8.0);
    CHECK(report.reduction_ratio <= 8.8);
    CHECK(fs::file_size(dir / "m.fmg") == kFmgHeaderSize + kFmgEntrySize * report.retained_units);
    CHECK(invoke({"reduce", "--target-ratio", "0.5", "-o", dir / "m.pgm", "--sparse", dir / "m.fmg", "--report",
                  dir / "r.json", dir / "a.pgm"})
              .code == 1);
}

TEST_CASE("spectrum heatmap") {
    Workdir dir;
    std::mt19937_64 rng(63);
    write_pgm_file(dir / "a.pgm", random_8bit_plane(rng, 8, 8));
    REQUIRE(invoke({"spectrum", "--shift", "--log", "-o", dir / "h.pgm", dir / "a.pgm"}).code == 0);
    const ImagePlane h = read_pgm(read_bytes(dir / "h.pgm"));
    CHECK(h.rows() == 8);
    CHECK(h(4, 4) == 1.0);  // DC dominates and sits in the middle
    REQUIRE(invoke({"spectrum", "-o", dir / "raw.pgm", dir / "a.pgm"}).code == 0);
    CHECK(read_pgm(read_bytes(dir / "raw.pgm"))(0, 0) == 1.0);
}

TEST_CASE("help exits 0") {
    const Outcome r = invoke({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("merge") != std::string::npos);
}

TEST_CASE("built executable follows the same exit-code contract") {
    Workdir dir;
    const std::string exe = SPECMERGE_CLI_PATH;
    CHECK(std::system((exe + " inspect geometry --u 1 --v 2 --rows 4 --cols 4 > " + (dir / "g.json")).c_str()) == 0);
    const int usage = std::system((exe + " merge --nonsense 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(usage) == 1);
    const int io = std::system((exe + " merge --mode spatial -o " + (dir / "x.pgm") + " " + (dir / "none.pgm") +
                                " 2> /dev/null")
                                   .c_str());
    CHECK(WEXITSTATUS(io) == 2);
}
