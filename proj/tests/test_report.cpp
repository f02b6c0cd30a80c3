#include <catch_amalgamated.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "cfsim/report.hpp"

using namespace cfsim;

namespace {

namespace fs = std::filesystem;

std::string write_csv(const fs::path& dir, const std::string& name,
                      const std::vector<std::array<double, 18>>& rows) {
    const std::string path = (dir / name).string();
    std::ofstream out(path, std::ios::binary);
    out << kCsvHeader << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return path;
}

std::vector<std::array<double, 18>> make_rows(int count, double max_n_slope) {
    std::vector<std::array<double, 18>> rows;
    for (int i = 0; i < count; ++i) {
        std::array<double, 18> row{};
        const double t = 0.1 * i;
        row[0] = t;
        for (std::size_t c = 1; c < row.size(); ++c) row[c] = 1.0;
        row[16] = 1.0 + max_n_slope * t;  // max_n column
        rows.push_back(row);
    }
    return rows;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cfsim_report_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("constant columns pass with tail max equal to the constant") {
    TempDir dir;
    const std::string path = write_csv(dir.path, "const.csv", make_rows(100, 0.0));
    const std::vector<Verdict> verdicts = summarize(path);
    REQUIRE(verdicts.size() == 4);
    for (const Verdict& v : verdicts) {
        CHECK(v.pass);
        CHECK(v.measured == 1.0);
        CHECK(v.threshold == Catch::Approx(1.05));
    }
}

TEST_CASE("linear growth in max_n fails with the slope reported") {
    TempDir dir;
    const std::string path = write_csv(dir.path, "grow.csv", make_rows(100, 0.5));
    const std::vector<Verdict> verdicts = summarize(path);
    bool saw_fail = false;
    for (const Verdict& v : verdicts) {
        if (v.criterion == "bounded:max_n") {
            saw_fail = true;
            CHECK_FALSE(v.pass);
            CHECK(v.measured > v.threshold);
            CHECK(v.notes.find("slope=") != std::string::npos);
            // fitted slope should be close to the synthetic 0.5
            const double slope = std::stod(v.notes.substr(v.notes.find('=') + 1));
            CHECK(slope == Catch::Approx(0.5).epsilon(0.05));
        } else {
            CHECK(v.pass);
        }
    }
    CHECK(saw_fail);
}

TEST_CASE("missing column raises SCHEMA_ERROR naming it") {
    TempDir dir;
    const std::string path = (dir.path / "broken.csv").string();
    std::ofstream out(path, std::ios::binary);
    out << "t,mass_n,mass_c\n0,1,1\n1,1,1\n";
    out.close();
    try {
        summarize(path);
        FAIL("expected SCHEMA_ERROR");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SCHEMA_ERROR);
        CHECK(std::string(e.what()).find("l2_u") != std::string::npos);
    }
}

TEST_CASE("summarize is a pure function of file content") {
    TempDir dir;
    const std::string path = write_csv(dir.path, "pure.csv", make_rows(60, 0.1));
    const std::vector<Verdict> a = summarize(path);
    const std::vector<Verdict> b = summarize(path);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].criterion == b[i].criterion);
        CHECK(a[i].pass == b[i].pass);
        CHECK(a[i].measured == b[i].measured);
        CHECK(a[i].threshold == b[i].threshold);
        CHECK(a[i].notes == b[i].notes);
    }
}

TEST_CASE("verdict CSV emission") {
    std::vector<Verdict> verdicts{{"bounded:max_n", true, 1.0, 1.05, ""},
                                  {"bounded:l2_u", false, 2.0, 1.05, "slope=0.5"}};
    std::ostringstream out;
    write_verdicts_csv(verdicts, out);
    const std::string text = out.str();
    CHECK(text.find("criterion,pass,measured,threshold,notes") == 0);
    CHECK(text.find("bounded:max_n,true,1,1.05") != std::string::npos);
    CHECK(text.find("bounded:l2_u,false,2,1.05,slope=0.5") != std::string::npos);
}
