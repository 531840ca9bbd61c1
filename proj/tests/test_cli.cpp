#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "telegraph/cli.hpp"
#include "telegraph/config.hpp"
#include "telegraph/csv_io.hpp"
#include "telegraph/error.hpp"
#include "telegraph/simulator.hpp"

using namespace telegraph;
namespace fs = std::filesystem;

namespace {

const std::string kExample = std::string(TELEGRAPH_SOURCE_DIR) + "/configs/example.cfg";

const char* kMinimal =
    "model.mu0 = -1\nmodel.mu1 = 1\nmodel.lambda0 = 1\nmodel.lambda1 = 1\nmodel.B = 1\ninit.atoms = 1, 0.5, 1\n";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("telegraph_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_config(const std::string& text) const {
        const fs::path p = dir_ / "run.cfg";
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST(Config, ParsesExampleAndNormalizes) {
    const RunConfig c = load_config(kExample);
    EXPECT_EQ(c.params.mu0, -1.0);
    EXPECT_EQ(c.sim.paths, 100000u);
    EXPECT_EQ(c.output.times.size(), 3u);
    const RunConfig again = parse_config(normalized(c));
    EXPECT_EQ(normalized(again), normalized(c));
    EXPECT_EQ(config_hash(again), config_hash(c));
}

TEST(Config, RejectsUnknownDuplicateAndMissingKeys) {
    auto code = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    EXPECT_EQ(code(std::string(kMinimal) + "model.speed = 3\n"), ErrorCode::ConfigError);
    EXPECT_EQ(code(std::string(kMinimal) + "model.mu1 = 2\n"), ErrorCode::ConfigError);
    EXPECT_EQ(code("model.mu0 = -1\n"), ErrorCode::ConfigError);
    EXPECT_EQ(code(std::string(kMinimal) + "sim.paths = 0\n"), ErrorCode::ZeroPaths);
    EXPECT_EQ(code(std::string(kMinimal) + "pde.cfl = 2\n"), ErrorCode::CflViolation);
    EXPECT_NO_THROW(parse_config(std::string(kMinimal) + "# comment\n\n  sim.seed = 7  # trailing\n"));
}

TEST(Config, NumbersRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, -1e-300, 12345.678}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST_F(CliTest, ValidateExample) {
    EXPECT_EQ(run({"validate", "--config", kExample, "--quiet"}), 0);
}

TEST_F(CliTest, ValidateRejectsBadConfig) {
    const auto cfg = write_config(std::string(kMinimal) + "model.mu0 = -2\n");
    EXPECT_EQ(run({"validate", "--config", cfg.string()}), 1);
    EXPECT_EQ(run({"no-such-command"}), 1);
}

TEST_F(CliTest, SimulateIsByteIdentical) {
    const auto cfg = write_config(std::string(kMinimal) + "sim.paths = 10000\nsim.seed = 42\noutput.svg = false\n");
    const auto a = dir_ / "a", b = dir_ / "b";
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", a.string(), "--quiet"}), 0);
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", b.string(), "--quiet"}), 0);
    const std::string fa = slurp(a / "field_mc.csv");
    ASSERT_FALSE(fa.empty());
    EXPECT_EQ(fa, slurp(b / "field_mc.csv"));
    EXPECT_EQ(slurp(a / "boundary_mc.csv"), slurp(b / "boundary_mc.csv"));
    EXPECT_EQ(fa.rfind("# telegraph simulate config_hash=", 0), 0u);
    EXPECT_NE(fa.find("seed=42"), std::string::npos);
    EXPECT_EQ(fa.find('\r'), std::string::npos);
}

TEST_F(CliTest, EveryCommandWritesHeaderedFiles) {
    const auto cfg = write_config(std::string(kMinimal) +
                                  "sim.paths = 2000\npde.nx = 200\noutput.times = 0.5, 1\n"
                                  "output.grid_points = 21\noutput.series_step = 0.05\n"
                                  "transform.reconstruct_terms = 64\n");
    const auto out = dir_ / "out";
    for (const char* cmd : {"simulate", "pde", "roots", "transforms", "recover"})
        ASSERT_EQ(run({cmd, "--config", cfg.string(), "--out", out.string(), "--quiet"}), 0) << cmd;
    std::size_t csv = 0, svg = 0;
    for (const auto& e : fs::directory_iterator(out)) {
        if (e.path().extension() == ".csv") {
            ++csv;
            EXPECT_EQ(slurp(e.path()).front(), '#') << e.path();
        }
        if (e.path().extension() == ".svg") ++svg;
    }
    EXPECT_EQ(csv, 8u);
    EXPECT_GT(svg, 0u);
}

TEST_F(CliTest, FieldCsvRoundTrip) {
    const auto init = InitialCondition::point(0.5, Regime::Up, 1.0);
    const std::vector<double> t{0.5, 1.0};
    const auto x = linspace(0, 1, 11);
    const FieldGrid g = estimate_field({-1, 1, 1, 1, 1}, init, t, x, {1000, 1, 1});
    std::stringstream s;
    write_field_csv(s, g, {"simulate", 0xabc, 1});
    const FieldGrid back = read_field_csv(s);
    EXPECT_EQ(back.times, g.times);
    EXPECT_EQ(back.positions, g.positions);
    EXPECT_TRUE(back.F0 == g.F0);
    EXPECT_TRUE(back.F1 == g.F1);
    ASSERT_TRUE(back.has_errors());
    EXPECT_TRUE(*back.F1_err == *g.F1_err);
    EXPECT_EQ(back.source, Source::MonteCarlo);
}

TEST_F(CliTest, CompareExitCodes) {
    const auto cfg = write_config(std::string(kMinimal) +
                                  "sim.paths = 20000\npde.nx = 1000\noutput.grid_points = 51\noutput.svg = false\n");
    const auto out = dir_ / "out";
    ASSERT_EQ(run({"simulate", "--config", cfg.string(), "--out", out.string(), "--quiet"}), 0);
    ASSERT_EQ(run({"pde", "--config", cfg.string(), "--out", out.string(), "--quiet"}), 0);
    const std::string mc = (out / "field_mc.csv").string(), pde = (out / "field_pde.csv").string();
    EXPECT_EQ(run({"compare", mc, mc, "--tol-max", "0", "--quiet", "--out", (dir_ / "same").string()}), 0);
    EXPECT_EQ(run({"compare", mc, pde, "--tol-max", "0.05", "--quiet", "--out", (dir_ / "ok").string()}), 0);
    EXPECT_EQ(run({"compare", mc, pde, "--tol-max", "1e-6", "--quiet", "--out", (dir_ / "bad").string()}), 2);
    EXPECT_TRUE(fs::exists(dir_ / "bad" / "comparison.csv"));
    EXPECT_EQ(run({"compare", mc, (dir_ / "missing.csv").string(), "--quiet"}), 1);
}
