#include "fgins/pipeline.hpp"
#include "fgins/report.hpp"
#include "fgins/scenario.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fgins;
using namespace fgins::testing;

namespace fs = std::filesystem;

namespace {

// 700 s drive: one outage at 500 s with the default 60 s / 150 s schedule.
Dataset drive(bool ideal, std::uint64_t seed = 3) {
    std::string text = "duration = 700\nseed = " + std::to_string(seed) + "\n";
    if (ideal) text += "ideal = true\ngnss_sd_h = 1e-4\ngnss_sd_v = 1e-4\n";
    return simulate(simulation_from(Config::parse(text)));
}

RunConfig run_config(Mode mode) {
    RunConfig c;
    c.mode = mode;
    c.noise = from_datasheet(grade_preset("adis16465"));
    c.outage_passes = {500.0};
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::vector<std::string> out;
    std::ifstream in(p);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fgins-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(ScoreOutages, PoolsPerOutageMaxima) {
    PassResult a{100.0, {}}, b{150.0, {}};
    for (int t = 0; t <= 300; ++t) {
        EpochEstimate e;
        e.t = t;
        e.error = Vec3(0.1 * t, 0.0, -0.01 * t);
        a.epochs.push_back(e);
        b.epochs.push_back(e);
    }
    std::vector<PassResult> passes{a, b};
    const OutageSchedule s{0.0, 20.0, 100.0};
    const OutageReport r = score_outages(passes, s, 300.0);
    // Starts: pass 0 at 100 and 200, pass 1 at 150 and 250; maxima at start + 19.
    ASSERT_EQ(r.count(), 4);
    const double h[] = {11.9, 21.9, 16.9, 26.9};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(r.outages[i].max_horizontal, h[i], 1e-12);
        sum += h[i] * h[i];
    }
    EXPECT_EQ(r.outages[2].pass, 1);
    EXPECT_NEAR(r.rmse_horizontal, std::sqrt(sum / 4.0), 1e-12);
    EXPECT_NEAR(r.outages[0].max_vertical, 1.19, 1e-12);
    EXPECT_EQ(passes[0].epochs[100].outage, 0);
    EXPECT_EQ(passes[0].epochs[120].outage, -1);
}

TEST(Initialize, LevelsAndTakesHeadingFromGnss) {
    const Dataset d = drive(true);
    RunConfig cfg = run_config(Mode::M1);
    const LocalFrame f(geodetic_of(d.gnss.front()));
    std::vector<GnssFactor> g;
    for (const auto& r : d.gnss) g.push_back(from_record(r, f, Vec3::Zero()));
    const InitialState init = initialize(cfg, d.imu, g);
    const Vec3 rpy = dcm_to_euler(quat_to_dcm(init.node.nav.q));
    EXPECT_LT(std::abs(rpy.x()), 1e-6);
    EXPECT_LT(std::abs(rpy.y()), 1e-6);
    EXPECT_LT(std::abs(rpy.z()), 1e-3);  // the drive starts heading north
    EXPECT_GT(init.node.nav.v.norm(), cfg.init_speed);
    EXPECT_GE(init.gnss_index, 2u);
}

TEST(Initialize, RefusesStationaryData) {
    const Dataset d = simulate(simulation_from(Config::parse("duration = 60\nstatic_time = 39\nideal = true\n")));
    RunConfig cfg = run_config(Mode::M1);
    cfg.init_speed = 50.0;
    const LocalFrame f(geodetic_of(d.gnss.front()));
    std::vector<GnssFactor> g;
    for (const auto& r : d.gnss) g.push_back(from_record(r, f, Vec3::Zero()));
    EXPECT_THROW(initialize(cfg, d.imu, g), std::runtime_error);
}

TEST(RunMode, ZeroNoiseRefinedIsCentimetreLevel) {
    // The estimator must also be told the IMU is nearly perfect; with
    // datasheet densities the slowly observable biases alone drift ~0.5 m.
    RunConfig cfg = run_config(Mode::M1);
    for (double* s : {&cfg.noise.sigma_g, &cfg.noise.sigma_a, &cfg.noise.sigma_bg, &cfg.noise.sigma_ba}) *s *= 1e-3;
    const RunResult r = run_mode(cfg, drive(true));
    ASSERT_EQ(r.report.count(), 1);
    EXPECT_FALSE(r.report.partial);
    EXPECT_LT(r.report.rmse_horizontal, 0.01);
    EXPECT_TRUE(r.stats.costs_monotone);
}

TEST(RunMode, RoughModeDriftsMoreThanRefined) {
    const Dataset d = drive(false);
    const RunResult m1 = run_mode(run_config(Mode::M1), d);
    const RunResult m2 = run_mode(run_config(Mode::M2), d);
    EXPECT_GT(m2.report.rmse_horizontal, m1.report.rmse_horizontal);
}

TEST(RunMode, ReportsAreDeterministic) {
    const Dataset d = drive(false, 5);
    const fs::path a = scratch_dir("determinism-a"), b = scratch_dir("determinism-b");
    write_run_report(a, run_mode(run_config(Mode::M0), d), "adis16465", 60.0);
    write_run_report(b, run_mode(run_config(Mode::M0), d), "adis16465", 60.0);
    for (const char* name : {"trajectory.csv", "outages.csv", "drift.csv", "summary.csv"}) {
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
        EXPECT_FALSE(slurp(a / name).empty()) << name;
    }
}

TEST(Report, FileShapes) {
    const Dataset d = drive(false, 6);
    RunConfig cfg = run_config(Mode::M0);
    cfg.outage_passes = {500.0, 575.0};
    const RunResult r = run_mode(cfg, d);
    const fs::path dir = scratch_dir("report-shapes");
    write_run_report(dir, r, "adis16465", 60.0);

    const auto outages = lines_of(dir / "outages.csv");
    ASSERT_EQ(static_cast<int>(outages.size()), 1 + r.report.count());
    EXPECT_EQ(r.report.count(), 2);
    EXPECT_EQ(outages[0], "index,pass,start,max_horizontal,max_vertical");

    const auto summary = lines_of(dir / "summary.csv");
    ASSERT_EQ(summary.size(), 2u);
    EXPECT_EQ(summary[0], "grade,M0_hor,M0_ver,M1_hor,M1_ver,M2_hor,M2_ver,outages,partial");
    EXPECT_EQ(summary[1].rfind("adis16465,", 0), 0u);

    const auto traj = lines_of(dir / "trajectory.csv");
    std::size_t epochs = 0;
    for (const auto& p : r.passes) epochs += p.epochs.size();
    EXPECT_EQ(traj.size(), 1 + epochs);
}

TEST(Report, DriftGrowsThroughOutage) {
    const Dataset d = drive(false, 7);
    const RunResult r = run_mode(run_config(Mode::M0), d);
    const fs::path dir = scratch_dir("drift-shape");
    write_drift_csv(dir / "drift.csv", r, 60.0);
    const auto rows = lines_of(dir / "drift.csv");
    ASSERT_GT(rows.size(), 2u);
    EXPECT_EQ(rows[0], "outage,phase,t,since_start,horizontal,vertical");
    // Horizontal drift near the end of the outage exceeds that at its start.
    auto field = [](const std::string& row, int k) {
        std::stringstream ss(row);
        std::string cell;
        for (int i = 0; i <= k; ++i) std::getline(ss, cell, ',');
        return cell;
    };
    double first = -1.0, last_outage = -1.0;
    bool recovery = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (field(rows[i], 1) == "outage") {
            if (first < 0) first = std::stod(field(rows[i], 4));
            last_outage = std::stod(field(rows[i], 4));
        } else {
            recovery = true;
        }
    }
    EXPECT_GT(last_outage, first);
    EXPECT_TRUE(recovery);
    EXPECT_NEAR(last_outage, r.report.outages[0].max_horizontal, 0.2 * last_outage);
}
