// fgins: simulate datasets, run M0/M1/M2, compare grades, grid-tune noise.

#include "fgins/pipeline.hpp"
#include "fgins/report.hpp"
#include "fgins/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

namespace fs = std::filesystem;
using namespace fgins;

namespace {

struct Common {
    std::string config;
    std::string mode;
    std::string out{"out"};
    long seed{-1};
};

void add_common(CLI::App* app, Common& c, bool with_mode) {
    app->add_option("--config", c.config, "key = value configuration file")->check(CLI::ExistingFile);
    if (with_mode) app->add_option("--mode", c.mode, "M0 (EKF), M1 (refined FGO) or M2 (rough FGO)");
    app->add_option("--seed", c.seed, "random seed (overrides the config)");
    app->add_option("--out", c.out, "output directory");
}

/// Config file plus command-line overrides; data paths that are relative are
/// resolved against data_dir when one is given.
Config load(const Common& c) {
    Config cfg = c.config.empty() ? Config{} : Config::load(c.config);
    if (!c.mode.empty()) cfg.set("mode", c.mode);
    if (c.seed >= 0) cfg.set("seed", std::to_string(c.seed));
    if (cfg.has("data_dir")) {
        const fs::path dir = cfg.get_string("data_dir", ".");
        for (auto [key, name] : {std::pair{"imu_file", "imu.txt"}, {"gnss_file", "gnss.txt"}, {"truth_file", "truth.txt"}}) {
            if (!cfg.has(key)) cfg.set(key, (dir / name).string());
        }
    }
    return cfg;
}

void save_config(const fs::path& dir, const Config& cfg) {
    fs::create_directories(dir);
    std::ofstream(dir / "config.used") << cfg.dump();
}

Dataset data_for(const Config& cfg) {
    if (cfg.has("imu_file")) {
        return ingest(cfg.get_string("imu_file", ""), cfg.get_string("gnss_file", ""),
                      cfg.get_string("truth_file", ""));
    }
    return simulate(simulation_from(cfg));
}

int cmd_simulate(const Common& c) {
    const Config cfg = load(c);
    const SimulationConfig sim = simulation_from(cfg);
    const Dataset data = simulate(sim);
    write_dataset(c.out, data);
    save_config(c.out, cfg);
    fmt::print("wrote {} IMU samples, {} GNSS fixes, {} truth records to {}\n", data.imu.size(), data.gnss.size(),
               data.truth.size(), c.out);
    return 0;
}

void print_report(const RunResult& r, const std::string& grade) {
    fmt::print("{} {}: {} outages, horizontal RMSE {:.3f} m, vertical RMSE {:.3f} m{}\n", grade, to_string(r.mode),
               r.report.count(), r.report.rmse_horizontal, r.report.rmse_vertical,
               r.report.partial ? fmt::format(" (partial: {})", r.report.note) : "");
}

int cmd_run(const Common& c) {
    const Config cfg = load(c);
    const RunConfig rc = run_config_from(cfg);
    const Dataset data = data_for(cfg);
    const RunResult r = run_mode(rc, data);
    const std::string grade = cfg.get_string("grade", "adis16465");
    write_run_report(c.out, r, grade, rc.outage.outage_len);
    save_config(c.out, cfg);
    print_report(r, grade);
    return r.report.partial ? 3 : 0;
}

int cmd_compare(const Common& c) {
    const Config base = load(c);
    const auto grades = base.get_strings("grades", {"adis16465", "icm20602"});
    const std::vector<Mode> modes = {Mode::M0, Mode::M1, Mode::M2};

    std::vector<Dataset> data(grades.size());
    std::vector<Config> cfgs(grades.size(), base);
    for (std::size_t g = 0; g < grades.size(); ++g) cfgs[g].set("grade", grades[g]);
    const int ng = static_cast<int>(grades.size());
#pragma omp parallel for schedule(dynamic)
    for (int g = 0; g < ng; ++g) data[g] = simulate(simulation_from(cfgs[g]));

    const int nt = ng * static_cast<int>(modes.size());
    std::vector<RunResult> results(nt);
    std::vector<std::string> errors(nt);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < nt; ++i) {
        const int g = i / static_cast<int>(modes.size());
        Config cfg = cfgs[g];
        cfg.set("mode", to_string(modes[i % modes.size()]));
        try {
            results[i] = run_mode(run_config_from(cfg), data[g]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }

    std::vector<SummaryRow> rows;
    bool partial = false;
    for (int g = 0; g < ng; ++g) {
        SummaryRow row{grades[g], {}};
        for (std::size_t m = 0; m < modes.size(); ++m) {
            const int i = g * static_cast<int>(modes.size()) + static_cast<int>(m);
            if (!errors[i].empty()) throw std::runtime_error(fmt::format("{} {}: {}", grades[g], to_string(modes[m]), errors[i]));
            const RunResult& r = results[i];
            write_run_report(fs::path(c.out) / grades[g] / to_string(modes[m]), r, grades[g],
                             run_config_from(cfgs[g]).outage.outage_len);
            row.modes[modes[m]] = r.report;
            partial = partial || r.report.partial;
            print_report(r, grades[g]);
        }
        rows.push_back(row);
    }
    write_summary_csv(fs::path(c.out) / "summary.csv", rows);
    save_config(c.out, base);
    return partial ? 3 : 0;
}

int cmd_tune(const Common& c) {
    const Config cfg = load(c);
    const RunConfig base = run_config_from(cfg);
    const Dataset data = data_for(cfg);
    const auto gyro_scales = cfg.get_doubles("tune_gyro_scales", {0.5, 1.0, 2.0});
    const auto accel_scales = cfg.get_doubles("tune_accel_scales", {0.5, 1.0, 2.0});

    struct Point {
        double sg, sa;
        OutageReport rep;
        std::string error;
    };
    std::vector<Point> grid;
    for (double sg : gyro_scales)
        for (double sa : accel_scales) grid.push_back({sg, sa, {}, {}});

    const int n = static_cast<int>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        RunConfig rc = base;
        rc.noise.sigma_g *= grid[i].sg;
        rc.noise.sigma_bg *= grid[i].sg;
        rc.noise.sigma_a *= grid[i].sa;
        rc.noise.sigma_ba *= grid[i].sa;
        try {
            grid[i].rep = run_mode(rc, data).report;
        } catch (const std::exception& e) {
            grid[i].error = e.what();
        }
    }

    int best = -1;
    for (int i = 0; i < n; ++i) {
        if (!grid[i].error.empty() || grid[i].rep.partial) continue;
        if (best < 0 || grid[i].rep.rmse_horizontal < grid[best].rep.rmse_horizontal) best = i;
    }
    fs::create_directories(c.out);
    std::FILE* f = std::fopen((fs::path(c.out) / "tune.csv").string().c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write tune.csv");
    fmt::print(f, "gyro_scale,accel_scale,horizontal,vertical,best\n");
    for (int i = 0; i < n; ++i) {
        fmt::print(f, "{},{},{:.4f},{:.4f},{}\n", grid[i].sg, grid[i].sa, grid[i].rep.rmse_horizontal,
                   grid[i].rep.rmse_vertical, i == best ? 1 : 0);
    }
    std::fclose(f);
    save_config(c.out, cfg);
    if (best < 0) {
        fmt::print(stderr, "tune: no grid point completed\n");
        return 3;
    }
    fmt::print("{}: best gyro scale {}, accel scale {}: horizontal RMSE {:.3f} m\n", to_string(base.mode),
               grid[best].sg, grid[best].sa, grid[best].rep.rmse_horizontal);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GNSS/INS integration with Earth-rotation-aware IMU preintegration"};
    app.require_subcommand(1);
    Common sim_opts, run_opts, cmp_opts, tune_opts;
    auto* sim = app.add_subcommand("simulate", "write a synthetic IMU/GNSS/truth dataset");
    add_common(sim, sim_opts, false);
    auto* run = app.add_subcommand("run", "process a dataset in one mode and score outage drift");
    add_common(run, run_opts, true);
    auto* cmp = app.add_subcommand("compare", "simulate each grade and run M0, M1 and M2 on it");
    add_common(cmp, cmp_opts, false);
    auto* tune = app.add_subcommand("tune", "grid-search the noise densities assumed by the estimator");
    add_common(tune, tune_opts, true);
    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(sim_opts);
        if (*run) return cmd_run(run_opts);
        if (*cmp) return cmd_compare(cmp_opts);
        if (*tune) return cmd_tune(tune_opts);
    } catch (const std::exception& e) {
        fmt::print(stderr, "fgins: {}\n", e.what());
        return 1;
    }
    return 1;
}
