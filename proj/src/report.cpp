#include "fgins/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace fgins {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    File f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    return f;
}

void finish(File& f, const std::filesystem::path& path) {
    if (std::ferror(f.get()) || std::fflush(f.get()) != 0) {
        throw std::runtime_error(fmt::format("error while writing '{}'", path.string()));
    }
}

constexpr double kRad2Deg = 180.0 / std::numbers::pi;

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const RunResult& run) {
    File f = open_for_write(path);
    fmt::print(f.get(),
               "pass,t,n,e,d,vn,ve,vd,roll_deg,pitch_deg,yaw_deg,err_n,err_e,err_d,bgx,bgy,bgz,bax,bay,baz,gnss,"
               "outage\n");
    for (std::size_t p = 0; p < run.passes.size(); ++p) {
        for (const auto& e : run.passes[p].epochs) {
            const Vec3 rpy = dcm_to_euler(quat_to_dcm(e.nav.q)) * kRad2Deg;
            fmt::print(f.get(),
                       "{},{:.3f},{:.4f},{:.4f},{:.4f},{:.5f},{:.5f},{:.5f},{:.5f},{:.5f},{:.5f},{:.4f},{:.4f},{:.4f},"
                       "{:.4e},{:.4e},{:.4e},{:.4e},{:.4e},{:.4e},{},{}\n",
                       p, e.t, e.nav.p.x(), e.nav.p.y(), e.nav.p.z(), e.nav.v.x(), e.nav.v.y(), e.nav.v.z(), rpy.x(),
                       rpy.y(), rpy.z(), e.error.x(), e.error.y(), e.error.z(), e.bias.bg.x(), e.bias.bg.y(),
                       e.bias.bg.z(), e.bias.ba.x(), e.bias.ba.y(), e.bias.ba.z(), e.gnss_used ? 1 : 0, e.outage);
        }
    }
    finish(f, path);
}

void write_outages_csv(const std::filesystem::path& path, const OutageReport& report) {
    File f = open_for_write(path);
    fmt::print(f.get(), "index,pass,start,max_horizontal,max_vertical\n");
    for (std::size_t i = 0; i < report.outages.size(); ++i) {
        const auto& o = report.outages[i];
        fmt::print(f.get(), "{},{},{:.3f},{:.4f},{:.4f}\n", i, o.pass, o.start, o.max_horizontal, o.max_vertical);
    }
    finish(f, path);
}

void write_drift_csv(const std::filesystem::path& path, const RunResult& run, double outage_len, double recovery) {
    File f = open_for_write(path);
    fmt::print(f.get(), "outage,phase,t,since_start,horizontal,vertical\n");
    for (std::size_t i = 0; i < run.report.outages.size(); ++i) {
        const auto& o = run.report.outages[i];
        const auto& epochs = run.passes.at(static_cast<std::size_t>(o.pass)).epochs;
        for (const auto& e : epochs) {
            const double s = e.t - o.start;
            if (s < -1e-6 || s > outage_len + recovery + 1e-6 || !e.error.allFinite()) continue;
            const char* phase = s < outage_len - 1e-6 ? "outage" : "recovery";
            fmt::print(f.get(), "{},{},{:.3f},{:.3f},{:.4f},{:.4f}\n", i, phase, e.t, s, e.error.head<2>().norm(),
                       std::abs(e.error.z()));
        }
    }
    finish(f, path);
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
    File f = open_for_write(path);
    fmt::print(f.get(), "grade,M0_hor,M0_ver,M1_hor,M1_ver,M2_hor,M2_ver,outages,partial\n");
    for (const auto& row : rows) {
        std::string line = row.grade;
        int outages = 0;
        bool partial = false;
        for (Mode m : {Mode::M0, Mode::M1, Mode::M2}) {
            auto it = row.modes.find(m);
            if (it == row.modes.end()) {
                line += ",,";
                continue;
            }
            line += fmt::format(",{:.4f},{:.4f}", it->second.rmse_horizontal, it->second.rmse_vertical);
            outages = std::max(outages, it->second.count());
            partial = partial || it->second.partial;
        }
        fmt::print(f.get(), "{},{},{}\n", line, outages, partial ? 1 : 0);
    }
    finish(f, path);
}

void write_run_report(const std::filesystem::path& dir, const RunResult& run, const std::string& grade,
                      double outage_len) {
    std::filesystem::create_directories(dir);
    write_trajectory_csv(dir / "trajectory.csv", run);
    write_outages_csv(dir / "outages.csv", run.report);
    write_drift_csv(dir / "drift.csv", run, outage_len);
    SummaryRow row{grade, {{run.mode, run.report}}};
    write_summary_csv(dir / "summary.csv", {row});
}

}  // namespace fgins
