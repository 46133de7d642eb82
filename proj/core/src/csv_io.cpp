#include "qwalk/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qwalk {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_density_csv(const std::filesystem::path& path, const Density& d) {
    std::ofstream out = open_out(path);
    out << "# time=" << d.time << "\n";
    out << "x,f\n";
    for (int x = d.x_min(); x <= d.x_max(); ++x)
        out << x << ',' << format_double(d.at(x)) << "\n";
}

Density read_density_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    Density d;
    std::vector<std::pair<int, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("time=");
            if (pos != std::string::npos) d.time = std::stoi(line.substr(pos + 5));
            continue;
        }
        if (line.rfind("x,", 0) == 0) continue;  // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed density row: " + line);
        rows.emplace_back(std::stoi(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    if (rows.empty()) throw std::runtime_error("density file has no rows: " + path.string());
    const int x_lo = rows.front().first;
    const int x_hi = rows.back().first;
    d.values.assign(static_cast<std::size_t>(x_hi - x_lo) + 1, 0.0);
    d.origin_index = -x_lo;
    for (const auto& [x, f] : rows) d.values[static_cast<std::size_t>(x - x_lo)] = f;
    return d;
}

void write_moments_csv(const std::filesystem::path& path, const MomentSeries& m) {
    std::ofstream out = open_out(path);
    out << "t,mean,second_moment,variance\n";
    for (int t = 0; t <= m.t_max(); ++t)
        out << t << ',' << format_double(m.mean[static_cast<std::size_t>(t)]) << ','
            << format_double(m.second_moment[static_cast<std::size_t>(t)]) << ','
            << format_double(m.variance(t)) << "\n";
}

MomentSeries read_moments_csv(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    MomentSeries m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        const int t = std::stoi(field);
        if (t != static_cast<int>(m.mean.size()))
            throw std::runtime_error("moments file must list consecutive t from 0");
        std::getline(row, field, ',');
        m.mean.push_back(std::stod(field));
        std::getline(row, field, ',');
        m.second_moment.push_back(std::stod(field));
    }
    if (m.mean.empty()) throw std::runtime_error("moments file has no rows: " + path.string());
    return m;
}

void write_collapse_csv(const std::filesystem::path& path, const CollapseExport::Curve& curve,
                        double gamma) {
    std::ofstream out = open_out(path);
    out << "# time=" << curve.time << " gamma=" << format_double(gamma) << "\n";
    out << "x_scaled,f_scaled\n";
    for (const auto& [u, y] : curve.points)
        out << format_double(u) << ',' << format_double(y) << "\n";
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream out = open_out(path);
    out << "alpha,b1,b2,b3,b4,slope_x2,x2_at_tmax,residual_mean,residual_second,min_flag\n";
    for (const SweepRow& r : rows)
        out << format_double(r.alpha) << ',' << format_double(r.b1) << ',' << format_double(r.b2)
            << ',' << format_double(r.b3) << ',' << format_double(r.b4) << ','
            << format_double(r.slope_x2) << ',' << format_double(r.x2_at_tmax) << ','
            << format_double(r.residual_mean) << ',' << format_double(r.residual_second) << ','
            << (r.min_flag ? 1 : 0) << "\n";
}

void write_meta_json(const std::filesystem::path& path, const RunMeta& meta) {
    nlohmann::ordered_json j;
    j["command"] = meta.command;
    j["argv"] = meta.argv;
    j["schedule"] = meta.schedule;
    j["spinor"] = meta.spinor;
    j["t_max"] = meta.t_max;
    j["realizations"] = meta.n_realizations;
    j["seed"] = meta.seed;
    j["snapshots"] = meta.snapshot_times;
    j["threads"] = meta.threads;
    j["outputs"] = meta.outputs;
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

RunMeta read_meta_json(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    nlohmann::json j;
    in >> j;
    RunMeta meta;
    meta.command = j.value("command", "");
    meta.argv = j.value("argv", std::vector<std::string>{});
    meta.schedule = j.value("schedule", "");
    meta.spinor = j.value("spinor", std::vector<double>{});
    meta.t_max = j.value("t_max", 0);
    meta.n_realizations = j.value("realizations", 0);
    meta.seed = j.value("seed", std::uint64_t{0});
    meta.snapshot_times = j.value("snapshots", std::vector<int>{});
    meta.threads = j.value("threads", 0);
    meta.outputs = j.value("outputs", std::vector<std::string>{});
    return meta;
}

}  // namespace qwalk
