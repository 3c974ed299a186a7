#include "infolab/report.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace infolab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string identities_csv(const std::vector<IdentityRow>& rows) {
    std::ostringstream os;
    os << "identity,channel,a,lhs,rhs,abs_residual,rel_residual,tolerance,relation,pass,notes\n";
    for (const auto& row : rows) {
        const IdentityReport& r = row.report;
        os << csv_field(row.verifier) << ',' << csv_field(r.channel_desc) << ',' << format_double(row.a) << ',';
        if (row.skipped) {
            os << ",,,,,,,SKIPPED," << csv_field(row.skip_reason) << '\n';
            continue;
        }
        os << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.abs_residual) << ','
           << format_double(r.rel_residual) << ',' << format_double(r.tolerance) << ','
           << (r.relation == Relation::Equality ? "equality" : "inequality") << ',' << (r.pass ? "true" : "false")
           << ',' << csv_field(r.notes) << '\n';
    }
    return os.str();
}

std::string identities_table(const std::vector<IdentityRow>& rows) {
    std::ostringstream os;
    std::size_t passed = 0, failed = 0, skipped = 0;
    char line[256];
    std::snprintf(line, sizeof line, "%-22s %8s %14s %14s %10s  %s\n", "identity", "a", "lhs", "rhs", "abs_res",
                  "verdict");
    os << line;
    for (const auto& row : rows) {
        if (row.skipped) {
            ++skipped;
            std::snprintf(line, sizeof line, "%-22s %8.4g %14s %14s %10s  SKIPPED (", row.verifier.c_str(), row.a,
                          "-", "-", "-");
            os << line << row.skip_reason << ")\n";
            continue;
        }
        const IdentityReport& r = row.report;
        (r.pass ? passed : failed) += 1;
        std::snprintf(line, sizeof line, "%-22s %8.4g %14.8g %14.8g %10.3e  %s\n", row.verifier.c_str(), row.a, r.lhs,
                      r.rhs, r.abs_residual, r.pass ? "PASS" : "FAIL");
        os << line;
    }
    os << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
    return os.str();
}

std::string bounds_csv(const BoundsCurve& curve) {
    std::ostringstream os;
    os << "snr_db,a,mmse,bcrlb,new_lb,mc_error\n";
    for (const auto& r : curve.rows)
        os << format_double(r.snr_db) << ',' << format_double(r.a) << ',' << format_double(r.mmse) << ','
           << format_double(r.bcrlb) << ',' << format_double(r.new_lb) << ',' << format_double(r.mc_error) << '\n';
    return os.str();
}

std::string bounds_metadata(const BoundsCurve& curve, std::uint64_t seed, std::size_t mc_n) {
    nlohmann::ordered_json j;
    j["prior"] = curve.prior_desc;
    j["noise"] = curve.noise_desc;
    j["snr_definition"] = curve.snr_definition;
    j["columns"] = {"snr_db", "a", "mmse", "bcrlb", "new_lb", "mc_error"};
    j["seed"] = seed;
    j["mc_n"] = mc_n;
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : curve.cross_checks)
        checks.push_back({{"snr_db", c.snr_db},
                          {"mmse_monte_carlo", c.monte_carlo},
                          {"mmse_quadrature", c.quadrature},
                          {"mc_error", c.mc_error},
                          {"agree", c.agree}});
    j["mmse_cross_checks"] = checks;
    return j.dump(2) + "\n";
}

std::string costa_csv(const CostaReport& r) {
    std::ostringstream os;
    os << "a,entropy_power,second_diff,chord_gap\n";
    std::size_t chord = 0;
    for (std::size_t i = 0; i < r.a.size(); ++i) {
        os << format_double(r.a[i]) << ',' << format_double(r.power[i]) << ',';
        const bool interior = i > 0 && i + 1 < r.a.size();
        if (interior) os << format_double(r.second_diff[i - 1]);
        os << ',';
        if (interior && r.a[i] <= 1.0) os << format_double(r.chord_gap[chord++]);
        os << '\n';
    }
    return os.str();
}

std::string figure1_gnuplot(const std::string& csv_name) {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead top right\n"
       << "set xlabel 'SNR (dB)'\n"
       << "set ylabel 'mean square error'\n"
       << "set logscale y\n"
       << "set grid\n"
       << "set terminal pngcairo size 800,600\n"
       << "set output 'figure1.png'\n"
       << "plot '" << csv_name << "' using 1:3 with linespoints title 'MMSE', \\\n"
       << "     '" << csv_name << "' using 1:5 with linespoints title 'New LB', \\\n"
       << "     '" << csv_name << "' using 1:4 with linespoints title 'BCRLB'\n";
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out) fail(ErrorKind::InvalidParameter, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace infolab
