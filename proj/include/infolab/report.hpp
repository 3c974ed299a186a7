#pragma once

#include "infolab/bounds.hpp"
#include "infolab/identities.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace infolab {

/// One identities.csv row: a report, or a verifier skipped because its
/// preconditions do not hold.
struct IdentityRow {
    std::string verifier;
    double a = 0.0;
    bool skipped = false;
    std::string skip_reason;
    IdentityReport report;
};

/// %.17g.
std::string format_double(double v);
/// RFC 4180 quoting when the field holds a comma, quote or newline.
std::string csv_field(const std::string& s);

std::string identities_csv(const std::vector<IdentityRow>& rows);
std::string identities_table(const std::vector<IdentityRow>& rows);

/// Header snr_db,a,mmse,bcrlb,new_lb,mc_error.
std::string bounds_csv(const BoundsCurve& curve);
/// JSON sidecar with descriptions, the SNR definition and MMSE cross checks.
std::string bounds_metadata(const BoundsCurve& curve, std::uint64_t seed, std::size_t mc_n);
std::string costa_csv(const CostaReport& r);
/// gnuplot script plotting the three bounds from csv_name against snr_db.
std::string figure1_gnuplot(const std::string& csv_name);

/// Writes to a sibling temporary and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace infolab
