#pragma once

// Point-set, target and model files (JSON), grid files and CSV output.
//
// Point-set file: an array whose entries are [re, im] or
//   {"z": [re, im], "multiplicity": k, "value": [re, im]}
// with the last two keys optional. Model file:
//   {"zeros": <point set>, "expcoeffs": [[re, im], ...],
//    "polycoeffs": [[re, im], ...], "factor": "psi" | "blaschke"}

#include "bergman/common.hpp"
#include "bergman/extremal.hpp"
#include "bergman/geometry.hpp"
#include "bergman/interpolation.hpp"
#include "bergman/quad.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bergman {

/// File could not be opened, read or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Throws DomainError on malformed text, non-finite numbers or points
/// outside the disk.
PointSet parse_point_set(const std::string& text);
std::string format_point_set(const PointSet& z);

/// Every entry must carry "value"; multiplicities must be 1.
TargetValues parse_targets(const std::string& text);
std::string format_targets(const TargetValues& c);

AnalyticModel parse_model(const std::string& text);
std::string format_model(const AnalyticModel& m);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

PointSet load_point_set(const std::string& path);
TargetValues load_targets(const std::string& path);
AnalyticModel load_model(const std::string& path);
DiskGrid load_grid(const std::string& path);
void save_grid(const std::string& path, const DiskGrid& grid);

/// Comment line that opens every CSV: conventions and units.
std::string csv_conventions();

/// Two-column series with the conventions line and a header.
std::string format_series(const std::string& xname, const std::string& yname, const std::vector<double>& x,
                          const std::vector<double>& y);

/// Shortest round-trip decimal form of x.
std::string fmt(double x);

} // namespace bergman
