#pragma once

// Property suites behind the verify command. Every measured quantity is a
// row (suite, name, value, relation, limit, pass); rows with relation
// "report" are informational and always pass.

#include "bergman/common.hpp"
#include "bergman/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bergman {

struct VerifyConfig {
  std::uint64_t seed = 1;
  /// Multiplies k_Z in the identity checks; 1 except for negative controls.
  double kz_scale = 1.0;
  /// Interpolation lattice; defaults to build_net(0.3, 0.55).
  std::optional<PointSet> lattice;
  /// Interpolation runs at two radial resolutions of the grid on |z| < 0.7.
  int interp_n_radial_lo = 16;
  int interp_n_radial_hi = 24;
  int interp_depth = 2;
  int interp_targets = 8;
};

struct Measurement {
  std::string suite;
  std::string name;
  double value = 0.0;
  std::string relation; ///< "<=", ">=", "<", ">", "report"
  double limit = 0.0;
  bool pass = true;
};

struct SuiteResult {
  std::string suite;
  std::vector<Measurement> rows;

  bool pass() const;
  /// First failing row, if any.
  const Measurement* first_failure() const;
  void append(const SuiteResult& other);
};

const std::vector<std::string>& suite_names();

/// Throws DomainError for an unknown suite.
SuiteResult run_suite(const std::string& name, const VerifyConfig& cfg);

// Groups making up the suites.
SuiteResult check_psi_identity(const VerifyConfig& cfg);
SuiteResult check_covariance(const VerifyConfig& cfg);
SuiteResult check_forelli_rudin(const VerifyConfig& cfg);
SuiteResult check_schur_window(const VerifyConfig& cfg);
SuiteResult check_extremal(const VerifyConfig& cfg);
SuiteResult check_dbar(const VerifyConfig& cfg);
SuiteResult check_interpolation(const VerifyConfig& cfg);
SuiteResult check_density_forms(const VerifyConfig& cfg);
SuiteResult check_phi_star(const VerifyConfig& cfg);

/// Conventions line, header "suite,name,value,relation,limit,pass", rows.
std::string verify_csv(const SuiteResult& r);

} // namespace bergman
