#include "bergman/verify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace bergman;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::function<SuiteResult(const VerifyConfig&)> run;
  double max_seconds; // 0: no limit
};


// identical CSV from two runs of the same suites
SuiteResult determinism(const VerifyConfig& cfg) {
  SuiteResult out;
  out.suite = "determinism";
  for (const char* s : {"identities", "extremal", "density"}) {
    const bool same = verify_csv(run_suite(s, cfg)) == verify_csv(run_suite(s, cfg));
    out.rows.push_back({"determinism", std::string(s) + "_byte_identical", same ? 1.0 : 0.0, ">=", 1.0, same});
  }
  return out;
}

} // namespace

int main() {
  const VerifyConfig cfg;
  const Criterion list[] = {
      {1, "Psi identity", check_psi_identity, 10.0},
      {2, "Moebius covariance and Laplacian convention", check_covariance, 0.0},
      {3, "Forelli-Rudin exponents", check_forelli_rudin, 60.0},
      {4, "Schur window", check_schur_window, 0.0},
      {5, "extremal oracle", check_extremal, 0.0},
      {6, "dbar residual", check_dbar, 300.0},
      {7, "end-to-end interpolation", check_interpolation, 0.0},
      {8, "density cross-form consistency", check_density_forms, 0.0},
      {9, "phi* suite", check_phi_star, 0.0},
      {10, "determinism", determinism, 0.0},
  };
  int failed = 0;
  for (const auto& c : list) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      const SuiteResult r = c.run(cfg);
      ok = r.pass();
      if (const Measurement* m = r.first_failure()) {
        detail = m->name + " = " + std::to_string(m->value) + " (" + m->relation + " " + std::to_string(m->limit) + ")";
      }
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && c.max_seconds > 0.0 && secs >= c.max_seconds) {
      ok = false;
      detail = "runtime " + std::to_string(secs) + " s";
    }
    std::printf("%s criterion %d: %s [%.1f s]%s%s\n", ok ? "PASS" : "FAIL", c.id, c.title, secs,
                detail.empty() ? "" : " ", detail.c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}
