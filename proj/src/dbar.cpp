#include "bergman/dbar.hpp"

#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bergman {

double quintic_ramp(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return 1.0 - t * t * t * (10.0 - t * (15.0 - 6.0 * t));
}

PartitionOfUnity::PartitionOfUnity(CoveringNet net, double eta) : net_(std::move(net)), eta_(eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("PartitionOfUnity: eta must lie in (0,1)");
  for (auto a : net_.centers.points()) disks_.push_back(euclidean_params({a, eta_}));
  neighbours_.resize(disks_.size());
  for (std::size_t j = 0; j < disks_.size(); ++j) {
    for (std::size_t k = 0; k < disks_.size(); ++k) {
      if (std::abs(disks_[j].center - disks_[k].center) < disks_[j].radius + disks_[k].radius) {
        neighbours_[j].push_back(k);
      }
    }
  }
}

double PartitionOfUnity::raw(std::size_t j, Point z) const {
  const EuclideanDisk& d = disks_[j];
  if (std::norm(z - d.center) >= d.radius * d.radius) return 0.0;
  const Point a = net_.centers[j];
  const double r2 = std::norm(z - a) / std::norm(1.0 - std::conj(a) * z);
  const double half = 0.5 * eta_;
  if (r2 <= half * half) return 1.0;
  return quintic_ramp((std::sqrt(r2) - half) / half);
}

double PartitionOfUnity::sum_raw(Point z) const {
  double s = 0.0;
  for (std::size_t k = 0; k < disks_.size(); ++k) s += raw(k, z);
  return s;
}

double PartitionOfUnity::beta(std::size_t j, Point z) const {
  const double b = raw(j, z);
  if (b == 0.0) return 0.0;
  double s = 0.0;
  for (auto k : neighbours_[j]) s += raw(k, z);
  return b / s;
}

PartitionOfUnity build_partition(const CoveringNet& net, const DiskGrid& grid) {
  if (net.centers.empty()) throw DomainError("build_partition: empty net");
  PartitionOfUnity pu(net, net.eta);
  const double h = 1e-5;
  std::vector<double> raws(pu.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point z = grid.node(i);
    double s = 0.0;
    for (std::size_t j = 0; j < pu.size(); ++j) s += raws[j] = pu.raw(j, z);
    if (!(s > 0.0)) throw NumericError("build_partition: coverage hole in the grid region");
    double total = 0.0;
    for (std::size_t j = 0; j < pu.size(); ++j) {
      if (raws[j] == 0.0) continue;
      total += raws[j] / s;
      const double gx = (pu.beta(j, z + h) - pu.beta(j, z - h)) / (2.0 * h);
      const double gy = (pu.beta(j, z + Complex{0, h}) - pu.beta(j, z - Complex{0, h})) / (2.0 * h);
      pu.gradient_constant = std::max(pu.gradient_constant, std::hypot(gx, gy) * (1.0 - std::abs(net.centers[j])));
    }
    pu.max_sum_error = std::max(pu.max_sum_error, std::abs(total - 1.0));
  }
  return pu;
}

double residual(const Field& u, const Field& f, const DiskGrid& grid, double h) {
  const double lim = grid.rmax() - 2.0 * h;
  double rr = 0.0, ff = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point z = grid.node(i);
    if (std::abs(z) > lim) continue;
    const Complex dx = u(z + h) - u(z - h);
    const Complex dy = u(z + Complex{0, h}) - u(z - Complex{0, h});
    const Complex dbar = (dx + Complex{0, 1} * dy) / (4.0 * h);
    const Complex fz = f(z);
    rr += grid.weight(i) * std::norm(one_minus_abs2(z) * dbar - fz);
    ff += grid.weight(i) * std::norm(fz);
  }
  if (ff == 0.0) return std::sqrt(rr);
  return std::sqrt(rr / ff);
}

namespace {

void finish_report(DbarSolution& sol, const Field& f, const PointSet& z, double p, int m, const DiskGrid& grid,
                   double tolerance) {
  SolverReport& r = sol.report;
  r.p = p;
  r.z_count = z.total_count();
  r.m = m;
  r.grid_depth = grid.refinement_depth;
  r.n_radial = grid.n_radial();
  r.rmax = grid.rmax();
  r.tolerance = tolerance;
  sol.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) sol.values[i] = sol.u(grid.node(i));
  const Samples fs = sample(grid, f);
  r.input_norm = lp_norm(fs, z, p, grid);
  r.solution_norm = lp_norm(sol.values, z, p, grid);
  r.bound_ratio = r.input_norm > 0.0 ? r.solution_norm / r.input_norm : 0.0;
  r.residual_ratio = residual(sol.u, f, grid);
  double ff = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) ff += grid.weight(i) * std::norm(fs[i]);
  r.residual_norm = ff > 0.0 ? r.residual_ratio * std::sqrt(ff) : r.residual_ratio;
  r.success = std::isfinite(r.bound_ratio) && std::isfinite(r.residual_ratio) && r.residual_ratio <= tolerance;
  r.message = r.success ? "ok" : "residual above tolerance";
}

bool meets(const EuclideanDisk& a, const EuclideanDisk& b) {
  return std::abs(a.center - b.center) < a.radius + b.radius;
}

} // namespace

Field sum_of_pieces(const std::vector<SupportedField>& pieces) {
  return [pieces](Point w) {
    Complex acc{};
    for (const auto& pc : pieces) {
      if (std::norm(w - pc.support.center) < pc.support.radius * pc.support.radius) acc += pc.f(w);
    }
    return acc;
  };
}

Field plain_transform(const std::vector<SupportedField>& pieces, int m, const DiskGrid& grid) {
  auto ts = std::make_shared<std::vector<CauchyTransform>>();
  ts->reserve(pieces.size());
  for (const auto& pc : pieces) {
    const Field fv = pc.f;
    ts->emplace_back(grid, [fv](Point w) { return fv(w) / one_minus_abs2(w); }, m, pc.support);
  }
  return [ts](Point x) {
    Complex acc{};
    for (const auto& t : *ts) acc += t(x);
    return acc;
  };
}

Field patched_transform(const std::vector<SupportedField>& pieces, const GaFamily& family,
                        const PartitionOfUnity& partition, int m, const DiskGrid& grid) {
  if (family.centers.size() != partition.size()) throw DomainError("solve_patched: family and partition differ");
  for (std::size_t j = 0; j < partition.size(); ++j) {
    if (family.centers[j].a != partition.net().centers[j]) {
      throw DomainError("solve_patched: family and partition differ");
    }
  }
  struct Term {
    std::size_t j;
    std::shared_ptr<CauchyTransform> t;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  const auto fam = std::make_shared<const GaFamily>(family);
  const auto pu = std::make_shared<const PartitionOfUnity>(partition);
  // canonical order: center-major, so every u(z) is accumulated the same way
  for (std::size_t j = 0; j < partition.size(); ++j) {
    for (const auto& pc : pieces) {
      if (!meets(partition.support(j), pc.support)) continue;
      if (!family.centers[j].ok) {
        throw NumericError("solve_patched: needed family center is flagged: " + family.centers[j].error);
      }
      const Field fv = pc.f;
      // one rule per piece support, shared by all j, so sum_j beta_j = 1 survives quadrature
      Field phi = [fam, pu, fv, j](Point w) -> Complex {
        const double b = pu->beta(j, w);
        if (b == 0.0) return {};
        const Complex v = fv(w);
        if (v == Complex{}) return {};
        return b * v * std::exp(-fam->log_g(j, w)) / one_minus_abs2(w);
      };
      terms->push_back({j, std::make_shared<CauchyTransform>(grid, std::move(phi), m, pc.support)});
    }
  }
  return [terms, fam](Point x) {
    Complex acc{};
    std::size_t k = 0;
    while (k < terms->size()) {
      const std::size_t j = (*terms)[k].j;
      Complex part{};
      for (; k < terms->size() && (*terms)[k].j == j; ++k) part += (*(*terms)[k].t)(x);
      if (part != Complex{}) acc += std::exp(fam->log_g(j, x)) * part;
    }
    return acc;
  };
}

DbarSolution solve_plain(const std::vector<SupportedField>& pieces, int m, const PointSet& z, double p,
                         const DiskGrid& grid, double tolerance) {
  DbarSolution sol;
  sol.u = plain_transform(pieces, m, grid);
  finish_report(sol, sum_of_pieces(pieces), z, p, m, grid, tolerance);
  return sol;
}

DbarSolution solve_patched(const std::vector<SupportedField>& pieces, const PointSet& z, double p,
                           const GaFamily& family, const PartitionOfUnity& partition, int m, const DiskGrid& grid,
                           double tolerance) {
  DbarSolution sol;
  sol.u = patched_transform(pieces, family, partition, m, grid);
  finish_report(sol, sum_of_pieces(pieces), z, p, m, grid, tolerance);
  return sol;
}

DbarSolution solve_plain(const SupportedField& f, int m, const PointSet& z, double p, const DiskGrid& grid,
                         double tolerance) {
  return solve_plain(std::vector<SupportedField>{f}, m, z, p, grid, tolerance);
}

DbarSolution solve_patched(const SupportedField& f, const PointSet& z, double p, const GaFamily& family,
                           const PartitionOfUnity& partition, int m, const DiskGrid& grid, double tolerance) {
  return solve_patched(std::vector<SupportedField>{f}, z, p, family, partition, m, grid, tolerance);
}

std::string solver_csv_header() { return "p,Z_count,m,grid_depth,residual_ratio,bound_ratio"; }

std::string solver_csv_row(const SolverReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << r.p << ',' << r.z_count << ',' << r.m << ',' << r.grid_depth << ',' << r.residual_ratio << ','
     << r.bound_ratio;
  return os.str();
}

} // namespace bergman
