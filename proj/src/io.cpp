#include "bergman/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bergman {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* who) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string(who) + ": " + e.what());
  }
}

double finite_number(const json& v, const char* who) {
  if (!v.is_number()) throw DomainError(std::string(who) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw DomainError(std::string(who) + ": non-finite number");
  return x;
}

Complex complex_of(const json& v, const char* who) {
  if (!v.is_array() || v.size() != 2) throw DomainError(std::string(who) + ": expected [re, im]");
  return {finite_number(v[0], who), finite_number(v[1], who)};
}

json json_of(Complex c) { return json::array({c.real(), c.imag()}); }

struct Entry {
  Point z;
  int mult = 1;
  bool has_value = false;
  Complex value;
};

std::vector<Entry> entries_of(const json& j, const char* who) {
  if (!j.is_array()) throw DomainError(std::string(who) + ": expected an array of points");
  std::vector<Entry> out;
  for (const auto& e : j) {
    Entry en;
    if (e.is_array()) {
      en.z = complex_of(e, who);
    } else if (e.is_object()) {
      if (!e.contains("z")) throw DomainError(std::string(who) + ": entry without \"z\"");
      en.z = complex_of(e["z"], who);
      if (e.contains("multiplicity")) {
        const auto& m = e["multiplicity"];
        if (!m.is_number_integer() || m.get<long>() < 1) {
          throw DomainError(std::string(who) + ": multiplicity must be a positive integer");
        }
        en.mult = m.get<int>();
      }
      if (e.contains("value")) {
        en.has_value = true;
        en.value = complex_of(e["value"], who);
      }
    } else {
      throw DomainError(std::string(who) + ": malformed entry");
    }
    out.push_back(en);
  }
  return out;
}

PointSet point_set_of(const json& j, const char* who) {
  std::vector<Point> pts;
  std::vector<int> mult;
  for (const auto& e : entries_of(j, who)) {
    pts.push_back(e.z);
    mult.push_back(e.mult);
  }
  return PointSet(std::move(pts), std::move(mult));
}

json json_of(const PointSet& z) {
  json a = json::array();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z.multiplicity(i) == 1) {
      a.push_back(json_of(z[i]));
    } else {
      a.push_back({{"z", json_of(z[i])}, {"multiplicity", z.multiplicity(i)}});
    }
  }
  return a;
}

std::vector<Complex> coeffs_of(const json& j, const char* who) {
  if (!j.is_array()) throw DomainError(std::string(who) + ": expected an array of coefficients");
  std::vector<Complex> out;
  for (const auto& c : j) out.push_back(complex_of(c, who));
  return out;
}

json json_of(const std::vector<Complex>& c) {
  json a = json::array();
  for (auto x : c) a.push_back(json_of(x));
  return a;
}

} // namespace

PointSet parse_point_set(const std::string& text) {
  return point_set_of(parse_json(text, "point set"), "point set");
}

std::string format_point_set(const PointSet& z) { return json_of(z).dump() + "\n"; }

TargetValues parse_targets(const std::string& text) {
  std::vector<Point> pts;
  std::vector<Complex> vals;
  for (const auto& e : entries_of(parse_json(text, "targets"), "targets")) {
    if (!e.has_value) throw DomainError("targets: entry without \"value\"");
    if (e.mult != 1) throw DomainError("targets: multiplicities must be 1");
    pts.push_back(e.z);
    vals.push_back(e.value);
  }
  TargetValues c = make_targets(pts, vals);
  validate_targets(c);
  return c;
}

std::string format_targets(const TargetValues& c) {
  validate_targets(c);
  json a = json::array();
  for (std::size_t i = 0; i < c.z.size(); ++i) a.push_back({{"z", json_of(c.z[i])}, {"value", json_of(c.values[i])}});
  return a.dump() + "\n";
}

AnalyticModel parse_model(const std::string& text) {
  const json j = parse_json(text, "model");
  if (!j.is_object()) throw DomainError("model: expected an object");
  AnalyticModel m;
  if (j.contains("zeros")) m.zeros = point_set_of(j["zeros"], "model zeros");
  if (j.contains("expcoeffs")) m.expcoeffs = coeffs_of(j["expcoeffs"], "model expcoeffs");
  if (m.expcoeffs.empty()) m.expcoeffs = {Complex{}};
  if (j.contains("polycoeffs")) m.polycoeffs = coeffs_of(j["polycoeffs"], "model polycoeffs");
  if (j.contains("factor")) {
    const auto& f = j["factor"];
    if (f == "psi") {
      m.factor = ZeroFactor::Psi;
    } else if (f == "blaschke") {
      m.factor = ZeroFactor::Blaschke;
    } else {
      throw DomainError("model: factor must be \"psi\" or \"blaschke\"");
    }
  }
  return m;
}

std::string format_model(const AnalyticModel& m) {
  json j;
  j["zeros"] = json_of(m.zeros);
  j["expcoeffs"] = json_of(m.expcoeffs);
  j["polycoeffs"] = json_of(m.polycoeffs);
  j["factor"] = m.factor == ZeroFactor::Psi ? "psi" : "blaschke";
  return j.dump() + "\n";
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

PointSet load_point_set(const std::string& path) { return parse_point_set(read_text(path)); }
TargetValues load_targets(const std::string& path) { return parse_targets(read_text(path)); }
AnalyticModel load_model(const std::string& path) { return parse_model(read_text(path)); }

DiskGrid load_grid(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_grid(is);
}

void save_grid(const std::string& path, const DiskGrid& grid) {
  std::ostringstream os;
  write_grid(os, grid);
  write_text(path, os.str());
}

std::string csv_conventions() {
  return "# lap = d dbar (1/4 of the Euclidean Laplacian); dbar = (d/dx + i d/dy)/2; "
         "dA = Lebesgue area (unnormalized); radii pseudo-hyperbolic unless noted";
}

std::string fmt(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string format_series(const std::string& xname, const std::string& yname, const std::vector<double>& x,
                          const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("format_series: length mismatch");
  std::string out = csv_conventions() + "\n" + xname + "," + yname + "\n";
  for (std::size_t i = 0; i < x.size(); ++i) out += fmt(x[i]) + "," + fmt(y[i]) + "\n";
  return out;
}

} // namespace bergman
