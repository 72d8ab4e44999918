#include "jscat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace jscat {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field \"") + key + "\": " + e.what());
  }
}

CircleFunction coeffs_from(const json& j, const char* key, int n) {
  const json& arr = j.at(key);
  if (!arr.is_array()) throw ValidationError(std::string("field \"") + key + "\" must be an array");
  Coefficients c(n);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number())
      throw ValidationError(std::string(key) + "[" + std::to_string(i) +
                            "] must be a pair [k, value]");
    int k = e[0].get<int>();
    double v = e[1].get<double>();
    if (!c.in_range(k))
      throw ValidationError(std::string(key) + "[" + std::to_string(i) + "]: index " +
                            std::to_string(k) + " outside the grid");
    if (!std::isfinite(v))
      throw ValidationError(std::string(key) + "[" + std::to_string(i) + "] is not finite");
    c.at(k) = v;
  }
  // Real coefficients give a real-symmetric function; enforce it exactly.
  return symmetrized(synthesize(c));
}

json coeffs_to(const CircleFunction& f) {
  Coefficients c = analyze(f);
  json arr = json::array();
  for (int k = c.kmin(); k <= c.kmax(); ++k) arr.push_back(json::array({k, c(k).real()}));
  return arr;
}

}  // namespace

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

JacobiOperator parse_jacobi_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object()) throw ValidationError("jacobi file must be a JSON object");
  int n_min = field<int>(j, "n_min");
  auto p = field<std::vector<double>>(j, "p");
  auto q = field<std::vector<double>>(j, "q");
  return JacobiOperator(n_min, std::move(p), std::move(q));
}

JacobiOperator read_jacobi_json(const std::string& path) { return parse_jacobi_json(read_text(path)); }

std::string jacobi_json(const JacobiOperator& J) {
  json j;
  j["n_min"] = J.n_min();
  j["p"] = J.p_window();
  j["q"] = J.q_window();
  return j.dump(2) + "\n";
}

ReflectionInput ScatteringFile::input() const {
  ReflectionInput in = s && s_minus ? ReflectionInput::from_triple(s_plus, *s, *s_minus)
                                    : ReflectionInput::from_s_plus(s_plus);
  if (s && s_minus && s_at_zero) in.s_at_zero = *s_at_zero;
  return in;
}

ScatteringFile parse_scattering_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object()) throw ValidationError("scattering file must be a JSON object");
  ScatteringFile f;
  f.grid_size = field<int>(j, "grid_size");
  if (f.grid_size < 16 || !is_power_of_two(f.grid_size))
    throw ValidationError("grid_size must be a power of two >= 16");
  if (!j.contains("coeffs_s_plus")) throw ValidationError("missing field \"coeffs_s_plus\"");
  f.s_plus = coeffs_from(j, "coeffs_s_plus", f.grid_size);
  if (j.contains("coeffs_s") != j.contains("coeffs_s_minus"))
    throw ValidationError("coeffs_s and coeffs_s_minus must be given together");
  if (j.contains("coeffs_s")) {
    f.s = coeffs_from(j, "coeffs_s", f.grid_size);
    f.s_minus = coeffs_from(j, "coeffs_s_minus", f.grid_size);
  }
  if (j.contains("s_at_zero")) f.s_at_zero = field<double>(j, "s_at_zero");
  return f;
}

ScatteringFile read_scattering_json(const std::string& path) {
  return parse_scattering_json(read_text(path));
}

std::string scattering_json(const ScatteringFile& f) {
  json j;
  j["grid_size"] = f.grid_size;
  j["coeffs_s_plus"] = coeffs_to(f.s_plus);
  if (f.s) j["coeffs_s"] = coeffs_to(*f.s);
  if (f.s_minus) j["coeffs_s_minus"] = coeffs_to(*f.s_minus);
  if (f.s_at_zero) j["s_at_zero"] = *f.s_at_zero;
  return j.dump() + "\n";
}

ScatteringFile scattering_file(const ScatteringMatrix& sm) {
  ScatteringFile f;
  f.grid_size = sm.s_plus.size();
  f.s_plus = sm.s_plus;
  f.s = sm.s;
  f.s_minus = sm.s_minus;
  f.s_at_zero = sm.s_at_zero;
  return f;
}

ScatteringFile scattering_file(const ReflectionInput& in) {
  ScatteringFile f;
  f.grid_size = in.grid_size();
  f.s_plus = in.s_plus;
  f.s = in.s;
  f.s_minus = in.s_minus;
  f.s_at_zero = in.s_at_zero;
  return f;
}

std::string density_csv(const SpectralDensity& d) {
  std::string out = "x,rho11,re_rho12,im_rho12,rho22\n";
  char buf[160];
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const auto& r = d.rho[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", d.x[i], r(0, 0),
                  0.5 * (r(0, 1) + r(1, 0)), 0.0, r(1, 1));
    out += buf;
  }
  return out;
}

}  // namespace jscat
