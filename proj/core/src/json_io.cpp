#include "sktspec/json_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

namespace skt {

namespace {

std::string shortest(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, r.ptr};
}

double parse_double(std::string_view s, const std::string& what) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ParseError(what, "cannot parse '" + std::string(s) + "' as a number in " + what);
  }
  return v;
}

std::vector<double> parse_list(std::string_view s, const std::string& what) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_double(s.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double number(const Json& j, const char* key, const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(key, context + ": missing key '" + key + "'");
  if (!it->is_number()) throw ParseError(key, context + ": key '" + std::string(key) + "' must be a number");
  return it->get<double>();
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(key, context + ": unknown key '" + key + "'");
  }
}

InitialDescriptor parse_shape(std::string_view s) {
  for (const NamedIC& ic : canonical_ics()) {
    if (s == ic.name) return ic.descriptor;
  }
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ParseError("ic", "unknown initial shape '" + std::string(s) + "'");
  const std::string_view kind = s.substr(0, colon);
  const std::vector<double> v = parse_list(s.substr(colon + 1), "ic " + std::string(kind));
  if (kind == "constant") {
    if (v.size() != 1) throw ParseError("ic", "constant shape takes one value");
    return ConstantIC{v[0]};
  }
  if (kind == "cosine") {
    if (v.size() < 4 || (v.size() - 1) % 3 != 0) {
      throw ParseError("ic", "cosine shape takes offset followed by j,k,amp triples");
    }
    CosineIC c{v[0], {}};
    for (std::size_t i = 1; i < v.size(); i += 3) {
      if (v[i] != std::floor(v[i]) || v[i + 1] != std::floor(v[i + 1])) {
        throw ParseError("ic", "cosine mode indices must be integers");
      }
      c.terms.push_back({static_cast<int>(v[i]), static_cast<int>(v[i + 1]), v[i + 2]});
    }
    return c;
  }
  if (kind == "gaussian") {
    if (v.size() != 5) throw ParseError("ic", "gaussian shape takes cx,cy,sigma,amp,offset");
    return GaussianIC{v[0], v[1], v[2], v[3], v[4]};
  }
  throw ParseError("ic", "unknown initial shape '" + std::string(kind) + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_text(const std::string& text, const std::string& context) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("", context + ": " + e.what());
  }
}

std::string snapshot_name(char species, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c_%04zu.txt", species, index);
  return buf;
}

}  // namespace

ModelParams params_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("", "parameters must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!param_member(key)) throw ParseError(key, "unknown parameter key '" + key + "'");
  }
  ModelParams p;
  for (const std::string& name : param_names()) p.*param_member(name) = number(j, name.c_str(), "parameters");
  return p;
}

ModelParams load_params(const std::filesystem::path& path) {
  return params_from_json(parse_json_text(read_file(path), path.string()));
}

Json to_json(const ModelParams& p) {
  Json j = Json::object();
  for (const std::string& name : param_names()) j[name] = p.*param_member(name);
  return j;
}

Json to_json(const Inequality& q) { return {{"holds", q.holds}, {"lhs", q.lhs}, {"rhs", q.rhs}}; }

Json to_json(const ConditionReport& r) {
  Json j;
  j["cond_1_6"] = {{"i", to_json(r.cond_1_6.i)},
                   {"ii", to_json(r.cond_1_6.ii)},
                   {"iii", to_json(r.cond_1_6.iii)},
                   {"combined", r.cond_1_6.holds}};
  j["cond_1_7"] = {{"product", to_json(r.cond_1_7.product)},
                   {"alpha11_gt_alpha21", r.cond_1_7.alpha11_gt_alpha21},
                   {"alpha22_gt_alpha12", r.cond_1_7.alpha22_gt_alpha12},
                   {"combined", r.cond_1_7.holds}};
  j["cond_1_8"] = {{"value", r.cond_1_8.value}, {"combined", r.cond_1_8.holds}};
  j["regularity_positivity"] = r.regularity_positivity;
  j["V1"] = r.V1;
  j["V2"] = r.V2;
  j["cond_1_9"] = {{"i", r.cond_1_9.i},
                   {"ii", r.cond_1_9.ii},
                   {"iii", r.cond_1_9.iii},
                   {"iii_value", r.cond_1_9.iii_value},
                   {"combined", r.cond_1_9.holds}};
  j["cond_2_1"] = {{"i", r.cond_2_1.i},
                   {"ii", r.cond_2_1.ii},
                   {"iii", r.cond_2_1.iii},
                   {"iv", r.cond_2_1.iv},
                   {"combined", r.cond_2_1.holds}};
  j["theorem_2_2_applies"] = r.theorem_2_2_applies;
  return j;
}

Json to_json(const LyapunovCert& c) {
  // Infinite window ends serialize as null.
  return {{"lambda", c.lambda},
          {"mu", c.mu},
          {"K", c.K},
          {"k_excess", c.k_excess},
          {"delta_u", c.delta_u},
          {"delta_v", c.delta_v},
          {"delta_d", c.delta_d},
          {"window_lambda_hi", c.window_lambda_hi},
          {"window_mu_hi", c.window_mu_hi},
          {"feasible", c.feasible},
          {"discriminants_negative", c.discriminants_negative}};
}

std::string_view to_string(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::found: return "found";
    case CertificateStatus::infeasible: return "infeasible";
    case CertificateStatus::precondition_violated: return "precondition_violated";
  }
  return "unknown";
}

Json to_json(const CertificateSearch& s) {
  Json j = s.cert ? to_json(*s.cert) : Json::object();
  j["status"] = to_string(s.status);
  j["detail"] = s.detail;
  return j;
}

Json to_json(const SignReport& s) {
  return {{"phi_coeffs", s.phi_coeffs},
          {"level", s.level},
          {"samples", s.samples},
          {"in_region", s.in_region},
          {"violations", s.violations},
          {"violation_fraction", s.violation_fraction},
          {"max_violation", s.max_violation}};
}

Json to_json(const Diagnostics& d) {
  return {{"t", d.t},         {"mass_u", d.mass_u}, {"mass_v", d.mass_v}, {"min_u", d.min_u},
          {"max_u", d.max_u}, {"min_v", d.min_v},   {"max_v", d.max_v},   {"max_H", d.max_H},
          {"L_value", d.L_value}, {"rhs_norm", d.rhs_norm}};
}

Json to_json(const RunConfig& c) {
  return {{"n", c.n},
          {"t_max", c.t_max},
          {"rtol", c.rtol},
          {"atol", c.atol},
          {"snapshot_dt", c.snapshot_dt},
          {"steady_tol", c.steady_tol},
          {"blowup_threshold", c.blowup_threshold},
          {"max_steps", c.max_steps},
          {"seed", c.seed}};
}

Json to_json(const InitialDescriptor& ic) {
  struct Visitor {
    Json operator()(const ConstantIC& c) const { return {{"type", "constant"}, {"value", c.value}}; }
    Json operator()(const CosineIC& c) const {
      Json terms = Json::array();
      for (const CosineTerm& t : c.terms) terms.push_back({{"j", t.j}, {"k", t.k}, {"amp", t.amp}});
      return {{"type", "cosine"}, {"offset", c.offset}, {"terms", terms}};
    }
    Json operator()(const GaussianIC& g) const {
      return {{"type", "gaussian"}, {"cx", g.cx},   {"cy", g.cy},
              {"sigma", g.sigma},   {"amp", g.amp}, {"offset", g.offset}};
    }
  };
  return std::visit(Visitor{}, ic);
}

Json to_json(const InitialPair& ic) { return {{"u", to_json(ic.u)}, {"v", to_json(ic.v)}}; }

InitialDescriptor descriptor_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("", "initial descriptor must be a JSON object");
  const auto type = j.find("type");
  if (type == j.end() || !type->is_string()) throw ParseError("type", "initial descriptor needs a string 'type'");
  const std::string t = type->get<std::string>();
  if (t == "constant") {
    reject_unknown(j, {"type", "value", "u"}, "constant descriptor");
    const bool has_value = j.contains("value");
    if (has_value == j.contains("u")) throw ParseError("value", "constant descriptor needs exactly one of 'value' or 'u'");
    return ConstantIC{number(j, has_value ? "value" : "u", "constant descriptor")};
  }
  if (t == "cosine") {
    reject_unknown(j, {"type", "offset", "terms"}, "cosine descriptor");
    CosineIC c{j.contains("offset") ? number(j, "offset", "cosine descriptor") : 0.0, {}};
    const auto terms = j.find("terms");
    if (terms == j.end() || !terms->is_array()) throw ParseError("terms", "cosine descriptor needs a 'terms' array");
    for (const Json& term : *terms) {
      reject_unknown(term, {"j", "k", "amp"}, "cosine term");
      const auto idx = [&](const char* key) {
        const auto it = term.find(key);
        if (it == term.end() || !it->is_number_integer()) {
          throw ParseError(key, std::string("cosine term needs integer '") + key + "'");
        }
        return it->get<int>();
      };
      c.terms.push_back({idx("j"), idx("k"), number(term, "amp", "cosine term")});
    }
    return c;
  }
  if (t == "gaussian") {
    reject_unknown(j, {"type", "cx", "cy", "sigma", "amp", "offset"}, "gaussian descriptor");
    const std::string ctx = "gaussian descriptor";
    return GaussianIC{number(j, "cx", ctx), number(j, "cy", ctx), number(j, "sigma", ctx), number(j, "amp", ctx),
                      number(j, "offset", ctx)};
  }
  throw ParseError("type", "unknown initial descriptor type '" + t + "'");
}

InitialPair parse_initial(std::string_view text) {
  if (text.empty()) throw ParseError("ic", "empty initial-condition descriptor");
  if (text.front() == '@' || text.front() == '{') {
    const std::string body = text.front() == '@' ? read_file(std::string(text.substr(1))) : std::string(text);
    const Json j = parse_json_text(body, "initial condition");
    if (!j.is_object()) throw ParseError("ic", "initial condition must be a JSON object");
    reject_unknown(j, {"u", "v"}, "initial condition");
    if (!j.contains("u") || !j.contains("v")) throw ParseError("ic", "initial condition needs 'u' and 'v'");
    return {descriptor_from_json(j["u"]), descriptor_from_json(j["v"])};
  }
  if (const auto semi = text.find(';'); semi != std::string_view::npos) {
    return {parse_shape(text.substr(0, semi)), parse_shape(text.substr(semi + 1))};
  }
  if (text.substr(0, 9) == "constant:") {
    const auto v = parse_list(text.substr(9), "ic constant");
    if (v.size() != 2) throw ParseError("ic", "constant:U,V takes two values");
    return {ConstantIC{v[0]}, ConstantIC{v[1]}};
  }
  const InitialDescriptor d = parse_shape(text);
  return {d, d};
}

void write_snapshot(const std::filesystem::path& path, const Field& field, double t, int n) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const Eigen::Index N = field.rows();
  out << "t=" << shortest(t) << " n=" << n << " grid=" << N << '\n';
  char buf[40];
  for (Eigen::Index iy = 0; iy < N; ++iy) {
    for (Eigen::Index ix = 0; ix < N; ++ix) {
      std::snprintf(buf, sizeof buf, "%.17g", field(ix, iy));
      if (ix) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  Snapshot s;
  int N = 0;
  char tbuf[64] = {};
  if (std::sscanf(header.c_str(), "t=%63s n=%d grid=%d", tbuf, &s.n, &N) != 3 || N <= 0) {
    throw ParseError("", "bad snapshot header in " + path.string());
  }
  s.t = parse_double(tbuf, "snapshot header");
  s.field.resize(N, N);
  for (int iy = 0; iy < N; ++iy) {
    for (int ix = 0; ix < N; ++ix) {
      if (!(in >> s.field(ix, iy))) throw ParseError("", "truncated snapshot " + path.string());
    }
  }
  return s;
}

Json run_manifest(const ModelParams& params, const RunConfig& config, const InitialPair& ic,
                  const RunResult& result) {
  Json j;
  j["params"] = to_json(params);
  j["config"] = to_json(config);
  j["initial"] = to_json(ic);
  j["initial_min_u"] = result.initial_min_u;
  j["initial_min_v"] = result.initial_min_v;
  j["conditions"] = to_json(result.conditions);
  j["certificate"] = to_json(result.certificate);
  j["level"] = result.level;
  j["outcome"] = to_string(result.outcome);
  j["message"] = result.message;
  j["steps"] = result.steps;
  j["rejected_steps"] = result.rejected_steps;
  j["final"] = result.timeseries.empty() ? Json(nullptr) : to_json(result.timeseries.back());
  const int grid = 4 * (config.n + 1);
  Json snaps = Json::array();
  Json series = Json::array();
  for (std::size_t i = 0; i < result.timeseries.size(); ++i) {
    snaps.push_back({{"t", result.timeseries[i].t},
                     {"grid", grid},
                     {"u", snapshot_name('u', i)},
                     {"v", snapshot_name('v', i)}});
    series.push_back(to_json(result.timeseries[i]));
  }
  j["snapshots"] = snaps;
  j["timeseries"] = series;
  return j;
}

Json write_run(const std::filesystem::path& out, const ModelParams& params, const RunConfig& config,
               const InitialPair& ic, const RunResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out)) {
    throw std::runtime_error("cannot create output directory " + out.string());
  }
  const int grid = 4 * (config.n + 1);
  for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
    const SpectralState& s = result.snapshots[i];
    const auto [u, v] = synthesize(s, grid);
    write_snapshot(out / snapshot_name('u', i), u, s.t, config.n);
    write_snapshot(out / snapshot_name('v', i), v, s.t, config.n);
  }
  const Json manifest = run_manifest(params, config, ic, result);
  std::ofstream f(out / "manifest.json", std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + (out / "manifest.json").string());
  f << dump(manifest);
  if (!f) throw std::runtime_error("failed writing " + (out / "manifest.json").string());
  return manifest;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace skt
