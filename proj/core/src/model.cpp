#include "sktspec/model.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace skt {

namespace {

using Member = double ModelParams::*;

const std::array<std::pair<const char*, Member>, 14>& member_table() {
  static const std::array<std::pair<const char*, Member>, 14> table{{
      {"d1", &ModelParams::d1},
      {"d2", &ModelParams::d2},
      {"a1", &ModelParams::a1},
      {"b1", &ModelParams::b1},
      {"c1", &ModelParams::c1},
      {"a2", &ModelParams::a2},
      {"b2", &ModelParams::b2},
      {"c2", &ModelParams::c2},
      {"alpha11", &ModelParams::alpha11},
      {"alpha12", &ModelParams::alpha12},
      {"alpha21", &ModelParams::alpha21},
      {"alpha22", &ModelParams::alpha22},
      {"b11", &ModelParams::b11},
      {"b22", &ModelParams::b22},
  }};
  return table;
}

}  // namespace

ModelParams ModelParams::without_reactions() const {
  ModelParams q = *this;
  q.a1 = q.b1 = q.c1 = 0.0;
  q.a2 = q.b2 = q.c2 = 0.0;
  return q;
}

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, member] : member_table()) out.emplace_back(name);
    return out;
  }();
  return names;
}

double ModelParams::*param_member(std::string_view name) {
  for (const auto& [key, member] : member_table()) {
    if (name == key) return member;
  }
  return nullptr;
}

std::vector<std::string> validate(const ModelParams& p, bool reactions_required) {
  std::vector<std::string> errors;
  for (const auto& [name, member] : member_table()) {
    if (!std::isfinite(p.*member)) errors.push_back(std::string(name) + " must be finite");
  }
  if (!errors.empty()) return errors;

  if (!(p.d1 > 0.0)) errors.emplace_back("d1 must be > 0");
  if (!(p.d2 > 0.0)) errors.emplace_back("d2 must be > 0");
  if (reactions_required) {
    if (!(p.b1 > 0.0)) errors.emplace_back("b1 must be > 0");
    if (!(p.c2 > 0.0)) errors.emplace_back("c2 must be > 0");
  }
  if (p.alpha11 < 0.0) errors.emplace_back("alpha11 must be >= 0");
  if (p.alpha12 < 0.0) errors.emplace_back("alpha12 must be >= 0");
  if (p.alpha21 < 0.0) errors.emplace_back("alpha21 must be >= 0");
  if (p.alpha22 < 0.0) errors.emplace_back("alpha22 must be >= 0");
  if (p.b11 < 0.0) errors.emplace_back("b11 must be >= 0");
  if (p.b22 < 0.0) errors.emplace_back("b22 must be >= 0");
  return errors;
}

std::optional<ModelParams> preset(std::string_view name) {
  if (name == "case1") {
    ModelParams p;
    p.d1 = 0.01;
    p.d2 = 0.1;
    p.a1 = 1;
    p.b1 = 2;
    p.c1 = 0.2;
    p.a2 = 0.3;
    p.b2 = 1;
    p.c2 = 4;
    p.alpha11 = 0.1;
    p.alpha12 = 0.12;
    p.alpha21 = 0.06;
    p.alpha22 = 0.8;
    p.b11 = 0.12;
    p.b22 = 0.06;
    return p;
  }
  if (name == "case2") {
    ModelParams p;
    p.d1 = 0.25;
    p.d2 = 0.5;
    p.a1 = 0.2;
    p.b1 = 0.8;
    p.c1 = 0.8;
    p.a2 = 0.3;
    p.b2 = 0.4;
    p.c2 = 0.9;
    p.alpha11 = 1.2;
    p.alpha12 = 0.25;
    p.alpha21 = 0.3;
    p.alpha22 = 0.75;
    p.b11 = 0.1;
    p.b22 = 1;
    return p;
  }
  return std::nullopt;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"case1", "case2"};
  return names;
}

FluxCoeffs flux_coeffs(const ModelParams& p, double u, double v) {
  return {p.d1 + p.alpha11 * u + p.alpha12 * v,
          p.b11 * u,
          p.b22 * v,
          p.d2 + p.alpha21 * u + p.alpha22 * v};
}

Reactions reactions(const ModelParams& p, double u, double v) {
  return {u * (p.a1 - p.b1 * u + p.c1 * v), v * (p.a2 + p.b2 * u - p.c2 * v)};
}

std::optional<Densities> coexistence_steady_state(const ModelParams& p) {
  // b1 u - c1 v = a1
  // -b2 u + c2 v = a2
  const double det = p.b1 * p.c2 - p.b2 * p.c1;
  if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
  const double u = (p.a1 * p.c2 + p.c1 * p.a2) / det;
  const double v = (p.b1 * p.a2 + p.b2 * p.a1) / det;
  if (!(u > 0.0) || !(v > 0.0)) return std::nullopt;
  return Densities{u, v};
}

}  // namespace skt
