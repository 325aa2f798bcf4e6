// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_SCENE_IO_HPP
#define SCATTERFM_SCENE_IO_HPP

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "scatterfm/errors.hpp"
#include "scatterfm/geometry.hpp"

//
// Scene JSON:
//
//   {
//     "case": "mixed" | "medium",
//     "k": 3.0,
//     "lambda0": 1.0,
//     "variant": "T1.2" | ... | "auto",          optional, default "auto"
//     "omega1": { <shape>, "q": {"form": "constant" | "radial-bump", "re": .., "im": ..} },
//     "omega2": { <shape> },
//     "b1": { <shape> }, "b2": { <shape> }, "b3": { <shape> }      b1, b3 optional
//   }
//
//   <shape> = "kind": "circle" | "ellipse" | "kite", "center": [x, y],
//             "radius": r (circle, kite scale) or "semi_axes": [a, b] (ellipse),
//             "rotation": radians (optional)
//
// "auto" picks T1.2 for the mixed case and the select_phase variant for the medium case.
// Unknown keys are rejected everywhere.
//
namespace scatterfm
{

namespace scene_detail
{

using nlohmann::json;

inline void reject_unknown(const json &obj, std::initializer_list<const char *> allowed,
                           const std::string &where)
{
  if (!obj.is_object())
    throw ValidationError(where + ": expected a JSON object");
  for (const auto &[key, _] : obj.items()) {
    bool ok = false;
    for (const char *a : allowed)
      ok = ok || key == a;
    if (!ok)
      throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

inline double number(const json &obj, const char *key, const std::string &where)
{
  if (!obj.contains(key))
    throw ValidationError(where + ": missing key '" + key + "'");
  const auto &v = obj.at(key);
  if (!v.is_number())
    throw ValidationError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline Vec2 pair(const json &obj, const char *key, const std::string &where)
{
  if (!obj.contains(key))
    throw ValidationError(where + ": missing key '" + key + "'");
  const auto &v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ValidationError(where + "." + key + ": expected [number, number]");
  return {v[0].get<double>(), v[1].get<double>()};
}

inline Curve shape(const json &obj, const std::string &where, bool allow_q)
{
  if (allow_q)
    reject_unknown(obj, {"kind", "center", "radius", "semi_axes", "rotation", "q"}, where);
  else
    reject_unknown(obj, {"kind", "center", "radius", "semi_axes", "rotation"}, where);
  if (!obj.contains("kind") || !obj.at("kind").is_string())
    throw ValidationError(where + ": missing string key 'kind'");
  const std::string kind = obj.at("kind").get<std::string>();
  const Vec2 c = pair(obj, "center", where);
  const double rot = obj.contains("rotation") ? number(obj, "rotation", where) : 0.0;
  if (kind == "circle" || kind == "kite") {
    if (obj.contains("semi_axes"))
      throw ValidationError(where + ": 'semi_axes' only applies to ellipses");
    const double r = number(obj, "radius", where);
    if (kind == "circle")
      return Curve::circle(c, r);
    return Curve::kite(c, r, rot);
  }
  if (kind == "ellipse") {
    if (obj.contains("radius"))
      throw ValidationError(where + ": ellipses take 'semi_axes', not 'radius'");
    const Vec2 ab = pair(obj, "semi_axes", where);
    return Curve::ellipse(c, ab.x, ab.y, rot);
  }
  throw ValidationError(where + ".kind: unknown shape '" + kind + "'");
}

inline ContrastSpec contrast(const json &obj, const std::string &where)
{
  reject_unknown(obj, {"form", "re", "im"}, where);
  ContrastSpec q;
  const std::string form = obj.contains("form") ? obj.at("form").get<std::string>() : "constant";
  if (form == "constant")
    q.form = ContrastForm::Constant;
  else if (form == "radial-bump")
    q.form = ContrastForm::RadialBump;
  else
    throw ValidationError(where + ".form: unknown contrast form '" + form + "'");
  q.q0 = {number(obj, "re", where), obj.contains("im") ? number(obj, "im", where) : 0.0};
  return q;
}

}  // namespace scene_detail

struct SceneConfig
{
  Scene scene;
  bool variant_auto = false;
};

// Fills scene.variant for "auto" (mixed: T1.2; medium: select_phase).
inline void resolve_variant(SceneConfig &cfg)
{
  if (!cfg.variant_auto)
    return;
  auto &s = cfg.scene;
  if (s.scene_case == SceneCase::MixedObstacles)
    s.variant = Variant::T12;
  else if (s.contrast)
    s.variant = select_phase(*s.contrast, s.omega1).variant;
}

inline SceneConfig parse_scene(const std::string &text, const std::string &source = "scene")
{
  using scene_detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ValidationError(source + ": invalid JSON: " + e.what());
  }
  try {
    scene_detail::reject_unknown(
        j, {"case", "k", "lambda0", "variant", "omega1", "omega2", "b1", "b2", "b3"}, source);
    SceneConfig cfg;
    Scene &s = cfg.scene;
    if (!j.contains("case") || !j.at("case").is_string())
      throw ValidationError(source + ": missing string key 'case'");
    const std::string c = j.at("case").get<std::string>();
    if (c == "mixed")
      s.scene_case = SceneCase::MixedObstacles;
    else if (c == "medium")
      s.scene_case = SceneCase::MediumPlusObstacle;
    else
      throw ValidationError(source + ".case: expected 'mixed' or 'medium', got '" + c + "'");
    s.k = scene_detail::number(j, "k", source);
    s.lambda0 = j.contains("lambda0") ? scene_detail::number(j, "lambda0", source) : 1.0;
    const std::string v = j.contains("variant") ? j.at("variant").get<std::string>() : "auto";
    cfg.variant_auto = v == "auto";
    if (!cfg.variant_auto)
      s.variant = variant_from_string(v);

    if (!j.contains("omega1") || !j.contains("omega2"))
      throw ValidationError(source + ": 'omega1' and 'omega2' are required");
    const auto &o1 = j.at("omega1");
    s.omega1 = scene_detail::shape(o1, source + ".omega1", true);
    if (o1.contains("q")) {
      if (s.scene_case != SceneCase::MediumPlusObstacle)
        throw ValidationError(source + ".omega1.q: contrast only applies to the medium case");
      s.contrast = scene_detail::contrast(o1.at("q"), source + ".omega1.q");
    } else if (s.scene_case == SceneCase::MediumPlusObstacle) {
      throw ValidationError(source + ".omega1: medium case needs 'q'");
    }
    s.omega2 = scene_detail::shape(j.at("omega2"), source + ".omega2", false);
    if (j.contains("b1"))
      s.b1 = scene_detail::shape(j.at("b1"), source + ".b1", false);
    if (j.contains("b2"))
      s.b2 = scene_detail::shape(j.at("b2"), source + ".b2", false);
    if (j.contains("b3"))
      s.b3 = scene_detail::shape(j.at("b3"), source + ".b3", false);
    resolve_variant(cfg);
    return cfg;
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(source + ": " + e.what());
  }
}

inline SceneConfig load_scene(const std::string &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open scene file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scene(ss.str(), path);
}

}  // namespace scatterfm

#endif  // SCATTERFM_SCENE_IO_HPP
