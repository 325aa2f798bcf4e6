// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "scatterfm/scene_io.hpp"

using namespace scatterfm;

namespace
{

const std::string kMixed = R"({
  "case": "mixed", "k": 3.0, "lambda0": 1.5,
  "omega1": {"kind": "kite", "center": [-3, 0], "radius": 1.0, "rotation": 0.25},
  "omega2": {"kind": "circle", "center": [3, 0], "radius": 1.0},
  "b1": {"kind": "circle", "center": [-3, 0], "radius": 0.3},
  "b2": {"kind": "circle", "center": [3, 0], "radius": 1.5},
  "b3": {"kind": "ellipse", "center": [3.4, 0.4], "semi_axes": [0.4, 0.2], "rotation": 1.0}
})";

std::string with_q(double re)
{
  return R"({
  "case": "medium", "k": 2.0,
  "omega1": {"kind": "circle", "center": [-3, 0], "radius": 1.5,
             "q": {"form": "constant", "re": )" +
         std::to_string(re) + R"(, "im": 0.0}},
  "omega2": {"kind": "circle", "center": [3, 0], "radius": 0.5},
  "b2": {"kind": "circle", "center": [3, 0], "radius": 0.8},
  "b3": {"kind": "circle", "center": [3.24, 0.16], "radius": 0.2}
})";
}

std::string error_of(const std::string &text)
{
  try {
    parse_scene(text, "s.json");
  } catch (const ValidationError &e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string &from, const std::string &to)
{
  const auto p = s.find(from);
  EXPECT_NE(p, std::string::npos) << from;
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST(SceneIo, ParsesMixedScene)
{
  const auto cfg = parse_scene(kMixed);
  const auto &s = cfg.scene;
  EXPECT_TRUE(cfg.variant_auto);
  EXPECT_EQ(s.variant, Variant::T12);
  EXPECT_EQ(s.scene_case, SceneCase::MixedObstacles);
  EXPECT_EQ(s.k, 3.0);
  EXPECT_EQ(s.lambda0, 1.5);
  EXPECT_EQ(s.omega1.kind(), CurveKind::Kite);
  EXPECT_EQ(s.omega1.rotation(), 0.25);
  ASSERT_TRUE(s.b3);
  EXPECT_EQ(s.b3->kind(), CurveKind::Ellipse);
  EXPECT_EQ(s.b3->scale_b(), 0.2);
  EXPECT_FALSE(s.contrast);
  EXPECT_TRUE(validate_scene(s).ok()) << validate_scene(s).message();
}

TEST(SceneIo, AutoVariantForMedium)
{
  EXPECT_EQ(parse_scene(with_q(-0.5)).scene.variant, Variant::T14);
  EXPECT_EQ(parse_scene(with_q(0.5)).scene.variant, Variant::T46);
  const auto cfg = parse_scene(with_q(0.5));
  ASSERT_TRUE(cfg.scene.contrast);
  EXPECT_EQ(cfg.scene.contrast->q0, cd(0.5, 0.0));
}

TEST(SceneIo, ExplicitVariant)
{
  const auto cfg = parse_scene(replace(kMixed, "\"k\": 3.0", "\"k\": 3.0, \"variant\": \"T3.6\""));
  EXPECT_FALSE(cfg.variant_auto);
  EXPECT_EQ(cfg.scene.variant, Variant::T36);
  EXPECT_NE(error_of(replace(kMixed, "\"k\": 3.0", "\"k\": 3.0, \"variant\": \"T7\"")).find("T7"),
            std::string::npos);
}

TEST(SceneIo, UnknownKeysRejected)
{
  EXPECT_NE(error_of(replace(kMixed, "\"k\": 3.0", "\"k\": 3.0, \"color\": 1")).find("unknown key 'color'"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMixed, "\"radius\": 0.3", "\"radius\": 0.3, \"r\": 1"))
                .find("s.json.b1: unknown key 'r'"),
            std::string::npos);
  EXPECT_NE(error_of(replace(with_q(0.5), "\"im\": 0.0", "\"im\": 0.0, \"x\": 0")).find("unknown key"),
            std::string::npos);
}

TEST(SceneIo, StructuralErrors)
{
  EXPECT_NE(error_of("{").find("invalid JSON"), std::string::npos);
  EXPECT_NE(error_of("[]").find("expected a JSON object"), std::string::npos);
  EXPECT_NE(error_of(replace(kMixed, "\"mixed\"", "\"both\"")).find("case"), std::string::npos);
  EXPECT_NE(error_of(replace(kMixed, "\"k\": 3.0,", "")).find("missing key 'k'"), std::string::npos);
  EXPECT_NE(error_of(replace(kMixed, "\"kind\": \"kite\"", "\"kind\": \"star\"")).find("star"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMixed, "[-3, 0], \"radius\": 1.0", "[-3], \"radius\": 1.0"))
                .find("[number, number]"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMixed, "\"semi_axes\": [0.4, 0.2]", "\"radius\": 0.4"))
                .find("semi_axes"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMixed, "\"radius\": 0.3", "\"radius\": \"big\"")).find("expected a number"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMixed, "\"radius\": 0.3", "\"radius\": -0.3")).find("positive"),
            std::string::npos);
}

TEST(SceneIo, ContrastOnlyForMedium)
{
  EXPECT_NE(error_of(replace(with_q(0.5), "\"medium\"", "\"mixed\"")).find("only applies"),
            std::string::npos);
  const std::string no_q = R"({"case": "medium", "k": 1,
    "omega1": {"kind": "circle", "center": [0, 0], "radius": 1},
    "omega2": {"kind": "circle", "center": [3, 0], "radius": 1}})";
  EXPECT_NE(error_of(no_q).find("needs 'q'"), std::string::npos);
  EXPECT_NE(error_of(replace(with_q(0.5), "\"constant\"", "\"gaussian\"")).find("gaussian"),
            std::string::npos);
}

TEST(SceneIo, ParsedButInvalidSceneIsCaughtByValidation)
{
  const auto cfg = parse_scene(replace(kMixed, "\"radius\": 1.5", "\"radius\": 0.9"));
  EXPECT_FALSE(validate_scene(cfg.scene).ok());
}

TEST(SceneIo, ShippedConfigsLoad)
{
  for (const char *name : {"mixed_kite.json", "mixed_disc.json", "medium_negative.json",
                           "medium_positive.json"}) {
    const auto cfg = load_scene(std::string(SCATTERFM_CONFIG_DIR) + "/" + name);
    EXPECT_TRUE(validate_scene(cfg.scene).ok()) << name << ": " << validate_scene(cfg.scene).message();
  }
  EXPECT_EQ(load_scene(std::string(SCATTERFM_CONFIG_DIR) + "/medium_negative.json").scene.variant,
            Variant::T14);
}

TEST(SceneIo, MissingFileIsAnIoError)
{
  EXPECT_THROW(load_scene("/nonexistent/scene.json"), IoError);
}
