// SPDX-License-Identifier: Apache-2.0
//
// scatterfm: forward data synthesis, factorization-method reconstruction, disc oracles and
// self-tests.
//
// Exit codes: 0 ok, 1 selftest failure, 2 validation/solver error, 3 data-consistency error,
// 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scatterfm/scatterfm.hpp"

namespace
{

using namespace scatterfm;

enum Exit
{
  kOk = 0,
  kSelftestFailed = 1,
  kValidation = 2,
  kData = 3,
  kIo = 4
};

void require_writable(const std::string &path, bool force)
{
  if (path.empty())
    return;
  if (!force && std::filesystem::exists(path))
    throw IoError("refusing to overwrite '" + path + "' (use --force)");
}

std::vector<double> split_numbers(const std::string &text, std::size_t count, const char *flag)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw ValidationError(std::string(flag) + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.size() != count)
    throw ValidationError(std::string(flag) + ": expected " + std::to_string(count) +
                          " comma-separated numbers, got " + std::to_string(out.size()));
  return out;
}

Window parse_window(const std::string &text)
{
  const auto v = split_numbers(text, 5, "--grid");
  Window w{v[0], v[1], v[2], v[3], static_cast<int>(v[4])};
  if (v[4] != static_cast<double>(w.res) || w.res < 1 || w.res > 4096)
    throw ValidationError("--grid: resolution must be an integer in [1, 4096]");
  if (!(w.x1 > w.x0) || !(w.y1 > w.y0))
    throw ValidationError("--grid: need X0 < X1 and Y0 < Y1");
  return w;
}

SceneConfig load_with_variant(const std::string &path, const std::string &variant)
{
  auto cfg = load_scene(path);
  if (!variant.empty()) {
    cfg.variant_auto = variant == "auto";
    if (!cfg.variant_auto)
      cfg.scene.variant = variant_from_string(variant);
    resolve_variant(cfg);
  }
  return cfg;
}

// ---------------------------------------------------------------------------------------------

struct ForwardOptions
{
  std::string scene, out, variant;
  int ndirs = 64;
  int n = 96;
  int m = 48;
  double noise = 0.0;
  std::uint64_t seed = 0;
  bool force = false;
};

int cmd_forward(const ForwardOptions &o)
{
  require_writable(o.out, o.force);
  const auto cfg = load_with_variant(o.scene, o.variant);
  const auto &scene = cfg.scene;
  require_valid(scene);
  const DirectionGrid grid(o.ndirs);
  if (scene.scene_case == SceneCase::MediumPlusObstacle) {
    const VolumeGrid probe(scene.omega1, *scene.contrast, o.m);
    for (const auto &w : probe.warnings())
      std::cerr << "warning: " << w << '\n';
  }
  auto f = assemble_far_field_operator(scene, grid, {o.n, o.m});
  if (o.noise > 0.0 || o.seed != 0)
    f = add_noise(f, o.noise, o.seed);
  write_ffop(o.out, f);
  std::cerr << "wrote " << o.out << ": N = " << f.n << ", k = " << f.k
            << ", ||F||_F = " << f.values.norm() << '\n';
  return kOk;
}

struct ReconstructOptions
{
  std::string scene, data, out, pgm, variant, grid = "-6,6,-6,6,80";
  int n = 64;
  double eps = 1e-8;
  bool force = false;
};

int cmd_reconstruct(const ReconstructOptions &o)
{
  require_writable(o.out, o.force);
  require_writable(o.pgm, o.force);
  const Window window = parse_window(o.grid);
  const auto cfg = load_with_variant(o.scene, o.variant);
  const auto &scene = cfg.scene;
  require_valid(scene);
  const auto measured = read_ffop(o.data);
  const auto r = reconstruct_scene(scene, measured, window, o.n, o.eps);
  write_csv(o.out, r.grid);
  if (!o.pgm.empty())
    write_pgm(o.pgm, r.grid);

  nlohmann::ordered_json report;
  report["variant"] = to_string(scene.variant);
  report["t"] = r.sharp.t;
  report["provenance"] = r.modified.provenance;
  report["lambda_max"] = r.sharp.eigenvalues(0);
  report["lambda_min"] = r.sharp.eigenvalues(r.sharp.size() - 1);
  report["retained"] = PicardIndicator(r.sharp, scene.k, o.eps).retained();
  report["points"] = r.grid.points.size();
  report["unmasked"] = r.grid.unmasked_count();
  try {
    const auto s = threshold_and_score(r.grid, scene.omega1);
    report["contrast"] = s.contrast;
    report["jaccard"] = s.jaccard;
    report["threshold"] = s.best_threshold;
  } catch (const DataError &e) {
    report["score"] = e.what();
  }
  std::cout << report.dump() << '\n';
  return kOk;
}

struct OracleOptions
{
  std::string condition = "dirichlet", center = "0,0", out;
  double radius = 1.0, k = 2.0, lambda0 = 1.0, q0 = 0.5;
  int ndirs = 64;
  bool force = false;
};

int cmd_oracle(const OracleOptions &o)
{
  require_writable(o.out, o.force);
  oracle::DiscParams p;
  const auto c = split_numbers(o.center, 2, "--center");
  p.center = {c[0], c[1]};
  p.radius = o.radius;
  p.k = o.k;
  p.lambda0 = o.lambda0;
  p.q0 = o.q0;
  if (!(p.radius > 0.0) || !(p.k > 0.0))
    throw ValidationError("oracle: radius and k must be positive");
  if (o.condition == "dirichlet")
    p.condition = oracle::DiscCondition::Dirichlet;
  else if (o.condition == "neumann")
    p.condition = oracle::DiscCondition::Neumann;
  else if (o.condition == "impedance")
    p.condition = oracle::DiscCondition::Impedance;
  else if (o.condition == "transmission")
    p.condition = oracle::DiscCondition::Transmission;
  else
    throw ValidationError("oracle: unknown condition '" + o.condition + "'");
  std::vector<cd> coef;
  try {
    coef = oracle::disc_coefficients(p);
  } catch (const std::domain_error &e) {
    throw ValidationError(std::string("oracle: ") + e.what());
  }

  std::printf("m,re,im\n");
  for (std::size_t m = 0; m < coef.size(); ++m)
    std::printf("%zu,%.17g,%.17g\n", m, coef[m].real(), coef[m].imag());

  if (!o.out.empty()) {
    const DirectionGrid grid(o.ndirs);
    FarFieldMatrix f;
    f.n = grid.size();
    f.k = p.k;
    f.provenance = {"oracle:" + oracle::to_string(p.condition)};
    f.values.resize(f.n, f.n);
    for (int i = 0; i < f.n; ++i)
      for (int j = 0; j < f.n; ++j)
        f.values(i, j) = oracle::disc_far_field(p, coef, grid[i], grid[j]);
    write_ffop(o.out, f);
  }
  return kOk;
}

int cmd_selftest(const std::string &inject, bool list)
{
  const auto all = selftest::suites();
  if (list) {
    for (const auto &s : all)
      std::cout << s.name << '\n';
    return kOk;
  }
  if (!inject.empty()) {
    bool known = false;
    for (const auto &s : all)
      known = known || s.name == inject;
    if (!known)
      throw ValidationError("selftest: unknown suite '" + inject + "'");
  }
  const auto results = selftest::run_all(inject);
  nlohmann::ordered_json report;
  report["suites"] = nlohmann::json::array();
  int failed = 0;
  for (const auto &r : results) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["pass"] = r.pass;
    e["detail"] = r.detail;
    report["suites"].push_back(e);
    failed += r.pass ? 0 : 1;
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
  }
  report["passed"] = static_cast<int>(results.size()) - failed;
  report["failed"] = failed;
  std::cout << report.dump() << '\n';
  return failed == 0 ? kOk : kSelftestFailed;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"scatterfm: far-field synthesis and factorization-method reconstruction"};
  app.require_subcommand(1);

  ForwardOptions fwd;
  auto *forward = app.add_subcommand("forward", "Synthesize a far-field operator (FFOP v1)");
  forward->add_option("--scene", fwd.scene, "Scene JSON")->required();
  forward->add_option("--out", fwd.out, "Output FFOP file")->required();
  forward->add_option("--ndirs", fwd.ndirs, "Number of directions N");
  forward->add_option("--n", fwd.n, "Boundary nodes per curve (2n)");
  forward->add_option("--m", fwd.m, "Volume cells per axis (medium case)");
  forward->add_option("--noise", fwd.noise, "Relative noise level in [0, 0.2]");
  forward->add_option("--seed", fwd.seed, "Noise seed");
  forward->add_option("--variant", fwd.variant, "Override the scene variant");
  forward->add_flag("--force", fwd.force, "Overwrite existing output");

  ReconstructOptions rec;
  auto *reconstruct = app.add_subcommand("reconstruct", "Indicator grid from measured data");
  reconstruct->add_option("--scene", rec.scene, "Scene JSON")->required();
  reconstruct->add_option("--data", rec.data, "Measured FFOP file")->required();
  reconstruct->add_option("--out", rec.out, "Output CSV")->required();
  reconstruct->add_option("--pgm", rec.pgm, "Optional PGM image");
  reconstruct->add_option("--grid", rec.grid, "X0,X1,Y0,Y1,RES");
  reconstruct->add_option("--variant", rec.variant, "Override the scene variant");
  reconstruct->add_option("--n", rec.n, "Boundary nodes per curve for artificial operators");
  reconstruct->add_option("--eps", rec.eps, "Relative spectral cutoff");
  reconstruct->add_flag("--force", rec.force, "Overwrite existing outputs");

  OracleOptions orc;
  auto *oracle_cmd = app.add_subcommand("oracle", "Separation-of-variables disc far fields");
  oracle_cmd->add_option("--condition", orc.condition,
                         "dirichlet | neumann | impedance | transmission");
  oracle_cmd->add_option("--radius", orc.radius, "Disc radius");
  oracle_cmd->add_option("--center", orc.center, "Disc center X,Y");
  oracle_cmd->add_option("--k", orc.k, "Wavenumber");
  oracle_cmd->add_option("--lambda0", orc.lambda0, "Impedance lambda0");
  oracle_cmd->add_option("--q0", orc.q0, "Transmission contrast");
  oracle_cmd->add_option("--ndirs", orc.ndirs, "Number of directions for --out");
  oracle_cmd->add_option("--out", orc.out, "Optional FFOP file with the oracle operator");
  oracle_cmd->add_flag("--force", orc.force, "Overwrite existing output");

  std::string inject;
  bool list = false;
  auto *self = app.add_subcommand("selftest", "Run the invariant suites");
  self->add_option("--inject-fault", inject, "Corrupt the fixture of one suite");
  self->add_flag("--list", list, "List suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*forward)
      return cmd_forward(fwd);
    if (*reconstruct)
      return cmd_reconstruct(rec);
    if (*oracle_cmd)
      return cmd_oracle(orc);
    return cmd_selftest(inject, list);
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DataError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}
