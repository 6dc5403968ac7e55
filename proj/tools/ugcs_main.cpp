// Copyright 2026 The UGCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ugcs/common/error.hpp"
#include "ugcs/core/object_map.hpp"
#include "ugcs/core/print.hpp"
#include "ugcs/core/sphere.hpp"
#include "ugcs/geom/mesh_io.hpp"
#include "ugcs/graspopt/graspopt.hpp"
#include "ugcs/io/json_io.hpp"
#include "ugcs/kinematics/model.hpp"

namespace {

namespace fs = std::filesystem;
using ugcs::io::Json;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputError = 2,
  kFitFailure = 3,
  kDiverged = 4,
  kEmptyCorrespondence = 5,
};

struct Global {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t threads = 1;
  std::size_t rays = 10000;
  bool json = false;
  std::string config;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void report(const Global& g, const Json& json, const std::string& plain) {
  if (g.json) {
    std::cout << ugcs::io::dump(json, false) << '\n';
  } else {
    std::cout << plain << '\n';
  }
}

void write_document(const std::string& path, Json doc, const ugcs::io::Metadata& meta) {
  doc["metadata"] = ugcs::io::metadata_json(meta);
  ugcs::io::write_file_atomic(path, ugcs::io::dump(doc));
}

ugcs::opt::OptimizationConfig load_config(const Global& g) {
  ugcs::opt::OptimizationConfig cfg;
  if (!g.config.empty()) cfg = ugcs::io::config_from(ugcs::io::read_json(g.config));
  if (g.seed_given) cfg.seed = g.seed;
  return cfg;
}

void add_config_input(const Global& g, ugcs::io::Metadata& meta) {
  if (!g.config.empty()) meta.inputs.emplace_back("config", g.config);
}

std::string object_id_for(const std::string& mesh_path) { return fs::path(mesh_path).stem().string(); }

// --- maxsphere ---------------------------------------------------------------

struct MaxsphereArgs {
  std::string gripper;
  std::string out;
};

int run_maxsphere(const Global& g, const MaxsphereArgs& a) {
  const auto model = ugcs::kin::load_gripper(a.gripper);
  const ugcs::SphereFit fit = ugcs::max_graspable_sphere(model);
  if (!a.out.empty()) {
    write_document(a.out, ugcs::io::sphere_report_json(model, fit), {g.seed, {{"gripper", a.gripper}}});
  }
  report(g, {{"gripper_id", model.name()}, {"radius", fit.sphere.radius}}, fmt(fit.sphere.radius));
  return kOk;
}

// --- print -------------------------------------------------------------------

struct PrintArgs {
  std::string gripper;
  std::string out;
};

int run_print(const Global& g, const PrintArgs& a) {
  if (g.rays < 1000) throw ugcs::InvalidArgument("--rays must be at least 1000");
  const auto model = ugcs::kin::load_gripper(a.gripper);
  const ugcs::SphereFit fit = ugcs::max_graspable_sphere(model);
  const ugcs::GripperPrint print =
      ugcs::build_print(model, fit.sphere, fit.capture_config, g.rays, {g.threads, a.gripper});
  write_document(a.out, ugcs::io::print_json(print, model), {g.seed, {{"gripper", a.gripper}}});
  report(g, {{"gripper_id", model.name()}, {"points", print.size()}, {"rays", g.rays}, {"radius", fit.sphere.radius}},
         model.name() + ": " + std::to_string(print.size()) + " print points from " + std::to_string(g.rays) +
             " rays, sphere radius " + fmt(fit.sphere.radius));
  return kOk;
}

// --- map ---------------------------------------------------------------------

struct MapArgs {
  std::string print;
  std::string records;
  std::string object;
  std::size_t samples = 2048;
  std::string out_dir;
  std::string gripper;
};

// Gripper description referenced by a print, resolved against the working
// directory first and the print's directory second.
std::string resolve_gripper(const std::string& print_path, const std::string& override_path,
                            const std::string& source) {
  if (!override_path.empty()) return override_path;
  if (source.empty()) throw ugcs::InvalidArgument("print has no gripper_source; pass --gripper");
  if (fs::path(source).is_absolute() || fs::exists(source)) return source;
  const fs::path sibling = fs::path(print_path).parent_path() / source;
  return fs::exists(sibling) ? sibling.string() : source;
}

int run_map(const Global& g, const MapArgs& a) {
  if (a.samples == 0) throw ugcs::InvalidArgument("--samples must be positive");
  const Json print_doc = ugcs::io::read_json(a.print);
  const auto [gripper_id, source] = ugcs::io::print_gripper_ref(print_doc);
  const std::string gripper_path = resolve_gripper(a.print, a.gripper, source);
  const auto model = ugcs::kin::load_gripper(gripper_path);
  const ugcs::GripperPrint print = ugcs::io::print_from(print_doc, model);
  const ugcs::geom::TriMesh mesh = ugcs::geom::load_mesh(a.object);
  const std::string object_id = object_id_for(a.object);
  const ugcs::ObjectCloud cloud = ugcs::sample_object(mesh, a.samples, g.seed, object_id, a.object);
  const std::string records = ugcs::io::read_file(a.records);
  fs::create_directories(a.out_dir);

  const ugcs::io::Metadata meta{g.seed,
                                {{"print", a.print}, {"gripper", gripper_path}, {"records", a.records},
                                 {"object", a.object}}};
  std::istringstream lines(records);
  std::string line;
  std::size_t index = 0;
  std::size_t written = 0;
  std::size_t failed = 0;
  Json summary = Json::array();
  for (std::size_t line_no = 1; std::getline(lines, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t record_index = index++;
    try {
      Json j;
      try {
        j = Json::parse(line);
      } catch (const Json::parse_error&) {
        throw ugcs::ParseError("corrupt record");
      }
      const ugcs::GraspRecord record = ugcs::io::grasp_record_from(j, model);
      if (record.gripper_id != print.gripper_id()) {
        throw ugcs::InvalidArgument("unresolvable gripper id '" + record.gripper_id + "'");
      }
      if (record.object_id != object_id) {
        throw ugcs::InvalidArgument("unresolvable object id '" + record.object_id + "'");
      }
      const ugcs::CoordinateMap map = ugcs::object_map_from_grasp(print, record.config, model, cloud, {0.01, g.threads});
      char name[32];
      std::snprintf(name, sizeof(name), "map_%04zu.json", record_index);
      const std::string out = (fs::path(a.out_dir) / name).string();
      write_document(out, ugcs::io::map_json(cloud, map), meta);
      const double fraction = static_cast<double>(map.contact_count()) / static_cast<double>(map.size());
      summary.push_back({{"file", out}, {"record", record_index}, {"contact_fraction", fraction}});
      if (!g.json) std::cout << out << " contact_fraction " << fmt(fraction) << '\n';
      ++written;
    } catch (const std::exception& e) {
      ++failed;
      std::cerr << a.records << ":" << line_no << ": record skipped: " << e.what() << '\n';
    }
  }
  if (g.json) std::cout << ugcs::io::dump({{"maps", summary}, {"failed", failed}}, false) << '\n';
  if (written == 0) {
    std::cerr << "error: no grasp record produced a map\n";
    return kInputError;
  }
  return kOk;
}

// --- synth -------------------------------------------------------------------

struct SynthArgs {
  std::string map;
  std::string print;
  std::string gripper;
  std::string object;
  std::string out;
  std::string trace;
};

int run_synth(const Global& g, const SynthArgs& a) {
  const ugcs::opt::OptimizationConfig cfg = load_config(g);
  const auto model = ugcs::kin::load_gripper(a.gripper);
  const ugcs::GripperPrint print = ugcs::io::print_from(ugcs::io::read_json(a.print), model);
  const auto [cloud, map] = ugcs::io::map_from(ugcs::io::read_json(a.map));
  const ugcs::geom::TriMesh mesh = ugcs::geom::load_mesh(a.object);
  ugcs::io::Metadata meta{cfg.seed, {{"map", a.map}, {"print", a.print}, {"gripper", a.gripper}, {"object", a.object}}};
  add_config_input(g, meta);

  ugcs::opt::SynthesisResult result;
  try {
    result = ugcs::opt::synthesize(map, print, model, mesh, cloud, cfg);
  } catch (const ugcs::opt::Diverged& e) {
    if (!a.trace.empty()) ugcs::io::write_file_atomic(a.trace, ugcs::io::trace_csv(e.trace()));
    throw;
  }
  Json doc = ugcs::io::grasp_config_json(model, result.config);
  doc["format"] = "ugcs.grasp";
  doc["version"] = ugcs::io::kFormatVersion;
  doc["object_id"] = cloud.object_id;
  doc["energy"] = {{"initial", ugcs::io::energy_json(result.initial)}, {"final", ugcs::io::energy_json(result.report)}};
  doc["refined"] = result.refined;
  doc["init_fallback"] = result.init.fallback;
  write_document(a.out, doc, meta);
  if (!a.trace.empty()) ugcs::io::write_file_atomic(a.trace, ugcs::io::trace_csv(result.trace));
  if (!result.report.penetration_reliable) {
    std::cerr << "warning: object mesh is not watertight; penetration uses a best-effort sign\n";
  }
  report(g, {{"out", a.out}, {"energy", doc["energy"]}},
         "e_dist " + fmt(result.report.e_dist) + " e_pen " + fmt(result.report.e_pen) + " e_joint " +
             fmt(result.report.e_joint) + " total " + fmt(result.report.total));
  return kOk;
}

// --- transfer ----------------------------------------------------------------

struct TransferArgs {
  std::string source_print;
  std::string source_grasp;
  std::string source_gripper;
  std::string target_print;
  std::string target_gripper;
  std::string out;
};

int run_transfer(const Global& g, const TransferArgs& a) {
  const ugcs::opt::OptimizationConfig cfg = load_config(g);
  const auto source_model = ugcs::kin::load_gripper(a.source_gripper);
  const auto target_model = ugcs::kin::load_gripper(a.target_gripper);
  const ugcs::GripperPrint source_print = ugcs::io::print_from(ugcs::io::read_json(a.source_print), source_model);
  const ugcs::GripperPrint target_print = ugcs::io::print_from(ugcs::io::read_json(a.target_print), target_model);
  const ugcs::kin::GraspConfig source_grasp =
      ugcs::io::grasp_config_from(ugcs::io::read_json(a.source_grasp), source_model);
  ugcs::io::Metadata meta{cfg.seed,
                          {{"source_print", a.source_print},
                           {"source_grasp", a.source_grasp},
                           {"source_gripper", a.source_gripper},
                           {"target_print", a.target_print},
                           {"target_gripper", a.target_gripper}}};
  add_config_input(g, meta);

  const ugcs::opt::TransferResult result =
      ugcs::opt::transfer(source_print, source_grasp, source_model, target_print, target_model, cfg);
  Json doc = ugcs::io::grasp_config_json(target_model, result.config);
  doc["format"] = "ugcs.grasp";
  doc["version"] = ugcs::io::kFormatVersion;
  doc["energy"] = {{"initial", ugcs::io::energy_json(result.initial)}, {"final", ugcs::io::energy_json(result.report)}};
  write_document(a.out, doc, meta);
  report(g, {{"out", a.out}, {"energy", doc["energy"]}},
         "e_dist " + fmt(result.report.e_dist) + " e_joint " + fmt(result.report.e_joint) + " total " +
             fmt(result.report.total));
  return kOk;
}

// --- eval --------------------------------------------------------------------

struct EvalArgs {
  std::vector<std::string> grasps;
  std::string object;
  std::string gripper;
  std::string print;
  std::string out;
};

int run_eval(const Global& g, const EvalArgs& a) {
  const auto model = ugcs::kin::load_gripper(a.gripper);
  const ugcs::geom::TriMesh mesh = ugcs::geom::load_mesh(a.object);
  std::optional<ugcs::GripperPrint> print;
  if (!a.print.empty()) {
    print.emplace(ugcs::io::print_from(ugcs::io::read_json(a.print), model));
  } else {
    if (g.rays < 1000) throw ugcs::InvalidArgument("--rays must be at least 1000");
    const ugcs::SphereFit fit = ugcs::max_graspable_sphere(model);
    print.emplace(ugcs::build_print(model, fit.sphere, fit.capture_config, g.rays, {g.threads, a.gripper}));
  }

  ugcs::io::Metadata meta{g.seed, {{"object", a.object}, {"gripper", a.gripper}}};
  if (!a.print.empty()) meta.inputs.emplace_back("print", a.print);
  std::vector<ugcs::kin::GraspConfig> grasps;
  Json per_grasp = Json::array();
  for (const auto& path : a.grasps) {
    const Json j = ugcs::io::read_json(path);
    const ugcs::kin::GraspConfig q = ugcs::io::grasp_config_from(j, model);
    const ugcs::opt::QualityReport quality = ugcs::opt::quality_proxy(*print, model, q, mesh);
    per_grasp.push_back({{"file", path},
                         {"contacts", quality.contacts},
                         {"max_penetration", quality.max_penetration},
                         {"antipodal", quality.antipodal}});
    grasps.push_back(q);
    meta.inputs.emplace_back("grasp", path);
  }
  Json doc = {{"format", "ugcs.eval_report"},
              {"version", ugcs::io::kFormatVersion},
              {"gripper_id", model.name()},
              {"object_id", object_id_for(a.object)},
              {"grasps", per_grasp}};
  if (grasps.size() >= 2) doc["diversity"] = ugcs::opt::diversity(grasps);
  doc["metadata"] = ugcs::io::metadata_json(meta);
  const std::string text = ugcs::io::dump(doc);
  if (!a.out.empty()) ugcs::io::write_file_atomic(a.out, text);
  if (g.json || a.out.empty()) {
    std::cout << (g.json ? ugcs::io::dump(doc, false) + "\n" : text);
  } else {
    std::cout << grasps.size() << " grasps evaluated";
    if (doc.contains("diversity")) std::cout << ", diversity " << fmt(doc["diversity"].get<double>());
    std::cout << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unified gripper coordinate space toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Random seed recorded in every output")->each([&](const std::string&) {
    g.seed_given = true;
  });
  app.add_option("--threads", g.threads, "Worker threads for parallel outer loops")->check(CLI::PositiveNumber);
  app.add_option("--rays", g.rays, "Ray count for print construction");
  app.add_flag("--json", g.json, "Report on standard output as JSON");
  app.add_option("--config", g.config, "Optimization config (JSON)");

  MaxsphereArgs ms;
  auto* maxsphere = app.add_subcommand("maxsphere", "Find the maximal graspable sphere of a gripper");
  maxsphere->add_option("gripper", ms.gripper, "Gripper description")->required();
  maxsphere->add_option("-o,--out", ms.out, "Sphere report path");

  PrintArgs pa;
  auto* print = app.add_subcommand("print", "Build the gripper print");
  print->add_option("gripper", pa.gripper, "Gripper description")->required();
  print->add_option("-o,--out", pa.out, "Print path")->required();

  MapArgs ma;
  auto* map = app.add_subcommand("map", "Generate object coordinate maps from grasp records");
  map->add_option("print", ma.print, "Gripper print")->required();
  map->add_option("records", ma.records, "Grasp records (JSON lines)")->required();
  map->add_option("object", ma.object, "Object mesh")->required();
  map->add_option("-n,--samples", ma.samples, "Object surface samples");
  map->add_option("-o,--out-dir", ma.out_dir, "Output directory")->required();
  map->add_option("--gripper", ma.gripper, "Gripper description overriding the print's source");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Synthesize a grasp from a coordinate map");
  synth->add_option("--map", sa.map, "Coordinate map")->required();
  synth->add_option("--print", sa.print, "Gripper print")->required();
  synth->add_option("--gripper", sa.gripper, "Gripper description")->required();
  synth->add_option("--object", sa.object, "Object mesh")->required();
  synth->add_option("-o,--out", sa.out, "Grasp output path")->required();
  synth->add_option("--trace", sa.trace, "Per-iteration energy trace (CSV)");

  TransferArgs ta;
  auto* transfer = app.add_subcommand("transfer", "Transfer a grasp between grippers");
  transfer->add_option("--source-print", ta.source_print, "Source gripper print")->required();
  transfer->add_option("--source-grasp", ta.source_grasp, "Source grasp")->required();
  transfer->add_option("--source-gripper", ta.source_gripper, "Source gripper description")->required();
  transfer->add_option("--target-print", ta.target_print, "Target gripper print")->required();
  transfer->add_option("--target-gripper", ta.target_gripper, "Target gripper description")->required();
  transfer->add_option("-o,--out", ta.out, "Grasp output path")->required();

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate grasps with the quality proxy and diversity");
  eval->add_option("grasps", ea.grasps, "Grasp files")->required();
  eval->add_option("--object", ea.object, "Object mesh")->required();
  eval->add_option("--gripper", ea.gripper, "Gripper description")->required();
  eval->add_option("--print", ea.print, "Gripper print (built from the gripper when omitted)");
  eval->add_option("-o,--out", ea.out, "Report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*maxsphere) return run_maxsphere(g, ms);
    if (*print) return run_print(g, pa);
    if (*map) return run_map(g, ma);
    if (*synth) return run_synth(g, sa);
    if (*transfer) return run_transfer(g, ta);
    if (*eval) return run_eval(g, ea);
  } catch (const ugcs::opt::Diverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const ugcs::EmptyCorrespondence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEmptyCorrespondence;
  } catch (const ugcs::Uninitializable& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEmptyCorrespondence;
  } catch (const ugcs::SphereFitFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFitFailure;
  } catch (const ugcs::EmptyPrint& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFitFailure;
  } catch (const ugcs::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ugcs::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
