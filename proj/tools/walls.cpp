#include "wallspace/ball.hpp"
#include "wallspace/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace wallspace;

namespace {

struct Flags {
  std::string config;
  std::string spec;
  int radius = 0;
  std::string base;
  std::string report;
  std::string svg;
  std::size_t cap = 0;
  std::string checks;
  bool serial = false;
};

struct Options {
  CLI::Option* spec = nullptr;
  CLI::Option* radius = nullptr;
  CLI::Option* base = nullptr;
  CLI::Option* report = nullptr;
  CLI::Option* svg = nullptr;
  CLI::Option* cap = nullptr;
  CLI::Option* checks = nullptr;
};

Options add_common(CLI::App* sub, Flags& f) {
  Options o;
  sub->add_option("--config", f.config, "JSON config file; flags override its fields");
  o.spec = sub->add_option("--spec", f.spec, "complex spec file");
  o.radius = sub->add_option("--radius", f.radius, "ball radius");
  o.base = sub->add_option("--base", f.base, "base vertex, e.g. v0");
  o.report = sub->add_option("--report", f.report, "report JSON path");
  o.svg = sub->add_option("--svg", f.svg, "directory for SVG figures");
  o.cap = sub->add_option("--cap", f.cap, "cell cap for the ball development");
  o.checks = sub->add_option("--checks", f.checks, "comma separated subset of checks");
  sub->add_flag("--serial", f.serial, "use the serial kernels");
  return o;
}

std::vector<std::string> split_checks(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

PipelineConfig make_config(const Flags& f, const Options& o, std::vector<std::string> default_checks) {
  PipelineConfig c;
  c.checks = std::move(default_checks);
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot read config " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    c = config_from_json(j, c);
  }
  if (o.spec->count()) c.spec_path = f.spec;
  if (o.radius->count()) c.radius = f.radius;
  if (o.base->count()) c.base = f.base;
  if (o.report->count()) c.report_path = f.report;
  if (o.svg->count()) c.svg_dir = f.svg;
  if (o.cap->count()) c.cell_cap = f.cap;
  if (o.checks->count()) c.checks = split_checks(f.checks);
  if (f.serial) c.exec = Exec::Serial;
  return c;
}

void print_summary(const Report& rep, const PipelineConfig& c) {
  const auto& body = rep.body;
  if (body.contains("ball")) std::cout << "ball " << body["ball"].dump() << "\n";
  if (body.contains("checks"))
    for (const auto& name : body["input"]["checks"]) {
      const auto& r = body["checks"][name.get<std::string>()];
      std::cout << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << name.get<std::string>() << "\n";
    }
  if (body.contains("figures")) std::cout << "figures " << body["figures"].size() << " in " << c.svg_dir << "\n";
  if (!c.report_path.empty()) std::cout << "report " << c.report_path << " (" << rep.body_hash() << ")\n";
  std::cout << (rep.pass ? "all checks passed" : "some checks failed") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wall space verification toolkit for piecewise Euclidean 2-complexes"};
  app.require_subcommand(1);
  Flags f;
  auto* build = app.add_subcommand("build", "develop the ball and report its cell counts and homology");
  auto* check = app.add_subcommand("check", "run the link, spectral, wall, separation and properness checks");
  auto* cubulate = app.add_subcommand("cubulate", "crossing graph and dual cube complex");
  auto* render = app.add_subcommand("render", "write SVG developments of flat patches and wall strips");
  auto* all = app.add_subcommand("all", "every check, plus figures when --svg is given");
  Options ob = add_common(build, f), oc = add_common(check, f), ou = add_common(cubulate, f),
          orr = add_common(render, f), oa = add_common(all, f);
  CLI11_PARSE(app, argc, argv);

  const auto& every = known_checks();
  std::vector<std::string> checks_only(every.begin(), every.end() - 1);
  try {
    if (build->parsed()) {
      auto c = make_config(f, ob, {});
      auto rep = run_build(c);
      print_summary(rep, c);
      return rep.pass ? 0 : 1;
    }
    if (render->parsed()) {
      auto c = make_config(f, orr, {"walls"});
      auto files = run_render(c);
      for (const auto& name : files) std::cout << name << "\n";
      return 0;
    }
    PipelineConfig c;
    if (check->parsed()) c = make_config(f, oc, checks_only);
    else if (cubulate->parsed()) c = make_config(f, ou, {"cubulate"});
    else c = make_config(f, oa, every);
    if (!all->parsed()) c.svg_dir.clear();
    auto rep = run_pipeline(c);
    print_summary(rep, c);
    return rep.pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BuildError& e) {
    std::cerr << "build error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
