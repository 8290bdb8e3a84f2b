// Copyright 2026 The spatialrt Authors
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

// spatialrt command-line tool. Exit status: 0 success, 1 runtime failure,
// 2 usage error; `check --exit-by-verdict` exits 3 when unsatisfied.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spatialrt/checker.hpp"
#include "spatialrt/checker_service.hpp"
#include "spatialrt/cost.hpp"
#include "spatialrt/deployments.hpp"
#include "spatialrt/fixtures.hpp"
#include "spatialrt/http.hpp"
#include "spatialrt/ingest.hpp"
#include "spatialrt/model_io.hpp"
#include "spatialrt/records.hpp"
#include "spatialrt/replay.hpp"
#include "spatialrt/workload.hpp"

namespace srt = spatialrt;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return in;
}

// Writes to `path`, or stdout for "-" / empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

srt::ClosureModel load_model(const std::string& spec) {
  if (spec == "mini-city") return srt::fixtures::mini_city();
  auto in = open_in(spec);
  return srt::read_model(in);
}

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

srt::json summary_json(const srt::StatSummary& s, const srt::SlaConfig& sla) {
  auto os = [](const srt::OrderStats& o) { return srt::json{{"max", o.max}, {"min", o.min}, {"median", o.median}}; };
  return {{"count", s.count},
          {"sla_s", sla.threshold},
          {"total", os(s.total)},
          {"wait", os(s.wait)},
          {"compute", os(s.compute)},
          {"violations_total", s.violations_total},
          {"violations_median", s.violations_median},
          {"timeouts", s.timeouts},
          {"errors", s.errors}};
}

std::string summary_table(const srt::StatSummary& s) {
  std::ostringstream o;
  o << "            max        min     median\n";
  auto row = [&](const char* name, const srt::OrderStats& x) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-8s %9.3f  %9.3f  %9.3f\n", name, x.max, x.min, x.median);
    o << buf;
  };
  row("total", s.total);
  row("wait", s.wait);
  row("compute", s.compute);
  o << "requests: " << s.count << "  timeouts: " << s.timeouts << "  errors: " << s.errors << '\n';
  o << "violations_total: " << s.violations_total << '\n';
  o << "violations_median: " << (s.violations_median ? "true" : "false") << '\n';
  return o.str();
}

srt::sim::DeploymentSet deployment_set(const std::string& config) {
  if (config.empty()) return srt::sim::beijing_2008();
  if (config.find('/') == std::string::npos && config.find('.') == std::string::npos)
    return srt::sim::builtin_deployments(config);
  auto in = open_in(config);
  return srt::sim::deployments_from_json(srt::json::parse(in));
}

const srt::sim::Deployment& pick_deployment(const srt::sim::DeploymentSet& set, const std::string& name) {
  auto it = set.find(name);
  if (it == set.end()) throw UsageError("unknown deployment '" + name + "'");
  return it->second;
}

int report(std::vector<srt::RequestRecord> records, const srt::SlaConfig& sla, const std::string& records_out,
           bool as_json, const srt::sim::SimResult* sim) {
  srt::mark_sla(records, sla);
  if (!records_out.empty()) {
    std::ostringstream o;
    srt::write_records(o, records);
    emit(records_out, o.str());
  }
  const auto s = srt::summarize(records, sla);
  if (as_json) {
    auto j = summary_json(s, sla);
    if (sim && sim->hybrid) {
      j["routed_baseline"] = sim->routed_baseline;
      j["routed_elastic"] = sim->routed_elastic;
      j["routing_fraction"] = srt::sim::routing_fraction(*sim);
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << summary_table(s);
    if (sim && sim->hybrid)
      std::cout << "routed baseline/elastic: " << sim->routed_baseline << '/' << sim->routed_elastic
                << "  fraction elastic: " << fmt(srt::sim::routing_fraction(*sim)) << '\n';
  }
  return 0;
}

volatile std::sig_atomic_t g_stop = 0;

void wait_for_signal() {
  std::signal(SIGINT, [](int) { g_stop = 1; });
  std::signal(SIGTERM, [](int) { g_stop = 1; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial runtime verification toolkit"};
  app.require_subcommand(1);

  double sla_s = 30;
  double rate = 1;
  std::uint64_t seed = 0;
  bool as_json = false;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "match trajectories to POIs and build an accessibility model");
  std::string pois_path, traj_path, presences_out, model_out;
  double radius = srt::kDefaultMatchRadiusMeters;
  bool lonlat = false;
  ingest->add_option("--pois", pois_path, "POI CSV")->required()->check(CLI::ExistingFile);
  ingest->add_option("--trajectories", traj_path, "trajectory CSV")->required()->check(CLI::ExistingFile);
  ingest->add_flag("--lonlat", lonlat, "coordinates are longitude first (T-Drive)");
  ingest->add_option("--radius", radius, "match radius in meters")->capture_default_str();
  ingest->add_option("--presences", presences_out, "write presence CSV here");
  ingest->add_option("--model", model_out, "write the model file here");

  // build-model
  auto* build = app.add_subcommand("build-model", "build a model from presences or synthetically");
  std::string build_pois, build_presences, build_out = "-";
  std::vector<std::size_t> synth_sizes;
  build->add_option("--pois", build_pois, "POI CSV")->check(CLI::ExistingFile);
  build->add_option("--presences", build_presences, "presence CSV")->check(CLI::ExistingFile);
  build->add_option("--synth", synth_sizes, "nodes edges assignments")->expected(3);
  build->add_option("--seed", seed);
  build->add_option("--out", build_out, "model file (default stdout)");

  // check
  auto* check = app.add_subcommand("check", "evaluate a formula against a model");
  std::string check_model, formula, snapshot_path, presence_prop = "taxi";
  std::vector<std::string> at;
  bool points = false, by_verdict = false;
  check->add_option("--model", check_model, "model file or 'mini-city'")->required();
  check->add_option("--formula", formula, "formula text or P1/P2/P3/bike-route")->required();
  check->add_option("--snapshot", snapshot_path, "snapshot JSON file")->check(CLI::ExistingFile);
  check->add_option("--at", at, "entity=poi presence, repeatable");
  check->add_option("--presence-prop", presence_prop)->capture_default_str();
  check->add_flag("--points", points, "print satisfying points");
  check->add_flag("--exit-by-verdict", by_verdict, "exit 3 when unsatisfied");

  // serve-cache
  auto* cache = app.add_subcommand("serve-cache", "run the location-cache service");
  std::string host = "127.0.0.1";
  int port = 8081;
  double horizon = 0;
  cache->add_option("--host", host)->capture_default_str();
  cache->add_option("--port", port)->capture_default_str();
  cache->add_option("--horizon", horizon, "drop entities unseen for this many seconds (0 = off)");

  // serve-checker
  auto* checker = app.add_subcommand("serve-checker", "run the model-checker service");
  std::string serve_model, cache_url;
  srt::CheckerOptions copts;
  int checker_port = 8080;
  checker->add_option("--model", serve_model, "model file or 'mini-city'")->required();
  checker->add_option("--cache-url", cache_url, "location-cache base URL");
  checker->add_option("--workers", copts.workers)->capture_default_str();
  checker->add_option("--queue", copts.queue_capacity)->capture_default_str();
  checker->add_option("--host", host)->capture_default_str();
  checker->add_option("--port", checker_port)->capture_default_str();

  // replay / simulate share most flags
  std::string trace_path, target, deployment = "monolith", config, records_out;
  std::size_t concurrency = 64;
  auto* replay = app.add_subcommand("replay", "replay a trace against a service URL or sim:NAME");
  replay->add_option("--trace", trace_path)->required()->check(CLI::ExistingFile);
  replay->add_option("--target", target, "http://host:port or sim:NAME")->required();
  replay->add_option("--rate", rate, "rate multiplier")->capture_default_str();
  replay->add_option("--sla", sla_s)->capture_default_str();
  replay->add_option("--config", config, "deployment set JSON or built-in name");
  replay->add_option("--concurrency", concurrency)->capture_default_str();
  replay->add_option("--records", records_out, "write per-request CSV");
  replay->add_option("--seed", seed);
  replay->add_flag("--json", as_json);

  auto* simulate = app.add_subcommand("simulate", "simulate a deployment on a trace");
  simulate->add_option("--deployment", deployment)->capture_default_str();
  simulate->add_option("--trace", trace_path)->required()->check(CLI::ExistingFile);
  simulate->add_option("--rate", rate, "rate multiplier")->capture_default_str();
  simulate->add_option("--sla", sla_s)->capture_default_str();
  simulate->add_option("--config", config, "deployment set JSON or built-in name (default beijing-2008)");
  simulate->add_option("--records", records_out, "write per-request CSV");
  simulate->add_option("--seed", seed);
  simulate->add_flag("--json", as_json);

  // cost
  auto* cost = app.add_subcommand("cost", "estimate deployment cost from a pricing plan");
  std::string plan_path;
  cost->add_option("--plan", plan_path, "plan JSON")->required()->check(CLI::ExistingFile);
  cost->add_flag("--json", as_json);

  // synth
  auto* synth = app.add_subcommand("synth", "generate synthetic traces or models");
  std::string what = "hour", synth_out = "-", poi_model;
  std::size_t count = 536, entities = 100;
  double duration = 3600;
  synth->add_option("--what", what, "hour | day | model")->check(CLI::IsMember({"hour", "day", "model"}))
      ->capture_default_str();
  synth->add_option("--count", count, "requests in an hour trace")->capture_default_str();
  synth->add_option("--duration", duration, "trace length in seconds")->capture_default_str();
  synth->add_option("--entities", entities)->capture_default_str();
  synth->add_option("--pois-from", poi_model, "draw POIs from this model's points");
  synth->add_option("--sizes", synth_sizes, "model: nodes edges assignments")->expected(3);
  synth->add_option("--seed", seed);
  synth->add_option("--out", synth_out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) {
      auto pin = open_in(pois_path);
      const auto pois = srt::read_pois(pin);
      auto tin = open_in(traj_path);
      const auto samples = srt::read_trajectories(tin, lonlat);
      const auto presences = srt::match_presences(pois, samples, radius);
      if (!presences_out.empty()) {
        std::ostringstream o;
        srt::write_presences(o, presences);
        emit(presences_out, o.str());
      }
      const auto model = srt::model_from_catalog(srt::build_accessibility(presences, pois), pois);
      if (!model_out.empty()) emit(model_out, model.serialize());
      std::cerr << "presences: " << presences.size() << "  points: " << model.space().size()
                << "  edges: " << model.space().edge_count() << '\n';
      return 0;
    }

    if (*build) {
      srt::ClosureModel model = [&] {
        if (!synth_sizes.empty()) return srt::synth_model(synth_sizes[0], synth_sizes[1], synth_sizes[2], seed);
        if (build_pois.empty() || build_presences.empty())
          throw UsageError("build-model needs --synth or both --pois and --presences");
        auto pin = open_in(build_pois);
        const auto pois = srt::read_pois(pin);
        auto ein = open_in(build_presences);
        return srt::model_from_catalog(srt::build_accessibility(srt::read_presences(ein), pois), pois);
      }();
      emit(build_out, model.serialize());
      std::cerr << "version: " << model.version_string() << '\n';
      return 0;
    }

    if (*check) {
      const auto model = load_model(check_model);
      srt::Snapshot snap;
      if (!snapshot_path.empty()) {
        auto in = open_in(snapshot_path);
        snap = srt::snapshot_from_json(srt::json::parse(in));
      }
      for (const auto& a : at) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == a.size())
          throw UsageError("--at expects entity=poi, got '" + a + "'");
        const std::string entity = a.substr(0, eq);
        snap.entities[entity] = {entity, a.substr(eq + 1), 0};
      }
      const auto refreshed = srt::to_valuation(snap, model, presence_prop);
      if (refreshed.unknown_pois > 0) std::cerr << "warning: " << refreshed.unknown_pois << " unknown POIs skipped\n";
      srt::Formula f = [&] {
        try {
          return srt::parse_formula(srt::resolve_formula(formula));
        } catch (const srt::FormulaSyntaxError& e) {
          throw UsageError(e.what());
        }
      }();
      const auto sat = srt::sat(refreshed.model, f);
      std::cout << "satisfied: " << (sat.empty() ? "false" : "true") << '\n';
      if (points) {
        std::cout << "points:";
        for (const auto& n : model.space().names_of(sat)) std::cout << ' ' << n;
        std::cout << '\n';
      }
      return by_verdict && sat.empty() ? 3 : 0;
    }

    if (*cache) {
      srt::LocationStore store(horizon > 0 ? std::optional<double>(horizon) : std::nullopt);
      srt::http::BackgroundServer srv([&](httplib::Server& s) { srt::http::register_cache_routes(s, store); }, host,
                                      port);
      std::cerr << "location-cache listening on " << srv.url() << '\n';
      wait_for_signal();
      return 0;
    }

    if (*checker) {
      const auto model = load_model(serve_model);
      srt::SnapshotSource source;
      if (!cache_url.empty()) source = srt::http::cache_snapshot_source(cache_url);
      srt::CheckerService service(model, copts, source);
      srt::http::BackgroundServer srv([&](httplib::Server& s) { srt::http::register_checker_routes(s, service); },
                                      host, checker_port);
      std::cerr << "model-checker listening on " << srv.url() << "  model " << service.model_version() << '\n';
      wait_for_signal();
      return 0;
    }

    const srt::SlaConfig sla(sla_s);

    if (*replay || *simulate) {
      auto in = open_in(trace_path);
      const auto trace = srt::read_trace(in);
      if (trace.empty()) throw UsageError("trace is empty");
      if (*replay && target.rfind("sim:", 0) != 0) {
        srt::HttpReplayOptions ro;
        ro.concurrency = concurrency;
        return report(srt::replay_http(trace, rate, target, ro), sla, records_out, as_json, nullptr);
      }
      const std::string name = *replay ? target.substr(4) : deployment;
      const auto set = deployment_set(config);
      const auto result = srt::replay_sim(trace, rate, pick_deployment(set, name), seed);
      return report(result.records, sla, records_out, as_json, &result);
    }

    if (*cost) {
      auto in = open_in(plan_path);
      const auto plans = srt::cost_plans_from_json(srt::json::parse(in));
      srt::json out = srt::json::object();
      for (const auto& [name, plan] : plans) {
        const auto e = srt::estimate_cost(plan);
        if (as_json) {
          out[name] = {{"per_period", e.per_period}, {"daily", e.daily}, {"monthly", e.monthly}};
          continue;
        }
        std::cout << name << '\n';
        for (std::size_t i = 0; i < e.per_period.size(); ++i)
          std::cout << "  " << plan.periods[i].label << "  " << fmt(e.per_period[i]) << '\n';
        std::cout << "  daily    " << fmt(e.daily, 2) << "\n  monthly  " << fmt(e.monthly, 2) << '\n';
      }
      if (as_json) std::cout << out.dump(2) << '\n';
      return 0;
    }

    if (*synth) {
      if (what == "model") {
        if (synth_sizes.empty()) synth_sizes = {5152, 36805, 15456};
        emit(synth_out, srt::synth_model(synth_sizes[0], synth_sizes[1], synth_sizes[2], seed).serialize());
        return 0;
      }
      srt::TraceOptions to;
      to.seed = seed;
      to.entities = entities;
      if (!poi_model.empty()) to.pois = load_model(poi_model).space().ids();
      srt::WorkloadTrace trace;
      if (what == "hour") {
        trace = srt::steady_trace(count, duration, to);
      } else {
        const auto profile = srt::fit_sine_profile({312, 1283, 1663, 1676, 1668, 1202, 705, 355}, 6);
        trace = srt::synth_trace(profile, duration == 3600 ? 86400 : duration, to);
      }
      std::ostringstream o;
      srt::write_trace(o, trace);
      emit(synth_out, o.str());
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
