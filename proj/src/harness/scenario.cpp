#include "powerdyn/harness/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"
#include "powerdyn/core/errors.hpp"
#include "powerdyn/harness/csv.hpp"

namespace powerdyn::harness {

namespace fs = std::filesystem;
using nlohmann::json;

benchmark::MatrixOptions ScenarioConfig::matrix_options() const {
  benchmark::MatrixOptions o;
  o.data_dir = data_dir;
  o.emt_step = emt_step;
  o.phasor_step = phasor_step;
  o.output_interval = output_interval;
  o.signals = signals;
  o.discretization = companion;
  o.workers = workers;
  return o;
}

namespace {

const std::set<std::string> kKeys{"data",    "test",   "tests",  "duration", "models",  "step",
                                  "output_interval",   "signals", "output",   "seed",    "repeats",
                                  "workers", "transient_window_s", "events",  "loads",   "faults",  "companion"};

/// Collects problems instead of throwing so a config reports everything
/// wrong with it at once.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  template <class T>
  bool get(const json& j, const std::string& key, T& out, const std::string& where) {
    if (!j.contains(key)) return false;
    try {
      out = j.at(key).get<T>();
      return true;
    } catch (const json::exception&) {
      problems_.push_back(where + key + ": wrong type");
      return false;
    }
  }

  template <class T>
  bool require(const json& j, const std::string& key, T& out, const std::string& where) {
    if (!j.contains(key)) {
      problems_.push_back(where + key + ": missing");
      return false;
    }
    return get(j, key, out, where);
  }

  template <class F>
  void tag(const json& j, const std::string& key, const std::string& where, F&& apply) {
    std::string value;
    if (!get(j, key, value, where)) return;
    try {
      apply(value);
    } catch (const ConfigError& e) {
      problems_.push_back(where + key + ": " + e.what());
    }
  }

 private:
  std::vector<std::string>& problems_;
};

}  // namespace

ScenarioConfig load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path.string() + ": top level must be an object");

  std::vector<std::string> problems;
  Reader r(problems);
  ScenarioConfig cfg;
  cfg.source = path;
  const fs::path base = path.parent_path();

  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) problems.push_back("unknown key '" + key + "'");
  }

  std::string data = "..";
  r.get(doc, "data", data, "");
  cfg.data_dir = (base / data).lexically_normal();

  int test_id = 1;
  r.require(doc, "test", test_id, "");
  try {
    cfg.test = benchmark::make_test(test_id);
  } catch (const ConfigError& e) {
    problems.push_back(std::string("test: ") + e.what());
    cfg.test.id = test_id;
  }
  cfg.tests = {test_id};
  if (r.get(doc, "tests", cfg.tests, "")) {
    for (int id : cfg.tests) {
      if (id < 1 || id > 6) problems.push_back("tests: id " + std::to_string(id) + " is not one of 1..6");
    }
  }
  r.get(doc, "duration", cfg.test.duration, "");
  if (cfg.test.duration < 0.0) problems.push_back("duration: must not be negative");

  if (doc.contains("models")) {
    const json& m = doc.at("models");
    for (const auto& [key, value] : m.items()) {
      if (key != "sg" && key != "line" && key != "converter" && key != "res") {
        problems.push_back("models: unknown key '" + key + "'");
      }
    }
    r.tag(m, "sg", "models.", [&](const std::string& v) { cfg.models.sg = benchmark::parse_sg_model(v); });
    r.tag(m, "line", "models.", [&](const std::string& v) { cfg.models.line = network::parse_line_model(v); });
    r.tag(m, "converter", "models.",
          [&](const std::string& v) { cfg.models.converter = benchmark::parse_converter_model(v); });
    r.tag(m, "res", "models.", [&](const std::string& v) { cfg.models.res = res::parse_res_kind(v); });
  }

  if (doc.contains("step")) {
    r.get(doc.at("step"), "emt", cfg.emt_step, "step.");
    r.get(doc.at("step"), "phasor", cfg.phasor_step, "step.");
  }
  for (auto [mode, h] : {std::pair{SimulationMode::Emt, cfg.emt_step}, std::pair{SimulationMode::Phasor, cfg.phasor_step}}) {
    try {
      IntegratorConfig{h, mode}.validate();
    } catch (const ConfigError& e) {
      problems.push_back(std::string("step: ") + e.what());
    }
  }
  r.get(doc, "output_interval", cfg.output_interval, "");
  if (cfg.output_interval < 0.0) problems.push_back("output_interval: must not be negative");
  std::string companion;
  if (r.get(doc, "companion", companion, "")) {
    try {
      cfg.companion = network::parse_discretization(companion);
    } catch (const ConfigError& e) {
      problems.push_back(std::string("companion: ") + e.what());
    }
  }
  r.get(doc, "signals", cfg.signals, "");
  std::string output = path.stem().string() + ".csv";
  r.get(doc, "output", output, "");
  cfg.output = output;
  r.get(doc, "seed", cfg.seed, "");
  r.get(doc, "repeats", cfg.repeats, "");
  if (cfg.repeats < 1) problems.push_back("repeats: must be at least 1");
  r.get(doc, "workers", cfg.workers, "");
  if (cfg.workers < 1) problems.push_back("workers: must be at least 1");
  r.get(doc, "transient_window_s", cfg.window_s, "");

  if (doc.contains("events")) {
    cfg.test.events.clear();
    std::size_t k = 0;
    for (const json& e : doc.at("events")) {
      const std::string where = "events[" + std::to_string(k++) + "].";
      sim::Event ev;
      r.require(e, "time", ev.time, where);
      r.require(e, "target", ev.target, where);
      r.get(e, "p_mw", ev.p_mw, where);
      r.get(e, "q_mvar", ev.q_mvar, where);
      if (!e.contains("type")) problems.push_back(where + "type: missing");
      r.tag(e, "type", where, [&](const std::string& v) { ev.type = sim::parse_event_type(v); });
      cfg.test.events.push_back(ev);
    }
  }
  if (doc.contains("loads")) {
    std::size_t k = 0;
    for (const json& l : doc.at("loads")) {
      const std::string where = "loads[" + std::to_string(k++) + "].";
      network::Load load;
      r.require(l, "id", load.id, where);
      r.require(l, "bus", load.bus, where);
      r.require(l, "p_mw", load.p_mw, where);
      r.require(l, "q_mvar", load.q_mvar, where);
      r.get(l, "connected", load.connected, where);
      cfg.test.loads.push_back(load);
    }
  }
  if (doc.contains("faults")) {
    std::size_t k = 0;
    for (const json& f : doc.at("faults")) {
      const std::string where = "faults[" + std::to_string(k++) + "].";
      network::Fault fault;
      r.require(f, "id", fault.id, where);
      r.get(f, "bus", fault.bus, where);
      r.get(f, "line", fault.line, where);
      r.get(f, "line_fraction", fault.line_fraction, where);
      r.require(f, "r_ohm", fault.r_ohm, where);
      std::string type = "three_phase";
      r.get(f, "type", type, where);
      if (type == "single_phase") {
        fault.type = network::FaultType::SinglePhase;
      } else if (type != "three_phase") {
        problems.push_back(where + "type: '" + type + "' must be three_phase or single_phase");
      }
      r.get(f, "phase", fault.phase, where);
      cfg.test.faults.push_back(fault);
    }
  }

  // A zero-length run fires nothing, so its events are dropped rather than
  // rejected.
  if (cfg.test.duration == 0.0) cfg.test.events.clear();
  for (const auto& e : cfg.test.events) {
    if (e.time < 0.0 || e.time >= cfg.test.duration) {
      problems.push_back("event '" + e.target + "' at " + format_double(e.time) +
                         " s must lie before the end of the run (" + format_double(cfg.test.duration) + " s)");
    }
  }

  // Referenced buses, lines and devices are checked by assembling the
  // system once.
  if (problems.empty()) {
    try {
      (void)benchmark::build_benchmark(cfg.models, cfg.data_dir, &cfg.test);
    } catch (const ConfigError& e) {
      if (e.problems().empty()) {
        problems.push_back(e.what());
      } else {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
      }
    }
  }
  if (!problems.empty()) {
    for (auto& p : problems) p = path.filename().string() + ": " + p;
    throw ConfigError(problems);
  }
  return cfg;
}

sim::RunResult run_scenario(const ScenarioConfig& config) {
  sim::RunResult result = benchmark::run_test(config.test, config.models, config.matrix_options());
  // Repeats only sharpen the timing; the samples are identical.
  for (int k = 1; k < config.repeats; ++k) {
    const sim::RunResult again = benchmark::run_test(config.test, config.models, config.matrix_options());
    result.wall_seconds = std::min(result.wall_seconds, again.wall_seconds);
  }
  result.meta["repeats"] = std::to_string(config.repeats);
  result.meta["scenario"] = config.source.filename().string();
  result.meta["seed"] = std::to_string(config.seed);
  write_csv(result, config.output);
  write_meta(result, config.output);
  return result;
}

}  // namespace powerdyn::harness
