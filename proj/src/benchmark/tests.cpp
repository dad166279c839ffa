#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <thread>

#include "powerdyn/benchmark/benchmark.hpp"
#include "powerdyn/core/errors.hpp"

namespace powerdyn::benchmark {

std::vector<double> TestCase::disturbance_times() const {
  std::vector<double> times;
  for (const auto& e : events) {
    if (std::find(times.begin(), times.end(), e.time) == times.end()) times.push_back(e.time);
  }
  std::sort(times.begin(), times.end());
  return times;
}

TestCase make_test(int id) {
  using sim::Event;
  using sim::EventType;
  TestCase t;
  t.id = id;
  t.duration = 10.0;
  switch (id) {
    case 1:
      t.name = "setpoint tracking";
      t.duration = 5.0;
      t.events.push_back({1.0, EventType::Setpoint, "VSC", 100.0, 30.0});
      break;
    case 2:
      t.name = "load connection";
      t.loads.push_back({"LD6_step", "bus6", 100.0, 20.0, false});
      t.events.push_back({5.0, EventType::Connect, "LD6_step"});
      break;
    case 3:
      t.name = "symmetric fault";
      t.faults.push_back({"F_bus2", "bus2", "", 0.5, 5.0, network::FaultType::ThreePhase, 0});
      t.events.push_back({5.0, EventType::Connect, "F_bus2"});
      t.events.push_back({5.2, EventType::Disconnect, "F_bus2"});
      break;
    case 4:
      t.name = "asymmetric fault";
      t.faults.push_back({"F_bus1", "bus1", "", 0.5, 10.0, network::FaultType::SinglePhase, 1});
      t.events.push_back({5.0, EventType::Connect, "F_bus1"});
      t.events.push_back({5.5, EventType::Disconnect, "F_bus1"});
      break;
    case 5:
      t.name = "loss of generation";
      t.events.push_back({5.0, EventType::Trip, "G2"});
      t.events.push_back({5.0, EventType::Disconnect, "T2"});
      break;
    case 6:
      t.name = "line fault and isolation";
      t.faults.push_back({"F_L1-3", "", "L1-3", 0.5, 1.0, network::FaultType::ThreePhase, 0});
      t.breakers.push_back({"BR1-3a", "L1-3", true});
      t.breakers.push_back({"BR1-3b", "L1-3", false});
      t.events.push_back({5.0, EventType::Connect, "F_L1-3"});
      t.events.push_back({5.1, EventType::BreakerOpen, "BR1-3a"});
      t.events.push_back({5.1, EventType::BreakerOpen, "BR1-3b"});
      break;
    default:
      throw ConfigError("test id " + std::to_string(id) + " is not one of 1..6");
  }
  return t;
}

sim::RunResult run_test(const TestCase& test, const ModelSelection& selection, const MatrixOptions& options) {
  sim::System system = build_benchmark(selection, options.data_dir, &test);
  sim::RunOptions ro;
  ro.mode = selection.mode();
  ro.step = ro.mode == SimulationMode::Emt ? options.emt_step : options.phasor_step;
  ro.duration = test.duration;
  ro.output_interval = options.output_interval;
  ro.signals = options.signals;
  ro.discretization = options.discretization;
  sim::RunResult result = sim::simulate(system, test.events, ro);
  result.meta["test"] = std::to_string(test.id);
  result.meta["sg_model"] = to_string(selection.sg);
  result.meta["line_model"] = network::to_string(selection.line);
  result.meta["converter_model"] = to_string(selection.converter);
  result.meta["res_model"] = res::to_string(selection.res);
  result.meta["companion"] = network::to_string(options.discretization);
  std::string times;
  for (double t : test.disturbance_times()) {
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, t).ptr;
    if (!times.empty()) times += ',';
    times.append(buf, end);
  }
  result.meta["disturbance_times"] = times;
  return result;
}

namespace {

/// Rethrows the active exception with a (test, variant) prefix, keeping
/// its category so exit codes stay meaningful.
[[noreturn]] void rethrow_annotated(const std::string& where) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const NumericAbort& e) {
    throw NumericAbort(where + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(where + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
}

}  // namespace

std::vector<MatrixRun> run_matrix(const std::vector<int>& tests, const ModelSelection& base, Axis axis,
                                  const MatrixOptions& options) {
  std::vector<TestCase> cases;
  for (int id : tests) cases.push_back(make_test(id));
  const std::vector<ModelSelection> variants = axis_variants(base, axis);

  std::vector<MatrixRun> runs;
  for (const auto& v : variants) {
    for (const auto& c : cases) runs.push_back({c.id, v, {}});
  }

  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= runs.size()) return;
      {
        std::lock_guard lock(mutex);
        if (failure) return;
      }
      MatrixRun& run = runs[i];
      try {
        try {
          const auto& test = *std::find_if(cases.begin(), cases.end(), [&](const TestCase& c) {
            return c.id == run.test_id;
          });
          run.result = run_test(test, run.selection, options);
          run.result.meta["axis"] = to_string(axis);
          run.result.meta["variant"] = run.selection.variant(axis);
          run.result.meta["variant_index"] = std::to_string(i / cases.size());
        } catch (...) {
          rethrow_annotated("test " + std::to_string(run.test_id) + ", variant " + run.selection.variant(axis));
        }
        std::lock_guard lock(mutex);
        if (options.on_done) options.on_done(run);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(runs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return runs;
}

}  // namespace powerdyn::benchmark
