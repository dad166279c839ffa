#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powerdyn/converter/vsc.hpp"
#include "powerdyn/core/integrator.hpp"
#include "powerdyn/core/state_vector.hpp"
#include "powerdyn/machines/controls.hpp"
#include "powerdyn/machines/model22.hpp"
#include "powerdyn/machines/saturation.hpp"
#include "powerdyn/machines/simplified_sg.hpp"
#include "powerdyn/network/power_flow.hpp"
#include "powerdyn/network/solver.hpp"
#include "powerdyn/res/sources.hpp"

namespace powerdyn::sim {

using network::Complex;

struct StepContext {
  double t = 0.0;
  double h = 0.0;
  SimulationMode mode = SimulationMode::Emt;
  double omega_base = 0.0;
  double s_base_mva = 100.0;
};

/// A dynamic device attached to one network port. States live in the
/// shared StateVector; the device keeps only slot offsets and caches.
class Device {
 public:
  Device(std::string id, std::string port_id) : id_(std::move(id)), port_id_(std::move(port_id)) {}
  virtual ~Device() = default;

  const std::string& id() const { return id_; }
  const std::string& port_id() const { return port_id_; }
  /// Role of the device in the initial load flow.
  virtual network::PowerFlowSpec power_flow_spec(double s_base_mva) const = 0;
  /// Registers the states from the load-flow terminal conditions (system
  /// base) and returns the port source phasor.
  virtual Complex initialize(Complex v_terminal, Complex i_injected, StateVector& x,
                             const StepContext& ctx) = 0;
  /// Pushes the port source for time ctx.t (before the network solve).
  virtual void set_source(const StateVector& x, network::NetworkSolver& net, const StepContext& ctx) = 0;
  /// Derivatives at ctx.t after the network solve; refreshes signals.
  virtual void derivatives(const StateVector& x, std::span<double> dx,
                           const network::NetworkSolver& net, const StepContext& ctx) = 0;
  /// Clamps and sampled logic after an accepted step ending at ctx.t.
  virtual void post_step(StateVector& /*x*/, const StepContext& /*ctx*/) {}

  virtual std::vector<std::string> signal_names() const = 0;
  /// Signal values from the last derivatives() call, in signal_names() order.
  virtual std::span<const double> signals() const = 0;

  /// Removes the device from service (its port must be deactivated too).
  virtual void trip() { tripped_ = true; }
  bool tripped() const { return tripped_; }
  /// Changes the power setpoint (MW, Mvar); devices without one throw.
  virtual void set_setpoint(double p_mw, double q_mvar);

  void bind_port(int port) { port_ = port; }
  int port() const { return port_; }

 protected:
  std::string id_;
  std::string port_id_;
  int port_ = -1;
  bool tripped_ = false;
};

/// Common machine data: rating, controls and load-flow role.
struct MachineSetup {
  double s_rated_mva = 100.0;
  network::BusType bus_type = network::BusType::PV;
  double p_mw = 0.0;    // scheduled output (PV)
  double v_set = 1.0;   // scheduled terminal voltage
  machines::AvrParams avr;
  machines::GovernorParams governor;
};

/// Two-axis machine with one d damper and two q dampers, coupled to the
/// network as a voltage behind the average subtransient inductance. The
/// saliency and saturation differences enter the source with the previous
/// step's current.
class Model22Device final : public Device {
 public:
  Model22Device(std::string id, std::string port_id, MachineSetup setup, machines::Model22Params params,
                machines::SaturationParams saturation);

  /// Network port impedance on the system base.
  static std::pair<double, double> port_impedance(const machines::Model22Params& p, double s_rated_mva,
                                                  double s_base_mva);

  network::PowerFlowSpec power_flow_spec(double s_base_mva) const override;
  Complex initialize(Complex v_terminal, Complex i_injected, StateVector& x, const StepContext& ctx) override;
  void set_source(const StateVector& x, network::NetworkSolver& net, const StepContext& ctx) override;
  void derivatives(const StateVector& x, std::span<double> dx, const network::NetworkSolver& net,
                   const StepContext& ctx) override;
  void post_step(StateVector& x, const StepContext& ctx) override;
  std::vector<std::string> signal_names() const override;
  std::span<const double> signals() const override { return signals_; }

 private:
  machines::RotorFluxes rotor(const StateVector& x) const;

  MachineSetup setup_;
  machines::Model22Params params_;
  machines::SaturationParams sat_;
  double l_avg_ = 0.0;
  double k_ = 1.0;
  double i_d_prev_ = 0.0;  // machine base
  double i_q_prev_ = 0.0;
  double i_d_prev2_ = 0.0;
  double i_q_prev2_ = 0.0;
  double p_ref_ = 0.0;
  double v_ref_ = 1.0;
  std::size_t base_ = 0;  // fd d1 q1 q2 omega delta avr_v avr_i pm
  std::vector<double> signals_;
};

/// Classical machine: EMF behind transient reactance with a first-order
/// field and the swing equation.
class SimplifiedSGDevice final : public Device {
 public:
  SimplifiedSGDevice(std::string id, std::string port_id, MachineSetup setup,
                     machines::SimplifiedSGParams params);

  network::PowerFlowSpec power_flow_spec(double s_base_mva) const override;
  Complex initialize(Complex v_terminal, Complex i_injected, StateVector& x, const StepContext& ctx) override;
  void set_source(const StateVector& x, network::NetworkSolver& net, const StepContext& ctx) override;
  void derivatives(const StateVector& x, std::span<double> dx, const network::NetworkSolver& net,
                   const StepContext& ctx) override;
  std::vector<std::string> signal_names() const override;
  std::span<const double> signals() const override { return signals_; }

 private:
  MachineSetup setup_;
  machines::SimplifiedSGParams params_;
  double p_ref_ = 0.0;
  double v_ref_ = 1.0;
  std::size_t base_ = 0;  // omega e_s delta avr_v avr_i pm
  std::vector<double> signals_;
};

/// Grid-side converter with its renewable source. In EMT the converter is
/// a controlled voltage behind the filter; in phasor mode it injects its
/// reference current directly.
class VscDevice final : public Device {
 public:
  VscDevice(std::string id, std::string port_id, converter::VscParams params, res::ResConfig source,
            double p_mw, double q_mvar);

  network::PowerFlowSpec power_flow_spec(double s_base_mva) const override;
  Complex initialize(Complex v_terminal, Complex i_injected, StateVector& x, const StepContext& ctx) override;
  void set_source(const StateVector& x, network::NetworkSolver& net, const StepContext& ctx) override;
  void derivatives(const StateVector& x, std::span<double> dx, const network::NetworkSolver& net,
                   const StepContext& ctx) override;
  void post_step(StateVector& x, const StepContext& ctx) override;
  std::vector<std::string> signal_names() const override;
  std::span<const double> signals() const override { return signals_; }
  void set_setpoint(double p_mw, double q_mvar) override;

  const res::ResSource& source() const { return source_; }

 private:
  struct Slots {
    std::size_t pll_angle, pll_int, p_meas, q_meas, v_meas, p_int, q_int;
    std::optional<std::size_t> id_int, iq_int, v_dc, res;
  };
  /// Frequency, source demand and grid power reference from the states.
  struct Operating {
    double f_hz;
    double demand;
    double p_grid;
    converter::CurrentRef ref;
  };
  Operating operating(const StateVector& x, double v_q) const;
  converter::OuterState outer(const StateVector& x) const;

  converter::VscParams params_;
  res::ResSource source_;
  double p_set_ = 0.0;  // p.u. converter base
  double q_set_ = 0.0;
  double scale_ = 1.0;  // converter base current -> system base current
  Slots slots_{};
  double last_v_d_ = 1.0;
  double last_v_q_ = 0.0;
  converter::CurrentRef last_i_{};
  std::vector<double> signals_;
};

}  // namespace powerdyn::sim
