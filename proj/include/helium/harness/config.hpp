#pragma once

// Experiment description and its INI-style text form:
//
//   [section]
//   key = value   # comment
//
// Unknown sections or keys are errors; every error names its line.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "helium/device_model.hpp"
#include "helium/ising/chain.hpp"
#include "helium/readout.hpp"

namespace helium::harness {

enum class ExperimentKind { Device, Spectrum, Quench, Readout, Disorder, Sweep };
const char* to_string(ExperimentKind k);
ExperimentKind kind_from_string(const std::string& s);

inline constexpr std::uint64_t kDefaultSeed = 24301;  // 0x5eed

struct DeviceSpec {
  double a_nm = 0.0;
  double d_nm = 0.0;
  double h_nm = 0.0;
  double lambda_nm = 0.0;
  double eps_r = 1.06;
  double temperature_K = 0.1;
  int n_sites = 100;

  DeviceGeometry geometry() const;
  bool operator==(const DeviceSpec&) const = default;
};

struct ChainSpec {
  int n = 100;
  ising::Boundary boundary = ising::Boundary::Open;
  /// Absent values are derived from the [device] block.
  std::optional<double> Gamma_K;
  std::optional<double> J_K;
  double gammaz_K = 0.0;
  bool operator==(const ChainSpec&) const = default;
};

enum class QuenchMethod { Auto, Dense, Quadratic };

struct ScheduleSpec {
  double tauQ = 1.0;
  std::string profile = "linear";
  /// Absent start means 5 J.
  std::optional<double> Gamma_start_K;
  double Gamma_end_K = 0.0;
  QuenchMethod method = QuenchMethod::Auto;
  double tolerance = 1e-6;
  bool operator==(const ScheduleSpec&) const = default;
};

struct ElectrodeSpec {
  double R_um = 100.0;
  double sep_mm = 1.0;
  double V_uV = 1.0;

  readout::ElectrodeConfig config() const;
  bool operator==(const ElectrodeSpec&) const = default;
};

struct DisorderSpec {
  double W_Gamma_K = 0.0;
  double W_J_K = 0.0;
  double W_gammaz_K = 0.0;
  int samples = 1;
  bool operator==(const DisorderSpec&) const = default;
};

struct SweepAxis {
  std::string key;                  // section.key
  std::vector<std::string> values;  // raw text, applied like --set
  bool operator==(const SweepAxis&) const = default;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Device;
  /// Kind run at every point of a sweep.
  std::optional<ExperimentKind> sweep_base;
  std::uint64_t seed = kDefaultSeed;
  std::optional<DeviceSpec> device;
  std::optional<ChainSpec> chain;
  std::optional<ScheduleSpec> schedule;
  std::optional<ElectrodeSpec> electrodes;
  std::optional<DisorderSpec> disorder;
  std::vector<SweepAxis> sweep_axes;
  std::string output;  // not part of the text form; set by the caller

  bool operator==(const ExperimentSpec&) const = default;
};

/// Parses the text form. Throws ConfigError (with line number) on syntax
/// errors, unknown sections/keys, bad values and missing required keys.
ExperimentSpec parse_config(const std::string& text);

/// Canonical text form; parse_config(render_config(s)) == s up to `output`.
std::string render_config(const ExperimentSpec& spec);

/// Sets one `section.key` to a raw value, creating the section with its
/// defaults if needed. Used for --set overrides and sweep axes.
void set_value(ExperimentSpec& spec, const std::string& dotted_key, const std::string& value);

/// Checks blocks required by the kind and value ranges; throws ConfigError.
void validate(const ExperimentSpec& spec);

}  // namespace helium::harness
