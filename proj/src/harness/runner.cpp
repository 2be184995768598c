#include "helium/harness/runner.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "helium/constants.hpp"
#include "helium/errors.hpp"
#include "helium/ising.hpp"
#include "helium/numerics/random.hpp"
#include "helium/readout.hpp"
#include "helium/schrodinger.hpp"

namespace helium::harness {

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr const char* kVarianceNote =
    "fluctuation variance = (volts per spin)^2 * sum_ij <sz_i sz_j>; the single coupling constant is a modelling choice";

using R = ColumnType;

const std::map<ExperimentKind, std::vector<Column>>& column_table() {
  static const std::map<ExperimentKind, std::vector<Column>> table = {
      {ExperimentKind::Device,
       {{"a_nm", R::Real}, {"d_nm", R::Real}, {"h_nm", R::Real}, {"lambda_nm", R::Real},
        {"is_double_well", R::Integer}, {"y_min_nm", R::Real}, {"U0_K", R::Real}, {"hbar_omega_K", R::Real},
        {"hbar_omega_numeric_K", R::Real}, {"E0_K", R::Real}, {"tunnel_action", R::Real}, {"Gamma_K", R::Real},
        {"Gamma_oracle_K", R::Real}, {"oracle_localization", R::Real}, {"oracle_two_level", R::Integer},
        {"J_K", R::Real}, {"J_taylor_K", R::Real}, {"field_V_per_m", R::Real}, {"gamma_K", R::Real},
        {"repulsion_K", R::Real}, {"binding_K", R::Real}, {"stable", R::Integer}, {"hierarchy_pass", R::Integer},
        {"note", R::Text}, {"error", R::Text}}},
      {ExperimentKind::Spectrum,
       {{"n", R::Integer}, {"boundary", R::Text}, {"Gamma_K", R::Real}, {"J_K", R::Real}, {"gammaz_K", R::Real},
        {"method", R::Text}, {"ground_energy_K", R::Real}, {"gap_K", R::Real}, {"sector_gap_K", R::Real},
        {"ground_parity", R::Integer}, {"ground_energy_ed_K", R::Real}, {"chi_per_K", R::Real},
        {"chi_non_analytic", R::Integer}, {"error", R::Text}}},
      {ExperimentKind::Quench,
       {{"n", R::Integer}, {"boundary", R::Text}, {"tauQ", R::Real}, {"Gamma_start_K", R::Real},
        {"Gamma_end_K", R::Real}, {"J_K", R::Real}, {"gammaz_K", R::Real}, {"method", R::Text},
        {"kink_density", R::Real}, {"steps", R::Integer}, {"step_change", R::Real}, {"error", R::Text}}},
      {ExperimentKind::Readout,
       {{"n", R::Integer}, {"Gamma_K", R::Real}, {"J_K", R::Real}, {"field_V_per_m", R::Real}, {"gamma_K", R::Real},
        {"mean_mz", R::Real}, {"voltage_shift_V", R::Real}, {"volts_per_spin_V", R::Real},
        {"fluctuation_variance_V2", R::Real}, {"correlator_sum", R::Real}, {"kink_signal_none", R::Real},
        {"kink_signal_middle", R::Real}, {"kink_signal_average", R::Real}, {"note", R::Text}, {"error", R::Text}}},
      {ExperimentKind::Disorder,
       {{"sample", R::Integer}, {"sample_seed", R::Text}, {"n", R::Integer}, {"W_Gamma_K", R::Real},
        {"W_J_K", R::Real}, {"W_gammaz_K", R::Real}, {"mean_Gamma_K", R::Real}, {"mean_J_K", R::Real},
        {"method", R::Text}, {"ground_energy_K", R::Real}, {"gap_K", R::Real}, {"error", R::Text}}},
  };
  return table;
}

// One row under construction; cells are addressed by column name.
class RowBuilder {
 public:
  explicit RowBuilder(const std::vector<Column>& columns) : columns_(&columns), cells_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i].type == ColumnType::Text) cells_[i] = std::string();
  }
  void set(const std::string& name, double v) { cells_[index(name, ColumnType::Real)] = v; }
  void set(const std::string& name, std::int64_t v) { cells_[index(name, ColumnType::Integer)] = v; }
  void set(const std::string& name, int v) { set(name, static_cast<std::int64_t>(v)); }
  void set(const std::string& name, bool v) { set(name, static_cast<std::int64_t>(v ? 1 : 0)); }
  void set(const std::string& name, const std::string& v) { cells_[index(name, ColumnType::Text)] = v; }
  void set(const std::string& name, const char* v) { set(name, std::string(v)); }

  std::vector<Cell> take() { return std::move(cells_); }
  std::string provenance;

 private:
  std::size_t index(const std::string& name, ColumnType type) const {
    for (std::size_t i = 0; i < columns_->size(); ++i) {
      if ((*columns_)[i].name == name) {
        if ((*columns_)[i].type != type) throw std::logic_error("column '" + name + "' has a different type");
        return i;
      }
    }
    throw std::logic_error("no column '" + name + "'");
  }
  const std::vector<Column>* columns_;
  std::vector<Cell> cells_;
};

struct Row {
  std::vector<Cell> cells;
  std::string provenance;
};

readout::ElectrodeConfig electrodes_of(const ExperimentSpec& spec) {
  return spec.electrodes.value_or(ElectrodeSpec{}).config();
}

// Chain from the [chain] block, with Gamma and J taken from the device where
// they are not given.
ising::IsingChain build_chain(const ExperimentSpec& spec, std::string& provenance) {
  const ChainSpec& c = *spec.chain;
  double gamma = 0.0, j = 0.0;
  if (c.Gamma_K && c.J_K) {
    gamma = *c.Gamma_K;
    j = *c.J_K;
    provenance += "chain=direct";
  } else {
    const auto geom = spec.device->geometry();
    const auto rep = derive_parameters(geom, readout::electrode_field(electrodes_of(spec)));
    if (c.J_K) {
      j = *c.J_K;
    } else {
      j = rep.coupling_J;
    }
    if (c.Gamma_K) {
      gamma = *c.Gamma_K;
    } else {
      if (!rep.gamma_transverse) throw UnsupportedRegime("cannot derive Gamma from the device: " + rep.gamma_note);
      gamma = *rep.gamma_transverse;
    }
    provenance += "chain=derived from device (WKB Gamma, multipole J)";
  }
  return ising::IsingChain::uniform(c.n, gamma, j, c.gammaz_K, c.boundary);
}

void run_device(const ExperimentSpec& spec, RowBuilder& row) {
  const DeviceSpec& d = *spec.device;
  row.set("a_nm", d.a_nm);
  row.set("d_nm", d.d_nm);
  row.set("h_nm", d.h_nm);
  row.set("lambda_nm", d.lambda_nm);
  const auto geom = d.geometry();
  const double field = readout::electrode_field(electrodes_of(spec));
  const auto rep = derive_parameters(geom, field);
  const auto& w = rep.well;
  row.set("is_double_well", w.is_double_well);
  row.set("y_min_nm", w.y_min);
  row.set("U0_K", w.barrier_U0);
  row.set("hbar_omega_K", w.omega);
  row.set("hbar_omega_numeric_K", w.omega_numeric);
  row.set("E0_K", w.ground_energy_E0);
  if (w.turning_points) row.set("tunnel_action", w.tunnel_action);
  if (rep.gamma_transverse) row.set("Gamma_K", *rep.gamma_transverse);
  row.set("J_K", rep.coupling_J);
  row.set("J_taylor_K", coupling_J_from_taylor(geom));
  row.set("field_V_per_m", field);
  row.set("gamma_K", rep.gamma_longitudinal);
  row.set("repulsion_K", rep.stability.repulsion);
  row.set("binding_K", rep.stability.binding);
  row.set("stable", rep.stability.stable);
  row.set("hierarchy_pass", rep.hierarchy.all_pass);

  std::string note = rep.gamma_transverse ? "" : rep.gamma_note;
  // Finite-difference check along the axis through both wells.
  const auto cut = [&geom](double y) { return pair_potential(geom, 0.0, y); };
  const double half = geom.alpha() + 3.0 * std::sqrt(geom.beta_squared());
  try {
    const auto res = oracle::solve_1d(cut, oracle::GridSpec::line(half, 1025), 3);
    const auto split = oracle::splitting_and_parity(res);
    row.set("Gamma_oracle_K", split.splitting);
    row.set("oracle_localization", split.wannier_localization);
    row.set("oracle_two_level", split.two_level);
    if (!split.two_level) {
      if (!note.empty()) note += "; ";
      note += "oracle: lowest pair is not a tunnel doublet";
    }
  } catch (const RegimeViolation& e) {
    row.set("oracle_two_level", false);
    if (!note.empty()) note += "; ";
    note += std::string("oracle: ") + e.what();
  }
  row.set("note", note);
  row.provenance = "well=characterize_well(zero-point WKB level); oracle=fd1d along x=0";
}

void run_spectrum(const ExperimentSpec& spec, RowBuilder& row) {
  std::string prov;
  const auto chain = build_chain(spec, prov);
  row.set("n", chain.n);
  row.set("boundary", ising::to_string(chain.boundary));
  row.set("Gamma_K", chain.gamma_x[0]);
  row.set("J_K", chain.coupling.empty() ? 0.0 : chain.coupling[0]);
  row.set("gammaz_K", chain.gamma_z[0]);
  if (!chain.has_longitudinal_field()) {
    const bool modes = chain.boundary == ising::Boundary::Periodic;
    const auto sol = ising::free_fermion_solve(chain, {.want_modes = modes});
    row.set("method", "fermion");
    row.set("ground_energy_K", sol.ground_energy);
    row.set("gap_K", sol.gap);
    if (std::isfinite(sol.sector_gap)) row.set("sector_gap_K", sol.sector_gap);
    row.set("ground_parity", sol.ground_parity);
    if (chain.n <= ising::kFullSpectrumCap) {
      row.set("ground_energy_ed_K", ising::ground_state(chain).energy);
      const auto chi = ising::susceptibility(chain);
      row.set("chi_per_K", chi.mean);
      row.set("chi_non_analytic", chi.non_analytic);
    }
    prov += "; spectrum=free fermions";
  } else {
    const auto levels = ising::lowest_energies(chain, 2);
    row.set("method", "ed");
    row.set("ground_energy_K", levels[0]);
    row.set("gap_K", levels[1] - levels[0]);
    row.set("ground_energy_ed_K", levels[0]);
    prov += "; spectrum=Lanczos";
  }
  row.provenance = prov;
}

void run_quench(const ExperimentSpec& spec, RowBuilder& row) {
  std::string prov;
  const auto base = build_chain(spec, prov);
  const ScheduleSpec& s = *spec.schedule;
  const double j = base.mean_coupling();
  const double start = s.Gamma_start_K.value_or(5.0 * std::abs(j));
  row.set("n", base.n);
  row.set("boundary", ising::to_string(base.boundary));
  row.set("tauQ", s.tauQ);
  row.set("Gamma_start_K", start);
  row.set("Gamma_end_K", s.Gamma_end_K);
  row.set("J_K", j);
  row.set("gammaz_K", base.gamma_z[0]);
  auto schedule = ising::SweepSchedule::transverse_ramp(base, start, s.Gamma_end_K, s.tauQ);
  schedule.tolerance = s.tolerance;
  QuenchMethod method = s.method;
  if (method == QuenchMethod::Auto) method = base.has_longitudinal_field() ? QuenchMethod::Dense : QuenchMethod::Quadratic;
  if (method == QuenchMethod::Quadratic) {
    const auto r = ising::evolve_quadratic(schedule);
    row.set("method", "quadratic");
    row.set("kink_density", r.kink_density);
    row.set("steps", static_cast<std::int64_t>(r.steps));
    row.set("step_change", r.step_change);
  } else {
    const auto gs = ising::ground_state(schedule.profile(0.0));
    const auto r = ising::evolve(schedule, gs.state);
    const auto obs = ising::observables(r.state, base.boundary);
    row.set("method", "dense");
    row.set("kink_density", base.bond_count() ? obs.kink_number / base.bond_count() : 0.0);
    row.set("steps", static_cast<std::int64_t>(r.steps));
    row.set("step_change", r.step_change);
  }
  row.provenance = prov + "; schedule=linear transverse ramp";
}

void run_readout(const ExperimentSpec& spec, RowBuilder& row) {
  std::string prov;
  const auto chain = build_chain(spec, prov);
  const auto geom = spec.device->geometry();
  const auto cfg = electrodes_of(spec);
  row.set("n", chain.n);
  row.set("Gamma_K", chain.gamma_x[0]);
  row.set("J_K", chain.coupling.empty() ? 0.0 : chain.coupling[0]);
  row.set("kink_signal_none", readout::kink_signal(chain.n, std::nullopt));
  row.set("kink_signal_middle", readout::kink_signal(chain.n, chain.n / 2));
  row.set("kink_signal_average", readout::average_kink_signal(chain.n));
  row.set("note", kVarianceNote);
  const double field = readout::electrode_field(cfg);
  const double gamma = longitudinal_gamma(geom, field);
  row.set("field_V_per_m", field);
  row.set("gamma_K", gamma);
  const auto st = readout::static_response(chain, gamma, geom, cfg);
  row.set("mean_mz", st.mean_mz);
  row.set("voltage_shift_V", st.voltage_shift);
  const auto fl = readout::fluctuation_variance(chain, geom, cfg);
  row.set("volts_per_spin_V", fl.volts_per_spin);
  row.set("fluctuation_variance_V2", fl.variance);
  row.set("correlator_sum", fl.correlator_sum);
  row.provenance = prov + "; readout=point-charge electrodes, reciprocity coupling";
}

std::vector<Row> run_disorder(const ExperimentSpec& spec, std::uint64_t seed) {
  const auto& cols = column_table().at(ExperimentKind::Disorder);
  std::vector<Row> rows;
  const DisorderSpec& d = *spec.disorder;
  for (int sample = 0; sample < d.samples; ++sample) {
    RowBuilder row(cols);
    const std::uint64_t sample_seed = numerics::counter_hash(seed, 0, static_cast<std::uint64_t>(sample));
    row.set("sample", sample);
    row.set("sample_seed", std::to_string(sample_seed));
    row.set("W_Gamma_K", d.W_Gamma_K);
    row.set("W_J_K", d.W_J_K);
    row.set("W_gammaz_K", d.W_gammaz_K);
    try {
      std::string prov;
      const auto base = build_chain(spec, prov);
      row.set("n", base.n);
      const auto chain = ising::sample_disorder(base, {d.W_Gamma_K, d.W_J_K, d.W_gammaz_K}, sample_seed);
      row.set("mean_Gamma_K", chain.mean_gamma_x());
      row.set("mean_J_K", chain.mean_coupling());
      if (!chain.has_longitudinal_field()) {
        const auto sol = ising::free_fermion_solve(chain, {.want_modes = chain.boundary == ising::Boundary::Periodic});
        row.set("method", "fermion");
        row.set("ground_energy_K", sol.ground_energy);
        row.set("gap_K", sol.gap);
      } else {
        const auto levels = ising::lowest_energies(chain, 2);
        row.set("method", "ed");
        row.set("ground_energy_K", levels[0]);
        row.set("gap_K", levels[1] - levels[0]);
      }
      row.provenance = prov + "; disorder=uniform, counter-based draws";
    } catch (const std::exception& e) {
      row.set("error", e.what());
    }
    rows.push_back({row.take(), row.provenance});
  }
  return rows;
}

// All rows of one (non-sweep) experiment.
std::vector<Row> run_point(const ExperimentSpec& spec, ExperimentKind kind, std::uint64_t seed) {
  if (kind == ExperimentKind::Disorder) return run_disorder(spec, seed);
  const auto& cols = column_table().at(kind);
  RowBuilder row(cols);
  try {
    switch (kind) {
      case ExperimentKind::Device: run_device(spec, row); break;
      case ExperimentKind::Spectrum: run_spectrum(spec, row); break;
      case ExperimentKind::Quench: run_quench(spec, row); break;
      case ExperimentKind::Readout: run_readout(spec, row); break;
      default: throw std::logic_error("unexpected kind");
    }
  } catch (const std::exception& e) {
    row.set("error", e.what());
  }
  return {{row.take(), row.provenance}};
}

}  // namespace

std::string tool_version() { return kVersion; }

std::vector<Column> columns_for(ExperimentKind kind) {
  if (kind == ExperimentKind::Sweep) throw InvalidArgument("columns_for: sweeps take the columns of their base kind");
  std::vector<Column> cols{{"point", ColumnType::Integer}};
  const auto& base = column_table().at(kind);
  cols.insert(cols.end(), base.begin(), base.end());
  return cols;
}

ResultSet run_experiment(const ExperimentSpec& spec, std::size_t workers) {
  validate(spec);
  if (spec.kind == ExperimentKind::Sweep) return run_sweep(spec, workers);
  ResultSet rs;
  rs.columns = columns_for(spec.kind);
  for (auto& row : run_point(spec, spec.kind, spec.seed)) {
    row.cells.insert(row.cells.begin(), Cell{std::int64_t{0}});
    rs.rows.push_back(std::move(row.cells));
    rs.provenance.push_back(std::move(row.provenance));
  }
  return rs;
}

ResultSet run_sweep(const ExperimentSpec& spec, std::size_t workers) {
  validate(spec);
  if (spec.sweep_axes.empty()) throw ConfigError("sweep needs at least one axis", 0);
  const ExperimentKind kind = spec.kind == ExperimentKind::Sweep ? *spec.sweep_base : spec.kind;
  if (workers == 0) throw InvalidArgument("run_sweep: workers must be >= 1");

  std::size_t points = 1;
  for (const auto& axis : spec.sweep_axes) points *= axis.values.size();
  std::vector<ExperimentSpec> work(points, spec);
  std::vector<std::vector<std::string>> coords(points);
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t rest = p;
    std::vector<std::size_t> idx(spec.sweep_axes.size());
    for (std::size_t a = spec.sweep_axes.size(); a-- > 0;) {
      idx[a] = rest % spec.sweep_axes[a].values.size();
      rest /= spec.sweep_axes[a].values.size();
    }
    ExperimentSpec& point = work[p];
    point.kind = kind;
    point.sweep_axes.clear();
    point.sweep_base.reset();
    point.seed = spec.seed ^ static_cast<std::uint64_t>(p);
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const auto& value = spec.sweep_axes[a].values[idx[a]];
      set_value(point, spec.sweep_axes[a].key, value);
      coords[p].push_back(value);
    }
  }

  std::vector<std::vector<Row>> slots(points);
  std::vector<std::string> point_errors(points);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t p = next++; p < points; p = next++) {
      try {
        validate(work[p]);
        slots[p] = run_point(work[p], kind, work[p].seed);
      } catch (const std::exception& e) {
        point_errors[p] = e.what();
      }
    }
  };
  const std::size_t threads = std::min(workers, points);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ResultSet rs;
  rs.columns.push_back({"point", ColumnType::Integer});
  for (const auto& axis : spec.sweep_axes) rs.columns.push_back({axis.key, ColumnType::Text});
  const auto& base = column_table().at(kind);
  rs.columns.insert(rs.columns.end(), base.begin(), base.end());
  for (std::size_t p = 0; p < points; ++p) {
    if (!point_errors[p].empty()) {
      RowBuilder row(base);
      row.set("error", point_errors[p]);
      slots[p] = {{row.take(), ""}};
    }
    for (auto& row : slots[p]) {
      std::vector<Cell> cells{Cell{static_cast<std::int64_t>(p)}};
      for (const auto& c : coords[p]) cells.emplace_back(c);
      cells.insert(cells.end(), std::make_move_iterator(row.cells.begin()), std::make_move_iterator(row.cells.end()));
      rs.rows.push_back(std::move(cells));
      rs.provenance.push_back(std::move(row.provenance));
    }
  }
  return rs;
}

std::size_t failed_rows(const ResultSet& rs) {
  std::size_t col = rs.columns.size();
  for (std::size_t i = 0; i < rs.columns.size(); ++i)
    if (rs.columns[i].name == "error") col = i;
  if (col == rs.columns.size()) return 0;
  std::size_t failed = 0;
  for (const auto& row : rs.rows) {
    if (const auto* s = std::get_if<std::string>(&row[col]); s && !s->empty()) ++failed;
  }
  return failed;
}

void write_outputs(const ExperimentSpec& spec, const ResultSet& rs, const std::string& directory, double wall_time_s,
                   std::size_t workers) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  {
    std::ofstream csv(fs::path(directory) / "results.csv", std::ios::binary);
    csv << to_csv(rs);
    if (!csv) throw Error("could not write results.csv in " + directory);
  }
  nlohmann::ordered_json j;
  j["tool"] = "helium-sim";
  j["version"] = kVersion;
  j["kind"] = to_string(spec.kind);
  if (spec.sweep_base) j["sweep_base"] = to_string(*spec.sweep_base);
  j["seed"] = spec.seed;
  j["workers"] = workers;
  j["wall_time_s"] = wall_time_s;
  j["spec"] = render_config(spec);
  j["constants"] = nlohmann::ordered_json::parse(constants().to_json());
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : rs.columns) {
    cols.push_back({{"name", c.name},
                    {"type", c.type == ColumnType::Real ? "real" : c.type == ColumnType::Integer ? "integer" : "text"}});
  }
  j["rows"] = rs.rows.size();
  j["failed_rows"] = failed_rows(rs);
  j["provenance"] = rs.provenance;
  if (spec.kind == ExperimentKind::Readout || spec.sweep_base == ExperimentKind::Readout) j["notes"] = {kVarianceNote};
  std::ofstream out(fs::path(directory) / "run.json", std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw Error("could not write run.json in " + directory);
}

}  // namespace helium::harness
