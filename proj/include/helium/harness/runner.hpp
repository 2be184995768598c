#pragma once

#include <cstddef>
#include <string>

#include "helium/harness/config.hpp"
#include "helium/harness/csv.hpp"

namespace helium::harness {

std::string tool_version();

/// Column layout of the CSV for a kind (sweeps add the axis columns).
std::vector<Column> columns_for(ExperimentKind kind);

/// Runs one experiment. A failing row records its error in the `error` column
/// and the run continues. Sweeps are delegated to run_sweep.
ResultSet run_experiment(const ExperimentSpec& spec, std::size_t workers = 1);

/// Expands the Cartesian product of the axes (last axis fastest), runs the
/// points on `workers` threads and merges rows in point order. Point i runs
/// with seed = spec.seed ^ i.
ResultSet run_sweep(const ExperimentSpec& spec, std::size_t workers);

/// Number of rows whose `error` cell is non-empty.
std::size_t failed_rows(const ResultSet& rs);

/// Writes results.csv and run.json into `directory` (created if needed).
void write_outputs(const ExperimentSpec& spec, const ResultSet& rs, const std::string& directory,
                   double wall_time_s, std::size_t workers);

}  // namespace helium::harness
