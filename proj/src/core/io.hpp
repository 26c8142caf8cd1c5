#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/sim.hpp"
#include "core/train.hpp"

namespace aoitail {

// models.csv holds the per-sensor local fits plus two aggregate rows whose
// sensor_id column carries a label instead of a number ("global_selected",
// "global_fedavg").
struct ModelsFile {
  std::vector<LocalModelReport> reports;
  std::map<std::string, GpdParams> globals;

  const GpdParams& global(const std::string& name) const;
};

void write_models_csv(const std::string& path, const TrainingResult& result);
ModelsFile read_models_csv(const std::string& path);

// sensor_id,selected rows mirroring the selection vector
void write_selection_csv(const std::string& path, const TrainingResult& result);

// single wide row of time averages
void write_metrics_csv(const std::string& path, const OnlineMetrics& metrics);

void write_records_csv(const std::string& path,
                       const std::vector<TransmissionRecord>& records);

void write_ccdf_csv(const std::string& path,
                    const std::vector<CcdfPoint>& points);

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows);

// First column of a CSV with an optional header line; used for series input.
std::vector<double> read_series_csv(const std::string& path);

}  // namespace aoitail
