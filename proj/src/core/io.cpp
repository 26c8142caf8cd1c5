#include "core/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace aoitail {

namespace {

// All CSV output goes through fprintf with %.17g: round-trippable doubles,
// C-locale decimal point, byte-stable across runs.
struct CsvWriter {
  std::FILE* f = nullptr;

  explicit CsvWriter(const std::string& path) {
    f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  }
  ~CsvWriter() {
    if (f) std::fclose(f);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

double to_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": bad numeric field '" + s + "'");
  }
}

}  // namespace

const GpdParams& ModelsFile::global(const std::string& name) const {
  const auto it = globals.find(name);
  if (it == globals.end())
    throw std::runtime_error("models file has no '" + name + "' row");
  return it->second;
}

void write_models_csv(const std::string& path, const TrainingResult& result) {
  CsvWriter out(path);
  std::fprintf(out.f, "sensor_id,sigma,xi,sample_count,hurst\n");
  for (const auto& r : result.reports)
    std::fprintf(out.f, "%d,%.17g,%.17g,%zu,%.17g\n", r.sensor_id,
                 r.model.sigma, r.model.xi, r.sample_count, r.hurst);
  std::size_t selected_count = 0;
  std::size_t total_count = 0;
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    total_count += result.reports[k].sample_count;
    if (result.selection.on[k]) selected_count += result.reports[k].sample_count;
  }
  std::fprintf(out.f, "global_selected,%.17g,%.17g,%zu,0\n",
               result.global_selected.sigma, result.global_selected.xi,
               selected_count);
  std::fprintf(out.f, "global_fedavg,%.17g,%.17g,%zu,0\n",
               result.global_fedavg.sigma, result.global_fedavg.xi,
               total_count);
}

ModelsFile read_models_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ModelsFile file;
  std::string line;
  if (!std::getline(in, line) ||
      split_csv(line) != std::vector<std::string>{"sensor_id", "sigma", "xi",
                                                  "sample_count", "hurst"})
    throw std::runtime_error(path + ": missing models header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 5)
      throw std::runtime_error(path + ": expected 5 fields per row");
    if (!fields[0].empty() &&
        (std::isdigit(static_cast<unsigned char>(fields[0][0])) ||
         fields[0][0] == '-')) {
      LocalModelReport r;
      r.sensor_id = static_cast<int>(to_double(fields[0], path));
      r.model.sigma = to_double(fields[1], path);
      r.model.xi = to_double(fields[2], path);
      r.sample_count = static_cast<std::size_t>(to_double(fields[3], path));
      r.hurst = to_double(fields[4], path);
      file.reports.push_back(r);
    } else {
      file.globals[fields[0]] =
          GpdParams{to_double(fields[1], path), to_double(fields[2], path)};
    }
  }
  return file;
}

void write_selection_csv(const std::string& path,
                         const TrainingResult& result) {
  CsvWriter out(path);
  std::fprintf(out.f, "sensor_id,selected\n");
  for (std::size_t k = 0; k < result.reports.size(); ++k)
    std::fprintf(out.f, "%d,%d\n", result.reports[k].sensor_id,
                 result.selection.on[k] ? 1 : 0);
}

void write_metrics_csv(const std::string& path, const OnlineMetrics& m) {
  CsvWriter out(path);
  std::fprintf(out.f,
               "p_avg_w,p_min_avg_w,peak_aoi_s,f_avg,queue_delay_s,tx_delay_s,"
               "e2e_delay_s,violation_prob,stay_time_s,infeasible_rate,slots\n");
  std::fprintf(out.f,
               "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
               "%zu\n",
               m.p_avg_w, m.p_min_avg_w, m.peak_aoi_s, m.f_avg,
               m.queue_delay_s, m.tx_delay_s, m.e2e_delay_s, m.violation_prob,
               m.stay_time_s, m.infeasible_rate, m.slots);
}

void write_records_csv(const std::string& path,
                       const std::vector<TransmissionRecord>& records) {
  CsvWriter out(path);
  std::fprintf(out.f,
               "sensor_id,n,power_w,tx_time_s,queue_delay_s,peak_aoi_s,"
               "interarrival_s,virtual_queue,p_min_w,infeasible\n");
  for (const auto& r : records)
    std::fprintf(out.f,
                 "%d,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                 r.sensor_id, static_cast<unsigned long long>(r.index),
                 r.power_w, r.tx_time_s, r.queue_delay_s, r.peak_aoi_s,
                 r.interarrival_s, r.virtual_queue, r.p_min_w,
                 r.infeasible ? 1 : 0);
}

void write_ccdf_csv(const std::string& path,
                    const std::vector<CcdfPoint>& points) {
  CsvWriter out(path);
  std::fprintf(out.f, "delay_s,ccdf\n");
  for (const auto& p : points)
    std::fprintf(out.f, "%.17g,%.17g\n", p.delay_s, p.ccdf);
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  CsvWriter out(path);
  std::fprintf(out.f,
               "v,p_avg_w,p_min_avg_w,peak_aoi_s,f_avg,queue_delay_s,"
               "tx_delay_s,e2e_delay_s,violation_prob\n");
  for (const auto& r : rows)
    std::fprintf(out.f,
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                 r.v, r.metrics.p_avg_w, r.metrics.p_min_avg_w,
                 r.metrics.peak_aoi_s, r.metrics.f_avg,
                 r.metrics.queue_delay_s, r.metrics.tx_delay_s,
                 r.metrics.e2e_delay_s, r.metrics.violation_prob);
}

std::vector<double> read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string field = split_csv(line).front();
    if (first) {
      first = false;
      try {
        std::size_t used = 0;
        const double x = std::stod(field, &used);
        if (used == field.size()) values.push_back(x);
        continue;  // non-numeric first line is a header
      } catch (const std::exception&) {
        continue;
      }
    }
    values.push_back(to_double(field, path));
  }
  if (values.empty())
    throw std::runtime_error(path + ": no numeric values found");
  return values;
}

}  // namespace aoitail
