#include "core/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace aoitail {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "auto";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& key, const std::string& value,
                    bool nan_ok = false) {
  if (nan_ok && value == "auto")
    return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value for '" + key +
                                "': " + value);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value for '" + key +
                                "': " + value);
  }
}

struct KeyHandler {
  const char* name;
  std::function<void(SimConfig&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

const std::vector<KeyHandler>& key_table() {
  auto dbl = [](const char* name, double SimConfig::*field,
                bool nan_ok = false) {
    return KeyHandler{
        name,
        [name, field, nan_ok](SimConfig& c, const std::string& v) {
          c.*field = parse_double(name, v, nan_ok);
        },
        [field](const SimConfig& c) { return fmt_double(c.*field); }};
  };
  auto sz = [](const char* name, std::size_t SimConfig::*field) {
    return KeyHandler{
        name,
        [name, field](SimConfig& c, const std::string& v) {
          c.*field = static_cast<std::size_t>(parse_u64(name, v));
        },
        [field](const SimConfig& c) { return std::to_string(c.*field); }};
  };
  auto str = [](const char* name, std::string SimConfig::*field) {
    return KeyHandler{
        name,
        [field](SimConfig& c, const std::string& v) { c.*field = v; },
        [field](const SimConfig& c) { return c.*field; }};
  };

  static const std::vector<KeyHandler> table = {
      dbl("mean_interarrival", &SimConfig::mean_interarrival),
      dbl("underlying_std", &SimConfig::underlying_std),
      dbl("hurst", &SimConfig::hurst),
      dbl("hurst_min", &SimConfig::hurst_min, true),
      dbl("hurst_max", &SimConfig::hurst_max, true),
      str("fgn_method", &SimConfig::fgn_method),
      dbl("distance_m", &SimConfig::distance_m),
      dbl("carrier_ghz", &SimConfig::carrier_ghz),
      str("fading", &SimConfig::fading),
      dbl("bandwidth_hz", &SimConfig::bandwidth_hz),
      dbl("data_bits", &SimConfig::data_bits),
      dbl("noise_dbm_hz", &SimConfig::noise_dbm_hz),
      sz("num_sensors", &SimConfig::num_sensors),
      dbl("beta", &SimConfig::beta),
      dbl("f_threshold", &SimConfig::f_threshold),
      dbl("v", &SimConfig::v),
      dbl("p_max_dbm", &SimConfig::p_max_dbm),
      dbl("epsilon", &SimConfig::epsilon),
      dbl("q_threshold_s", &SimConfig::q_threshold_s),
      dbl("tail_quantile", &SimConfig::tail_quantile),
      dbl("x0", &SimConfig::x0, true),
      dbl("gamma", &SimConfig::gamma),
      KeyHandler{"iters",
                 [](SimConfig& c, const std::string& v) {
                   c.iters = static_cast<int>(parse_u64("iters", v));
                 },
                 [](const SimConfig& c) { return std::to_string(c.iters); }},
      dbl("theta0_sigma", &SimConfig::theta0_sigma),
      dbl("theta0_xi", &SimConfig::theta0_xi),
      sz("train_samples", &SimConfig::train_samples),
      KeyHandler{"selection_restarts",
                 [](SimConfig& c, const std::string& v) {
                   c.selection_restarts =
                       static_cast<int>(parse_u64("selection_restarts", v));
                 },
                 [](const SimConfig& c) {
                   return std::to_string(c.selection_restarts);
                 }},
      sz("horizon", &SimConfig::horizon),
      sz("warmup", &SimConfig::warmup),
      sz("monte_carlo_runs", &SimConfig::monte_carlo_runs),
      sz("records_per_sensor", &SimConfig::records_per_sensor),
      KeyHandler{"seed",
                 [](SimConfig& c, const std::string& v) {
                   c.master_seed = parse_u64("seed", v);
                 },
                 [](const SimConfig& c) {
                   return std::to_string(c.master_seed);
                 }},
      KeyHandler{"threads",
                 [](SimConfig& c, const std::string& v) {
                   c.threads = static_cast<unsigned>(parse_u64("threads", v));
                 },
                 [](const SimConfig& c) { return std::to_string(c.threads); }},
  };
  return table;
}

const KeyHandler& find_key(const std::string& key) {
  for (const auto& h : key_table())
    if (key == h.name) return h;
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

}  // namespace

void SimConfig::validate() const {
  TrafficModel t;
  t.mean_interarrival = mean_interarrival;
  t.underlying_std = underlying_std;
  t.hurst = hurst;
  t.validate();
  if (!std::isnan(hurst_min) || !std::isnan(hurst_max)) {
    if (std::isnan(hurst_min) || std::isnan(hurst_max))
      throw std::invalid_argument("config: hurst_min and hurst_max go together");
    if (!(hurst_min >= 0.5 && hurst_min <= hurst_max && hurst_max < 1.0))
      throw std::invalid_argument(
          "config: need 0.5 <= hurst_min <= hurst_max < 1");
  }
  fgn();  // validates the method name
  if (fading != "rayleigh" && fading != "none")
    throw std::invalid_argument("config: fading must be rayleigh or none");
  if (num_sensors == 0)
    throw std::invalid_argument("config: num_sensors must be > 0");
  channel_model(0).validate();
  link_budget().validate();
  aoi_cost().validate();
  tradeoff().validate();
  if (!(epsilon > 0.0 && epsilon < tail_quantile))
    throw std::invalid_argument("config: need 0 < epsilon < tail_quantile");
  if (!(tail_quantile > 0.0 && tail_quantile < 0.5))
    throw std::invalid_argument("config: tail_quantile must lie in (0, 0.5)");
  if (!(q_threshold_s > 0.0))
    throw std::invalid_argument("config: q_threshold_s must be > 0");
  if (!(gamma > 0.0))
    throw std::invalid_argument("config: gamma must be > 0");
  if (iters < 0)
    throw std::invalid_argument("config: iters must be >= 0");
  if (!(theta0_sigma > 0.0))
    throw std::invalid_argument("config: theta0_sigma must be > 0");
  if (selection_restarts < 1)
    throw std::invalid_argument("config: selection_restarts must be >= 1");
  if (horizon <= warmup)
    throw std::invalid_argument("config: horizon must exceed warmup");
  if (monte_carlo_runs == 0)
    throw std::invalid_argument("config: monte_carlo_runs must be > 0");
}

double SimConfig::hurst_for(std::size_t sensor) const {
  if (std::isnan(hurst_min)) return hurst;
  if (num_sensors <= 1) return hurst_min;
  const double f =
      static_cast<double>(sensor) / static_cast<double>(num_sensors - 1);
  return hurst_min + f * (hurst_max - hurst_min);
}

TrafficModel SimConfig::traffic_model(std::size_t sensor,
                                      std::uint64_t seed) const {
  TrafficModel m;
  m.mean_interarrival = mean_interarrival;
  m.underlying_std = underlying_std;
  m.hurst = hurst_for(sensor);
  m.seed = seed;
  m.fgn_method = fgn();
  return m;
}

ChannelModel SimConfig::channel_model(std::uint64_t seed) const {
  ChannelModel m;
  m.distance_m = distance_m;
  m.carrier_ghz = carrier_ghz;
  m.fading = (fading == "none") ? FadingKind::kNone : FadingKind::kRayleigh;
  m.seed = seed;
  return m;
}

LinkBudget SimConfig::link_budget() const {
  LinkBudget b;
  b.bandwidth_per_sensor_hz = bandwidth_hz / static_cast<double>(num_sensors);
  b.data_bits = data_bits;
  b.noise_psd_w_hz = dbm_to_watts(noise_dbm_hz);
  b.num_sensors = static_cast<int>(num_sensors);
  return b;
}

AoiCostConfig SimConfig::aoi_cost() const {
  AoiCostConfig c;
  c.beta = beta;
  c.f_threshold = f_threshold;
  return c;
}

TradeoffConfig SimConfig::tradeoff() const {
  TradeoffConfig t;
  t.v = v;
  t.p_max_w = dbm_to_watts(p_max_dbm);
  return t;
}

UrllcConstraint SimConfig::urllc(const GpdParams& tail) const {
  UrllcConstraint c;
  c.q_threshold_s = q_threshold_s;
  c.epsilon = epsilon;
  c.tail_prob = tail_quantile;
  if (std::isnan(x0)) {
    // x0 is the upper tail_quantile quantile of -log(x), i.e. minus the log
    // of the matching lower quantile of the inter-arrival marginal
    c.threshold_x0 = -std::log(
        folded_normal_quantile(mean_interarrival, underlying_std, tail_quantile));
  } else {
    c.threshold_x0 = x0;
  }
  c.tail = tail;
  return c;
}

FgnMethod SimConfig::fgn() const {
  if (fgn_method == "auto") return FgnMethod::kAuto;
  if (fgn_method == "circulant") return FgnMethod::kCirculant;
  if (fgn_method == "sequential") return FgnMethod::kSequential;
  throw std::invalid_argument("config: fgn_method must be auto, circulant or "
                              "sequential");
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& h : key_table()) keys.emplace_back(h.name);
  return keys;
}

void config_set(SimConfig& cfg, const std::string& key,
                const std::string& value) {
  find_key(key).set(cfg, value);
}

std::string config_get(const SimConfig& cfg, const std::string& key) {
  return find_key(key).get(cfg);
}

SimConfig load_config_string(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    config_set(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_string(buf.str());
}

std::string dump_config(const SimConfig& cfg) {
  std::ostringstream out;
  for (const auto& h : key_table())
    out << h.name << " = " << h.get(cfg) << "\n";
  return out.str();
}

}  // namespace aoitail
