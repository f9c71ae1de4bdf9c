#include "aoicache/config_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace aoicache {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> tokens;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "value of '" + key + "' is not a number: " + value);
  }
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(origin, line, "value of '" + key + "' is not an integer: " + value);
  }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  fail(origin, line, "value of '" + key + "' is not a boolean: " + value);
}

RegionKind parse_kind(const std::string& origin, int line, const std::string& value) {
  if (value == "normal") return RegionKind::Normal;
  if (value == "traffic_jam") return RegionKind::TrafficJam;
  if (value == "accident") return RegionKind::Accident;
  if (value == "crowded") return RegionKind::Crowded;
  fail(origin, line, "unknown region kind: " + value);
}

Stage1Policy parse_stage1(const std::string& origin, int line, const std::string& value) {
  if (value == "proposed") return Stage1Policy::Proposed;
  if (value == "aoi-greedy") return Stage1Policy::AoiGreedy;
  if (value == "random") return Stage1Policy::Random;
  fail(origin, line, "unknown stage1 policy: " + value);
}

Stage2Policy parse_stage2(const std::string& origin, int line, const std::string& value) {
  if (value == "dpp") return Stage2Policy::Dpp;
  if (value == "latency-only") return Stage2Policy::LatencyOnly;
  if (value == "cost-only") return Stage2Policy::CostOnly;
  fail(origin, line, "unknown stage2 policy: " + value);
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
  ScenarioConfig config;
  double region_length_override = -1.0;

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = trim(line.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "utility" && section != "channels" &&
          section != "service") {
        fail(origin, line_no, "unknown section: [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(origin, line_no, "expected 'key = value'");
    if (section.empty()) fail(origin, line_no, "key outside any section: " + key);

    if (section == "scenario") {
      if (key == "road_length_m") config.road_length_m = parse_double(origin, line_no, key, value);
      else if (key == "slot_seconds") config.slot_seconds = parse_double(origin, line_no, key, value);
      else if (key == "region_length_m") region_length_override = parse_double(origin, line_no, key, value);
      else if (key == "rsu_count") config.rsu_count = static_cast<int>(parse_int(origin, line_no, key, value));
      else if (key == "regions_per_rsu") config.regions_per_rsu = static_cast<int>(parse_int(origin, line_no, key, value));
      else if (key == "lane_speeds_kmh") {
        config.lane_speeds_kmh.clear();
        for (const std::string& tok : split_tokens(value)) {
          config.lane_speeds_kmh.push_back(parse_double(origin, line_no, key, tok));
        }
      } else if (key == "uv_count") config.uv_count = static_cast<int>(parse_int(origin, line_no, key, value));
      else if (key == "cv_count") config.cv_count = static_cast<int>(parse_int(origin, line_no, key, value));
      else if (key == "horizon") {
        config.horizon = static_cast<int>(parse_int(origin, line_no, key, value));
        if (config.horizon < 1) fail(origin, line_no, "horizon must be at least 1");
      } else if (key == "request_prob") config.request_prob = parse_double(origin, line_no, key, value);
      else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_int(origin, line_no, key, value));
      else if (key == "stage1") config.stage1 = parse_stage1(origin, line_no, value);
      else if (key == "stage2") config.stage2 = parse_stage2(origin, line_no, value);
      else if (key == "region_kinds") {
        config.region_kinds.clear();
        if (value != "random") {
          for (const std::string& tok : split_tokens(value)) {
            config.region_kinds.push_back(parse_kind(origin, line_no, tok));
          }
        }
      } else if (key == "aoi_max_by_kind") {
        const auto tokens = split_tokens(value);
        if (tokens.size() != 4) {
          fail(origin, line_no, "aoi_max_by_kind needs four values (normal traffic_jam accident crowded)");
        }
        for (std::size_t i = 0; i < 4; ++i) {
          config.aoi_max_by_kind[i] = static_cast<int>(parse_int(origin, line_no, key, tokens[i]));
        }
      } else if (key == "popularity_window") config.popularity_window = static_cast<int>(parse_int(origin, line_no, key, value));
      else fail(origin, line_no, "unknown key in [scenario]: " + key);
    } else if (section == "utility") {
      if (key == "epsilon") config.utility.epsilon = parse_double(origin, line_no, key, value);
      else if (key == "w") {
        if (value == "auto") {
          config.auto_aoi_scale = true;
        } else {
          config.auto_aoi_scale = false;
          config.utility.aoi_scale = parse_double(origin, line_no, key, value);
        }
      } else if (key == "w_scale") config.aoi_scale_factor = parse_double(origin, line_no, key, value);
      else if (key == "weight_mode") {
        if (value == "uniform") config.utility.weight_mode = UtilityParams::WeightMode::Uniform;
        else if (value == "aoi-share") config.utility.weight_mode = UtilityParams::WeightMode::AoiShare;
        else fail(origin, line_no, "unknown weight_mode: " + value);
      } else if (key == "freshness_model") {
        if (value == "threshold-ratio") {
          config.utility.freshness_model = UtilityParams::FreshnessModel::ThresholdRatio;
        } else if (value == "validity-fraction") {
          config.utility.freshness_model = UtilityParams::FreshnessModel::ValidityFraction;
        } else {
          fail(origin, line_no, "unknown freshness_model: " + value);
        }
      } else if (key == "popularity_floor") config.utility.popularity_floor = parse_double(origin, line_no, key, value);
      else if (key == "mbs_term_weight") config.utility.mbs_term_weight = parse_double(origin, line_no, key, value);
      else fail(origin, line_no, "unknown key in [utility]: " + key);
    } else if (section == "channels") {
      if (key == "total") config.limits.total = static_cast<int>(parse_int(origin, line_no, key, value));
      else if (key == "cv") config.limits.cv = static_cast<int>(parse_int(origin, line_no, key, value));
      else if (key == "rsu") config.limits.rsu = static_cast<int>(parse_int(origin, line_no, key, value));
      else if (key == "exhaustive_bound") config.exhaustive_bound = static_cast<std::size_t>(parse_int(origin, line_no, key, value));
      else fail(origin, line_no, "unknown key in [channels]: " + key);
    } else if (section == "service") {
      if (key == "v") {
        if (value == "light") config.v_preset = VPreset::Light;
        else if (value == "normal") config.v_preset = VPreset::Normal;
        else if (value == "heavy") config.v_preset = VPreset::Heavy;
        else {
          config.v_preset = VPreset::Custom;
          config.dpp.cost_weight = parse_double(origin, line_no, key, value);
        }
      } else if (key == "h_uv_limit") config.dpp.h_uv_limit = static_cast<int>(parse_int(origin, line_no, key, value));
      else if (key == "enforce_staleness") config.dpp.enforce_staleness = parse_bool(origin, line_no, key, value);
      else fail(origin, line_no, "unknown key in [service]: " + key);
    }
  }

  if (region_length_override > 0.0) {
    const int regions = config.rsu_count * config.regions_per_rsu;
    const double derived = config.road_length_m / regions;
    if (std::abs(region_length_override - derived) > 1e-9) {
      throw ConfigError(origin + ": region_length_m " +
                        std::to_string(region_length_override) +
                        " does not tile road_length_m into " +
                        std::to_string(regions) + " regions");
    }
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return config;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string config_to_text(const ScenarioConfig& config) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "road_length_m = " << format_double(config.road_length_m) << '\n';
  out << "slot_seconds = " << format_double(config.slot_seconds) << '\n';
  out << "rsu_count = " << config.rsu_count << '\n';
  out << "regions_per_rsu = " << config.regions_per_rsu << '\n';
  out << "lane_speeds_kmh =";
  for (double v : config.lane_speeds_kmh) out << ' ' << format_double(v);
  out << '\n';
  out << "uv_count = " << config.uv_count << '\n';
  out << "cv_count = " << config.cv_count << '\n';
  out << "horizon = " << config.horizon << '\n';
  out << "request_prob = " << format_double(config.request_prob) << '\n';
  out << "seed = " << config.seed << '\n';
  out << "stage1 = " << stage1_name(config.stage1) << '\n';
  out << "stage2 = " << stage2_name(config.stage2) << '\n';
  out << "region_kinds =";
  if (config.region_kinds.empty()) {
    out << " random";
  } else {
    for (RegionKind k : config.region_kinds) out << ' ' << region_kind_name(k);
  }
  out << '\n';
  out << "aoi_max_by_kind =";
  for (int m : config.aoi_max_by_kind) out << ' ' << m;
  out << '\n';
  out << "popularity_window = " << config.popularity_window << '\n';
  out << "\n[utility]\n";
  out << "epsilon = " << format_double(config.utility.epsilon) << '\n';
  if (config.auto_aoi_scale) {
    out << "w = auto\n";
  } else {
    out << "w = " << format_double(config.utility.aoi_scale) << '\n';
  }
  out << "w_scale = " << format_double(config.aoi_scale_factor) << '\n';
  out << "weight_mode = "
      << (config.utility.weight_mode == UtilityParams::WeightMode::Uniform ? "uniform"
                                                                           : "aoi-share")
      << '\n';
  out << "freshness_model = "
      << (config.utility.freshness_model == UtilityParams::FreshnessModel::ThresholdRatio
              ? "threshold-ratio"
              : "validity-fraction")
      << '\n';
  out << "popularity_floor = " << format_double(config.utility.popularity_floor) << '\n';
  out << "mbs_term_weight = " << format_double(config.utility.mbs_term_weight) << '\n';
  out << "\n[channels]\n";
  out << "total = " << config.limits.total << '\n';
  out << "cv = " << config.limits.cv << '\n';
  out << "rsu = " << config.limits.rsu << '\n';
  out << "exhaustive_bound = " << config.exhaustive_bound << '\n';
  out << "\n[service]\n";
  switch (config.v_preset) {
    case VPreset::Light: out << "v = light\n"; break;
    case VPreset::Normal: out << "v = normal\n"; break;
    case VPreset::Heavy: out << "v = heavy\n"; break;
    case VPreset::Custom: out << "v = " << format_double(config.dpp.cost_weight) << '\n'; break;
  }
  out << "h_uv_limit = " << config.dpp.h_uv_limit << '\n';
  out << "enforce_staleness = " << (config.dpp.enforce_staleness ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace aoicache
