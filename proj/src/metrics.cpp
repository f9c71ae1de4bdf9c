#include "aoicache/metrics.hpp"

#include <cstdio>
#include <sstream>

namespace aoicache {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::string slots_csv(const MetricsLog& log) {
  std::ostringstream out;
  out << "# aoicache slots.csv v1\n";
  out << "slot,uploads,updates,caching_cost,served,stale_blocks,service_cost,aoi_exceed";
  const std::size_t regions = log.rows.empty() ? 0 : log.rows.front().rsu_aoi.size();
  const std::size_t uvs = log.rows.empty() ? 0 : log.rows.front().uv_backlog.size();
  for (std::size_t h = 0; h < regions; ++h) out << ",region" << h << "_aoi";
  for (std::size_t i = 0; i < uvs; ++i) out << ",uv" << i << "_backlog";
  out << '\n';
  for (const SlotRow& row : log.rows) {
    out << row.slot << ',' << row.uploads << ',' << row.updates << ','
        << format_double(row.caching_cost) << ',' << row.served << ','
        << row.stale_blocks << ',' << format_double(row.service_cost) << ','
        << row.aoi_exceed;
    for (int age : row.rsu_aoi) out << ',' << age;
    for (double backlog : row.uv_backlog) out << ',' << format_double(backlog);
    out << '\n';
  }
  return out.str();
}

std::string summary_csv(const MetricsLog& log) {
  std::ostringstream out;
  out << "# aoicache summary.csv v1\n";
  out << "metric,slot,kind,value\n";
  const RunSummary& s = log.summary;
  out << "uploads,,," << s.uploads << '\n';
  out << "updates,,," << s.updates << '\n';
  out << "aoi_max_exceed,,," << s.aoi_max_exceed << '\n';
  out << "service_success,,," << s.service_success << '\n';
  out << "cost_save,,," << s.cost_save << '\n';
  out << "stale_blocks,,," << s.stale_blocks << '\n';
  out << "caching_cost_total,,," << format_double(s.caching_cost_total) << '\n';
  out << "service_cost_total,,," << format_double(s.service_cost_total) << '\n';
  for (const KindStatRow& row : log.kind_stats) {
    out << "aoi_avg," << row.slot << ',' << region_kind_name(row.kind) << ','
        << format_double(row.avg) << '\n';
    out << "aoi_min," << row.slot << ',' << region_kind_name(row.kind) << ','
        << row.min_age << '\n';
    out << "aoi_max," << row.slot << ',' << region_kind_name(row.kind) << ','
        << row.max_age << '\n';
  }
  return out.str();
}

std::string summary_text(const MetricsLog& log) {
  std::ostringstream out;
  const RunSummary& s = log.summary;
  out << "uploads            " << s.uploads << '\n';
  out << "updates            " << s.updates << '\n';
  out << "aoi_max_exceed     " << s.aoi_max_exceed << '\n';
  out << "service_success    " << s.service_success << '\n';
  out << "cost_save          " << s.cost_save << '\n';
  out << "stale_blocks       " << s.stale_blocks << '\n';
  out << "caching_cost_total " << format_double(s.caching_cost_total) << '\n';
  out << "service_cost_total " << format_double(s.service_cost_total) << '\n';
  return out.str();
}

}  // namespace aoicache
