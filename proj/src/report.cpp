#include "minsurf/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace minsurf {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.10g", v);
  }
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_number(v);
}

namespace {

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string rho_list(const std::vector<uint64_t>& v, char sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

void emit_report_rows(std::ostream& os, const std::vector<ReportRow>& rows,
                      OutputFormat fmt) {
  if (fmt == OutputFormat::json) {
    os << "[";
    for (size_t i = 0; i < rows.size(); ++i) {
      os << (i ? ",\n" : "\n");
      os << "{\"x\":" << rows[i].x << ",\"exact\":" << rows[i].exact
         << ",\"predicted\":" << json_number(rows[i].predicted)
         << ",\"ratio\":" << json_number(rows[i].ratio) << "}";
    }
    os << (rows.empty() ? "]\n" : "\n]\n");
    return;
  }
  os << "x,exact,predicted,ratio\n";
  for (const ReportRow& r : rows) {
    os << r.x << ',' << r.exact << ',' << format_number(r.predicted) << ','
       << format_number(r.ratio) << '\n';
  }
}

void emit_log_mean_rows(std::ostream& os, const std::vector<LogMeanRow>& rows,
                        OutputFormat fmt) {
  if (fmt == OutputFormat::json) {
    os << "[";
    for (size_t i = 0; i < rows.size(); ++i) {
      os << (i ? ",\n" : "\n");
      os << "{\"x\":" << rows[i].x
         << ",\"sum_log\":" << json_number(rows[i].sum_log)
         << ",\"c_hat\":" << json_number(rows[i].c_hat) << "}";
    }
    os << (rows.empty() ? "]\n" : "\n]\n");
    return;
  }
  os << "x,sum_log,c_hat\n";
  for (const LogMeanRow& r : rows) {
    os << r.x << ',' << format_number(r.sum_log) << ','
       << format_number(r.c_hat) << '\n';
  }
}

void emit_index_shift_rows(std::ostream& os,
                           const std::vector<IndexShiftRow>& rows,
                           OutputFormat fmt) {
  if (fmt == OutputFormat::json) {
    os << "[";
    for (size_t i = 0; i < rows.size(); ++i) {
      os << (i ? ",\n" : "\n");
      os << "{\"x\":" << rows[i].x << ",\"sum_reduced\":" << rows[i].sum_reduced
         << ",\"sum_full\":" << rows[i].sum_full
         << ",\"ratio\":" << json_number(rows[i].ratio) << "}";
    }
    os << (rows.empty() ? "]\n" : "\n]\n");
    return;
  }
  os << "x,sum_reduced,sum_full,ratio\n";
  for (const IndexShiftRow& r : rows) {
    os << r.x << ',' << r.sum_reduced << ',' << r.sum_full << ','
       << format_number(r.ratio) << '\n';
  }
}

void emit_scan_report(std::ostream& os, const ScanReport& report,
                      OutputFormat fmt, const std::string& violation_key) {
  if (fmt == OutputFormat::json) {
    os << "{\"x\":" << report.x << ",\"k\":" << report.k;
    if (report.j >= 1) os << ",\"j\":" << report.j;
    os << ",\"checked\":" << report.checked << ",\"" << violation_key
       << "\":" << report.violations.size() << ",\"details\":[";
    for (size_t i = 0; i < report.violations.size(); ++i) {
      if (i) os << ',';
      os << "{\"n\":" << report.violations[i].n
         << ",\"witness\":" << json_string(report.violations[i].detail) << "}";
    }
    os << "]}\n";
    return;
  }
  os << "key,value\n";
  os << "x," << report.x << '\n';
  os << "k," << report.k << '\n';
  if (report.j >= 1) os << "j," << report.j << '\n';
  os << "checked," << report.checked << '\n';
  os << violation_key << ',' << report.violations.size() << '\n';
  for (const Violation& v : report.violations) {
    os << "violation,"
       << csv_field("n=" + std::to_string(v.n) + " " + v.detail) << '\n';
  }
}

void emit_shell_census(std::ostream& os, const ShellCensus& census,
                       OutputFormat fmt) {
  if (fmt == OutputFormat::json) {
    os << "{\"x\":" << census.x << ",\"k\":" << census.k << ",\"counts\":[";
    for (size_t i = 0; i < census.counts.size(); ++i) {
      if (i) os << ',';
      os << census.counts[i];
    }
    os << "],\"sandwich_violations\":[";
    for (size_t i = 0; i < census.sandwich_violations.size(); ++i) {
      if (i) os << ',';
      os << "{\"n\":" << census.sandwich_violations[i].n << ",\"witness\":"
         << json_string(census.sandwich_violations[i].detail) << "}";
    }
    os << "]}\n";
    return;
  }
  os << "shell,count\n";
  for (size_t l = 0; l < census.counts.size(); ++l) {
    os << l << ',' << census.counts[l] << '\n';
  }
}

void emit_constants(std::ostream& os, const Constants& c, OutputFormat fmt) {
  const std::string alpha =
      std::to_string(c.alpha_num) + "/" + std::to_string(c.alpha_den);
  switch (fmt) {
    case OutputFormat::json:
      os << "{\"k\":" << c.k << ",\"j\":" << c.j << ",\"gamma\":" << c.gamma
         << ",\"alpha_num\":" << c.alpha_num << ",\"alpha_den\":" << c.alpha_den
         << ",\"delta_k\":" << json_number(c.delta) << ",\"coefficient\":"
         << (c.coefficient ? json_number(*c.coefficient) : "null") << "}\n";
      return;
    case OutputFormat::csv:
      os << "k,j,gamma,alpha,delta_k,coefficient\n";
      os << c.k << ',' << c.j << ',' << c.gamma << ',' << csv_field(alpha)
         << ',' << format_number(c.delta) << ','
         << (c.coefficient ? format_number(*c.coefficient) : "") << '\n';
      return;
    case OutputFormat::text:
      os << "k=" << c.k << " j=" << c.j << " gamma=" << c.gamma
         << " alpha=" << alpha << " delta_k=" << format_number(c.delta);
      if (c.coefficient) os << " C=" << format_number(*c.coefficient);
      os << '\n';
      return;
  }
}

void emit_profile_line(std::ostream& os, const OptimalProfile& p) {
  os << "n=" << p.n << " k=" << p.k() << " rho=" << rho_list(p.rho.factors, ',')
     << " surface_num=" << p.rho.surface_num << " ties=" << p.tie_count
     << '\n';
}

ProfileWriter::ProfileWriter(std::ostream& os, OutputFormat fmt)
    : os_(&os), fmt_(fmt) {}

void ProfileWriter::begin() {
  rows_ = 0;
  if (fmt_ == OutputFormat::json) {
    *os_ << "[";
  } else if (fmt_ == OutputFormat::csv) {
    *os_ << "n,k,rho,surface_num,tie_count\n";
  }
}

void ProfileWriter::resume(uint64_t rows_already) { rows_ = rows_already; }

void ProfileWriter::write(const OptimalProfile& p) {
  if (fmt_ == OutputFormat::json) {
    *os_ << (rows_ ? ",\n" : "\n");
    *os_ << "{\"n\":" << p.n << ",\"k\":" << p.k() << ",\"rho\":["
         << rho_list(p.rho.factors, ',') << "],\"surface_num\":"
         << p.rho.surface_num << ",\"tie_count\":" << p.tie_count << "}";
  } else if (fmt_ == OutputFormat::csv) {
    *os_ << p.n << ',' << p.k() << ',' << csv_field(rho_list(p.rho.factors, ','))
         << ',' << p.rho.surface_num << ',' << p.tie_count << '\n';
  } else {
    emit_profile_line(*os_, p);
  }
  ++rows_;
}

void ProfileWriter::finish() {
  if (fmt_ == OutputFormat::json) {
    *os_ << (rows_ ? "\n]\n" : "]\n");
  }
}

}  // namespace minsurf
