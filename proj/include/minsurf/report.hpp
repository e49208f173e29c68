#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "minsurf/asymptotics.hpp"
#include "minsurf/experiments.hpp"
#include "minsurf/solver.hpp"

namespace minsurf {

enum class OutputFormat { text, csv, json };

// Real numbers carry 10 significant digits; integral doubles drop the
// decimal point; non-finite values print as nan/inf.  Integer fields are
// emitted via std::to_string at full precision, never through a double.
std::string format_number(double v);

// CSV field with RFC-style quoting (quotes applied only when the value
// contains a comma, quote, or newline).
std::string csv_field(const std::string& s);

// JSON scalar for a double: non-finite becomes null (JSON has no NaN).
std::string json_number(double v);

// x,exact,predicted,ratio tables (mean values, envelope tables, single
// rows from tsum/locdiv).
void emit_report_rows(std::ostream& os, const std::vector<ReportRow>& rows,
                      OutputFormat fmt);

// x,sum_log,c_hat
void emit_log_mean_rows(std::ostream& os, const std::vector<LogMeanRow>& rows,
                        OutputFormat fmt);

// x,sum_reduced,sum_full,ratio
void emit_index_shift_rows(std::ostream& os,
                           const std::vector<IndexShiftRow>& rows,
                           OutputFormat fmt);

// key,value listing: parameters, checked, then the violation count under
// violation_key ("violations", or "ties_found" for the census) and one
// line per witness.
void emit_scan_report(std::ostream& os, const ScanReport& report,
                      OutputFormat fmt, const std::string& violation_key);

// CSV: shell,count histogram (violations are surfaced via exit code and
// stderr); JSON: the full object including sandwich violations.
void emit_shell_census(std::ostream& os, const ShellCensus& census,
                       OutputFormat fmt);

void emit_constants(std::ostream& os, const Constants& c, OutputFormat fmt);

// The one-line human form: n=30 k=3 rho=2,3,5 surface_num=31 ties=1
void emit_profile_line(std::ostream& os, const OptimalProfile& p);

// Streaming profile table (sweep, solve --format csv/json).  For JSON the
// array closer arrives in finish(); rows_written() feeds the checkpoint so
// a resumed stream knows whether a separator is due.
class ProfileWriter {
 public:
  ProfileWriter(std::ostream& os, OutputFormat fmt);

  void begin();                          // fresh stream: header / opener
  void resume(uint64_t rows_already);    // continue an existing stream
  void write(const OptimalProfile& p);
  void finish();

  uint64_t rows_written() const { return rows_; }

 private:
  std::ostream* os_;
  OutputFormat fmt_;
  uint64_t rows_ = 0;
};

}  // namespace minsurf
