#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "genfun/errors.hpp"

namespace genfun::cli {

struct ReportRow {
  std::string experiment;
  long sample = 0;
  std::vector<double> inputs;
  std::string metric;
  std::variant<double, ErrorCode> value;
};

/// 17 significant digits, "." decimal separator.
std::string format_double(double v);

/// Header "experiment,sample,inputs,metric,value"; inputs joined with ';';
/// failed values written as "failed:<ErrorCode>".
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);

enum class Bound { AtMost, Below, AtLeast, None };

struct MetricSpec {
  std::string name;
  Bound bound = Bound::None;
  double threshold = 0.0;
  /// Fraction of rows allowed to fail with an error tag.
  double max_failure_rate = 0.0;
};

/// Aggregates rows of one metric into {count, failed, min, max, mean, threshold, pass}.
nlohmann::json summarize_metric(const MetricSpec& spec, const std::vector<ReportRow>& rows);

}  // namespace genfun::cli
