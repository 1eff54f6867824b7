#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace genfun::cli {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "experiment,sample,inputs,metric,value\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.sample << ',';
    for (std::size_t i = 0; i < r.inputs.size(); ++i) {
      if (i) out << ';';
      out << format_double(r.inputs[i]);
    }
    out << ',' << r.metric << ',';
    if (const auto* v = std::get_if<double>(&r.value)) {
      out << format_double(*v);
    } else {
      out << "failed:" << to_string(std::get<ErrorCode>(r.value));
    }
    out << '\n';
  }
}

nlohmann::json summarize_metric(const MetricSpec& spec, const std::vector<ReportRow>& rows) {
  long count = 0;
  long failed = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& r : rows) {
    if (r.metric != spec.name) continue;
    ++count;
    const auto* v = std::get_if<double>(&r.value);
    if (!v || !std::isfinite(*v)) {
      ++failed;
      continue;
    }
    lo = std::min(lo, *v);
    hi = std::max(hi, *v);
    sum += *v;
  }
  const long ok = count - failed;
  nlohmann::json j = {{"count", count}, {"failed", failed}};
  if (ok > 0) {
    j["min"] = lo;
    j["max"] = hi;
    j["mean"] = sum / static_cast<double>(ok);
  }
  bool pass = count > 0 && static_cast<double>(failed) <= spec.max_failure_rate * static_cast<double>(count);
  switch (spec.bound) {
    case Bound::AtMost: pass = pass && (ok == 0 || hi <= spec.threshold); break;
    case Bound::Below: pass = pass && (ok == 0 || hi < spec.threshold); break;
    case Bound::AtLeast: pass = pass && (ok == 0 || lo >= spec.threshold); break;
    case Bound::None: pass = true; break;
  }
  if (spec.bound != Bound::None) {
    j["threshold"] = spec.threshold;
    j["bound"] = spec.bound == Bound::AtLeast ? ">=" : spec.bound == Bound::Below ? "<" : "<=";
  }
  j["pass"] = pass;
  return j;
}

}  // namespace genfun::cli
