#include "kreinkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace kreinkit {

CheckRecord record_from_step(const StepReport& step) {
  CheckRecord rec;
  rec.name = step.step_name;
  rec.passed = step.passed;
  rec.details = step.details;
  if (step.verdict.has_value()) {
    rec.verdict = to_string(step.verdict->verdict);
    rec.min_eigenvalue = step.verdict->min_eigenvalue;
    rec.max_eigenvalue = step.verdict->max_eigenvalue;
  } else {
    rec.verdict = step.passed ? "pass" : "fail";
  }
  rec.residual = step.residual;
  return rec;
}

std::string to_json_text(const RunReport& report) {
  nlohmann::json j;
  j["schema"] = "kreinkit-report/1";
  j["version"] = report.version;
  j["command"] = report.command;
  j["master_seed"] = report.master_seed;
  j["tolerances"] = {
      {"verdict_rel", report.tolerances.verdict_rel},
      {"rank_rel", report.tolerances.rank_rel},
      {"invertibility", report.tolerances.invertibility},
      {"quadrature_rel", report.tolerances.quadrature_rel},
      {"residual_rel", report.tolerances.residual_rel},
      {"batch_margin", report.tolerances.batch_margin},
  };
  j["overall_pass"] = report.overall_pass;
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckRecord& rec : report.checks) {
    nlohmann::json c;
    c["name"] = rec.name;
    c["verdict"] = rec.verdict;
    c["passed"] = rec.passed;
    if (rec.residual.has_value()) c["residual"] = *rec.residual;
    if (rec.min_eigenvalue.has_value()) c["min_eigenvalue"] = *rec.min_eigenvalue;
    if (rec.max_eigenvalue.has_value()) c["max_eigenvalue"] = *rec.max_eigenvalue;
    if (!rec.details.empty()) c["details"] = rec.details;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

std::string format_dyadic(double x) {
  if (x == 0.0) return "0";  // folds -0 into 0 for display
  // Integer k / 2^m with small k and m prints as an exact fraction.
  if (std::isfinite(x)) {
    for (int m = 0; m <= 20; ++m) {
      const double scaled = std::ldexp(x, m);  // x * 2^m
      if (scaled == std::floor(scaled) && std::abs(scaled) < 1e15) {
        const long long k = static_cast<long long>(scaled);
        std::ostringstream os;
        if (m == 0) {
          os << k;
        } else {
          os << k << "/" << (1LL << m);
        }
        return os.str();
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(const Complex& z) {
  if (z.imag() == 0.0) return format_dyadic(z.real());
  std::ostringstream os;
  os << format_dyadic(z.real()) << (z.imag() < 0.0 ? "-" : "+")
     << format_dyadic(std::abs(z.imag())) << "i";
  return os.str();
}

std::string format_matrix(const ComplexMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : " [");
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      os << format_complex(m(i, j));
    }
    os << "]";
    if (i + 1 < m.rows()) os << ",";
  }
  os << "]";
  return os.str();
}

}  // namespace kreinkit
