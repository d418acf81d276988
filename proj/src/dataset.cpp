#include "lambda_rts/dataset.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace lambda_rts {

namespace {

std::string format_issues(const std::vector<ValidationIssue>& issues) {
  std::ostringstream os;
  os << "dataset validation failed (" << issues.size() << " issue"
     << (issues.size() == 1 ? "" : "s") << ")";
  for (const auto& is : issues) {
    os << "; unit '" << is.unit_id << "'";
    if (!is.period.empty()) os << " period '" << is.period << "'";
    os << ": " << is.message;
  }
  return os.str();
}

void check_side(const std::vector<double>& v, const char* side,
                std::size_t expected, std::vector<std::string>& out) {
  if (v.size() != expected) {
    std::ostringstream os;
    os << side << " dimension " << v.size() << " does not match dataset dimension "
       << expected;
    out.push_back(os.str());
    return;
  }
  bool any_positive = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << side << " " << i << " is not finite";
      out.push_back(os.str());
    } else if (v[i] < 0.0) {
      std::ostringstream os;
      os << side << " " << i << " is negative (" << v[i] << ")";
      out.push_back(os.str());
    } else if (v[i] > 0.0) {
      any_positive = true;
    }
  }
  if (!any_positive) {
    std::ostringstream os;
    os << "all " << side << "s are zero";
    out.push_back(os.str());
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(format_issues(issues)), issues_(std::move(issues)) {}

std::vector<std::string> unit_issues(const ProductionUnit& u,
                                     std::size_t n_inputs,
                                     std::size_t n_outputs) {
  std::vector<std::string> out;
  check_side(u.inputs, "input", n_inputs, out);
  check_side(u.outputs, "output", n_outputs, out);
  return out;
}

std::optional<Dataset> Dataset::try_validate(std::vector<ProductionUnit> units,
                                             std::vector<ValidationIssue>* issues) {
  std::vector<ValidationIssue> found;
  if (units.empty()) {
    found.push_back({"", "", "dataset holds no units"});
  } else {
    const std::size_t n_in = units.front().inputs.size();
    const std::size_t n_out = units.front().outputs.size();
    if (n_in == 0) found.push_back({units.front().id, units.front().period,
                                    "dataset has zero input dimensions"});
    if (n_out == 0) found.push_back({units.front().id, units.front().period,
                                     "dataset has zero output dimensions"});
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& u : units) {
      for (auto& msg : unit_issues(u, n_in, n_out))
        found.push_back({u.id, u.period, std::move(msg)});
      if (!seen.insert({u.period, u.id}).second)
        found.push_back({u.id, u.period, "duplicate unit id within period"});
    }
    if (found.empty())
      return Dataset(std::move(units), n_in, n_out);
  }
  if (issues)
    issues->insert(issues->end(), found.begin(), found.end());
  return std::nullopt;
}

Dataset Dataset::validate(std::vector<ProductionUnit> units) {
  std::vector<ValidationIssue> issues;
  auto d = try_validate(std::move(units), &issues);
  if (!d) throw ValidationError(std::move(issues));
  return std::move(*d);
}

}  // namespace lambda_rts
