#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lambda_rts {

/// One decision making unit: an observed input vector and output vector.
/// Components are nonnegative and finite, and each side has at least one
/// strictly positive entry. `period` is empty for cross-sectional data.
struct ProductionUnit {
  std::string id;
  std::string period;
  std::vector<double> inputs;
  std::vector<double> outputs;
};

struct ValidationIssue {
  std::string unit_id;
  std::string period;
  std::string message;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// A validated cross-section: at least one unit, consistent dimensions,
/// unique ids. Construction goes through validate()/try_validate(); the data
/// is immutable afterwards, which keeps per-unit computations freely
/// parallelizable.
class Dataset {
 public:
  /// Throws ValidationError listing every violation with the unit id.
  static Dataset validate(std::vector<ProductionUnit> units);

  /// Non-throwing variant; on failure returns nullopt and, when `issues` is
  /// given, appends the violations.
  static std::optional<Dataset> try_validate(std::vector<ProductionUnit> units,
                                             std::vector<ValidationIssue>* issues = nullptr);

  std::size_t size() const noexcept { return units_.size(); }
  std::size_t n_inputs() const noexcept { return n_inputs_; }
  std::size_t n_outputs() const noexcept { return n_outputs_; }
  const ProductionUnit& unit(std::size_t k) const { return units_.at(k); }
  const std::vector<ProductionUnit>& units() const noexcept { return units_; }

 private:
  Dataset(std::vector<ProductionUnit> units, std::size_t n_in, std::size_t n_out)
      : units_(std::move(units)), n_inputs_(n_in), n_outputs_(n_out) {}

  std::vector<ProductionUnit> units_;
  std::size_t n_inputs_ = 0;
  std::size_t n_outputs_ = 0;
};

/// Structural problems of a single unit against expected dimensions:
/// negative or non-finite entries, all-zero input or output side, dimension
/// mismatch. Returns human-readable messages, empty when the unit is clean.
std::vector<std::string> unit_issues(const ProductionUnit& u,
                                     std::size_t n_inputs,
                                     std::size_t n_outputs);

}  // namespace lambda_rts
