#include "lambda_rts/log_ratios.hpp"

#include <stdexcept>

namespace lambda_rts {

std::vector<std::size_t> carrier(std::span<const double> v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0.0) idx.push_back(i);
  return idx;
}

ExtendedReal ratio_max(std::span<const double> num, std::span<const double> den,
                       const std::vector<std::size_t>& idx) {
  if (idx.empty())
    throw std::domain_error("ratio_max: empty index set");
  double best = 0.0;
  for (std::size_t i : idx) {
    if (den[i] == 0.0) {
      if (num[i] > 0.0) return ExtendedReal::infinity();
      continue;  // 0/0 carries no information
    }
    double r = num[i] / den[i];
    if (r > best) best = r;
  }
  return ExtendedReal(best);
}

ExtendedReal output_reach_ratio(std::span<const double> y, std::span<const double> yk) {
  double best = 0.0;
  for (std::size_t h = 0; h < y.size(); ++h) {
    if (y[h] <= 0.0) continue;
    if (yk[h] == 0.0) return ExtendedReal::infinity();
    double r = y[h] / yk[h];
    if (r > best) best = r;
  }
  return ExtendedReal(best);
}

ExtendedReal input_reach_ratio(std::span<const double> x, std::span<const double> xk) {
  double best = 0.0;
  bool has_support = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      has_support = true;
      double r = xk[i] / x[i];
      if (r > best) best = r;
    } else if (xk[i] > 0.0) {
      // k needs an input the point does not use at all; no contraction of x
      // reaches it.
      return ExtendedReal::infinity();
    }
  }
  if (!has_support)
    throw std::domain_error("input_reach_ratio: input vector has empty support");
  return ExtendedReal(best);
}

PointLogRatios point_log_ratios(const Dataset& d, std::span<const double> x,
                                std::span<const double> y) {
  PointLogRatios out;
  out.f.reserve(d.size());
  out.g.reserve(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& u = d.unit(k);
    out.f.push_back(ext_log(output_reach_ratio(y, u.outputs)));
    out.g.push_back(ext_log(input_reach_ratio(x, u.inputs)));
  }
  return out;
}

LogRatioRow log_ratio_row(const Dataset& d, std::size_t j) {
  const auto& u = d.unit(j);
  PointLogRatios p = point_log_ratios(d, u.inputs, u.outputs);
  return LogRatioRow{j, std::move(p.f), std::move(p.g)};
}

}  // namespace lambda_rts
