#include "organic/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "organic/errors.hpp"

namespace organic {

Index Dataset::arm_count(int a) const {
  Index count = 0;
  for (const auto& r : records) {
    if (r.a == a) ++count;
  }
  return count;
}

double Dataset::arm_mean_y(int a) const {
  std::vector<double> ys;
  ys.reserve(records.size());
  for (const auto& r : records) {
    if (r.a == a) ys.push_back(r.y);
  }
  if (ys.empty()) throw EmptyArm("arm " + std::to_string(a) + " absent");
  return sorted_mean(std::move(ys));
}

std::string ValidationReport::joined() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) out << "; ";
    out << violations[i];
  }
  return out.str();
}

namespace {

bool all_finite(const Vector& v) {
  return v.allFinite();
}

}  // namespace

ValidationReport validate_dataset(const Dataset& dataset) {
  ValidationReport report;
  if (dataset.records.empty()) {
    report.violations.push_back("dataset is empty");
    return report;
  }
  if (dataset.k < 0 || dataset.p < 0) {
    report.violations.push_back("negative covariate dimension");
    return report;
  }

  bool has_arm0 = false, has_arm1 = false;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const ObservedRecord& r = dataset.records[i];
    const std::string at = "record " + std::to_string(i);
    if (r.a != 0 && r.a != 1) {
      report.violations.push_back(at + ": a=" + std::to_string(r.a) + " is not in {0,1}");
    } else {
      (r.a == 1 ? has_arm1 : has_arm0) = true;
    }
    if (r.c.size() != dataset.k) {
      report.violations.push_back(at + ": c has length " + std::to_string(r.c.size()) +
                                  ", expected " + std::to_string(dataset.k));
    }
    if (r.l.size() != dataset.p) {
      report.violations.push_back(at + ": l has length " + std::to_string(r.l.size()) +
                                  ", expected " + std::to_string(dataset.p));
    }
    if (!all_finite(r.c)) report.violations.push_back(at + ": c is not finite");
    if (!all_finite(r.l)) report.violations.push_back(at + ": l is not finite");
    if (!std::isfinite(r.m)) report.violations.push_back(at + ": m is not finite");
    if (!std::isfinite(r.y)) report.violations.push_back(at + ": y is not finite");
  }
  if (!has_arm0) report.violations.push_back("arm 0 absent");
  if (!has_arm1) report.violations.push_back("arm 1 absent");
  return report;
}

void require_valid(const Dataset& dataset) {
  const ValidationReport report = validate_dataset(dataset);
  if (!report.ok()) throw ValidationError(report.joined());
}

double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum;
}

double sorted_mean(std::vector<double> v) {
  if (v.empty()) throw InvalidArgument("mean of empty vector");
  const double n = static_cast<double>(v.size());
  return sorted_sum(std::move(v)) / n;
}

}  // namespace organic
