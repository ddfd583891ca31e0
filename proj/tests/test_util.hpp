#pragma once

#include <Eigen/Dense>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "organic/discrete.hpp"
#include "organic/rng.hpp"
#include "organic/scm.hpp"
#include "organic/types.hpp"

namespace test_util {

using organic::Dataset;
using organic::Index;
using organic::Matrix;
using organic::ObservedRecord;
using organic::Rng;
using organic::ScmSpec;
using organic::Vector;

inline ObservedRecord record(int a, std::vector<double> c, std::vector<double> l, double m,
                             double y) {
  ObservedRecord rec;
  rec.a = a;
  rec.c = Eigen::Map<Vector>(c.data(), static_cast<Index>(c.size()));
  rec.l = Eigen::Map<Vector>(l.data(), static_cast<Index>(l.size()));
  rec.m = m;
  rec.y = y;
  return rec;
}

inline Dataset dataset(Index k, Index p, std::vector<ObservedRecord> records) {
  Dataset data;
  data.k = k;
  data.p = p;
  data.records = std::move(records);
  return data;
}

// --- independent least-squares oracle: normal equations -------------------

struct NormalEquationsFit {
  Vector coefficients;
  Vector standard_errors;
  double residual_sd = 0.0;
};

inline NormalEquationsFit normal_equations(const Matrix& x, const Vector& y) {
  const Matrix xtx = x.transpose() * x;
  Eigen::LDLT<Matrix> ldlt(xtx);
  NormalEquationsFit fit;
  fit.coefficients = ldlt.solve(x.transpose() * y);
  const Vector residuals = y - x * fit.coefficients;
  const double df = static_cast<double>(x.rows() - x.cols());
  const double sigma2 = df > 0 ? residuals.squaredNorm() / df : 0.0;
  fit.residual_sd = std::sqrt(sigma2);
  const Matrix covariance =
      sigma2 * ldlt.solve(Matrix::Identity(x.cols(), x.cols()));
  fit.standard_errors = covariance.diagonal().cwiseSqrt();
  return fit;
}

// --- independent identification oracle: brute-force triple sum ------------
//
// Walks the raw records directly: for every distinct c (pooled), every
// distinct l among treated records at c, and every distinct m among control
// records at (l, c), accumulates
//   mean(y | a=1, m, l, c) * P(m | l, c, a=0) * P(l | c, a=1) * P(c).
// Kept deliberately naive and separate from the DiscreteLaw tables.
inline double brute_force_ey1I(const Dataset& data) {
  const auto eq = [](const Vector& a, const Vector& b) { return a == b; };
  const double n = static_cast<double>(data.records.size());

  std::vector<Vector> seen_c;
  double total = 0.0;
  for (const auto& rc : data.records) {
    bool dup = false;
    for (const auto& c : seen_c) dup = dup || eq(c, rc.c);
    if (dup) continue;
    seen_c.push_back(rc.c);
    const Vector c = rc.c;

    double count_c = 0.0, treated_c = 0.0;
    for (const auto& r : data.records) {
      if (!eq(r.c, c)) continue;
      count_c += 1.0;
      if (r.a == 1) treated_c += 1.0;
    }

    std::vector<Vector> seen_l;
    double sum_c = 0.0;
    for (const auto& rl : data.records) {
      if (rl.a != 1 || !eq(rl.c, c)) continue;
      bool ldup = false;
      for (const auto& l : seen_l) ldup = ldup || eq(l, rl.l);
      if (ldup) continue;
      seen_l.push_back(rl.l);
      const Vector l = rl.l;

      double treated_lc = 0.0, control_lc = 0.0;
      for (const auto& r : data.records) {
        if (!eq(r.c, c) || !eq(r.l, l)) continue;
        if (r.a == 1) treated_lc += 1.0;
        else control_lc += 1.0;
      }

      std::vector<double> seen_m;
      double sum_l = 0.0;
      for (const auto& rm : data.records) {
        if (rm.a != 0 || !eq(rm.c, c) || !eq(rm.l, l)) continue;
        bool mdup = false;
        for (double m : seen_m) mdup = mdup || m == rm.m;
        if (mdup) continue;
        seen_m.push_back(rm.m);
        const double m = rm.m;

        double control_mlc = 0.0, y_sum = 0.0, y_count = 0.0;
        for (const auto& r : data.records) {
          if (!eq(r.c, c) || !eq(r.l, l) || r.m != m) continue;
          if (r.a == 0) control_mlc += 1.0;
          if (r.a == 1) {
            y_sum += r.y;
            y_count += 1.0;
          }
        }
        sum_l += (y_sum / y_count) * (control_mlc / control_lc);
      }
      sum_c += sum_l * (treated_lc / treated_c);
    }
    total += sum_c * (count_c / n);
  }
  return total;
}

// --- dataset generators -----------------------------------------------------

// Every (a, c, l, m) combination occupied once, plus `extra` random records;
// saturating the cells guarantees positivity. k is 0 or 1, p is 1.
inline Dataset random_binary_dataset(Rng& rng, Index k, Index extra) {
  Dataset data;
  data.k = k;
  data.p = 1;
  const int c_values = k == 0 ? 1 : 2;
  for (int a = 0; a <= 1; ++a) {
    for (int ci = 0; ci < c_values; ++ci) {
      for (int li = 0; li <= 1; ++li) {
        for (int mi = 0; mi <= 1; ++mi) {
          std::vector<double> c;
          if (k == 1) c.push_back(ci);
          data.records.push_back(record(a, c, {static_cast<double>(li)},
                                        static_cast<double>(mi), rng.next_gaussian()));
        }
      }
    }
  }
  for (Index i = 0; i < extra; ++i) {
    std::vector<double> c;
    if (k == 1) c.push_back(static_cast<double>(rng.next_below(2)));
    data.records.push_back(record(static_cast<int>(rng.next_below(2)), c,
                                  {static_cast<double>(rng.next_below(2))},
                                  static_cast<double>(rng.next_below(2)),
                                  rng.next_gaussian()));
  }
  return data;
}

// Continuous dataset with linear mediator and outcome plus noise; arms
// alternate so both are always populated.
inline Dataset random_continuous_dataset(Rng& rng, Index n, Index k, Index p) {
  Dataset data;
  data.k = k;
  data.p = p;
  for (Index i = 0; i < n; ++i) {
    ObservedRecord rec;
    rec.a = static_cast<int>(i % 2);
    rec.c = Vector::NullaryExpr(k, [&](Index) { return rng.next_gaussian(); });
    rec.l = Vector::NullaryExpr(p, [&](Index) { return 0.5 * rec.a + rng.next_gaussian(); });
    rec.m = 0.3 + 0.7 * rec.a + 0.4 * rec.c.sum() + 0.6 * rec.l.sum() + rng.next_gaussian();
    rec.y = 1.0 + 0.5 * rec.a + 0.8 * rec.m + 0.2 * rec.l.sum() + 0.1 * rec.c.sum() +
            rng.next_gaussian();
    data.records.push_back(std::move(rec));
  }
  return data;
}

// The linear-Gaussian generator with truth (ey0, ey1I, ey1) = (0, 2, 3):
// L gains 1 under treatment, M tracks L plus 1 under treatment, Y adds
// treatment and mediator.
inline ScmSpec linear_gaussian_spec() {
  ScmSpec spec = ScmSpec::zeros(1, 1);
  spec.treat_prob = 0.5;
  spec.c_mean[0] = 0.0;
  spec.c_sd[0] = 1.0;
  spec.l_intercept[0] = 0.0;
  spec.l_a_effect[0] = 1.0;
  spec.l_noise_sd[0] = 1.0;
  spec.m_beta0 = 0.0;
  spec.m_beta1 = 1.0;
  spec.m_beta3[0] = 1.0;
  spec.m_noise_sd = 1.0;
  spec.y_gamma0 = 0.0;
  spec.y_gamma_a = 1.0;
  spec.y_gamma_m = 1.0;
  spec.y_noise_sd = 1.0;
  return spec;
}

// --- CLI process helpers ----------------------------------------------------

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout
  std::string errors;  // stderr
};

inline CliResult run_command(const std::string& command) {
  CliResult result;
  static int counter = 0;
  const std::string err_path =
      (std::filesystem::temp_directory_path() /
       ("organic_stderr_" + std::to_string(getpid()) + "_" + std::to_string(counter++)))
          .string();
  FILE* pipe = popen((command + " 2>" + err_path).c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.errors = read_file(err_path);
  std::error_code ec;
  std::filesystem::remove(err_path, ec);
  return result;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("organic_test_" + std::to_string(getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace test_util
