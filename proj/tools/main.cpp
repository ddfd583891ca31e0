#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "organic/bootstrap.hpp"
#include "organic/csv.hpp"
#include "organic/discrete.hpp"
#include "organic/errors.hpp"
#include "organic/json_io.hpp"
#include "organic/parametric.hpp"
#include "organic/scm.hpp"

namespace {

using namespace organic;

// "8" applies one count to every binnable variable; "m=4,l1=2" is per-variable
BinningSpec parse_bins(const std::string& text) {
  BinningSpec spec;
  if (text.empty()) return spec;
  try {
    if (text.find('=') == std::string::npos) {
      spec.all = std::stoi(text);
      return spec;
    }
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InvalidArgument("cannot parse binning entry '" + item + "'");
      }
      spec.counts[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse --bins value '" + text + "'");
  }
  return spec;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot open '" + out_path + "' for writing");
  out << text;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string table_number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", v);
  return buffer;
}

std::string effects_table(const std::string& title, const EffectEstimates& e,
                          const BootstrapSummary* boot) {
  std::ostringstream out;
  out << title << "\n";
  const auto row = [&](const char* name, double value, double se, double lo, double hi) {
    out << "  " << name;
    for (std::size_t i = std::char_traits<char>::length(name); i < 18; ++i) out << ' ';
    out << table_number(value);
    if (boot != nullptr) {
      out << "  se=" << table_number(se) << "  ci=[" << table_number(lo) << ", "
          << table_number(hi) << "]";
    }
    out << "\n";
  };
  const EstimandVector zero;
  const EstimandVector& se = boot ? boot->se : zero;
  const EstimandVector& lo = boot ? boot->ci_lower : zero;
  const EstimandVector& hi = boot ? boot->ci_upper : zero;
  row("E(Y0)", e.ey0, se.ey0, lo.ey0, hi.ey0);
  row("E(Y1)", e.ey1, se.ey1, lo.ey1, hi.ey1);
  row("E(Y1I)", e.ey1I, se.ey1I, lo.ey1I, hi.ey1I);
  row("organic direct", e.organic_direct, se.organic_direct, lo.organic_direct,
      hi.organic_direct);
  row("organic indirect", e.organic_indirect, se.organic_indirect, lo.organic_indirect,
      hi.organic_indirect);
  if (boot != nullptr) {
    out << "  (b=" << boot->b << ", alpha=" << table_number(boot->alpha) << ", seed=" << boot->seed
        << ", failures=" << boot->failures << ")\n";
  }
  return out.str();
}

std::string estimate_json(const EffectEstimates& e, const BootstrapSummary* boot) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"ey0\": " << json_number(e.ey0) << ",\n";
  out << "  \"ey1\": " << json_number(e.ey1) << ",\n";
  out << "  \"ey1I\": " << json_number(e.ey1I) << ",\n";
  out << "  \"organic_direct\": " << json_number(e.organic_direct) << ",\n";
  out << "  \"organic_indirect\": " << json_number(e.organic_indirect);
  if (boot != nullptr) {
    out << ",\n  \"bootstrap\": " << bootstrap_to_json(*boot, 2);
  }
  out << "\n}\n";
  return out.str();
}

struct CommonArgs {
  std::string data_path;
  std::string spec_path;
  std::string out_path;
  std::string format = "table";
  std::string features;
  std::string bins;
  double smooth = 0.0;
  bool strict = false;
  std::string estimator = "parametric";
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  int bootstrap_b = 0;
  double alpha = 0.05;
};

FeatureSpec features_for(const CommonArgs& args, const Dataset& data) {
  if (args.features.empty()) return default_feature_spec(data.k, data.p);
  return parse_feature_spec(args.features, data.k, data.p);
}

Dataset load_binned(const CommonArgs& args) {
  Dataset data = read_csv_file(args.data_path);
  const BinningSpec bins = parse_bins(args.bins);
  if (bins.all || !bins.counts.empty()) data = bin_dataset(data, bins);
  return data;
}

int run_simulate(const CommonArgs& args) {
  const ScmSpec spec = scm_spec_from_json_file(args.spec_path);
  const Dataset data = simulate_observed(spec, args.n, args.seed);
  std::ostringstream out;
  write_csv(out, data);
  emit(args.out_path, out.str());
  return 0;
}

int run_estimate(const CommonArgs& args, bool discrete_only) {
  const Dataset data = load_binned(args);
  DiscreteOptions discrete_options;
  discrete_options.smoothing_alpha = args.smooth;
  FitOptions fit_options;
  fit_options.strict = args.strict;
  std::vector<std::string> warnings;

  const bool json = args.format == "json";
  std::ostringstream out;

  const auto run_one = [&](Estimator which) -> std::string {
    EffectEstimates effects;
    std::optional<BootstrapSummary> boot;
    if (args.bootstrap_b > 0) {
      BootstrapOptions options;
      options.estimator = which;
      options.fit = fit_options;
      options.discrete = discrete_options;
      const FeatureSpec spec =
          which == Estimator::Parametric ? features_for(args, data) : FeatureSpec{};
      boot = bootstrap_effects(data, spec, args.bootstrap_b, args.alpha, args.seed, options);
      effects = boot->point;
    } else if (which == Estimator::Parametric) {
      effects = estimate_effects(data, features_for(args, data), fit_options, &warnings);
    } else {
      effects = identify_effects(data, discrete_options);
    }
    const BootstrapSummary* boot_ptr = boot ? &*boot : nullptr;
    if (json) return estimate_json(effects, boot_ptr);
    return effects_table(which == Estimator::Parametric ? "parametric estimate" : "exact estimate",
                         effects, boot_ptr);
  };

  if (discrete_only || args.estimator == "discrete") {
    out << run_one(Estimator::Discrete);
  } else if (args.estimator == "parametric") {
    out << run_one(Estimator::Parametric);
  } else if (args.estimator == "both") {
    if (json) {
      std::string parametric = run_one(Estimator::Parametric);
      std::string discrete = run_one(Estimator::Discrete);
      // nest the two flat objects
      const auto indent = [](std::string text) {
        std::string result;
        std::stringstream stream(text);
        std::string line;
        while (std::getline(stream, line)) result += "  " + line + "\n";
        while (!result.empty() && result.back() == '\n') result.pop_back();
        return result.substr(2);
      };
      out << "{\n  \"parametric\": " << indent(parametric) << ",\n  \"discrete\": "
          << indent(discrete) << "\n}\n";
    } else {
      out << run_one(Estimator::Parametric) << run_one(Estimator::Discrete);
    }
  } else {
    throw InvalidArgument("unknown estimator '" + args.estimator + "'");
  }

  print_warnings(warnings);
  emit(args.out_path, out.str());
  return 0;
}

int run_oracle(const CommonArgs& args) {
  const ScmSpec spec = scm_spec_from_json_file(args.spec_path);
  const OracleEffects oracle = oracle_effects(spec, args.n, args.seed);
  const std::optional<EffectEstimates> closed = closed_form_effects(spec);
  std::ostringstream out;
  if (args.format == "json") {
    out << oracle_to_json(oracle, closed, args.seed);
  } else {
    out << effects_table("oracle means over counterfactual draws", oracle.effects, nullptr);
    out << "  mc se: ey0=" << table_number(oracle.mc_se.ey0)
        << " ey1=" << table_number(oracle.mc_se.ey1) << " ey1I=" << table_number(oracle.mc_se.ey1I)
        << " direct=" << table_number(oracle.mc_se.organic_direct)
        << " indirect=" << table_number(oracle.mc_se.organic_indirect) << "\n";
    if (closed) out << effects_table("closed form", *closed, nullptr);
  }
  emit(args.out_path, out.str());
  return 0;
}

int run_bootstrap(const CommonArgs& args) {
  const Dataset data = load_binned(args);
  BootstrapOptions options;
  options.fit.strict = args.strict;
  options.discrete.smoothing_alpha = args.smooth;
  if (args.estimator == "discrete") {
    options.estimator = Estimator::Discrete;
  } else if (args.estimator != "parametric") {
    throw InvalidArgument("bootstrap estimator must be 'parametric' or 'discrete'");
  }
  const FeatureSpec spec = options.estimator == Estimator::Parametric
                               ? features_for(args, data)
                               : FeatureSpec{};
  const BootstrapSummary summary =
      bootstrap_effects(data, spec, args.bootstrap_b, args.alpha, args.seed, options);
  std::ostringstream out;
  if (args.format == "json") {
    out << estimate_json(summary.point, &summary);
  } else {
    out << effects_table("bootstrap estimate", summary.point, &summary);
  }
  emit(args.out_path, out.str());
  return 0;
}

int fail(int code, const char* kind, const std::exception& e) {
  std::cerr << "error: " << kind << ": " << e.what() << "\n";
  return code;
}

int dispatch(int argc, char** argv) {
  CLI::App app{
      "Estimation of organic direct and indirect effects when a post-treatment common cause "
      "of mediator and outcome is present"};
  app.require_subcommand(1);
  CommonArgs args;

  auto* simulate = app.add_subcommand("simulate", "draw an observed dataset from a generator spec");
  simulate->add_option("--spec", args.spec_path, "generator spec JSON")->required();
  simulate->add_option("--n", args.n, "number of units")->required();
  simulate->add_option("--seed", args.seed, "master seed");
  simulate->add_option("--out", args.out_path, "output CSV path (stdout when omitted)");

  auto* estimate = app.add_subcommand("estimate", "estimate effects from a CSV dataset");
  estimate->add_option("--data", args.data_path, "input CSV")->required();
  estimate->add_option("--features", args.features,
                       "outcome model features, e.g. '1,m,l1,c1,m*l1'");
  estimate->add_option("--estimator", args.estimator, "parametric | discrete | both");
  estimate->add_option("--bootstrap", args.bootstrap_b, "bootstrap replicate count");
  estimate->add_option("--alpha", args.alpha, "bootstrap interval level (default 0.05)");
  estimate->add_option("--seed", args.seed, "bootstrap master seed");
  estimate->add_option("--bins", args.bins, "equal-width binning, e.g. '8' or 'm=4,l1=2'");
  estimate->add_option("--smooth", args.smooth, "Laplace smoothing alpha for the exact engine");
  estimate->add_option("--format", args.format, "table | json");
  estimate->add_option("--out", args.out_path, "output path (stdout when omitted)");
  estimate->add_flag("--strict", args.strict, "error on rank-deficient designs");

  auto* identify = app.add_subcommand("identify", "exact identification over frequency tables");
  identify->add_option("--data", args.data_path, "input CSV")->required();
  identify->add_option("--bins", args.bins, "equal-width binning, e.g. '8' or 'm=4,l1=2'");
  identify->add_option("--smooth", args.smooth, "Laplace smoothing alpha");
  identify->add_option("--format", args.format, "table | json");
  identify->add_option("--out", args.out_path, "output path (stdout when omitted)");

  auto* oracle = app.add_subcommand("oracle", "counterfactual Monte Carlo means from a spec");
  oracle->add_option("--spec", args.spec_path, "generator spec JSON")->required();
  oracle->add_option("--n", args.n, "number of counterfactual draws")->required();
  oracle->add_option("--seed", args.seed, "master seed");
  oracle->add_option("--format", args.format, "table | json");
  oracle->add_option("--out", args.out_path, "output path (stdout when omitted)");

  auto* bootstrap = app.add_subcommand("bootstrap", "bootstrap standard errors and intervals");
  bootstrap->add_option("--data", args.data_path, "input CSV")->required();
  bootstrap->add_option("--b", args.bootstrap_b, "replicate count")->required();
  bootstrap->add_option("--alpha", args.alpha, "interval level (default 0.05)");
  bootstrap->add_option("--seed", args.seed, "master seed");
  bootstrap->add_option("--estimator", args.estimator, "parametric | discrete");
  bootstrap->add_option("--features", args.features, "outcome model features");
  bootstrap->add_option("--bins", args.bins, "equal-width binning before estimation");
  bootstrap->add_option("--smooth", args.smooth, "Laplace smoothing alpha for the exact engine");
  bootstrap->add_option("--format", args.format, "table | json");
  bootstrap->add_option("--out", args.out_path, "output path (stdout when omitted)");
  bootstrap->add_flag("--strict", args.strict, "error on rank-deficient designs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (simulate->parsed()) return run_simulate(args);
  if (estimate->parsed()) return run_estimate(args, false);
  if (identify->parsed()) return run_estimate(args, true);
  if (oracle->parsed()) return run_oracle(args);
  if (bootstrap->parsed()) return run_bootstrap(args);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ValidationError& e) {
    return fail(2, "ValidationError", e);
  } catch (const MalformedHeader& e) {
    return fail(3, "MalformedHeader", e);
  } catch (const ParseError& e) {
    return fail(4, "ParseError", e);
  } catch (const IdentificationGap& e) {
    return fail(5, "IdentificationGap", e);
  } catch (const DegenerateDesign& e) {
    return fail(6, "DegenerateDesign", e);
  } catch (const EmptyArm& e) {
    return fail(7, "EmptyArm", e);
  } catch (const TooManyFailures& e) {
    return fail(8, "TooManyFailures", e);
  } catch (const InvalidArgument& e) {
    return fail(9, "InvalidArgument", e);
  } catch (const DimensionMismatch& e) {
    return fail(10, "DimensionMismatch", e);
  } catch (const std::exception& e) {
    return fail(1, "Error", e);
  }
}
