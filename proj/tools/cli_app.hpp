#pragma once

// Command-line front end: eval, fit, sample, compare, reproduce.
// Exit status: 0 success, 2 usage error, 1 computation failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdew/bdew.hpp"

namespace bdew::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  std::optional<double> alpha, p, b1, b2, b3;
  std::string file;

  void attach(CLI::App& cmd) {
    cmd.add_option("--alpha", alpha, "shape alpha > 0");
    cmd.add_option("--p", p, "base probability in (0,1)");
    cmd.add_option("--b1", b1, "beta1 > 0");
    cmd.add_option("--b2", b2, "beta2 > 0");
    cmd.add_option("--b3", b3, "beta3 > 0");
    cmd.add_option("--params", file, "JSON file with alpha, p, b1, b2, b3 (flags win)");
  }

  BdewParams resolve() const {
    std::optional<double> fa, fp, f1, f2, f3;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw UsageError("cannot open parameter file '" + file + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw UsageError("malformed parameter file '" + file + "': " + e.what());
      }
      auto get = [&j](const char* key) -> std::optional<double> {
        if (j.contains(key) && j[key].is_number()) return j[key].get<double>();
        return std::nullopt;
      };
      fa = get("alpha");
      fp = get("p");
      f1 = get("b1");
      f2 = get("b2");
      f3 = get("b3");
    }
    auto pick = [](const char* name, const std::optional<double>& flag,
                   const std::optional<double>& doc) {
      if (flag) return *flag;
      if (doc) return *doc;
      throw UsageError(std::string("missing parameter --") + name);
    };
    const double a = pick("alpha", alpha, fa), pp = pick("p", p, fp);
    const double x1 = pick("b1", b1, f1), x2 = pick("b2", b2, f2), x3 = pick("b3", b3, f3);
    try {
      return BdewParams(a, pp, x1, x2, x3);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

inline PairSample load_sample(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  Dataset ds = source.rfind(prefix, 0) == 0 ? builtin_dataset(source.substr(prefix.size()))
                                            : load_csv_file(source);
  return partition_sample(ds.pairs);
}

inline std::vector<ModelSpec> parse_models(const std::string& list) {
  std::vector<ModelSpec> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(ModelSpec{parse_family(item)});
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("no models given");
  return out;
}

inline void print_reproduction(std::ostream& out, const PublishedTable& table,
                               const std::vector<FitResult>& fits, bool doc) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (!doc) {
    out << table.id << " (" << table.dataset << ", n=" << (fits.empty() ? 0 : fits.front().n)
        << ")\n";
    char head[160];
    std::snprintf(head, sizeof head, "%-6s %-10s %18s %18s %18s\n", "model", "statistic", "fitted",
                  "published", "delta");
    out << head;
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    const auto& col = table.columns[i];
    const auto& fit = fits[i];
    const std::string fam = to_string(col.family);
    std::vector<std::tuple<std::string, double, double>> cells;
    if (col.alpha) cells.emplace_back("alpha", fit.params.alpha(), *col.alpha);
    cells.emplace_back("p", fit.params.p(), col.p);
    cells.emplace_back("b1", fit.params.beta1(), col.b1);
    cells.emplace_back("b2", fit.params.beta2(), col.b2);
    cells.emplace_back("b3", fit.params.beta3(), col.b3);
    cells.emplace_back("negL", fit.neg_log_lik, col.neg_log_lik);
    cells.emplace_back("aic", fit.criteria.aic, col.criteria.aic);
    cells.emplace_back("caic", fit.criteria.caic, col.criteria.caic);
    cells.emplace_back("bic", fit.criteria.bic, col.criteria.bic);
    cells.emplace_back("hqic", fit.criteria.hqic, col.criteria.hqic);
    for (const auto& [stat, mine, published] : cells) {
      if (doc) {
        rows.push_back({{"family", fam}, {"statistic", stat}, {"fitted", mine},
                        {"published", published}, {"delta", mine - published}});
        continue;
      }
      char buf[200];
      std::snprintf(buf, sizeof buf, "%-6s %-10s %18s %18s %18s\n", fam.c_str(), stat.c_str(),
                    format_number(mine).c_str(), format_number(published).c_str(),
                    format_number(mine - published).c_str());
      out << buf;
    }
  }
  if (doc) out << rows.dump(2) << "\n";
}

/// Runs one command line. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bivariate discrete exponentiated Weibull toolkit", "bdew"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 20190101;
  double tol = 1e-12;
  std::string format = "human";
  app.add_option("--seed", seed, "seed for sampling and multi-start fitting");
  app.add_option("--tol", tol, "absolute tail tolerance for series")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"human", "doc"}));

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a BDEW quantity");
  std::string quantity;
  ParamFlags eval_params;
  std::int64_t x1 = 0, x2 = 0;
  double u = 0.0, v = 0.0;
  std::string given = "eq";
  std::size_t max_terms = 100000;
  eval->add_option("quantity", quantity, "pmf|cdf|sf|hrf|cond-pmf|cond-cdf|cond-exp|pgf|stress-strength")
      ->required()
      ->check(CLI::IsMember({"pmf", "cdf", "sf", "hrf", "cond-pmf", "cond-cdf", "cond-exp", "pgf",
                             "stress-strength"}));
  eval_params.attach(*eval);
  eval->add_option("--x1", x1)->check(CLI::NonNegativeNumber);
  eval->add_option("--x2", x2)->check(CLI::NonNegativeNumber);
  eval->add_option("--u", u);
  eval->add_option("--v", v);
  eval->add_option("--given", given, "conditioning for cond-cdf: eq (X2 = x2) or le (X2 <= x2)")
      ->check(CLI::IsMember({"eq", "le"}));
  eval->add_option("--max-terms", max_terms)->check(CLI::PositiveNumber);

  // fit / compare
  std::string data, model = "bdew", models = "bdge,bdgr,bdew", criterion = "aic";
  FitConfig fit_cfg;
  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit of one model");
  fit->add_option("--data", data, "builtin:<football|diving> or a CSV path")->required();
  fit->add_option("--model", model, "bdew|bdge|bdgr|nbg");
  fit->add_option("--starts", fit_cfg.starts)->check(CLI::PositiveNumber);
  fit->add_option("--max-iter", fit_cfg.max_iter)->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "fit several models and rank them");
  compare->add_option("--data", data)->required();
  compare->add_option("--models", models, "comma-separated families");
  compare->add_option("--criterion", criterion)->check(CLI::IsMember({"aic", "bic", "caic", "hqic"}));
  compare->add_option("--starts", fit_cfg.starts)->check(CLI::PositiveNumber);

  // sample
  auto* sample = app.add_subcommand("sample", "draw pairs from a BDEW law");
  ParamFlags sample_params;
  std::size_t count = 0;
  sample_params.attach(*sample);
  sample->add_option("--count", count)->required()->check(CLI::PositiveNumber);

  // reproduce
  auto* reproduce = app.add_subcommand("reproduce", "refit a published comparison table");
  std::string table;
  reproduce->add_option("table", table, "table2|table4")->required()->check(CLI::IsMember({"table2", "table4"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const bool doc = format == "doc";
  fit_cfg.seed = seed;
  try {
    SeriesControl ctrl(tol, max_terms);
    if (eval->parsed()) {
      const BdewParams b = eval_params.resolve();
      double value = 0.0;
      if (quantity == "pmf") value = joint_pmf(b, PairPoint(x1, x2));
      else if (quantity == "cdf") value = joint_cdf(b, PairPoint(x1, x2));
      else if (quantity == "sf") value = joint_sf(b, PairPoint(x1, x2));
      else if (quantity == "hrf") value = joint_hrf(b, PairPoint(x1, x2));
      else if (quantity == "cond-pmf") value = cond_pmf(b, x1, x2);
      else if (quantity == "cond-cdf")
        value = given == "le" ? cond_cdf_given_le(b, x1, x2) : cond_cdf_given_eq(b, x1, x2);
      else if (quantity == "cond-exp") value = cond_expectation(b, x2, ctrl);
      else if (quantity == "pgf") value = joint_pgf(b, u, v, ctrl);
      else value = stress_strength(b, ctrl);
      if (doc)
        out << nlohmann::ordered_json{{"quantity", quantity}, {"value", value}}.dump() << "\n";
      else
        out << format_number(value) << "\n";
      return kExitOk;
    }
    if (fit->parsed()) {
      const auto spec = parse_models(model);
      if (spec.size() != 1) throw UsageError("fit takes exactly one model");
      const auto r = fit_mle(load_sample(data), spec.front(), fit_cfg);
      out << (doc ? fit_result_doc(r).dump() + "\n" : fit_result_text(r));
      if (!r.converged) {
        err << "warning: optimizer did not converge; best point reported\n";
        return kExitFailure;
      }
      return kExitOk;
    }
    if (compare->parsed()) {
      const auto specs = parse_models(models);
      const auto by = parse_criterion(criterion);
      const auto cmp = compare_models(load_sample(data), specs, fit_cfg, by);
      if (doc) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : cmp.ranked) arr.push_back(fit_result_doc(r));
        out << arr.dump(2) << "\n";
      } else {
        for (std::size_t i = 0; i < cmp.ranked.size(); ++i)
          out << "rank=" << i + 1 << "\n" << fit_result_text(cmp.ranked[i]) << "\n";
      }
      for (const auto& f : cmp.failed) err << "fit failed for " << to_string(f.spec.family) << ": " << f.message << "\n";
      return cmp.failed.empty() ? kExitOk : kExitFailure;
    }
    if (sample->parsed()) {
      const BdewParams b = sample_params.resolve();
      Rng rng(seed);
      std::string buf;
      for (std::size_t i = 0; i < count; ++i) {
        const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
        const auto pt = sample_pair(b, u1, u2, u3);
        buf += std::to_string(pt.x1) + "," + std::to_string(pt.x2) + "\n";
      }
      out << buf;
      return kExitOk;
    }
    if (reproduce->parsed()) {
      const auto& ref = published_table(table);
      const auto s = partition_sample(builtin_dataset(ref.dataset).pairs);
      std::vector<FitResult> fits;
      for (const auto& col : ref.columns) fits.push_back(fit_mle(s, ModelSpec{col.family}, fit_cfg));
      print_reproduction(out, ref, fits, doc);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace bdew::cli
