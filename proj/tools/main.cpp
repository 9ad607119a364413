// Command-line front end: simulate data, fit the sampler, predict at new
// covariate points, and run the Monte Carlo study.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hetprobit/csv.hpp"
#include "hetprobit/errors.hpp"
#include "hetprobit/gibbs.hpp"
#include "hetprobit/model.hpp"
#include "hetprobit/posterior.hpp"
#include "hetprobit/simstudy.hpp"

namespace fs = std::filesystem;
using namespace hetprobit;

namespace {

constexpr int kExitUsage = 2;      // parse/validation problems
constexpr int kExitNumerical = 3;  // factorization or sampler failures

struct Options {
  std::string config_path;
  std::string data_path;
  std::string normalized_column;
  std::string out = ".";
  double alpha = 1.5;
  double length_scale = 1.0;
  int iterations = 10000;
  int burn_in = 5000;
  int thin = 1;
  std::uint64_t seed = 0;
  double level = 0.95;
  std::string prediction_points;       // inline rows "a,b;c,d" in file order
  std::string prediction_points_file;  // CSV with covariate columns
  std::string grouping;                // comma-separated column names
  std::string g_indices;               // 1-based design indices for draw/diag output

  // simulate
  int sim_n = 250;
  double sim_theta = 1.0;

  // replicate-study
  std::string alphas = "1.5";
  int replications = 100;
  int threads = 0;
  bool progress = false;
};

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    while (!item.empty() && (item.front() == ' ' || item.front() == '\t')) item.erase(0, 1);
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t')) item.pop_back();
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Flat key = value files; '#' starts a comment, blank lines are skipped.
void apply_config_file(const std::string& path, Options& opt) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "data") opt.data_path = value;
      else if (key == "normalized_column") opt.normalized_column = value;
      else if (key == "out") opt.out = value;
      else if (key == "alpha") opt.alpha = std::stod(value);
      else if (key == "length_scale") opt.length_scale = std::stod(value);
      else if (key == "iterations") opt.iterations = std::stoi(value);
      else if (key == "burn_in") opt.burn_in = std::stoi(value);
      else if (key == "thin") opt.thin = std::stoi(value);
      else if (key == "seed") opt.seed = std::stoull(value);
      else if (key == "level") opt.level = std::stod(value);
      else if (key == "prediction_points") opt.prediction_points = value;
      else if (key == "prediction_points_file") opt.prediction_points_file = value;
      else if (key == "grouping") opt.grouping = value;
      else if (key == "g_indices") opt.g_indices = value;
      else if (key == "n") opt.sim_n = std::stoi(value);
      else if (key == "theta") opt.sim_theta = std::stod(value);
      else if (key == "alphas") opt.alphas = value;
      else if (key == "replications") opt.replications = std::stoi(value);
      else if (key == "threads") opt.threads = std::stoi(value);
      else throw ParseError(line_no, "unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ParseError(line_no, "cannot parse value '" + value + "' for key '" + key + "'");
    }
  }
}

GibbsConfig gibbs_config(const Options& opt) {
  GibbsConfig config;
  config.iterations = opt.iterations;
  config.burn_in = opt.burn_in;
  config.thin = opt.thin;
  config.seed = opt.seed;
  config.grouping = split_names(opt.grouping);
  return config;
}

// Prediction points from an inline list or a CSV keyed by covariate name,
// returned in the dataset's internal order.
Eigen::MatrixXd prediction_matrix(const Options& opt, const Dataset& data) {
  std::vector<Eigen::VectorXd> points;
  if (!opt.prediction_points.empty()) {
    for (const auto& row : parse_number_rows(opt.prediction_points)) {
      if (static_cast<Eigen::Index>(row.size()) != data.dim()) {
        throw std::domain_error("prediction point has " + std::to_string(row.size()) +
                                " coordinates, expected " + std::to_string(data.dim()));
      }
      Eigen::VectorXd p(data.dim());
      for (Eigen::Index j = 0; j < data.dim(); ++j) p(j) = row[static_cast<std::size_t>(j)];
      points.push_back(data.to_internal(p));
    }
  }
  if (!opt.prediction_points_file.empty()) {
    const CsvTable table = read_csv(opt.prediction_points_file);
    std::vector<int> cols;
    for (const auto& name : data.file_order_names()) {
      const int idx = table.column_index(name);
      if (idx < 0) {
        throw std::domain_error("prediction points file is missing column '" + name + "'");
      }
      cols.push_back(idx);
    }
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
      Eigen::VectorXd p(data.dim());
      for (Eigen::Index j = 0; j < data.dim(); ++j) p(j) = table.values(i, cols[static_cast<std::size_t>(j)]);
      points.push_back(data.to_internal(p));
    }
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(points.size()), data.dim());
  for (std::size_t i = 0; i < points.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = points[i];
  return out;
}

std::vector<int> requested_g_indices(const Options& opt, Eigen::Index n) {
  std::vector<int> out;
  if (opt.g_indices.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(static_cast<int>(i));
    return out;
  }
  for (const auto& row : parse_number_rows(opt.g_indices)) {
    for (const double v : row) {
      const int idx = static_cast<int>(v);
      if (idx < 1 || idx > n) {
        throw std::domain_error("g index " + std::to_string(idx) + " outside 1.." +
                                std::to_string(n));
      }
      out.push_back(idx - 1);
    }
  }
  return out;
}

void write_draws_csv(const std::string& path, const PosteriorDraws& draws,
                     const std::vector<int>& g_idx) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot open '" + path + "' for writing");
  for (std::size_t j = 0; j < draws.theta_names.size(); ++j) {
    if (j) out << ',';
    out << "theta_" << draws.theta_names[j];
  }
  for (const int i : g_idx) out << ",g_" << (i + 1);
  for (Eigen::Index k = 0; k < draws.g_star_draws.cols(); ++k) out << ",gstar_" << (k + 1);
  out << '\n';
  for (Eigen::Index s = 0; s < draws.thetas.rows(); ++s) {
    for (Eigen::Index j = 0; j < draws.thetas.cols(); ++j) {
      if (j) out << ',';
      out << format_double(draws.thetas(s, j));
    }
    for (const int i : g_idx) out << ',' << format_double(draws.g_draws(s, i));
    for (Eigen::Index k = 0; k < draws.g_star_draws.cols(); ++k) {
      out << ',' << format_double(draws.g_star_draws(s, k));
    }
    out << '\n';
  }
}

void write_summary_csv(const std::string& path, const Summary& summary) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot open '" + path + "' for writing");
  out << "kind,name,estimate,lower,upper,level\n";
  for (std::size_t j = 0; j < summary.theta_names.size(); ++j) {
    const auto& ci = summary.theta_intervals[j];
    out << "theta," << summary.theta_names[j] << ',' << format_double(summary.theta_medians(static_cast<Eigen::Index>(j)))
        << ',' << format_double(ci.lower) << ',' << format_double(ci.upper) << ','
        << format_double(ci.level) << '\n';
  }
  for (std::size_t k = 0; k < summary.predictive_probs.size(); ++k) {
    out << "predictive_prob,star_" << (k + 1) << ',' << format_double(summary.predictive_probs[k])
        << ",,,\n";
    out << "decision,star_" << (k + 1) << ',' << summary.decisions[k] << ",,,\n";
  }
}

void write_diagnostics_csv(const std::string& path, const PosteriorDraws& draws,
                           const std::vector<int>& g_idx) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot open '" + path + "' for writing");
  out << "name,mean,sd,ess\n";
  auto emit = [&](const std::string& name, const Eigen::VectorXd& col) {
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() /
                                std::max<double>(1.0, static_cast<double>(col.size() - 1)));
    std::vector<double> series(col.data(), col.data() + col.size());
    out << name << ',' << format_double(mean) << ',' << format_double(sd) << ','
        << format_double(effective_sample_size(series)) << '\n';
  };
  for (std::size_t j = 0; j < draws.theta_names.size(); ++j) {
    emit("theta_" + draws.theta_names[j], draws.thetas.col(static_cast<Eigen::Index>(j)));
  }
  for (const int i : g_idx) emit("g_" + std::to_string(i + 1), draws.g_draws.col(i));
  for (Eigen::Index k = 0; k < draws.g_star_draws.cols(); ++k) {
    emit("gstar_" + std::to_string(k + 1), draws.g_star_draws.col(k));
  }
}

void print_summary(const Summary& summary) {
  std::printf("%-16s %12s %12s %12s %8s\n", "parameter", "median", "lower", "upper", "ess");
  for (std::size_t j = 0; j < summary.theta_names.size(); ++j) {
    std::printf("%-16s %12.5f %12.5f %12.5f %8.0f\n",
                ("theta_" + summary.theta_names[j]).c_str(),
                summary.theta_medians(static_cast<Eigen::Index>(j)),
                summary.theta_intervals[j].lower, summary.theta_intervals[j].upper,
                summary.ess[j]);
  }
  for (std::size_t k = 0; k < summary.predictive_probs.size(); ++k) {
    std::printf("star_%-11zu %12.5f %25s decision=%d\n", k + 1, summary.predictive_probs[k], "",
                summary.decisions[k]);
  }
}

int run_fit(const Options& opt, bool with_prediction) {
  if (opt.data_path.empty()) throw std::domain_error("no dataset given (--data or config)");
  const Dataset data = Dataset::from_csv(opt.data_path, opt.normalized_column);

  GibbsConfig config = gibbs_config(opt);
  config.prediction_points = prediction_matrix(opt, data);
  if (with_prediction && config.prediction_points.rows() == 0) {
    throw std::domain_error("predict needs at least one prediction point (--x-star)");
  }
  config.validate();

  const KernelSpec kernel{opt.alpha, opt.length_scale};
  const std::vector<int> g_idx = requested_g_indices(opt, data.n());

  const PosteriorDraws draws = run_chain(data, kernel, config, MixtureTable::log_chisq1());
  const Summary summary = build_summary(draws, opt.level);

  fs::create_directories(opt.out);
  write_draws_csv((fs::path(opt.out) / "draws.csv").string(), draws, g_idx);
  write_summary_csv((fs::path(opt.out) / "summary.csv").string(), summary);
  write_diagnostics_csv((fs::path(opt.out) / "diagnostics.csv").string(), draws, g_idx);

  if (with_prediction) {
    const fs::path path = fs::path(opt.out) / "predictions.csv";
    std::ofstream out(path);
    if (!out) throw ParseError(0, "cannot open '" + path.string() + "' for writing");
    out << "point";
    for (const auto& name : data.file_order_names()) out << ',' << name;
    out << ",probability,decision\n";
    const Eigen::MatrixXd file_order_points = [&] {
      Eigen::MatrixXd p(draws.prediction_points.rows(), data.dim());
      for (Eigen::Index i = 0; i < p.rows(); ++i) {
        // Undo the internal permutation for reporting.
        Eigen::VectorXd internal = draws.prediction_points.row(i);
        Eigen::VectorXd file(data.dim());
        for (Eigen::Index j = 0; j < data.dim(); ++j) {
          const auto& names = data.names();
          const auto& file_names = data.file_order_names();
          for (Eigen::Index f = 0; f < data.dim(); ++f) {
            if (file_names[static_cast<std::size_t>(f)] == names[static_cast<std::size_t>(j)]) {
              file(f) = internal(j);
            }
          }
        }
        p.row(i) = file;
      }
      return p;
    }();
    for (Eigen::Index k = 0; k < draws.prediction_points.rows(); ++k) {
      out << (k + 1);
      for (Eigen::Index j = 0; j < data.dim(); ++j) {
        out << ',' << format_double(file_order_points(k, j));
      }
      out << ',' << format_double(summary.predictive_probs[static_cast<std::size_t>(k)]) << ','
          << summary.decisions[static_cast<std::size_t>(k)] << '\n';
      std::printf("point %ld: probability=%.5f decision=%d\n", static_cast<long>(k + 1),
                  summary.predictive_probs[static_cast<std::size_t>(k)],
                  summary.decisions[static_cast<std::size_t>(k)]);
    }
  }

  print_summary(summary);
  return 0;
}

int run_simulate(const Options& opt, const std::string& out_path) {
  DgpSpec spec;
  spec.n = opt.sim_n;
  spec.theta_true = opt.sim_theta;
  spec.seed = opt.seed;
  RngStream rng(opt.seed, 0);
  const Dataset data = generate_dgp(spec, rng);
  const Eigen::MatrixXd x = data.covariates_file_order();
  std::ofstream out(out_path);
  if (!out) throw ParseError(0, "cannot open '" + out_path + "' for writing");
  out << "y,x1,x2\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out << data.outcomes()(i) << ',' << format_double(x(i, 0)) << ',' << format_double(x(i, 1))
        << '\n';
  }
  if (!out) throw ParseError(0, "write failed for '" + out_path + "'");
  std::printf("wrote %ld rows to %s\n", static_cast<long>(data.n()), out_path.c_str());
  return 0;
}

int run_study_cmd(const Options& opt, const std::string& out_path) {
  StudyConfig config;
  config.n = opt.sim_n;
  config.replications = opt.replications;
  config.length_scale = opt.length_scale;
  config.theta_true = opt.sim_theta;
  config.level = opt.level;
  config.iterations = opt.iterations;
  config.burn_in = opt.burn_in;
  config.thin = opt.thin;
  config.seed = opt.seed;
  config.threads = opt.threads;
  config.progress = opt.progress;
  config.alphas.clear();
  for (const auto& row : parse_number_rows(opt.alphas)) {
    for (const double a : row) config.alphas.push_back(a);
  }
  config.validate();

  const StudyResult result = run_study(config);

  int failures = 0;
  std::ofstream out(out_path);
  if (!out) throw ParseError(0, "cannot open '" + out_path + "' for writing");
  out << "alpha,n,replications,failures,mse,mse_se,coverage,coverage_se,avg_length,avg_length_se\n";
  std::printf("%8s %6s %6s %10s %10s %10s\n", "alpha", "n", "reps", "mse", "coverage", "length");
  for (const auto& row : result.rows) {
    out << format_double(row.alpha) << ',' << config.n << ',' << row.replications << ','
        << row.failures << ',' << format_double(row.mse) << ',' << format_double(row.mse_se)
        << ',' << format_double(row.coverage) << ',' << format_double(row.coverage_se) << ','
        << format_double(row.avg_length) << ',' << format_double(row.avg_length_se) << '\n';
    std::printf("%8.3f %6d %6d %10.4f %9.1f%% %10.4f\n", row.alpha, config.n, row.replications,
                row.mse, 100.0 * row.coverage, row.avg_length);
    failures += row.failures;
  }
  if (failures > 0) {
    std::fprintf(stderr, "warning: %d replications failed; results in %s are partial\n", failures,
                 out_path.c_str());
    return kExitNumerical;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian binary choice under median independence "
               "(heteroskedastic probit with a Gaussian process variance prior)"};
  app.require_subcommand(1);

  Options opt;
  std::string x_star;
  std::string sim_out = "simulated.csv";
  std::string study_out = "study.csv";

  auto add_chain_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "flat key = value config file");
    cmd->add_option("--data", opt.data_path, "dataset CSV (column y plus covariates)");
    cmd->add_option("--normalized-column", opt.normalized_column,
                    "covariate whose coefficient is fixed to 1 (default: last column)");
    cmd->add_option("--alpha", opt.alpha, "Matern smoothness");
    cmd->add_option("--length-scale", opt.length_scale, "Matern length scale");
    cmd->add_option("--iterations", opt.iterations, "Gibbs sweeps");
    cmd->add_option("--burn-in", opt.burn_in, "discarded initial sweeps");
    cmd->add_option("--thin", opt.thin, "retain every thin-th draw");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--level", opt.level, "credible level");
    cmd->add_option("--grouping", opt.grouping, "discrete covariate columns (comma separated)");
    cmd->add_option("--g-indices", opt.g_indices,
                    "1-based design indices reported in draws/diagnostics (default: all)");
    cmd->add_option("--out", opt.out, "output directory");
  };

  CLI::App* fit = app.add_subcommand("fit", "fit the sampler and write draws + summaries");
  add_chain_flags(fit);
  fit->add_option("--prediction-points", opt.prediction_points,
                  "inline prediction points, e.g. \"0.5,1.0;1.5,0.5\"");
  fit->add_option("--prediction-points-file", opt.prediction_points_file,
                  "CSV of prediction points keyed by covariate name");

  CLI::App* predict = app.add_subcommand("predict", "posterior predictive probability and "
                                                    "Bayes decision at new points");
  add_chain_flags(predict);
  predict->add_option("--x-star", x_star, "inline prediction points, e.g. \"0.5,1.0;1.5,0.5\"");
  predict->add_option("--x-star-file", opt.prediction_points_file,
                      "CSV of prediction points keyed by covariate name");

  CLI::App* simulate = app.add_subcommand("simulate", "draw a dataset from the study design");
  simulate->add_option("--config", opt.config_path, "flat key = value config file");
  simulate->add_option("--n", opt.sim_n, "sample size");
  simulate->add_option("--theta", opt.sim_theta, "true index coefficient");
  simulate->add_option("--seed", opt.seed, "random seed");
  simulate->add_option("--out", sim_out, "output CSV path");

  CLI::App* study = app.add_subcommand("replicate-study",
                                       "Monte Carlo study of MSE, coverage and interval length");
  study->add_option("--config", opt.config_path, "flat key = value config file");
  study->add_option("--n", opt.sim_n, "sample size per replication");
  study->add_option("--theta", opt.sim_theta, "true index coefficient");
  study->add_option("--alphas", opt.alphas, "comma-separated Matern smoothness values");
  study->add_option("--replications", opt.replications, "number of replications");
  study->add_option("--iterations", opt.iterations, "Gibbs sweeps per replication");
  study->add_option("--burn-in", opt.burn_in, "discarded sweeps per replication");
  study->add_option("--thin", opt.thin, "retain every thin-th draw");
  study->add_option("--length-scale", opt.length_scale, "Matern length scale");
  study->add_option("--level", opt.level, "credible level");
  study->add_option("--seed", opt.seed, "random seed");
  study->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
  study->add_flag("--progress", opt.progress, "print per-replication progress to stderr");
  study->add_option("--out", study_out, "output CSV path");

  // Pre-scan for --config so explicit flags still win.
  try {
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") {
        apply_config_file(argv[i + 1], opt);
        break;
      }
    }
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitUsage;
  }

  try {
    if (fit->parsed()) return run_fit(opt, false);
    if (predict->parsed()) {
      if (!x_star.empty()) opt.prediction_points = x_star;
      return run_fit(opt, true);
    }
    if (simulate->parsed()) return run_simulate(opt, sim_out);
    if (study->parsed()) return run_study_cmd(opt, study_out);
  } catch (const NumericalError& err) {
    std::fprintf(stderr, "numerical error: %s\n", err.what());
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitUsage;
  }
  return 0;
}
