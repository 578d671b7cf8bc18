#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arpvol/evaluate.hpp"
#include "arpvol/experiments.hpp"
#include "arpvol/matrix_io.hpp"
#include "arpvol/poet.hpp"
#include "arpvol/preavg.hpp"
#include "arpvol/rng.hpp"
#include "arpvol/robust.hpp"
#include "arpvol/simulate.hpp"
#include "arpvol/sync.hpp"
#include "arpvol/tick_data.hpp"

namespace {

using nlohmann::json;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << j.dump(2) << '\n';
}

// Long-format matrix CSV with header i,j,value and 0-based indices.
void write_vol_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix: " + path);
  out.precision(17);
  out << "i,j,value\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << i << ',' << j << ',' << m(i, j) << '\n';
    }
  }
}

// Accepts either the long i,j,value format or a headerless dense layout.
Eigen::MatrixXd load_any_matrix(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw std::runtime_error("cannot open matrix: " + path);
  std::string first;
  std::getline(probe, first);
  if (first.rfind("i,j,value", 0) != 0) return arpvol::load_matrix_csv(path);

  std::vector<std::tuple<int, int, double>> entries;
  std::string line;
  int dim = 0;
  std::size_t lineno = 1;
  while (std::getline(probe, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string fi, fj, fv;
    if (!std::getline(ss, fi, ',') || !std::getline(ss, fj, ',') ||
        !std::getline(ss, fv)) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": expected i,j,value");
    }
    const int i = std::stoi(fi);
    const int j = std::stoi(fj);
    const double v = std::stod(fv);
    if (i < 0 || j < 0) {
      throw std::runtime_error(path + ": negative index on line " +
                               std::to_string(lineno));
    }
    dim = std::max(dim, std::max(i, j) + 1);
    entries.emplace_back(i, j, v);
  }
  if (dim == 0) throw std::runtime_error(path + ": empty matrix");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [i, j, v] : entries) m(i, j) = v;
  return m;
}

json quantile_summary(Eigen::VectorXd values) {
  std::sort(values.data(), values.data() + values.size());
  const auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<Eigen::Index>(pos);
    const Eigen::Index hi = std::min(lo + 1, values.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * values(lo) + w * values(hi);
  };
  return json{{"min", values(0)},
              {"q25", at(0.25)},
              {"median", at(0.5)},
              {"q75", at(0.75)},
              {"max", values(values.size() - 1)}};
}

arpvol::TailMode parse_tails(const std::string& s) {
  return arpvol::parse_tail_mode(s);
}

std::vector<arpvol::Method> parse_methods(const std::string& csv) {
  std::vector<arpvol::Method> methods;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) methods.push_back(arpvol::parse_method(tok));
  }
  if (methods.empty()) throw std::invalid_argument("no methods given");
  return methods;
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

void ensure_dir(const std::string& dir) {
  if (dir.empty() || dir == ".") return;
  std::filesystem::create_directories(dir);
}

struct SimulateArgs {
  arpvol::SimConfig cfg;
  std::string tails = "hetero";
  std::string out_dir = ".";
};

int run_simulate(const SimulateArgs& a) {
  Stopwatch timer;
  ensure_dir(a.out_dir);
  arpvol::SimConfig cfg = a.cfg;
  cfg.tail_mode = parse_tails(a.tails);
  const arpvol::SimTruth truth = arpvol::simulate(cfg);
  const std::string ticks_path = join_path(a.out_dir, "ticks.csv");
  const std::string gamma_path = join_path(a.out_dir, "gamma_true.csv");
  const std::string manifest_path = join_path(a.out_dir, "sim_manifest.json");
  arpvol::write_ticks_csv(ticks_path, truth.ticks);
  arpvol::write_matrix_csv(gamma_path, truth.gamma_true);
  arpvol::write_sim_manifest(manifest_path, cfg, truth);
  std::cout << "simulate: p=" << cfg.p << " n_all=" << cfg.n_all << " -> "
            << ticks_path << ", " << gamma_path << ", " << manifest_path
            << " (" << timer.seconds() << "s)\n";
  return 0;
}

struct SyncArgs {
  std::string input;
  std::string time_unit = "fraction";
  std::string mode = "refresh";
  std::string tick = "last";
  int grid_points = 40;
  std::string out = "sync.csv";
  std::string manifest = "sync_manifest.json";
};

int run_sync(const SyncArgs& a) {
  Stopwatch timer;
  const arpvol::TimeUnit unit = arpvol::TimeUnit::parse(a.time_unit);
  const std::vector<arpvol::TickSeries> ticks =
      arpvol::load_ticks(a.input, unit);
  arpvol::SyncGrid grid;
  if (a.mode == "refresh") {
    const arpvol::TickChoice choice = a.tick == "first"
                                          ? arpvol::TickChoice::First
                                          : arpvol::TickChoice::Last;
    grid = arpvol::refresh_time_sync(ticks, choice);
  } else if (a.mode == "previous-tick") {
    grid = arpvol::previous_tick_sync(ticks, arpvol::uniform_grid(a.grid_points));
  } else {
    throw std::invalid_argument("unknown sync mode: " + a.mode);
  }
  arpvol::write_sync_csv(a.out, grid);
  write_json(a.manifest,
             json{{"command", "sync"},
                  {"input", a.input},
                  {"mode", a.mode},
                  {"tick", a.tick},
                  {"n", grid.n()},
                  {"p", grid.p()},
                  {"tau_first", grid.tau(0)},
                  {"tau_last", grid.tau(grid.n())},
                  {"asset_ids", grid.asset_ids},
                  {"output", a.out},
                  {"elapsed_seconds", timer.seconds()}});
  std::cout << "sync: n=" << grid.n() << " p=" << grid.p() << " -> " << a.out
            << "\n";
  return 0;
}

struct EstimateArgs {
  std::string input;
  std::string time_unit = "fraction";
  std::string method = "arp";
  arpvol::EstimateOptions opt;
  std::string out = "gamma_hat.csv";
  std::string manifest = "estimate_manifest.json";
};

int run_estimate(const EstimateArgs& a) {
  Stopwatch timer;
  const arpvol::TimeUnit unit = arpvol::TimeUnit::parse(a.time_unit);
  const std::vector<arpvol::TickSeries> ticks =
      arpvol::load_ticks(a.input, unit);
  const arpvol::SyncGrid grid = arpvol::refresh_time_sync(ticks);
  arpvol::EstimateOptions opt = a.opt;
  opt.method = arpvol::parse_method(a.method);
  const arpvol::EstimateResult res = arpvol::estimate_volatility(grid, opt);
  write_vol_csv(a.out, res.estimate.gamma_hat);
  json manifest{{"command", "estimate"},
                {"input", a.input},
                {"method", arpvol::method_name(opt.method)},
                {"c", opt.c},
                {"c1", opt.c1},
                {"c2", opt.c2},
                {"kernel_ck", opt.kernel_ck},
                {"K", res.kernel.K},
                {"n", res.n},
                {"p", grid.p()},
                {"output", a.out},
                {"elapsed_seconds", timer.seconds()}};
  manifest["alpha_i"] = quantile_summary(res.tails.alpha_i);
  if (res.estimate.theta.size() > 0) {
    manifest["theta"] = quantile_summary(
        Eigen::Map<const Eigen::VectorXd>(res.estimate.theta.data(),
                                          res.estimate.theta.size()));
  }
  write_json(a.manifest, manifest);
  std::cout << "estimate: " << arpvol::method_name(opt.method)
            << " p=" << grid.p() << " n=" << res.n << " K=" << res.kernel.K
            << " -> " << a.out << " (" << timer.seconds() << "s)\n";
  return 0;
}

struct PoetArgs {
  std::string input;
  int rank = 1;
  std::optional<double> varpi;
  std::string sector_file;
  std::string oracle_truth;
  std::string scheme = "hard";
  std::string psd = "shift";
  std::string out_prefix = "poet";
  std::string manifest = "poet_manifest.json";
};

int run_poet(const PoetArgs& a) {
  Stopwatch timer;
  const int given = static_cast<int>(a.varpi.has_value()) +
                    static_cast<int>(!a.sector_file.empty()) +
                    static_cast<int>(!a.oracle_truth.empty());
  if (given != 1) {
    throw std::invalid_argument(
        "poet: exactly one of --varpi, --sector, --oracle-truth is required");
  }
  const Eigen::MatrixXd gamma_hat = load_any_matrix(a.input);
  arpvol::PoetOptions opt;
  opt.rank = a.rank;
  opt.psd = a.psd == "clip" ? arpvol::PsdMode::FrobeniusClip
                            : arpvol::PsdMode::SpectralShift;
  opt.thresholding = a.scheme == "soft" ? arpvol::Thresholding::Soft
                                        : arpvol::Thresholding::Hard;
  json extra = json::object();
  if (!a.sector_file.empty()) {
    opt.thresholding = arpvol::Thresholding::Sector;
    opt.sectors = arpvol::load_sectors(a.sector_file,
                                       static_cast<int>(gamma_hat.rows()));
  } else if (a.varpi.has_value()) {
    opt.varpi = *a.varpi;
  } else {
    const Eigen::MatrixXd truth = load_any_matrix(a.oracle_truth);
    const arpvol::VarpiChoice choice = arpvol::choose_varpi_oracle(
        gamma_hat, truth, opt, arpvol::varpi_grid(1e-3, 1.5, 25));
    opt.varpi = choice.varpi;
    extra["oracle_frobenius_error"] = choice.frobenius_error;
  }
  const arpvol::PoetDecomposition dec = arpvol::poet_estimate(gamma_hat, opt);
  const std::string gamma_path = a.out_prefix + "_gamma.csv";
  const std::string theta_path = a.out_prefix + "_theta.csv";
  const std::string sigma_path = a.out_prefix + "_sigma.csv";
  arpvol::write_matrix_csv(gamma_path, dec.gamma_poet);
  arpvol::write_matrix_csv(theta_path, dec.theta_hat);
  arpvol::write_matrix_csv(sigma_path, dec.sigma_hat);
  const arpvol::SymmetricEigen eig = arpvol::symmetric_eigen(dec.gamma_poet);
  json manifest{{"command", "poet"},
                {"input", a.input},
                {"rank", dec.r},
                {"varpi", dec.varpi},
                {"scheme", arpvol::thresholding_name(opt.thresholding)},
                {"psd", arpvol::psd_mode_name(opt.psd)},
                {"kept_fraction", dec.kept_fraction},
                {"eigen_max", eig.values(0)},
                {"eigen_min", eig.values(eig.values.size() - 1)},
                {"input_scree", std::vector<double>(
                                    dec.eigenvalues.data(),
                                    dec.eigenvalues.data() +
                                        std::min<Eigen::Index>(
                                            dec.eigenvalues.size(), 10))},
                {"outputs", {gamma_path, theta_path, sigma_path}},
                {"elapsed_seconds", timer.seconds()}};
  manifest.update(extra);
  write_json(a.manifest, manifest);
  std::cout << "poet: rank=" << dec.r << " varpi=" << dec.varpi
            << " kept=" << dec.kept_fraction << " -> " << gamma_path << "\n";
  return 0;
}

struct EvalArgs {
  bool norms = false;
  bool mspe = false;
  bool portfolio = false;
  std::string est_file;
  std::string truth_file;
  std::vector<std::string> inputs;
  std::string gamma_file;
  std::vector<double> c0 = {1, 2, 3, 4, 5, 6};
  std::string out = "eval.csv";
  std::string manifest = "eval_manifest.json";
};

int run_eval(const EvalArgs& a) {
  Stopwatch timer;
  const int modes = static_cast<int>(a.norms) + static_cast<int>(a.mspe) +
                    static_cast<int>(a.portfolio);
  if (modes != 1) {
    throw std::invalid_argument(
        "eval: exactly one of --norms, --mspe, --portfolio is required");
  }
  json manifest{{"command", "eval"}};
  if (a.norms) {
    if (a.est_file.empty() || a.truth_file.empty()) {
      throw std::invalid_argument("eval --norms needs --est and --truth");
    }
    const arpvol::NormReport rep =
        arpvol::norms(load_any_matrix(a.est_file), load_any_matrix(a.truth_file));
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    out.precision(17);
    out << "frobenius,relative_frobenius,spectral,max\n"
        << rep.frobenius << ',';
    if (rep.relative_frobenius) out << *rep.relative_frobenius;
    out << ',' << rep.spectral << ',' << rep.max << '\n';
    manifest["mode"] = "norms";
    manifest["frobenius"] = rep.frobenius;
    manifest["spectral"] = rep.spectral;
    manifest["max"] = rep.max;
    manifest["relative_frobenius"] =
        rep.relative_frobenius ? json(*rep.relative_frobenius) : json();
    std::cout << "norms: frobenius=" << rep.frobenius
              << " spectral=" << rep.spectral << " max=" << rep.max << "\n";
  } else if (a.mspe) {
    if (a.inputs.size() < 2) {
      throw std::invalid_argument("eval --mspe needs >= 2 --inputs files");
    }
    std::vector<Eigen::MatrixXd> series;
    series.reserve(a.inputs.size());
    for (const std::string& f : a.inputs) series.push_back(load_any_matrix(f));
    const double value = arpvol::mspe(series);
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    out.precision(17);
    out << "mspe\n" << value << '\n';
    manifest["mode"] = "mspe";
    manifest["mspe"] = value;
    manifest["days"] = a.inputs.size();
    std::cout << "mspe: " << value << "\n";
  } else {
    if (a.gamma_file.empty()) {
      throw std::invalid_argument("eval --portfolio needs --gamma");
    }
    const Eigen::MatrixXd gamma = load_any_matrix(a.gamma_file);
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    out.precision(17);
    out << "c0,asset,weight\n";
    json rows = json::array();
    for (const double c0 : a.c0) {
      const arpvol::PortfolioSolution sol =
          arpvol::min_variance_portfolio(gamma, c0);
      for (Eigen::Index i = 0; i < sol.weights.size(); ++i) {
        out << c0 << ',' << i << ',' << sol.weights(i) << '\n';
      }
      rows.push_back(json{{"c0", c0},
                          {"objective", sol.objective},
                          {"gross_exposure", sol.gross_exposure},
                          {"iterations", sol.iterations},
                          {"converged", sol.converged}});
      std::cout << "portfolio: c0=" << c0 << " objective=" << sol.objective
                << " gross=" << sol.gross_exposure << "\n";
    }
    manifest["mode"] = "portfolio";
    manifest["solutions"] = rows;
  }
  manifest["output"] = a.out;
  manifest["elapsed_seconds"] = timer.seconds();
  write_json(a.manifest, manifest);
  return 0;
}

struct ExperimentArgs {
  int paper_table = 0;
  int paper_figure = 0;
  arpvol::ExperimentOptions opt;
  std::string tails = "hetero";
  std::string methods = "arp,urp,prvm";
  int days = 20;
  std::string out_dir = ".";
};

int run_experiment(const ExperimentArgs& a) {
  Stopwatch timer;
  if ((a.paper_table != 0) == (a.paper_figure != 0)) {
    throw std::invalid_argument(
        "experiment: exactly one of --paper-table, --paper-figure is required");
  }
  ensure_dir(a.out_dir);
  arpvol::ExperimentOptions opt = a.opt;
  opt.tail_mode = parse_tails(a.tails);
  opt.methods = parse_methods(a.methods);
  json manifest{{"command", "experiment"},
                {"p", opt.p},
                {"reps", opt.reps},
                {"seed", opt.seed},
                {"tails", a.tails},
                {"methods", a.methods}};

  if (a.paper_table == 1) {
    // Tail-index accuracy against the simulated truth, per tail regime.
    const std::string path = join_path(a.out_dir, "table1.csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "tails,n_all,mse\n";
    for (const std::string mode : {"hetero", "homo"}) {
      arpvol::ExperimentOptions topt = opt;
      topt.tail_mode = parse_tails(mode);
      for (const arpvol::TailMseRow& row : arpvol::tail_index_mse(topt)) {
        out << mode << ',' << row.n_all << ',' << row.mse << '\n';
        std::cout << "table1: " << mode << " n_all=" << row.n_all
                  << " mse=" << row.mse << "\n";
      }
    }
    manifest["output"] = path;
  } else if (a.paper_table == 2) {
    // Day-to-day stability of the regularized estimates per method.
    const std::string path = join_path(a.out_dir, "table2.csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "method,days,mspe\n";
    std::vector<arpvol::SimTruth> markets(static_cast<std::size_t>(a.days));
    for (int d = 0; d < a.days; ++d) {
      arpvol::SimConfig cfg;
      cfg.p = opt.p;
      cfg.r = opt.r;
      cfg.n_all = opt.n_all_grid.front();
      cfg.tail_mode = opt.tail_mode;
      cfg.seed = arpvol::derive_seed(opt.seed, arpvol::purpose::replication,
                                     static_cast<std::uint64_t>(d));
      markets[static_cast<std::size_t>(d)] = arpvol::simulate(cfg);
    }
    for (const arpvol::Method method : opt.methods) {
      std::vector<Eigen::MatrixXd> daily;
      for (const arpvol::SimTruth& truth : markets) {
        const arpvol::SyncGrid grid = arpvol::refresh_time_sync(truth.ticks);
        arpvol::EstimateOptions eopt;
        eopt.method = method;
        eopt.c = opt.c;
        eopt.kernel_ck = opt.kernel_ck;
        const arpvol::EstimateResult est =
            arpvol::estimate_volatility(grid, eopt);
        arpvol::PoetOptions popt;
        popt.rank = opt.poet_rank;
        popt.thresholding = opt.thresholding;
        popt.psd = opt.psd;
        popt.varpi =
            arpvol::choose_varpi_oracle(
                est.estimate.gamma_hat, truth.gamma_true, popt,
                arpvol::varpi_grid(1e-3, 1.5, opt.varpi_count))
                .varpi;
        daily.push_back(
            arpvol::poet_estimate(est.estimate.gamma_hat, popt).gamma_poet);
      }
      const double value = arpvol::mspe(daily);
      out << arpvol::method_name(method) << ',' << a.days << ',' << value
          << '\n';
      std::cout << "table2: " << arpvol::method_name(method)
                << " mspe=" << value << "\n";
    }
    manifest["output"] = path;
    manifest["days"] = a.days;
  } else if (a.paper_figure == 2 || a.paper_figure == 3) {
    arpvol::ExperimentOptions fopt = opt;
    if (a.paper_figure == 2) fopt.n_all_grid = {opt.n_all_grid.front()};
    const std::vector<arpvol::MethodNorms> rows =
        arpvol::estimation_error_experiment(fopt);
    const std::string path = join_path(
        a.out_dir, a.paper_figure == 2 ? "figure2.csv" : "figure3.csv");
    arpvol::write_method_norms_csv(path, rows);
    json summary = json::array();
    for (const arpvol::MethodNorms& r : rows) {
      std::vector<double> fro;
      fro.reserve(r.reports.size());
      for (const arpvol::NormReport& n : r.reports) fro.push_back(n.frobenius);
      std::nth_element(fro.begin(), fro.begin() + fro.size() / 2, fro.end());
      summary.push_back(json{{"method", arpvol::method_name(r.method)},
                             {"n_all", r.n_all},
                             {"median_frobenius", fro[fro.size() / 2]},
                             {"ridge_repairs", r.ridge_repairs}});
      std::cout << "figure" << a.paper_figure << ": "
                << arpvol::method_name(r.method) << " n_all=" << r.n_all
                << " median_frobenius=" << fro[fro.size() / 2] << "\n";
    }
    manifest["summary"] = summary;
    manifest["output"] = path;
  } else if (a.paper_figure == 7) {
    const std::vector<double> c0_grid = {1, 2, 3, 4, 5, 6};
    const std::vector<arpvol::PortfolioCell> cells =
        arpvol::portfolio_experiment(opt, c0_grid, a.days);
    const std::string path = join_path(a.out_dir, "figure7.csv");
    arpvol::write_portfolio_csv(path, cells);
    manifest["output"] = path;
    manifest["days"] = a.days;
    std::cout << "figure7: " << cells.size() << " cells -> " << path << "\n";
  } else {
    throw std::invalid_argument("experiment: unsupported table/figure id");
  }
  manifest["elapsed_seconds"] = timer.seconds();
  write_json(join_path(a.out_dir, "experiment_manifest.json"), manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "arpvol: robust pre-averaging estimation of large integrated "
      "volatility matrices from noisy asynchronous tick data"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Generate a synthetic tick-data market");
  sim_cmd->add_option("--p", sim.cfg.p, "number of assets");
  sim_cmd->add_option("--r", sim.cfg.r, "number of factors");
  sim_cmd->add_option("--n-all", sim.cfg.n_all, "grid size before thinning");
  sim_cmd->add_option("--tails", sim.tails, "hetero|homo|gauss");
  sim_cmd->add_option("--seed", sim.cfg.seed, "master seed");
  sim_cmd->add_option("--jump-intensity", sim.cfg.jump_intensity,
                      "expected jumps per asset");
  sim_cmd->add_option("--jump-sd-mult", sim.cfg.jump_sd_mult,
                      "jump size SD multiplier");
  sim_cmd->add_option("--noise-sd-mult", sim.cfg.noise_sd_mult,
                      "microstructure noise SD multiplier");
  sim_cmd->add_option("--w-low", sim.cfg.w_low, "observation retention lower");
  sim_cmd->add_option("--w-high", sim.cfg.w_high,
                      "observation retention upper");
  sim_cmd->add_option("--drift", sim.cfg.drift, "price drift");
  sim_cmd->add_option("--out-dir", sim.out_dir, "output directory");

  SyncArgs sy;
  CLI::App* sync_cmd =
      app.add_subcommand("sync", "Synchronize asynchronous tick series");
  sync_cmd->add_option("--input", sy.input, "tick CSV")->required();
  sync_cmd->add_option("--time-unit", sy.time_unit,
                       "fraction | seconds:<start>:<end>");
  sync_cmd->add_option("--mode", sy.mode, "refresh | previous-tick");
  sync_cmd->add_option("--tick", sy.tick, "last | first tick per interval");
  sync_cmd->add_option("--grid-points", sy.grid_points,
                       "uniform grid size for previous-tick mode");
  sync_cmd->add_option("--out", sy.out, "output CSV");
  sync_cmd->add_option("--manifest", sy.manifest, "manifest JSON");
  std::uint64_t sync_seed = 0;
  sync_cmd->add_option("--seed", sync_seed, "unused, accepted for uniformity");

  EstimateArgs est;
  CLI::App* est_cmd = app.add_subcommand(
      "estimate", "Estimate the integrated volatility matrix from ticks");
  est_cmd->add_option("--input", est.input, "tick CSV")->required();
  est_cmd->add_option("--time-unit", est.time_unit,
                      "fraction | seconds:<start>:<end>");
  est_cmd->add_option("--method", est.method, "arp | urp | prvm");
  est_cmd->add_option("--c", est.opt.c, "truncation level constant");
  est_cmd->add_option("--c1", est.opt.c1, "tail index search cap");
  est_cmd->add_option("--c2", est.opt.c2, "tail index moment multiplier");
  est_cmd->add_option("--kernel-ck", est.opt.kernel_ck,
                      "pre-averaging window constant");
  est_cmd->add_option("--p-for-log", est.opt.p_for_log,
                      "dimension used in the log p term (0: actual p)");
  est_cmd->add_option("--out", est.out, "output CSV (i,j,value)");
  est_cmd->add_option("--manifest", est.manifest, "manifest JSON");
  std::uint64_t est_seed = 0;
  est_cmd->add_option("--seed", est_seed, "unused, accepted for uniformity");

  PoetArgs poet;
  CLI::App* poet_cmd = app.add_subcommand(
      "poet", "Low-rank plus thresholded-sparse regularization");
  poet_cmd->add_option("--input", poet.input, "matrix CSV")->required();
  poet_cmd->add_option("--rank", poet.rank, "factor rank")->required();
  double varpi_value = -1.0;
  CLI::Option* varpi_opt =
      poet_cmd->add_option("--varpi", varpi_value, "threshold level");
  poet_cmd->add_option("--sector", poet.sector_file,
                       "sector membership CSV (asset_id,sector_id)");
  poet_cmd->add_option("--oracle-truth", poet.oracle_truth,
                       "true matrix CSV for the oracle threshold search");
  poet_cmd->add_option("--scheme", poet.scheme, "hard | soft");
  poet_cmd->add_option("--psd", poet.psd, "shift | clip");
  poet_cmd->add_option("--out-prefix", poet.out_prefix, "output file prefix");
  poet_cmd->add_option("--manifest", poet.manifest, "manifest JSON");
  std::uint64_t poet_seed = 0;
  poet_cmd->add_option("--seed", poet_seed, "unused, accepted for uniformity");

  EvalArgs ev;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Error norms, MSPE, portfolio optimization");
  eval_cmd->add_flag("--norms", ev.norms, "error norms of --est vs --truth");
  eval_cmd->add_flag("--mspe", ev.mspe, "mean squared prediction error");
  eval_cmd->add_flag("--portfolio", ev.portfolio,
                     "minimum-variance portfolio weights");
  eval_cmd->add_option("--est", ev.est_file, "estimated matrix CSV");
  eval_cmd->add_option("--truth", ev.truth_file, "true matrix CSV");
  eval_cmd->add_option("--inputs", ev.inputs, "day-by-day matrix CSVs");
  eval_cmd->add_option("--gamma", ev.gamma_file, "covariance matrix CSV");
  eval_cmd->add_option("--c0", ev.c0, "gross exposure bounds");
  eval_cmd->add_option("--out", ev.out, "output CSV");
  eval_cmd->add_option("--manifest", ev.manifest, "manifest JSON");
  std::uint64_t eval_seed = 0;
  eval_cmd->add_option("--seed", eval_seed, "unused, accepted for uniformity");

  ExperimentArgs ex;
  CLI::App* ex_cmd = app.add_subcommand(
      "experiment", "Desk-scale analogs of the reference experiments");
  ex_cmd->add_option("--paper-table", ex.paper_table, "1 | 2");
  ex_cmd->add_option("--paper-figure", ex.paper_figure, "2 | 3 | 7");
  ex_cmd->add_option("--p", ex.opt.p, "number of assets");
  ex_cmd->add_option("--r", ex.opt.r, "number of factors");
  ex_cmd->add_option("--reps", ex.opt.reps, "replications");
  ex_cmd->add_option("--n-all", ex.opt.n_all_grid, "grid sizes");
  ex_cmd->add_option("--tails", ex.tails, "hetero|homo|gauss");
  ex_cmd->add_option("--methods", ex.methods, "comma-separated method list");
  ex_cmd->add_option("--c", ex.opt.c, "truncation level constant");
  ex_cmd->add_option("--rank", ex.opt.poet_rank, "factor rank");
  ex_cmd->add_option("--varpi-count", ex.opt.varpi_count,
                     "POET threshold grid size");
  ex_cmd->add_option("--days", ex.days, "days for panel experiments");
  ex_cmd->add_option("--seed", ex.opt.seed, "master seed");
  ex_cmd->add_option("--out-dir", ex.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (sync_cmd->parsed()) return run_sync(sy);
    if (est_cmd->parsed()) return run_estimate(est);
    if (poet_cmd->parsed()) {
      if (varpi_opt->count() > 0) poet.varpi = varpi_value;
      return run_poet(poet);
    }
    if (eval_cmd->parsed()) return run_eval(ev);
    if (ex_cmd->parsed()) return run_experiment(ex);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
