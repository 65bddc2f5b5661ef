#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "rotorcut/experiments.hpp"

namespace rotorcut::cli {

namespace {

struct GraphOptions {
  std::string path;
  int gen_n = 0;
  std::int64_t gen_m = 0;
  std::string gen_mode = "random";
  double gen_lo = 0.0;
  double gen_hi = 15.0;
  std::uint64_t gen_seed = 0;
};

struct RunOptions {
  GraphOptions graph;
  ExperimentSpec spec;
  std::string solver = "nqs";
  std::string init = "random";
  std::string seeds = "0-9";
};

WeightMode parse_mode(const std::string& mode, double lo, double hi) {
  if (mode == "uniform") return WeightMode::uniform_one();
  if (mode == "random") return WeightMode::random_range(lo, hi);
  throw std::invalid_argument("weight mode must be 'uniform' or 'random'");
}

// "0-9", "1,4,7" or a mix such as "0-2,8".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(std::stoull(item));
    } else {
      const auto lo = std::stoull(item.substr(0, dash));
      const auto hi = std::stoull(item.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("bad seed range " + item);
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  return seeds;
}

void add_graph_options(CLI::App* cmd, GraphOptions& g) {
  cmd->add_option("--graph", g.path, "Edge-list file");
  cmd->add_option("--gen-n", g.gen_n, "Generate a graph with this many vertices instead");
  cmd->add_option("--gen-m", g.gen_m, "Edge count of the generated graph");
  cmd->add_option("--gen-mode", g.gen_mode, "uniform | random")
      ->check(CLI::IsMember({"uniform", "random"}));
  cmd->add_option("--gen-lo", g.gen_lo, "Lower end of random weights");
  cmd->add_option("--gen-hi", g.gen_hi, "Upper end of random weights");
  cmd->add_option("--gen-seed", g.gen_seed, "Generator seed");
}

Graph load_graph(const GraphOptions& g) {
  if (!g.path.empty()) {
    if (g.gen_n > 0) throw std::invalid_argument("give either --graph or --gen-n, not both");
    return read_edge_list(g.path);
  }
  if (g.gen_n <= 0) throw std::invalid_argument("a graph is required (--graph or --gen-n)");
  return generate_graph(g.gen_n, g.gen_m, parse_mode(g.gen_mode, g.gen_lo, g.gen_hi), g.gen_seed);
}

void add_run_options(CLI::App* cmd, RunOptions& o) {
  add_graph_options(cmd, o.graph);
  VmcConfig& v = o.spec.vmc;
  BmzConfig& b = o.spec.bmz;
  cmd->add_option("--solver", o.solver, "bmz | nqs | both")
      ->check(CLI::IsMember({"bmz", "nqs", "both"}));
  cmd->add_option("--n-samp", v.n_samp, "Metropolis samples per SR step");
  cmd->add_option("--n-warm", v.n_warm, "Leading samples discarded per SR step");
  cmd->add_option("--n-iter", v.n_iter, "SR steps");
  cmd->add_option("--lambda-reg", v.lambda_reg, "Diagonal shift of the SR metric");
  cmd->add_option("--learning-rate", v.learning_rate, "SR step size");
  cmd->add_option("--alpha", v.alpha, "Hidden units per visible unit");
  cmd->add_option("--step", v.proposal_step, "Proposal half-width in radians");
  cmd->add_flag("--auto-step", v.auto_step, "Tune the step during warm samples");
  cmd->add_option("--minres-tol", v.minres_tol, "MINRES relative tolerance");
  cmd->add_option("--minres-max-iter", v.minres_max_iter, "MINRES iteration cap (0: P)");
  cmd->add_option("--max-iters", b.max_iters, "BMZ trust-region iterations");
  cmd->add_option("--grad-tol", b.grad_tol, "BMZ gradient infinity-norm tolerance");
  cmd->add_option("--tr-radius-init", b.tr_radius_init, "BMZ initial trust radius");
  cmd->add_option("--tr-radius-max", b.tr_radius_max, "BMZ maximum trust radius");
  cmd->add_option("--seeds", o.seeds, "Seeds, e.g. 0-9 or 1,3,5");
  cmd->add_option("--init", o.init, "random | pretrained")
      ->check(CLI::IsMember({"random", "pretrained"}));
  cmd->add_option("--r", o.spec.pretrain_radius, "Visible-bias radius for pretrained init");
  cmd->add_option("--sigma", o.spec.weight_sigma, "Std of the initial weights");
  cmd->add_option("--out", o.spec.out_dir, "Output directory");
  cmd->add_option("--threads", o.spec.threads, "Worker threads (0: all cores)");
}

void finish_spec(RunOptions& o) {
  o.spec.solver = o.solver == "bmz" ? Solver::bmz : o.solver == "both" ? Solver::both : Solver::nqs;
  o.spec.init = o.init == "pretrained" ? InitKind::pretrained : InitKind::random;
  o.spec.seeds = parse_seeds(o.seeds);
  o.spec.validate();
}

void print_stats(std::ostream& out, const std::string& name, const SeedStats& s) {
  out << name << " energy: mean " << s.mean << "  std " << s.std << "  min " << s.min
      << "  max " << s.max << "  (" << s.per_seed.size() << " seeds)\n";
  out << name << " cut:    mean " << s.cut_mean << "  std " << s.cut_std << "  min " << s.cut_min
      << "  max " << s.cut_max << '\n';
}

std::vector<SweepPoint> parse_grid(SweepParameter param, const std::string& values) {
  std::vector<SweepPoint> grid;
  std::stringstream in(values);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    SweepPoint p;
    switch (param) {
      case SweepParameter::n_iter: p.n_iter = std::stoi(item); break;
      case SweepParameter::lambda_reg: p.lambda_reg = std::stod(item); break;
      case SweepParameter::samp_warm: {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("samp_warm values look like 40:0,100:10");
        p.n_samp = std::stoi(item.substr(0, colon));
        p.n_warm = std::stoi(item.substr(colon + 1));
        break;
      }
    }
    grid.push_back(p);
  }
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  return grid;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Max-Cut through rotor relaxations: BMZ trust region and rotor-RBM VMC"};
  app.require_subcommand(1);

  // gen-graph
  GraphOptions gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen-graph", "Write a random graph as an edge list");
  gen_cmd->add_option("--n", gen.gen_n, "Vertices")->required();
  gen_cmd->add_option("--m", gen.gen_m, "Edges")->required();
  gen_cmd->add_option("--mode", gen.gen_mode, "uniform | random")
      ->check(CLI::IsMember({"uniform", "random"}));
  gen_cmd->add_option("--lo", gen.gen_lo, "Lower end of random weights");
  gen_cmd->add_option("--hi", gen.gen_hi, "Upper end of random weights");
  gen_cmd->add_option("--seed", gen.gen_seed, "Generator seed");
  gen_cmd->add_option("--out", gen_out, "Output path")->required();

  // bruteforce
  std::string bf_path;
  auto* bf_cmd = app.add_subcommand("bruteforce", "Exact Max-Cut by enumeration (n <= 24)");
  bf_cmd->add_option("graph", bf_path, "Edge-list file")->required();

  // run
  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Multi-seed BMZ and/or NQS runs");
  add_run_options(run_cmd, run_opts);

  // sweep
  RunOptions sweep_opts;
  std::string sweep_param;
  std::string sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "NQS statistics over a parameter grid");
  add_run_options(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--param", sweep_param, "n_iter | samp_warm | lambda_reg")
      ->required()
      ->check(CLI::IsMember({"n_iter", "samp_warm", "lambda_reg"}));
  sweep_cmd->add_option("--values", sweep_values, "Grid, e.g. 8000,12000 or 40:0,100:10")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    out << std::setprecision(12);
    if (gen_cmd->parsed()) {
      const Graph g =
          generate_graph(gen.gen_n, gen.gen_m, parse_mode(gen.gen_mode, gen.gen_lo, gen.gen_hi),
                         gen.gen_seed);
      write_edge_list(g, gen_out);
      out << "wrote " << gen_out << ": n=" << g.num_vertices() << " m=" << g.num_edges()
          << " density=" << g.density() << '\n';
    } else if (bf_cmd->parsed()) {
      const Graph g = read_edge_list(bf_path);
      const MaxCutResult best = brute_force_max_cut(g);
      out << "max_cut " << best.value << '\n' << "assignment";
      for (int v : best.x) out << ' ' << (v > 0 ? "+1" : "-1");
      out << '\n';
    } else if (run_cmd->parsed()) {
      finish_spec(run_opts);
      const Graph g = load_graph(run_opts.graph);
      const ExperimentResult result = run_experiment(g, run_opts.spec);
      write_experiment(run_opts.spec, g, result);
      if (result.bmz) print_stats(out, "bmz energy", *result.bmz);
      if (result.nqs) print_stats(out, "nqs energy", *result.nqs);
      for (const SeedOutcome& o : result.outcomes) {
        out << "seed " << o.seed;
        if (o.bmz) out << "  bmz " << o.bmz->energy << " cut " << o.bmz_cut->value;
        if (o.nqs) out << "  nqs " << o.nqs->best_energy << " cut " << o.nqs->best_cut.value;
        out << '\n';
      }
    } else if (sweep_cmd->parsed()) {
      finish_spec(sweep_opts);
      const Graph g = load_graph(sweep_opts.graph);
      const SweepParameter param = sweep_param == "n_iter"      ? SweepParameter::n_iter
                                   : sweep_param == "samp_warm" ? SweepParameter::samp_warm
                                                                : SweepParameter::lambda_reg;
      const auto rows = run_sweep(g, sweep_opts.spec, param, parse_grid(param, sweep_values));
      if (!sweep_opts.spec.out_dir.empty()) {
        std::filesystem::create_directories(sweep_opts.spec.out_dir);
        write_sweep_csv(
            (std::filesystem::path(sweep_opts.spec.out_dir) / "sweep.csv").string(), param, rows);
      }
      for (const SweepRow& r : rows) {
        std::ostringstream label;
        switch (param) {
          case SweepParameter::n_iter: label << "n_iter=" << r.point.n_iter; break;
          case SweepParameter::samp_warm:
            label << "(n_samp,n_warm)=(" << r.point.n_samp << ',' << r.point.n_warm << ')';
            break;
          case SweepParameter::lambda_reg: label << "lambda_reg=" << r.point.lambda_reg; break;
        }
        print_stats(out, label.str(), r.stats);
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace rotorcut::cli
