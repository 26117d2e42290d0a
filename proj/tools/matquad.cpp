#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "matquad/errors.hpp"
#include "matquad/extensions.hpp"
#include "matquad/io.hpp"
#include "matquad/linalg.hpp"
#include "matquad/quadrature.hpp"
#include "matquad/verify.hpp"

namespace {

using namespace matquad;

Eigen::MatrixXd parse_matrix_literal(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream row_stream(text);
  std::string row_text;
  while (std::getline(row_stream, row_text, ';')) {
    std::vector<double> row;
    std::string cell;
    std::stringstream cell_stream(row_text);
    while (std::getline(cell_stream, cell, ',')) {
      if (cell.find_first_not_of(" \t") == std::string::npos) {
        continue;
      }
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw InvalidInput("cannot parse matrix literal entry: " + cell);
      }
      if (cell.find_first_not_of(" \t", used) != std::string::npos) {
        throw InvalidInput("cannot parse matrix literal entry: " + cell);
      }
      row.push_back(value);
    }
    if (!row.empty()) {
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) {
    throw InvalidInput("empty matrix literal");
  }
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd out(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw InvalidInput("ragged matrix literal");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MATQUAD_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

Z1Strategy parse_z1(const std::string& text) {
  if (text.empty() || text == "zero") {
    return Z1Zero{};
  }
  if (text.rfind("identity", 0) == 0) {
    double c = 1.0;
    if (const auto pos = text.find(':'); pos != std::string::npos) {
      c = std::stod(text.substr(pos + 1));
    }
    return Z1ScaledIdentity{c};
  }
  if (text.rfind("random", 0) == 0) {
    std::uint64_t seed = default_seed();
    if (const auto pos = text.find(':'); pos != std::string::npos) {
      seed = std::strtoull(text.substr(pos + 1).c_str(), nullptr, 10);
    }
    return Z1RandomSymmetric{seed};
  }
  return Z1Explicit{parse_matrix_literal(text)};
}

void print_matrix_inline(const Eigen::MatrixXd& m) {
  std::printf("[");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r > 0) {
      std::printf("; ");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::printf(c > 0 ? ", %.12g" : "%.12g", m(r, c));
    }
  }
  std::printf("]");
}

void print_measure(const AtomicMeasure& measure, const ToleranceConfig& cfg) {
  for (const auto& atom : measure.atoms) {
    std::printf("  atom %-22.12g mass ", atom.position);
    print_matrix_inline(atom.mass);
    std::printf("  (rank %d)\n", numerical_rank(atom.mass, cfg));
  }
  if (measure.infinity_mass.has_value()) {
    std::printf("  atom %-22s mass ", "infinity");
    print_matrix_inline(*measure.infinity_mass);
    std::printf("  (rank %d)\n", numerical_rank(*measure.infinity_mass, cfg));
  }
}

struct CommonOptions {
  std::string input;
  std::string output;
  ToleranceConfig tol;
};

void add_tolerance_flags(CLI::App* cmd, ToleranceConfig& tol) {
  cmd->add_option("--rank-tol", tol.rank_rel_tol, "relative numerical-rank tolerance");
  cmd->add_option("--psd-tol", tol.psd_tol, "eigenvalue tolerance for semidefiniteness");
  cmd->add_option("--root-tol", tol.root_imag_tol, "imaginary-part tolerance for real roots");
  cmd->add_option("--cluster-tol", tol.root_cluster_tol, "root clustering radius");
  cmd->add_option("--residual-tol", tol.residual_rel_tol, "relative residual tolerance");
}

int map_error(const std::exception& e) {
  if (dynamic_cast<const InvalidInput*>(&e) != nullptr) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  if (const auto* infeasible = dynamic_cast<const InfeasibleMultiplicity*>(&e)) {
    std::fprintf(stderr, "infeasible: %s\nm_max = %d\n", e.what(), infeasible->max_multiplicity);
    return 2;
  }
  if (dynamic_cast<const UnsupportedSingular*>(&e) != nullptr ||
      dynamic_cast<const PreconditionViolation*>(&e) != nullptr) {
    std::fprintf(stderr, "precondition failed: %s\n", e.what());
    return 2;
  }
  std::fprintf(stderr, "numeric failure: %s\n", e.what());
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matquad: minimal matrix-valued Gaussian quadrature rules"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  double solve_t = 0.0;
  int solve_m = 0;
  std::string z1_text;
  std::string j_text;
  CLI::App* solve = app.add_subcommand("solve", "construct a minimal measure with a prescribed atom");
  solve->add_option("input", solve_opts.input, "moment sequence file")->required();
  solve->add_option("--t", solve_t, "prescribed atom")->required();
  solve->add_option("--m", solve_m, "prescribed multiplicity (default 0)");
  solve->add_option("--z1", z1_text, "completion block: zero | identity:<c> | random:<seed> | matrix literal");
  solve->add_option("--j", j_text, "explicit dependence coefficients (matrix literal, rows ';'-separated)");
  solve->add_option("-o,--output", solve_opts.output, "measure output file");
  add_tolerance_flags(solve, solve_opts.tol);

  CommonOptions feas_opts;
  double feas_t = 0.0;
  CLI::App* feas = app.add_subcommand("feasibility", "report the multiplicity bound at an atom");
  feas->add_option("input", feas_opts.input, "moment sequence file")->required();
  feas->add_option("--t", feas_t, "prescribed atom")->required();
  add_tolerance_flags(feas, feas_opts.tol);

  CommonOptions verify_opts;
  std::string measure_path;
  CLI::App* verify = app.add_subcommand("verify", "check a measure file against moment data");
  verify->add_option("input", verify_opts.input, "moment sequence file")->required();
  verify->add_option("measure", measure_path, "measure file")->required();
  add_tolerance_flags(verify, verify_opts.tol);

  CommonOptions strong_opts;
  CLI::App* strong = app.add_subcommand("strong", "solve a two-sided (strong) moment problem");
  strong->add_option("input", strong_opts.input, "strong moment file with min_index")->required();
  strong->add_option("-o,--output", strong_opts.output, "measure output file");
  add_tolerance_flags(strong, strong_opts.tol);

  CommonOptions gen_opts;
  double gen_t = 0.0;
  int gen_m = 0;
  CLI::App* gen = app.add_subcommand("generalized", "solve with a mass at infinity");
  gen->add_option("input", gen_opts.input, "moment sequence file")->required();
  gen->add_option("--t", gen_t, "prescribed atom")->required();
  gen->add_option("--m", gen_m, "prescribed multiplicity (default 0)");
  gen->add_option("-o,--output", gen_opts.output, "measure output file");
  add_tolerance_flags(gen, gen_opts.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) {
      const MomentSequence seq = read_moment_sequence_file(solve_opts.input);
      QuadratureProblem problem{seq, solve_t, solve_m, solve_opts.tol, parse_z1(z1_text),
                                std::nullopt};
      if (!j_text.empty()) {
        problem.dependence_override = parse_matrix_literal(j_text);
      }
      const SolveResult result = minimal_measure(problem);
      std::printf("minimal measure, total rank %d:\n",
                  total_rank(result.measure, solve_opts.tol));
      print_measure(result.measure, solve_opts.tol);
      std::printf("max relative moment residual: %.3e\n",
                  result.trace.report.max_relative_residual);
      if (!solve_opts.output.empty()) {
        write_measure_file(solve_opts.output, result.measure,
                           result.trace.report.max_relative_residual);
        std::printf("wrote %s\n", solve_opts.output.c_str());
      }
      return 0;
    }
    if (feas->parsed()) {
      const MomentSequence seq = read_moment_sequence_file(feas_opts.input);
      const int n = seq.degree() / 2;
      const int rank = numerical_rank(localizing_matrix(seq, feas_t, n - 1).mat, feas_opts.tol);
      const int bound = max_multiplicity(seq, feas_t, feas_opts.tol);
      std::printf("rank of localizing matrix: %d\n", rank);
      std::printf("(n-1)p:                    %d\n", (n - 1) * seq.p());
      std::printf("m_max:                     %d\n", bound);
      return 0;
    }
    if (verify->parsed()) {
      const MomentSequence seq = read_moment_sequence_file(verify_opts.input);
      const AtomicMeasure measure = read_measure_file(measure_path);
      const VerifyReport report = verify_measure(seq, measure, verify_opts.tol);
      std::printf("total rank:    %d\n", report.total_rank);
      std::printf("psd masses:    %s\n", report.psd_ok ? "yes" : "no");
      std::printf("minimal:       %s\n", report.minimal ? "yes" : "no");
      std::printf("max residual:  %.3e\n", report.max_relative_residual);
      for (std::size_t i = 0; i < report.per_moment_residuals.size(); ++i) {
        std::printf("  moment %-3zu residual %.3e\n", i, report.per_moment_residuals[i]);
      }
      return report.green(verify_opts.tol) ? 0 : 3;
    }
    if (strong->parsed()) {
      const StrongSequence data = read_strong_sequence_file(strong_opts.input);
      const AtomicMeasure measure = solve_strong_hamburger(data, strong_opts.tol);
      double residual = 0.0;
      for (int k = -2 * data.n1(); k <= 2 * data.n2(); ++k) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(data.p(), data.p());
        for (const auto& atom : measure.atoms) {
          acc += std::pow(atom.position, k) * atom.mass;
        }
        residual = std::max(residual,
                            (acc - data.at(k)).norm() / std::max(1.0, data.at(k).norm()));
      }
      std::printf("strong measure, total rank %d:\n", total_rank(measure, strong_opts.tol));
      print_measure(measure, strong_opts.tol);
      std::printf("max relative moment residual: %.3e\n", residual);
      if (!strong_opts.output.empty()) {
        write_measure_file(strong_opts.output, measure, residual);
        std::printf("wrote %s\n", strong_opts.output.c_str());
      }
      return 0;
    }
    if (gen->parsed()) {
      const MomentSequence seq = read_moment_sequence_file(gen_opts.input);
      const AtomicMeasure measure = generalized_measure(seq, gen_t, gen_m, gen_opts.tol);
      const VerifyReport report = verify_measure(seq, measure, gen_opts.tol);
      std::printf("generalized measure, total rank %d:\n", total_rank(measure, gen_opts.tol));
      print_measure(measure, gen_opts.tol);
      std::printf("max relative moment residual: %.3e\n", report.max_relative_residual);
      if (!gen_opts.output.empty()) {
        write_measure_file(gen_opts.output, measure, report.max_relative_residual);
        std::printf("wrote %s\n", gen_opts.output.c_str());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    return map_error(e);
  }
  return 1;
}
