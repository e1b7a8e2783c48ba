#ifndef CHOLPARAM_TOOLS_COMMANDS_HPP
#define CHOLPARAM_TOOLS_COMMANDS_HPP

// Subcommands of the `cholparam` tool. Exit codes:
//   0 ok, 1 check failed, 2 usage or parse error, 3 not positive definite.
// Data goes to stdout (or --out), diagnostics to stderr.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "cholparam/cholparam.hpp"

namespace cholparam::tools {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kNotPositiveDefinite = 3 };

struct CommonOptions {
  std::string format = "csv";
  std::string out;
  std::string manifest;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

/// Everything needed to re-run a command: the argument vector, seeds and
/// the tolerances in effect.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::map<std::string, std::string> flags;
  std::vector<std::uint64_t> seeds;
  Tolerances tolerances;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const {
    return {{"command", command},
            {"args", args},
            {"flags", flags},
            {"seeds", seeds},
            {"version", kVersion},
            {"tolerances",
             {{"sym", tolerances.sym},
              {"pd", tolerances.pd},
              {"rec", tolerances.rec},
              {"ord", tolerances.ord}}},
            {"outputs", outputs}};
  }
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& argv) {
    CLI::App app{"Closed-form Cholesky parametrizations of correlation matrices"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto add_common = [&](CLI::App* sub, bool with_format = true) {
      if (with_format) {
        sub->add_option("--format", common_.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
      }
      sub->add_option("--out", common_.out, "output path (stdout when omitted)");
      sub->add_option("--manifest", common_.manifest, "write the run manifest to this path");
      sub->add_option("--seed", common_.seed, "random seed");
      sub->add_option("--tol", common_.tol, "acceptance threshold for residual checks");
    };

    // decompose
    std::string dec_input;
    std::string dec_method = "reference";
    bool dec_covariance = false;
    bool dec_check = false;
    auto* dec = app.add_subcommand("decompose", "Cholesky factor of a correlation or covariance matrix");
    dec->add_option("input", dec_input, "matrix file (CSV or JSON), '-' for stdin")->required();
    dec->add_option("--method", dec_method, "factorization route")
        ->check(CLI::IsMember({"reference", "semipartial", "detratio"}));
    dec->add_flag("--covariance", dec_covariance, "treat the input as a covariance matrix");
    dec->add_flag("--check", dec_check, "report reconstruction error and cross-method discrepancy");
    add_common(dec);

    // generate
    std::size_t gen_n = 0;
    std::size_t gen_count = 1;
    double gen_bias = 0.5;
    bool gen_factor = false;
    auto* gen = app.add_subcommand("generate", "random positive-definite correlation matrices");
    gen->add_option("--n", gen_n, "dimension")->required()->check(CLI::PositiveNumber);
    gen->add_option("--count", gen_count, "number of matrices")->check(CLI::PositiveNumber);
    gen->add_option("--sign-bias", gen_bias, "probability of a positive sign")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_flag("--factor", gen_factor, "also write the generating factor L");
    add_common(gen);

    // verify
    std::string ver_input;
    auto* ver = app.add_subcommand("verify", "order conditions and identity residuals of a matrix");
    ver->add_option("input", ver_input, "matrix file (CSV or JSON), '-' for stdin")->required();
    add_common(ver, false);

    // test
    std::string test_input;
    std::size_t test_target = 0;
    double test_alpha = 0.05;
    auto* tst = app.add_subcommand("test", "sequential t-test for linear dependence on a target");
    tst->add_option("data", test_input, "N x p sample file (CSV or JSON), '-' for stdin")->required();
    tst->add_option("--target", test_target, "1-based target column (default: last)");
    tst->add_option("--alpha", test_alpha, "test level")->check(CLI::Range(0.0, 1.0));
    add_common(tst, false);

    // ar1
    std::size_t ar_n = 0;
    double ar_rho = 0.0;
    std::string ar_emit = "matrix";
    std::size_t ar_count = 1;
    auto* ar = app.add_subcommand("ar1", "AR(1) correlation matrix, closed-form factor, or samples");
    ar->add_option("--n", ar_n, "dimension")->required()->check(CLI::PositiveNumber);
    ar->add_option("--rho", ar_rho, "lag-one correlation, |rho| < 1")->required();
    ar->add_option("--emit", ar_emit, "artifact")->check(CLI::IsMember({"matrix", "factor", "samples"}));
    ar->add_option("--count", ar_count, "number of sample rows")->check(CLI::PositiveNumber);
    add_common(ar);

    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out_, err_);
      return code == 0 ? kOk : kUsage;
    }

    manifest_.args.assign(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    manifest_.tolerances = tolerances();
    for (const auto* opt : app.get_subcommands().front()->get_options()) {
      if (opt->count() > 0 && !opt->get_name().empty()) {
        manifest_.flags[opt->get_name()] = opt->as<std::string>();
      }
    }

    try {
      if (dec->parsed()) {
        manifest_.command = "decompose";
        return cmd_decompose(dec_input, dec_method, dec_covariance, dec_check);
      }
      if (gen->parsed()) {
        manifest_.command = "generate";
        return cmd_generate(gen_n, gen_count, gen_bias, gen_factor);
      }
      if (ver->parsed()) {
        manifest_.command = "verify";
        return cmd_verify(ver_input);
      }
      if (tst->parsed()) {
        manifest_.command = "test";
        return cmd_test(test_input, test_target, test_alpha);
      }
      if (ar->parsed()) {
        manifest_.command = "ar1";
        return cmd_ar1(ar_n, ar_rho, ar_emit, ar_count);
      }
    } catch (const NotPositiveDefinite& e) {
      err_ << "error: not positive definite: pivot " << e.pivot_index << " = "
           << format_double(e.pivot_value) << "\n";
      return kNotPositiveDefinite;
    } catch (const NearSingular& e) {
      err_ << "error: " << e.what() << "\n";
      return kNotPositiveDefinite;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kUsage;
    }
    return kUsage;
  }

 private:
  Tolerances tolerances() const {
    Tolerances t;
    t.rec = common_.tol;
    return t;
  }

  MatrixFormat format() const {
    return common_.format == "json" ? MatrixFormat::json : MatrixFormat::csv;
  }

  static Matrix read_input(const std::string& path) {
    if (path == "-") {
      const std::string text((std::istreambuf_iterator<char>(std::cin)),
                             std::istreambuf_iterator<char>());
      return parse_matrix(text);
    }
    return read_matrix_file(path);
  }

  static void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot write " + path.string());
    f << text;
  }

  // Data to --out (plus a manifest next to it) or to stdout.
  void emit(const std::string& text) {
    if (common_.out.empty()) {
      out_ << text;
    } else {
      write_file(common_.out, text);
      manifest_.outputs.push_back(common_.out);
    }
    write_manifest(common_.out.empty() ? std::string{} : common_.out + ".manifest.json");
  }

  void write_manifest(const std::string& default_path) {
    const std::string path = common_.manifest.empty() ? default_path : common_.manifest;
    if (path.empty()) return;
    write_file(path, manifest_.to_json().dump(2) + "\n");
  }

  int cmd_decompose(const std::string& input, const std::string& method, bool covariance,
                    bool check) {
    const SquareMatrix m(read_input(input));
    const Tolerances tol = tolerances();

    auto factor_of = [&](const std::string& which) -> CholeskyFactor {
      if (covariance) {
        const CovarianceMatrix s(m, tol);
        if (which == "reference") return s.reference_factor();
        if (which == "detratio") return chol_covariance(s);
        // semipartial: scale row j of the correlation factor by sigma_j
        const auto l = chol_semipartial(s.correlation());
        Matrix scaled = l.matrix();
        for (std::size_t j = 0; j < l.n(); ++j)
          for (std::size_t i = 0; i <= j; ++i) scaled(j, i) *= s.sigmas()[j];
        return CholeskyFactor(std::move(scaled), FactorMethod::covariance);
      }
      const CorrelationMatrix r(m, tol);
      if (which == "reference") return r.reference_factor();
      if (which == "semipartial") return chol_semipartial(r);
      return chol_detratio(r, extract_signs(chol_semipartial(r)));
    };

    const auto l = factor_of(method);
    if (check) {
      const double rec = max_abs_diff(l.reconstruct(), m.matrix());
      double discrepancy = 0.0;
      for (const char* other : {"reference", "semipartial", "detratio"})
        discrepancy = std::max(discrepancy, max_abs_diff(factor_of(other).matrix(), l.matrix()));
      err_ << "reconstruction_error " << format_double(rec) << "\n";
      err_ << "method_discrepancy " << format_double(discrepancy) << "\n";
      manifest_.flags["reconstruction_error"] = format_double(rec);
      manifest_.flags["method_discrepancy"] = format_double(discrepancy);
    }
    emit(format_matrix(l.matrix(), format()));
    return kOk;
  }

  int cmd_generate(std::size_t n, std::size_t count, double bias, bool with_factor) {
    GeneratorConfig cfg{n, common_.seed, bias};
    manifest_.seeds.push_back(common_.seed);
    const auto ext = format() == MatrixFormat::json ? ".json" : ".csv";
    if (common_.out.empty()) {
      for (std::size_t k = 0; k < count; ++k) {
        if (k) out_ << "\n";
        out_ << format_matrix(generate_at(cfg, k, tolerances()).matrix.matrix(), format());
      }
      write_manifest({});
      return kOk;
    }
    const std::filesystem::path dir(common_.out);
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < count; ++k) {
      const auto g = generate_at(cfg, k, tolerances());
      std::ostringstream name;
      name << "matrix_" << std::setw(5) << std::setfill('0') << k << ext;
      write_file(dir / name.str(), format_matrix(g.matrix.matrix(), format()));
      manifest_.outputs.push_back(name.str());
      if (with_factor) {
        std::ostringstream fname;
        fname << "factor_" << std::setw(5) << std::setfill('0') << k << ext;
        write_file(dir / fname.str(), format_matrix(g.factor.matrix(), format()));
        manifest_.outputs.push_back(fname.str());
      }
    }
    write_manifest((dir / "manifest.json").string());
    return kOk;
  }

  int cmd_verify(const std::string& input) {
    const SquareMatrix m(read_input(input));
    const Tolerances tol = tolerances();
    const auto order = check_order_conditions(m, tol);
    bool ok = order.det_order_ok && order.ratio_order_ok;
    out_ << "det_order " << (order.det_order_ok ? "pass" : "FAIL") << "\n";
    out_ << "ratio_order " << (order.ratio_order_ok ? "pass" : "FAIL") << "\n";
    if (!order.det_order_ok) {
      err_ << "violated: leading-minor ordering 1 >= |R_2| >= ... >= |R_n| > 0\n";
    }
    if (!order.ratio_order_ok) {
      err_ << "violated: determinant-ratio ordering of the column ladders\n";
    }
    try {
      const CorrelationMatrix r(m, tol);
      for (const auto& rep : {verify_theorem1(r), verify_lemma1(r), verify_lemma2(r),
                              verify_general_recursion(r)}) {
        const bool pass = rep.max_residual <= common_.tol;
        ok = ok && pass;
        out_ << rep.name << " " << format_double(rep.max_residual) << " " << (pass ? "pass" : "FAIL")
             << "\n";
        if (!pass) {
          err_ << "violated: " << rep.name << " residual at (i=" << rep.i << ", j=" << rep.j
               << ", l=" << rep.l << ")\n";
        }
      }
    } catch (const NotPositiveDefinite& e) {
      ok = false;
      out_ << "identities skipped\n";
      err_ << "not positive definite: pivot " << e.pivot_index << "\n";
    }
    write_manifest(common_.out.empty() ? std::string{} : common_.out + ".manifest.json");
    return ok ? kOk : kCheckFailed;
  }

  int cmd_test(const std::string& input, std::size_t target, double alpha) {
    const Matrix data = read_input(input);
    if (data.rows() <= data.cols()) {
      err_ << "error: need more samples than variables (N=" << data.rows() << ", p=" << data.cols()
           << ")\n";
      return kUsage;
    }
    const SampleMatrix x(data);
    if (target == 0) target = x.variables();
    const auto rep = sequential_test(x, target, alpha, tolerances());
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({{"k", row.k},
                      {"r_semi", row.r_semi},
                      {"T", row.t},
                      {"df", row.df},
                      {"critical", row.critical},
                      {"reject", row.reject}});
    }
    nlohmann::json doc = {{"alpha", rep.alpha},
                          {"N", rep.samples},
                          {"p", rep.variables},
                          {"target", rep.target},
                          {"order", rep.order},
                          {"per_k", rows},
                          {"largest_rejected_k", nullptr}};
    if (rep.largest_rejected_k) doc["largest_rejected_k"] = *rep.largest_rejected_k;
    emit(doc.dump(2) + "\n");
    return kOk;
  }

  int cmd_ar1(std::size_t n, double rho, const std::string& what, std::size_t count) {
    if (!(std::abs(rho) < 1.0)) {
      err_ << "error: --rho must satisfy |rho| < 1\n";
      return kUsage;
    }
    const Ar1Spec spec(n, rho);
    if (what == "matrix") {
      emit(format_matrix(ar1_matrix(spec, tolerances()).matrix(), format()));
    } else if (what == "factor") {
      emit(format_matrix(ar1_cholesky(spec).matrix(), format()));
    } else {
      manifest_.seeds.push_back(common_.seed);
      emit(format_matrix(sample_mvn(ar1_cholesky(spec), count, common_.seed), format()));
    }
    return kOk;
  }

  std::ostream& out_;
  std::ostream& err_;
  CommonOptions common_;
  RunManifest manifest_;
};

inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  Runner runner(out, err);
  return runner.run(argv);
}

}  // namespace cholparam::tools

#endif  // CHOLPARAM_TOOLS_COMMANDS_HPP
