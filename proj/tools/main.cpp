// Command-line surface: norm and summing-norm evaluation, duality reports,
// property suites, and batch manifests. Exit codes: 0 success, 1 property
// failure, 2 usage or parse error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "seqdual/dualize.hpp"
#include "seqdual/errors.hpp"
#include "seqdual/manifest.hpp"
#include "seqdual/opideal.hpp"
#include "seqdual/seqnorm.hpp"
#include "seqdual/verify.hpp"

namespace {

using namespace seqdual;

struct Options {
  std::string method = "auto";
  double tol = 1e-3;
  std::uint64_t seed = 2024;
  int restarts = 5;
  int max_iter = 250;
  int grid = 360;
  int k = 1;
  int trials = 0;
  int mid_max_m = 64;
  int rad_mc = 0;
  bool json = false;
  bool witness = false;
  bool reverse = false;
  std::string input;
  std::string x_class;
  std::string y_class;
  std::string class_text;
  std::string suite;
};

OptConfig engine_config(const Options& o) {
  OptConfig cfg;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  cfg.max_iter = o.max_iter;
  cfg.grid_resolution = o.grid;
  cfg.mid_max_m = o.mid_max_m;
  cfg.rad_mc = o.rad_mc;
  return cfg;
}

void add_engine_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method,
                  "computation path: auto, exact, ascent, bruteforce")
      ->check(CLI::IsMember({"auto", "exact", "ascent", "bruteforce"}));
  cmd->add_option("--tol", o.tol, "tolerance for pass/fail comparisons");
  cmd->add_option("--seed", o.seed, "seed determining every random draw");
  cmd->add_option("--restarts", o.restarts, "ascent restarts");
  cmd->add_option("--max-iter", o.max_iter, "ascent iterations per restart");
  cmd->add_option("--grid", o.grid, "grid resolution for brute force");
  cmd->add_option("--mid-max-m", o.mid_max_m,
                  "truncation cap for the mid-norm ladder");
  cmd->add_option("--rad-mc", o.rad_mc,
                  "Monte Carlo samples for long Rademacher sums");
  cmd->add_flag("--json", o.json, "emit canonical JSON instead of text");
  cmd->add_flag("--witness", o.witness, "include the maximizing argument");
}

// Inline JSON is detected by its first non-space byte; anything else is a
// file path.
nlohmann::json load_json_arg(const std::string& arg) {
  std::size_t i = 0;
  while (i < arg.size() && std::isspace(static_cast<unsigned char>(arg[i]))) {
    ++i;
  }
  if (i < arg.size() && (arg[i] == '{' || arg[i] == '[')) {
    return parse_json_text(arg);
  }
  std::ifstream in(arg);
  if (!in) {
    throw std::invalid_argument("cannot open input file '" + arg + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

std::vector<double> witness_values(const Vec& w) {
  return {w.data(), w.data() + w.size()};
}

void print_cert(const NormCert& cert, const Options& o,
                const std::string& caveat) {
  if (o.json) {
    nlohmann::json j{{"value", cert.value},
                     {"method", to_string(cert.method)},
                     {"bound", to_string(cert.bound)}};
    if (!cert.note.empty()) j["note"] = cert.note;
    if (!caveat.empty()) j["caveat"] = caveat;
    if (o.witness && cert.witness.size() > 0) {
      j["witness"] = witness_values(cert.witness);
    }
    std::cout << canonical_json_dump(j) << "\n";
    return;
  }
  std::printf("value  = %.17g\n", cert.value);
  std::printf("method = %s\n", to_string(cert.method).c_str());
  std::printf("bound  = %s\n", to_string(cert.bound).c_str());
  if (!cert.note.empty()) std::printf("note   = %s\n", cert.note.c_str());
  if (!caveat.empty()) std::printf("caveat = %s\n", caveat.c_str());
  if (o.witness && cert.witness.size() > 0) {
    std::printf("witness =");
    for (long i = 0; i < cert.witness.size(); ++i) {
      std::printf(" %.17g", cert.witness[i]);
    }
    std::printf("\n");
  }
}

int run_norm(const Options& o, bool wrap_dual) {
  ClassId cls = ClassId::parse(o.class_text);
  if (wrap_dual) cls = ClassId::dual_of(cls);
  const VecSeq x = VecSeq::from_json(load_json_arg(o.input));
  const OptConfig cfg = engine_config(o);
  const MethodChoice method = parse_method(o.method);

  NormCert cert;
  if (cls.kind() == ClassKind::Dual) {
    cert = dual_norm(DualNormProblem(cls.inner(), x.space, x), cfg, method);
  } else if (method == MethodChoice::Auto) {
    cert = class_norm(cls, x, cfg);
  } else if (method == MethodChoice::ForceExact) {
    cert = class_norm(cls, x, cfg);
    if (cert.method != CertMethod::Exact &&
        cert.method != CertMethod::VertexEnum) {
      throw std::invalid_argument("no exact path for class " + cls.str() +
                                  " over this space; use method auto");
    }
  } else {
    throw std::invalid_argument(
        "methods ascent and bruteforce select dual-norm paths; class " +
        cls.str() + " is not a dual class");
  }
  print_cert(cert, o, class_caveat(cls));
  return 0;
}

int run_opnorm(const Options& o) {
  const ClassId X = ClassId::parse(o.x_class);
  const ClassId Y = ClassId::parse(o.y_class);
  const LinOp T = LinOp::from_json(load_json_arg(o.input));
  const NormCert cert = summing_norm(X, Y, T, o.k, engine_config(o));
  print_cert(cert, o, "");
  return 0;
}

int run_adjoint_report(const Options& o) {
  const ClassId X = ClassId::parse(o.x_class);
  const ClassId Y = ClassId::parse(o.y_class);
  const LinOp T = LinOp::from_json(load_json_arg(o.input));
  const OptConfig cfg = engine_config(o);
  const AdjointReport rep =
      o.reverse ? reverse_duality_report(X, Y, T, o.k, cfg, o.tol)
                : adjoint_duality_report(X, Y, T, o.k, cfg, o.tol);
  if (o.json) {
    std::cout << canonical_json_dump(rep.to_json()) << "\n";
  } else {
    std::printf("primal       = %.17g\n", rep.primal);
    std::printf("adjoint side = %.17g\n", rep.adjoint_side);
    std::printf("difference   = %.17g\n", rep.difference);
    std::printf("direction    = %s\n", rep.direction.c_str());
    std::printf("inequality   = %s\n", rep.inequality_holds ? "holds" : "FAILS");
    if (rep.equality_expected) {
      std::printf("equality     = %s\n", rep.equality_holds ? "holds" : "FAILS");
    }
    std::printf("hypotheses   = %s\n", rep.hypotheses.c_str());
  }
  const bool ok =
      rep.inequality_holds && (!rep.equality_expected || rep.equality_holds);
  return ok ? 0 : 1;
}

int run_verify(const Options& o, bool tol_given) {
  SuiteSpec spec;
  spec.name = o.suite;
  spec.trials = o.trials;
  spec.seed = o.seed;
  spec.opt = engine_config(o);
  if (tol_given) spec.tolerances["ascent"] = o.tol;
  const SuiteReport rep = run_suite(spec);
  if (o.json) {
    std::cout << canonical_json_dump(rep.to_json()) << "\n";
  } else {
    std::cout << rep.summary();
  }
  return rep.pass ? 0 : 1;
}

int run_report(const Options& o) {
  const nlohmann::json out =
      run_manifest(load_json_arg(o.input), engine_config(o));
  std::cout << canonical_json_dump(out) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"norms of vector sequences, dual norms, and summing norms of "
               "operators between finite-dimensional spaces"};
  app.require_subcommand(1);
  Options o;

  CLI::App* norm = app.add_subcommand("norm", "class norm of a sequence");
  norm->add_option("class", o.class_text, "class id, e.g. lp:2 or dual(linf)")
      ->required();
  norm->add_option("--input,--data", o.input, "sequence JSON (inline or file path)")
      ->required();
  add_engine_flags(norm, o);

  CLI::App* dualnorm =
      app.add_subcommand("dualnorm", "dual-class norm of a sequence");
  dualnorm->add_option("class", o.class_text, "inner class id, e.g. linf")
      ->required();
  dualnorm->add_option("--input,--data", o.input, "sequence JSON (inline or file)")
      ->required();
  add_engine_flags(dualnorm, o);

  CLI::App* opnorm =
      app.add_subcommand("opnorm", "summing norm of an operator");
  opnorm->add_option("x", o.x_class, "domain sequence class")->required();
  opnorm->add_option("y", o.y_class, "codomain sequence class")->required();
  opnorm->add_option("--input,--data", o.input, "operator JSON (inline or file)")
      ->required();
  opnorm->add_option("--k", o.k, "sequence length (default 1)");
  add_engine_flags(opnorm, o);

  CLI::App* adjrep = app.add_subcommand(
      "adjoint-report", "adjoint duality report for an operator");
  adjrep->add_option("--x", o.x_class, "domain sequence class")->required();
  adjrep->add_option("--y", o.y_class, "codomain sequence class")->required();
  adjrep->add_option("--input,--data", o.input, "operator JSON (inline or file)")
      ->required();
  adjrep->add_option("--k", o.k, "sequence length (default 1)");
  adjrep->add_flag("--reverse", o.reverse,
                   "check the reverse identity (dual classes on the primal "
                   "side)");
  add_engine_flags(adjrep, o);

  CLI::App* verify = app.add_subcommand("verify", "run a property suite");
  verify
      ->add_option("suite", o.suite,
                   "one of: axioms, lemma-2.2, proposition-2.5, "
                   "dual-identities, theorem-2.8c, proposition-3.1, "
                   "theorem-3.5, theorem-3.6, corollary-3.10, operator-ideal, "
                   "known-values, oracle-consistency")
      ->required();
  verify->add_option("--trials", o.trials,
                     "trial count (0 picks the suite default)");
  add_engine_flags(verify, o);

  CLI::App* report =
      app.add_subcommand("report", "run a batch manifest of tasks");
  report->add_option("--input,--data", o.input, "manifest JSON (inline or file)")
      ->required();
  add_engine_flags(report, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(norm)) return run_norm(o, false);
    if (app.got_subcommand(dualnorm)) return run_norm(o, true);
    if (app.got_subcommand(opnorm)) return run_opnorm(o);
    if (app.got_subcommand(adjrep)) return run_adjoint_report(o);
    if (app.got_subcommand(verify)) {
      return run_verify(o, verify->count("--tol") > 0);
    }
    if (app.got_subcommand(report)) return run_report(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const HypothesisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
