#include "torfact/cli/dispatch.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torfact/cli/document.hpp"
#include "torfact/factor_circle.hpp"
#include "torfact/factor_scalar.hpp"
#include "torfact/invariants.hpp"
#include "torfact/polynomial.hpp"
#include "torfact/toeplitz_oracle.hpp"
#include "torfact/witness.hpp"

namespace torfact::cli {

using Json = nlohmann::ordered_json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::Io:
    case ErrorKind::MalformedDocument:
    case ErrorKind::IndexArityMismatch:
    case ErrorKind::DuplicateTerm:
      return 1;
    case ErrorKind::NearSingular:
    case ErrorKind::Inconclusive:
      return 2;
    case ErrorKind::DimensionMismatch: return 3;
    case ErrorKind::InvalidArgument: return 4;
    case ErrorKind::SpectrumViolation: return 5;
    case ErrorKind::NoConvergence: return 6;
    case ErrorKind::SingularSample: return 7;
    case ErrorKind::GridTooCoarse: return 8;
    case ErrorKind::AmbiguousWinding: return 9;
    case ErrorKind::NonzeroWinding: return 10;
    case ErrorKind::PhaseJumpTooLarge: return 11;
    case ErrorKind::IdenticallySingular: return 12;
    case ErrorKind::UnstableSections: return 13;
    case ErrorKind::NotUnitary: return 14;
    case ErrorKind::NotNormalizedOnSubtorus: return 15;
    case ErrorKind::NotOnSphere: return 16;
    case ErrorKind::ApproximationTooCoarse: return 17;
  }
  return 70;
}

namespace {

constexpr int kInternalError = 70;

struct Common {
  std::string input;
  std::string result;
  std::string out;
  std::string dump;
  int grid = 0;
  double tol = 1e-8;
  double margin = 1e-6;
  double max_gap = 0.1;
};

Json document_json(const MatrixSeries& a) { return Json::parse(serialize(a)); }

Json kappa_json(const std::vector<int>& kappa) {
  Json j = Json::array();
  for (int v : kappa) j.push_back(v);
  return j;
}

Json index_json(const MultiIndex& m) {
  Json j = Json::array();
  for (int v : m.entries()) j.push_back(v);
  return j;
}

void print_value(std::ostream& os, const std::string& prefix, const Json& v) {
  if (v.is_object()) {
    // Embedded documents stay in the result file only.
    if (v.contains("entries")) {
      os << prefix << ": <" << v["entries"].size() << " nonzero entries>\n";
      return;
    }
    for (const auto& [k, x] : v.items()) print_value(os, prefix.empty() ? k : prefix + "." + k, x);
    return;
  }
  os << prefix << ": " << v.dump() << "\n";
}

int max_degree(const MatrixSeries& a) {
  int d = 0;
  for (int x : a.degrees()) d = std::max(d, x);
  return d;
}

void require_dim(const MatrixSeries& a, std::size_t k, const char* what) {
  if (a.dim() != k) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " expects k = " + std::to_string(k) + ", got " +
                                                  std::to_string(a.dim()));
  }
}

GridShape invariant_grid(const MatrixSeries& a, int requested) {
  if (requested > 0) return GridShape::cube(3, requested);
  return GridShape::cube(3, std::max(32, 4 * max_degree(a)));
}

Json descriptor_json(const ComponentDescriptor& d) {
  Json j;
  j["m"] = d.m;
  j["w"] = index_json(d.w);
  j["m_raw"] = d.m_raw;
  j["m_gap"] = d.m_gap;
  j["w_gap"] = d.w_gap;
  j["det_margin"] = d.det_margin;
  return j;
}

MatrixPolynomial polynomial_of(const MatrixSeries& a) {
  require_dim(a, 1, "regularize");
  for (const auto& j : spectrum(a)) {
    if (j[0] < 0) throw Error(ErrorKind::InvalidArgument, "regularize expects a polynomial (no negative powers)");
  }
  return MatrixPolynomial::from_series(a);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wiener-Hopf factorization and topological invariants of matrix functions on tori", "torfact"};
  app.require_subcommand(1);
  Common opt;

  auto add_io = [&](CLI::App* sub, bool input) {
    if (input) sub->add_option("--input", opt.input, "coefficient document")->required()->check(CLI::ExistingFile);
    sub->add_option("--result", opt.result, "machine-readable result file (JSON)");
  };

  auto* factor = app.add_subcommand("factor", "Wiener-Hopf factorization of a matrix symbol on the circle");
  add_io(factor, true);
  opt.grid = 0;
  double root_margin = 1e-8;
  bool with_oracle = false;
  factor->add_option("--grid", opt.grid, "verification grid (default 256)");
  factor->add_option("--tol", opt.tol, "reconstruction tolerance");
  factor->add_option("--root-margin", root_margin, "minimal distance of det roots from |z| = 1");
  factor->add_flag("--oracle", with_oracle, "cross-check indices with Toeplitz sections");

  auto* fscalar = app.add_subcommand("factor-scalar", "constructive scalar factorization on T^k");
  add_io(fscalar, true);
  fscalar->add_option("--grid", opt.grid, "initial grid size per axis (default 32)");
  fscalar->add_option("--tol", opt.tol, "reconstruction tolerance");
  fscalar->add_option("--margin", opt.margin, "invertibility margin");

  auto* inv = app.add_subcommand("invariants", "component descriptor of a matrix function on T^3");
  add_io(inv, true);
  inv->add_option("--grid", opt.grid, "grid size per axis (default max(32, 4 * degree))");
  inv->add_option("--margin", opt.margin, "invertibility margin");
  inv->add_option("--max-gap", opt.max_gap, "rounding gap threshold");
  inv->add_option("--dump-samples", opt.dump, "binary dump of the grid samples");

  auto* cert = app.add_subcommand("certify", "obstruction certificate on T^3");
  add_io(cert, true);
  cert->add_option("--grid", opt.grid, "grid size per axis (default max(32, 4 * degree))");
  cert->add_option("--margin", opt.margin, "invertibility margin");
  cert->add_option("--max-gap", opt.max_gap, "rounding gap threshold");
  cert->add_option("--dump-samples", opt.dump, "binary dump of the grid samples");

  int wn = 2;
  int wm = 1;
  int degree = -1;
  std::string summation = "fejer";
  auto* wit = app.add_subcommand("witness", "non-factorable witness and its trigonometric approximant");
  add_io(wit, false);
  wit->add_option("--n", wn, "matrix size (>= 2)");
  wit->add_option("--m", wm, "degree");
  wit->add_option("--grid", opt.grid, "grid size per axis (default 32)");
  wit->add_option("--degree", degree, "approximant degree (default grid / 4)");
  wit->add_option("--summation", summation, "fejer or dirichlet")->check(CLI::IsMember({"fejer", "dirichlet"}));
  wit->add_option("--out", opt.out, "coefficient document of the approximant");
  wit->add_option("--dump-samples", opt.dump, "binary dump of the exact witness samples");

  int sections = 0;
  auto* oracle = app.add_subcommand("oracle-indices", "partial indices from finite Toeplitz sections");
  add_io(oracle, true);
  oracle->add_option("--sections", sections, "block size N of the first section (default automatic)");

  double eps = 1e-2;
  auto* reg = app.add_subcommand("regularize", "perturb a matrix polynomial to be invertible on the circle");
  add_io(reg, true);
  reg->add_option("--eps", eps, "perturbation budget");
  reg->add_option("--margin", opt.margin, "required root margin");
  reg->add_option("--out", opt.out, "coefficient document of the output");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());

  auto fail = [&](ErrorKind kind, const std::string& message) {
    Json rec;
    rec["error"]["kind"] = std::string(to_string(kind));
    rec["error"]["message"] = message;
    rec["error"]["exit_code"] = exit_code(kind);
    err << rec.dump() << "\n";
    return exit_code(kind);
  };

  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(ErrorKind::Usage, e.what());
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    std::string input_bytes;
    if (!opt.input.empty()) input_bytes = read_text(opt.input);
    std::string canonical;
    for (int i = 1; i < argc; ++i) canonical += std::string(argv[i]) + '\x1f';

    CLI::App* sub = app.get_subcommands().front();
    Json report;
    report["operation"] = sub->get_name();
    report["inputs_digest"] = digest(input_bytes + '\0' + canonical);
    Json outputs = Json::object();
    Json margins = Json::object();
    Json grids = Json::object();
    Json tolerances = Json::object();
    std::optional<int> code;

    if (sub == factor) {
      const MatrixSeries a = parse_document(input_bytes);
      const int grid = opt.grid > 0 ? opt.grid : 256;
      CircleFactorOptions fo;
      fo.root_margin = root_margin;
      const FactorizationResult f = wh_factorize(a, grid, opt.tol, fo);
      outputs["kappa"] = kappa_json(f.kappa);
      outputs["index_sum"] = f.index_sum();
      outputs["mean_motion"] = mean_motion(a, grid, opt.margin);
      if (with_oracle) {
        const OracleReport o = toeplitz_oracle(a);
        outputs["oracle_kappa"] = kappa_json(o.kappa);
        outputs["oracle_agrees"] = o.kappa == f.kappa;
        margins["oracle_kernel_level"] = o.kernel_level;
        margins["oracle_bulk_level"] = o.bulk_level;
        grids["oracle_sections"] = o.sections;
      }
      outputs["a_minus"] = document_json(f.a_minus);
      outputs["a_plus"] = document_json(f.a_plus);
      margins["residual"] = f.residual;
      margins["root_margin"] = f.root_margin;
      margins["min_abs_det_minus"] = f.min_abs_det_minus;
      margins["min_abs_det_plus"] = f.min_abs_det_plus;
      grids["verification"] = grid;
      tolerances["reconstruction"] = opt.tol;
      tolerances["root_margin"] = root_margin;
      tolerances["invertibility_margin"] = opt.margin;
    } else if (sub == fscalar) {
      const MatrixSeries a = parse_document(input_bytes);
      if (a.rows() != 1) throw Error(ErrorKind::DimensionMismatch, "factor-scalar expects a 1 x 1 document");
      const GridShape grid = GridShape::cube(a.dim(), opt.grid > 0 ? opt.grid : 32);
      ScalarFactorOptions so;
      so.margin = opt.margin;
      const ScalarFactorization f = scalar_factorize(a(0, 0), grid, opt.tol, so);
      outputs["c"] = index_json(f.c);
      outputs["b_minus"] = document_json(MatrixSeries::from_scalar(f.b_minus));
      outputs["u_minus"] = document_json(MatrixSeries::from_scalar(f.u_minus));
      outputs["b_plus"] = document_json(MatrixSeries::from_scalar(f.b_plus));
      outputs["u_plus"] = document_json(MatrixSeries::from_scalar(f.u_plus));
      margins["residual"] = f.residual;
      grids["initial"] = grid.sizes();
      grids["verification"] = f.verification_grid.sizes();
      tolerances["reconstruction"] = opt.tol;
      tolerances["invertibility_margin"] = opt.margin;
    } else if (sub == inv || sub == cert) {
      const MatrixSeries a = parse_document(input_bytes);
      require_dim(a, 3, sub->get_name().c_str());
      const GridShape grid = invariant_grid(a, opt.grid);
      const SampledMap samples = evaluate(a, grid);
      if (!opt.dump.empty()) write_samples(opt.dump, samples);
      if (sub == inv) {
        outputs["descriptor"] = descriptor_json(component_descriptor(samples, opt.margin, opt.max_gap));
      } else {
        try {
          const Certificate c = obstruction_certificate(samples, opt.margin, opt.max_gap);
          outputs["verdict"] = c.verdict == Certificate::Verdict::Obstructed ? "Obstructed" : "InFactorSubgroup";
          if (c.verdict == Certificate::Verdict::Obstructed) {
            outputs["m"] = c.m;
          } else {
            outputs["j"] = index_json(c.j);
          }
          outputs["certificate"] = c.to_string();
          outputs["descriptor"] = descriptor_json(c.evidence);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Inconclusive) throw;
          outputs["verdict"] = "Inconclusive";
          outputs["reason"] = e.what();
          code = exit_code(ErrorKind::Inconclusive);
        }
      }
      grids["samples"] = grid.sizes();
      tolerances["invertibility_margin"] = opt.margin;
      tolerances["rounding_gap"] = opt.max_gap;
    } else if (sub == wit) {
      const int g = opt.grid > 0 ? opt.grid : 32;
      const int d = degree >= 0 ? degree : g / 4;
      const GridShape grid = GridShape::cube(3, g);
      const Summation s = summation == "dirichlet" ? Summation::Dirichlet : Summation::Fejer;
      const WitnessApproximation w = witness_series(wn, wm, d, grid, s);
      if (!opt.out.empty()) write_text(opt.out, serialize(w.series));
      if (!opt.dump.empty()) write_samples(opt.dump, build_witness(wn, wm, grid));
      outputs["n"] = wn;
      outputs["m"] = wm;
      outputs["degree"] = d;
      outputs["summation"] = summation;
      outputs["terms"] = w.series.term_count();
      outputs["approximant_digest"] = digest(serialize(w.series));
      margins["sup_error"] = w.sup_error;
      margins["min_singular_value"] = w.min_singular_value;
      grids["samples"] = grid.sizes();
    } else if (sub == oracle) {
      const MatrixSeries a = parse_document(input_bytes);
      const OracleReport o = toeplitz_oracle(a, sections);
      outputs["kappa"] = kappa_json(o.kappa);
      margins["kernel_level"] = o.kernel_level;
      margins["bulk_level"] = o.bulk_level;
      grids["sections"] = o.sections;
      grids["check_sections"] = 2 * o.sections;
    } else if (sub == reg) {
      const MatrixPolynomial p = polynomial_of(parse_document(input_bytes));
      const Regularization r = regularize(p, eps, opt.margin);
      if (!opt.out.empty()) write_text(opt.out, serialize(r.output.to_series()));
      outputs["changed"] = r.changed;
      outputs["shift"] = {r.shift.real(), r.shift.imag()};
      outputs["degree"] = r.degree;
      outputs["output"] = document_json(r.output.to_series());
      margins["perturbation"] = r.perturbation;
      margins["root_margin"] = r.root_margin;
      margins["min_abs_det"] = r.min_abs_det;
      grids["check"] = 1024;
      tolerances["eps"] = eps;
      tolerances["root_margin"] = opt.margin;
    }

    report["outputs"] = outputs;
    report["margins"] = margins;
    report["grids"] = grids;
    report["tolerances"] = tolerances;
    if (!opt.result.empty()) write_text(opt.result, report.dump(2) + "\n");

    print_value(out, "", report);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out << "wall_time_s: " << seconds << "\n";
    return code.value_or(0);
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    Json rec;
    rec["error"]["kind"] = "Internal";
    rec["error"]["message"] = e.what();
    rec["error"]["exit_code"] = kInternalError;
    err << rec.dump() << "\n";
    return kInternalError;
  }
}

}  // namespace torfact::cli
