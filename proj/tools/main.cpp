#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "psdrank/cube.hpp"
#include "psdrank/error.hpp"
#include "psdrank/etr.hpp"
#include "psdrank/extraction.hpp"
#include "psdrank/formula.hpp"
#include "psdrank/gadgets.hpp"
#include "psdrank/instance.hpp"
#include "psdrank/search.hpp"
#include "psdrank/witness.hpp"
#include "trace.hpp"

namespace {

using namespace psdrank;
using cli::Trace;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << bytes;
}

// Polynomial files hold one polynomial; '#' starts a comment line.
Polynomial read_polynomial(const std::string& text) {
  std::istringstream in(text);
  std::string line, body;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    body += line + ' ';
  }
  return parse_polynomial(body);
}

// "x1=1,x2=-1/2"
ExactPoint parse_root(const std::string& text) {
  ExactPoint point;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::parse, "root binding '" + item + "' lacks '='");
    point[parse_var(item.substr(0, eq))] = parse_rational(item.substr(eq + 1));
  }
  return point;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse:
    case ErrorCode::unknown_variable:
    case ErrorCode::io: return kUsage;
    default: return kFailed;
  }
}

struct Options {
  std::string input;
  std::string second;
  std::string output = "-";
  std::string prefix = "psdrank";
  std::string trace_path;
  std::string root;
  std::string mode = "full";
  unsigned m = 4;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  double tol = 0.0;
  std::size_t k = 2;
  std::size_t restarts = 32;
  bool square_zero_test = false;
};

int run_normalize(const Options& o, Trace& trace) {
  auto stage = trace.stage("normalize");
  const std::string text = read_file(o.input);
  NormalizedFormula nf = reduce_formula(parse_formula(text));
  for (const auto& line : nf.flat.trace) trace.note("normalize", line);
  const std::string out = nf.polynomial.to_string() + "\n";
  write_file(o.output, out);
  stage.input(text).output(out).param("equations", std::to_string(nf.flat.equations.size()));
  stage.param("length", std::to_string(nf.polynomial.length())).finish();
  return kOk;
}

int run_bound(const Options& o, Trace& trace) {
  auto stage = trace.stage("bound");
  const std::string text = read_file(o.input);
  BoundedInstance b = build_phi(read_polynomial(text), o.m);
  const std::string out = b.phi.to_string() + "\n";
  write_file(o.output, out);
  stage.input(text).output(out).param("m", std::to_string(o.m)).param("degree", std::to_string(b.degree));
  stage.param("length", std::to_string(b.phi.length())).finish();
  return kOk;
}

int run_sigma(const Options& o, Trace& trace) {
  auto stage = trace.stage("sigma");
  const std::string text = read_file(o.input);
  SigmaSet sigma = sigma_set(read_polynomial(text));
  std::string out;
  for (const auto& s : sigma.elements) out += s.compact_string() + "\n";
  write_file(o.output, out);
  stage.input(text).output(out).param("size", std::to_string(sigma.size()));
  stage.param("H", std::to_string(index_set_H(sigma).size())).finish();
  return kOk;
}

int run_matrices(const Options& o, Trace& trace) {
  auto stage = trace.stage("matrices");
  const std::string text = read_file(o.input);
  const Polynomial f = read_polynomial(text);
  BOptions bopt{o.square_zero_test};
  std::ostringstream a, b, c;
  write_symbolic_matrix(a, build_A(f));
  IncompleteMatrix B = build_B(f, bopt);
  write_matrix(b, B);
  write_matrix(c, build_C(B));
  write_file(o.prefix + ".A.txt", a.str());
  write_file(o.prefix + ".B.mtx", b.str());
  write_file(o.prefix + ".C.mtx", c.str());
  stage.input(text).output(a.str() + b.str() + c.str()).param("H", std::to_string(B.rows()));
  stage.param("unknown", std::to_string(B.count(EntryKind::unknown)));
  stage.param("square_zero_test", o.square_zero_test ? "true" : "false").finish();
  return kOk;
}

int run_reduce(const Options& o, Trace& trace) {
  auto stage = trace.stage("reduce");
  const std::string text = read_file(o.input);
  ReductionOutput r = reduce(read_polynomial(text), BOptions{o.square_zero_test});
  for (const auto& line : r.trace) trace.note("reduce", line);
  std::ostringstream out;
  write_matrix(out, r.M, r.r);
  write_file(o.output, out.str());
  stage.input(text).output(out.str()).param("k", std::to_string(r.k)).param("r", std::to_string(r.r));
  stage.param("K", r.K.get_str()).finish();
  return kOk;
}

int run_witness(const Options& o, Trace& trace) {
  auto stage = trace.stage("witness");
  const std::string text = read_file(o.input);
  const Polynomial f = read_polynomial(text);
  const ExactPoint xi = parse_root(o.root);
  const BOptions bopt{o.square_zero_test};
  const Completion<Rational> completion = completion_from_root(f, xi);
  const IncompleteMatrix B = build_B(f, bopt);
  const ExactFactorization F = assemble_instance_witness(B, completion, Rational(compute_K(f)));
  std::ostringstream fac, comp, comp_matrix;
  write_factorization(fac, F);
  write_factorization(comp, completion.factorization);
  write_matrix(comp_matrix, to_instance(completion));
  write_file(o.prefix + ".M.fac", fac.str());
  write_file(o.prefix + ".completion.fac", comp.str());
  write_file(o.prefix + ".completion.mtx", comp_matrix.str());
  stage.input(text + "\n" + o.root).output(fac.str()).param("root", o.root).param("size", std::to_string(F.k));
  stage.param("completion.max_entry", to_string(completion.max_entry)).finish();
  return kOk;
}

int run_verify(const Options& o, Trace& trace) {
  auto stage = trace.stage("verify");
  const std::string mtx = read_file(o.input);
  const std::string fac = read_file(o.second);
  std::istringstream ms(mtx), fs(fac);
  const InstanceMatrix A = read_instance_matrix(ms);
  const AnyFactorization F = read_factorization(fs);
  VerifyOptions vo;
  vo.mode = o.mode == "sampled" ? VerifyMode::sampled : VerifyMode::full;
  vo.seed = o.seed;
  vo.samples = o.samples;
  vo.tol = o.tol;
  const VerificationReport rep = verify_factorization(A, F, vo);
  std::ostringstream out;
  out << "mode=" << o.mode << " checked=" << rep.checked;
  if (vo.mode == VerifyMode::sampled) out << " seed=" << rep.seed << " samples=" << rep.samples;
  out << " max_residual=" << (rep.exact ? to_string(rep.max_residual_exact) : format_double(rep.max_residual));
  out << " worst_row=" << A.row_labels().at(rep.worst_row) << " worst_col=" << A.col_labels().at(rep.worst_col);
  out << " tol=" << format_double(o.tol) << " pass=" << (rep.pass ? "true" : "false") << '\n';
  write_file(o.output, out.str());
  stage.input(mtx + fac).output(out.str()).param("mode", o.mode).param("seed", std::to_string(o.seed)).finish();
  return rep.pass ? kOk : kFailed;
}

int run_extract(const Options& o, Trace& trace) {
  auto stage = trace.stage("extract-root");
  const std::string text = read_file(o.input);
  const std::string fac = read_file(o.second);
  std::istringstream fs(fac);
  const ExtractionResult res = extract_root(read_polynomial(text), read_factorization(fs));
  for (const auto& line : res.trace) trace.note("extract-root", line);
  std::string out;
  for (const auto& [v, x] : res.root) out += v.name() + "=" + format_double(x) + "\n";
  write_file(o.output, out);
  stage.input(text + fac).output(out).param("residual", format_double(res.residual)).finish();
  return kOk;
}

int run_search(const Options& o, Trace& trace) {
  auto stage = trace.stage("search");
  const std::string mtx = read_file(o.input);
  std::istringstream ms(mtx);
  const InstanceMatrix A = read_instance_matrix(ms);
  SearchConfig cfg;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  const SearchReport rep = psd_rank_search(A, o.k, cfg);
  std::ostringstream out;
  out << "verdict=" << (rep.found ? "witness-found" : "failed") << " k=" << rep.k
      << " best_residual=" << format_double(rep.best_residual) << " best_restart=" << rep.best_restart
      << " iterations=" << rep.iterations << " seed=" << rep.seed << " method=" << rep.method << '\n';
  if (!rep.found) out << "note=no witness found; this is not a proof that the PSD rank exceeds k\n";
  write_file(o.output, out.str());
  if (!o.second.empty() && rep.witness) {
    std::ostringstream w;
    write_factorization(w, rep.witness->to_factorization(A.row_labels(), A.col_labels()));
    write_file(o.second, w.str());
  }
  stage.input(mtx).output(out.str()).param("k", std::to_string(o.k)).param("restarts", std::to_string(o.restarts));
  stage.param("seed", std::to_string(o.seed)).finish();
  return rep.found ? kOk : kFailed;
}

int run_sqrt_check(const Options& o, Trace& trace) {
  auto stage = trace.stage("sqrt-check");
  const std::string mtx = read_file(o.input);
  std::istringstream ms(mtx);
  const IncompleteMatrix S = read_incomplete_matrix(ms);
  const SqrtCheckResult res = sqrt_condition_check(S);
  std::ostringstream out;
  out << "holds=" << (res.holds ? "true" : "false") << '\n';
  if (res.holds) {
    for (const auto& p : res.witness->columns) {
      out << "column " << S.col_labels()[p.column] << " rows=" << S.row_labels()[p.i1] << ',' << S.row_labels()[p.i2]
          << " cols=" << S.col_labels()[p.j1] << ',' << S.col_labels()[p.j2] << '\n';
    }
    for (const auto& p : res.witness->transposed) {
      out << "row " << S.row_labels()[p.column] << " cols=" << S.col_labels()[p.i1] << ',' << S.col_labels()[p.i2]
          << " rows=" << S.row_labels()[p.j1] << ',' << S.row_labels()[p.j2] << '\n';
    }
  } else {
    const auto& labels = res.failed_on_transpose ? S.row_labels() : S.col_labels();
    out << "failed_" << (res.failed_on_transpose ? "row" : "column") << '=' << labels.at(res.failed_column) << '\n';
  }
  write_file(o.output, out.str());
  stage.input(mtx).output(out.str()).finish();
  return res.holds ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psdrank: reductions to PSD rank and their certificates"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--trace", o.trace_path, "Write key=value trace records here (default: stderr)");

  auto* normalize = app.add_subcommand("normalize", "Formula file -> single polynomial in standard form");
  normalize->add_option("formula", o.input)->required();
  normalize->add_option("-o,--output", o.output);

  auto* bound = app.add_subcommand("bound", "Polynomial f -> phi with all real zeros in the unit cube");
  bound->add_option("polynomial", o.input)->required();
  bound->add_option("--m", o.m, "Height of the y-tower")->check(CLI::Range(1u, 20u))->capture_default_str();
  bound->add_option("-o,--output", o.output);

  auto* sigma = app.add_subcommand("sigma", "List the sigma set of f");
  sigma->add_option("polynomial", o.input)->required();
  sigma->add_option("-o,--output", o.output);

  auto* matrices = app.add_subcommand("matrices", "Write A, B and C for f");
  matrices->add_option("polynomial", o.input)->required();
  matrices->add_option("--prefix", o.prefix, "Output path prefix")->capture_default_str();
  matrices->add_flag("--square-zero-test", o.square_zero_test, "Zero entries where f divides (u.v)^2");

  auto* reduce_cmd = app.add_subcommand("reduce", "Polynomial f -> instance matrix M with target r");
  reduce_cmd->add_option("polynomial", o.input)->required();
  reduce_cmd->add_option("-o,--output", o.output);
  reduce_cmd->add_flag("--square-zero-test", o.square_zero_test);

  auto* witness = app.add_subcommand("witness", "Factorizations of M and of the completion from a root of f");
  witness->add_option("polynomial", o.input)->required();
  witness->add_option("--root", o.root, "Root as x1=1,x2=-1/2")->required();
  witness->add_option("--prefix", o.prefix, "Output path prefix")->capture_default_str();
  witness->add_flag("--square-zero-test", o.square_zero_test);

  auto* verify = app.add_subcommand("verify", "Check a factorization against a matrix");
  verify->add_option("matrix", o.input)->required();
  verify->add_option("factorization", o.second)->required();
  verify->add_option("--mode", o.mode)->check(CLI::IsMember({"full", "sampled"}))->capture_default_str();
  verify->add_option("--seed", o.seed)->capture_default_str();
  verify->add_option("--samples", o.samples)->capture_default_str();
  verify->add_option("--tol", o.tol)->capture_default_str();
  verify->add_option("-o,--output", o.output);

  auto* extract = app.add_subcommand("extract-root", "Read a root of f off a size-3 completion factorization");
  extract->add_option("polynomial", o.input)->required();
  extract->add_option("factorization", o.second)->required();
  extract->add_option("-o,--output", o.output);

  auto* search = app.add_subcommand("search", "Seeded numerical search for a size-k PSD factorization");
  search->add_option("matrix", o.input)->required();
  search->add_option("--k", o.k)->check(CLI::PositiveNumber)->capture_default_str();
  search->add_option("--restarts", o.restarts)->capture_default_str();
  search->add_option("--seed", o.seed)->capture_default_str();
  search->add_option("--witness", o.second, "Write the best factors found here");
  search->add_option("-o,--output", o.output);

  auto* sqrt_check = app.add_subcommand("sqrt-check", "Test the sqrt condition on an incomplete matrix");
  sqrt_check->add_option("matrix", o.input)->required();
  sqrt_check->add_option("-o,--output", o.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::ofstream trace_file;
  if (!o.trace_path.empty()) trace_file.open(o.trace_path);
  Trace trace(o.trace_path.empty() ? std::cerr : trace_file);

  try {
    if (*normalize) return run_normalize(o, trace);
    if (*bound) return run_bound(o, trace);
    if (*sigma) return run_sigma(o, trace);
    if (*matrices) return run_matrices(o, trace);
    if (*reduce_cmd) return run_reduce(o, trace);
    if (*witness) return run_witness(o, trace);
    if (*verify) return run_verify(o, trace);
    if (*extract) return run_extract(o, trace);
    if (*search) return run_search(o, trace);
    if (*sqrt_check) return run_sqrt_check(o, trace);
  } catch (const Error& e) {
    std::cerr << "error code=" << code_name(e.code()) << " message=" << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error code=E_INTERNAL message=" << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
