#include "duomagma/cli.hpp"

#include "duomagma/error.hpp"
#include "duomagma/json_io.hpp"
#include "duomagma/sweep.hpp"
#include "duomagma/unimodular.hpp"
#include "duomagma/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace duomagma {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BudgetExhausted: return kExitBudget;
    case ErrorCode::AbsorptionFailed: return kExitFail;
    default: return kExitInput;
  }
}

/// Runs `body`, mapping exceptions onto exit codes.
CommandResult guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {exit_code_for(e.code()), "", std::string(e.what()) + "\n"};
  } catch (const Json::exception& e) {
    return {kExitInput, "", std::string("SchemaError: ") + e.what() + "\n"};
  } catch (const std::logic_error& e) {
    return {kExitFail, "", std::string("internal check failed: ") + e.what() + "\n"};
  }
}

std::string line(const Json& j) { return canonical_dump(j) + "\n"; }

}  // namespace

CommandResult cmd_build(const std::string& spec_text) {
  return guarded([&] {
    MagmaPtr m = build_from_spec(parse_json_text(spec_text));
    return CommandResult{kExitPass, line(descriptor_document(*m)), ""};
  });
}

CommandResult cmd_witness(const std::string& descriptor_text, const std::string& element_text,
                          const std::string& neighborhood_text, const std::string& mode) {
  return guarded([&] {
    if (mode != "duo") throw Error(ErrorCode::SchemaError, "witness construction supports only --mode duo");
    MagmaPtr m = descriptor_from_document(parse_json_text(descriptor_text));
    Element x = element_from_json(parse_json_text(element_text));
    Neighborhood u = neighborhood_from_json(parse_json_text(neighborhood_text));
    require_member(*m, x);
    if (!nbhd_member(*m, u, unit_of(*m))) {
      throw Error(ErrorCode::NotUnitNeighborhood, "the neighbourhood does not contain the unit");
    }
    DuoWitness w = [&] {
      if (m->kind() == Magma::Kind::SemidirectZ) return duo_witness_z(*m, x, u);
      if (m->kind() == Magma::Kind::SemidirectAut) return duo_witness_group(*m, x, u);
      throw Error(ErrorCode::ShapeMismatch, "witnesses need a semidirect-z or semidirect-aut descriptor");
    }();
    WitnessCertificate c = certificate_from_witness(m, x, u, w);
    if (!check_certificate(c).pass) throw std::logic_error("fresh certificate does not verify");
    return CommandResult{kExitPass, line(certificate_to_json(c)), ""};
  });
}

CommandResult cmd_verify(const std::string& certificate_text) {
  return guarded([&] {
    WitnessCertificate c = certificate_from_json(parse_json_text(certificate_text));
    Verdict v = check_certificate(c);
    if (v.pass) return CommandResult{kExitPass, line({{"verdict", "pass"}}), ""};
    Json report = {{"verdict", "fail"}, {"clause", v.clause}, {"detail", v.detail}};
    return CommandResult{kExitFail, line(report), ""};
  });
}

CommandResult cmd_shrink(const std::string& matrix_text, const std::string& eps_text, const std::string& strategy) {
  return guarded([&] {
    Json doc = parse_json_text(matrix_text);
    if (doc.is_object()) {
      if (!doc.contains("matrix")) throw Error(ErrorCode::SchemaError, "matrix file needs a 'matrix' field");
      for (const auto& [k, v] : doc.items())
        if (k != "matrix" && k != "version") throw Error(ErrorCode::SchemaError, "unknown field '" + k + "'");
      doc = doc["matrix"];
    }
    RationalMatrix x = rational_matrix_from_json(doc);
    if (x.cols() != 2 * x.rows()) throw Error(ErrorCode::ShapeMismatch, "matrix must have shape n x 2n");
    Rational eps = parse_rational(eps_text);
    SearchBudget budget;
    if (strategy == "enumeration") {
      budget.strategy = SearchStrategy::Enumeration;
    } else if (strategy != "lll") {
      throw Error(ErrorCode::SchemaError, "strategy is 'enumeration' or 'lll'");
    }
    UnimodularMatrix a = shrink_columns(x, eps, budget);
    Json out = {{"version", kSchemaVersion},
                {"A", int_matrix_to_json(a.matrix())},
                {"XA", rational_matrix_to_json(multiply(x, a.matrix()))},
                {"det", determinant(a.matrix()).get_str()}};
    return CommandResult{kExitPass, line(out), "det A = " + determinant(a.matrix()).get_str() + "\n"};
  });
}

CommandResult cmd_selftest(std::uint64_t seed, bool inject_fault) {
  struct Row {
    const char* name;
    SuiteResult result;
  };
  std::vector<Row> rows = {
      {"membership", membership_crosscheck(seed, 500, true, inject_fault)},
      {"small-combination", small_combination_crosscheck(seed, 60, true)},
      {"certificate-tamper", tamper_sweep(seed, 50, true)},
  };
  std::ostringstream os;
  os << "duomagma selftest seed=" << seed << "\n";
  os << std::left << std::setw(20) << "suite" << std::right << std::setw(7) << "cases" << std::setw(10)
     << "failures" << "  status\n";
  bool all = true;
  for (const auto& r : rows) {
    const bool ok = r.result.failures == 0;
    all = all && ok;
    os << std::left << std::setw(20) << r.name << std::right << std::setw(7) << r.result.cases << std::setw(10)
       << r.result.failures << "  " << (ok ? "pass" : "FAIL") << "\n";
  }
  os << "overall: " << (all ? "pass" : "FAIL") << "\n";
  return {all ? kExitPass : kExitFail, os.str(), ""};
}

// --- process entry ----------------------------------------------------------------------

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Inline JSON when the argument starts with '{', a file path otherwise.
std::string inline_or_file(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return arg;
  return read_file(arg);
}

int emit(const CommandResult& r, const std::string& out_path) {
  if (!r.err.empty()) std::cerr << r.err;
  if (r.out.empty()) return r.exit_code;
  if (out_path.empty() || r.exit_code != kExitPass) {
    std::cout << r.out;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return kExitInput;
    }
    f << r.out;
  }
  return r.exit_code;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Exact constructions and witness certificates for duoseparable magmas", "duomagma"};
  app.require_subcommand(1);

  std::string spec_path, descriptor_path, element_arg, nbhd_arg, mode = "duo", certificate_path, matrix_path,
                                                                   eps_text, strategy = "lll", out_path;
  std::uint64_t seed = 1;
  bool inject_fault = false;

  auto* build = app.add_subcommand("build", "Build a descriptor from a construction spec");
  build->add_option("--spec", spec_path, "Construction spec (JSON file)")->required();
  build->add_option("--out", out_path, "Output file (default: standard output)");

  auto* witness = app.add_subcommand("witness", "Compute a witness certificate");
  witness->add_option("--descriptor", descriptor_path, "Descriptor file")->required();
  witness->add_option("--element", element_arg, "Element (inline JSON or file)")->required();
  witness->add_option("--neighborhood", nbhd_arg, "Unit neighbourhood (inline JSON or file)")->required();
  witness->add_option("--mode", mode, "Coverage mode")->default_val("duo");
  witness->add_option("--out", out_path, "Output file (default: standard output)");

  auto* verify = app.add_subcommand("verify", "Check a certificate");
  verify->add_option("--certificate", certificate_path, "Certificate file")->required();

  auto* shrink = app.add_subcommand("shrink", "Shrink the columns of an n x 2n rational matrix");
  shrink->add_option("--matrix", matrix_path, "Matrix file")->required();
  shrink->add_option("--eps", eps_text, "Tolerance p/q")->required();
  shrink->add_option("--strategy", strategy, "enumeration or lll")->check(CLI::IsMember({"enumeration", "lll"}));
  shrink->add_option("--out", out_path, "Output file (default: standard output)");

  auto* selftest = app.add_subcommand("selftest", "Run the seeded oracle cross-checks");
  selftest->add_option("--seed", seed, "Suite seed");
  selftest->add_flag("--inject-fault", inject_fault, "Corrupt one oracle answer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*build) return emit(cmd_build(read_file(spec_path)), out_path);
    if (*witness) {
      return emit(cmd_witness(read_file(descriptor_path), inline_or_file(element_arg), inline_or_file(nbhd_arg), mode),
                  out_path);
    }
    if (*verify) return emit(cmd_verify(read_file(certificate_path)), "");
    if (*shrink) return emit(cmd_shrink(read_file(matrix_path), eps_text, strategy), out_path);
    if (*selftest) return emit(cmd_selftest(seed, inject_fault), "");
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace duomagma
