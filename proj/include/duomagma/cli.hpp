#pragma once

#include <cstdint>
#include <string>

namespace duomagma {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInput = 2, kExitBudget = 3 };

/// Outcome of one subcommand: the document for standard output and the
/// diagnostics for standard error.
struct CommandResult {
  int exit_code = kExitPass;
  std::string out;
  std::string err;
};

CommandResult cmd_build(const std::string& spec_text);

/// Only the duo mode is supported; the descriptor must be a built semidirect
/// product (semidirect-z or semidirect-aut).
CommandResult cmd_witness(const std::string& descriptor_text, const std::string& element_text,
                          const std::string& neighborhood_text, const std::string& mode = "duo");

CommandResult cmd_verify(const std::string& certificate_text);

/// `strategy` is "enumeration" or "lll".
CommandResult cmd_shrink(const std::string& matrix_text, const std::string& eps_text,
                         const std::string& strategy = "lll");

CommandResult cmd_selftest(std::uint64_t seed, bool inject_fault = false);

int run_cli(int argc, char** argv);

}  // namespace duomagma
