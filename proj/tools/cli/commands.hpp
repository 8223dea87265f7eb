/** @file
 *  @brief Subcommands of the experiment driver. Each returns the process exit
 *         code: 0 success, 2 invalid parameters, 3 quadrature non-convergence,
 *         4 verification failure.
 */
#pragma once

#include "run_config.hpp"

#include <iosfwd>
#include <string>

namespace symcone::cli {

enum ExitCode : int { exit_ok = 0, exit_invalid = 2, exit_quadrature = 3, exit_verification = 4 };

int cmd_lattice(const ResolvedConfig& cfg);
int cmd_laplace(const ResolvedConfig& cfg);
int cmd_sampling(const ResolvedConfig& cfg);
int cmd_reconstruct(const ResolvedConfig& cfg);
int cmd_params(const ResolvedConfig& cfg);

/// Validates `cfg`, runs its command and maps library exceptions to exit
/// codes, writing diagnostics to `err`.
int run(const RunConfig& cfg, std::ostream& err);

/// Output path for one member of a δ-sweep: "{delta}" in `out` is replaced,
/// otherwise "_d<delta>" is inserted before the extension when sweeping.
std::string sweep_path(const std::string& out, double delta, bool sweeping);

}  // namespace symcone::cli
