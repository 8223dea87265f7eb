/** @file
 *  @brief Validated run configuration for the experiment driver, its
 *         canonical echo and the config hash embedded in every output.
 */
#pragma once

#include <symcone/interp.hpp>
#include <symcone/quadrature.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symcone::cli {

/// Raw values as given on the command line or in the config file.
struct RunConfig {
  std::string command;
  std::string cone = "rank1";
  double delta = 0.4;
  std::string deltas;  ///< comma list; empty means {delta}
  double radius = 1.5;
  double xbox = 3.0;
  std::string r_policy = "fixed";
  double R = 2.0;
  int r_samples = 2000;
  std::uint64_t seed = 1;
  int samples = 10000;

  double omega_radius = 6.0;
  double x_half_width = 4.0;
  int resolution = 4;
  int order = 8;
  int refine_depth = 1;
  double tolerance = 1e-6;
  std::string domain = "full";

  std::string p = "2";
  std::string q = "2";
  std::string s;  ///< comma list; empty means the constant n/r + 1
  std::string t;
  std::string y;
  int family = 10;
  double spread = 0.5;

  std::string mode = "neumann";
  std::string target = "manufactured";
  std::string weight = "statement";
  int iters = 20;
  int validation = 300;
  double interior = 1.0 / 3.0;

  std::string theta;
  std::string phi;
  std::string p0;
  std::string q0;
  std::string p1;
  std::string q1;

  std::string verify;
  std::string out;
};

/// Thrown for any invalid setting; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Every setting except the output and config paths, in a fixed order.
std::vector<std::pair<std::string, std::string>> canonical_entries(const RunConfig& cfg);
/// FNV-1a 64 over "key=value\n" lines of canonical_entries, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Typed view of a RunConfig; construction validates everything up front.
struct ResolvedConfig {
  RunConfig raw;
  AlgebraKind kind = AlgebraKind::rank1();
  std::vector<double> deltas;
  QuadratureConfig quad;
  RationalParam s;
  ExtReal p = 2;
  Rational q = 2;
  std::string hash;

  explicit ResolvedConfig(const RunConfig& cfg);
  double p_double() const { return p.to_double(); }
  double q_double() const { return static_cast<double>(q); }
  SpectralParam s_double() const { return s.to_spectral(); }
};

}  // namespace symcone::cli
