#include "run_config.hpp"

#include <symcone/errors.hpp>

#include <charconv>
#include <cstdio>

namespace symcone::cli {

namespace {

RationalParam parse_param(const AlgebraKind& kind, const std::string& text, const char* what) {
  std::vector<Rational> v;
  for (const std::string& item : split_list(text)) v.push_back(parse_rational(item));
  if (v.size() == 1 && kind.rank() > 1) v.assign(static_cast<std::size_t>(kind.rank()), v.front());
  if (static_cast<int>(v.size()) != kind.rank())
    throw ConfigError(std::string(what) + " needs 1 or " + std::to_string(kind.rank()) + " entries for " + kind.name());
  return {kind, std::move(v)};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::vector<std::pair<std::string, std::string>> canonical_entries(const RunConfig& c) {
  return {{"command", c.command},
          {"cone", c.cone},
          {"delta", format_double(c.delta)},
          {"deltas", c.deltas},
          {"radius", format_double(c.radius)},
          {"xbox", format_double(c.xbox)},
          {"r-policy", c.r_policy},
          {"R", format_double(c.R)},
          {"r-samples", std::to_string(c.r_samples)},
          {"seed", std::to_string(c.seed)},
          {"samples", std::to_string(c.samples)},
          {"omega-radius", format_double(c.omega_radius)},
          {"x-half-width", format_double(c.x_half_width)},
          {"resolution", std::to_string(c.resolution)},
          {"order", std::to_string(c.order)},
          {"refine-depth", std::to_string(c.refine_depth)},
          {"tolerance", format_double(c.tolerance)},
          {"domain", c.domain},
          {"p", c.p},
          {"q", c.q},
          {"s", c.s},
          {"t", c.t},
          {"y", c.y},
          {"family", std::to_string(c.family)},
          {"spread", format_double(c.spread)},
          {"mode", c.mode},
          {"target", c.target},
          {"weight", c.weight},
          {"iters", std::to_string(c.iters)},
          {"validation", std::to_string(c.validation)},
          {"interior", format_double(c.interior)},
          {"theta", c.theta},
          {"phi", c.phi},
          {"p0", c.p0},
          {"q0", c.q0},
          {"p1", c.p1},
          {"q1", c.q1},
          {"verify", c.verify}};
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& [k, v] : canonical_entries(cfg)) {
    for (unsigned char ch : k + "=" + v + "\n") {
      h ^= ch;
      h *= 1099511628211ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ResolvedConfig::ResolvedConfig(const RunConfig& cfg) : raw(cfg) {
  try {
    kind = AlgebraKind::parse(cfg.cone);
  } catch (const std::exception&) {
    throw ConfigError("unknown cone '" + cfg.cone + "' (rank1, lorentzN, symM)");
  }
  try {
    if (cfg.deltas.empty()) {
      deltas = {cfg.delta};
    } else {
      for (const std::string& d : split_list(cfg.deltas)) deltas.push_back(static_cast<double>(parse_rational(d)));
    }
    s = cfg.s.empty() ? RationalParam(kind, std::vector<Rational>(static_cast<std::size_t>(kind.rank()),
                                                                  Rational(kind.dim(), kind.rank()) + 1))
                      : parse_param(kind, cfg.s, "s");
    p = ExtReal::parse(cfg.p);
    q = parse_rational(cfg.q);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  for (double d : deltas) require(d > 0.0 && d < cfg.radius, "delta must lie in (0, radius)");
  require(cfg.radius > 0.0, "radius must be positive");
  require(cfg.xbox > 0.0, "xbox must be positive");
  require(cfg.r_policy == "fixed" || cfg.r_policy == "estimate", "r-policy must be fixed or estimate");
  require(cfg.R > 1.0, "R must exceed 1");
  require(cfg.r_samples >= 16, "r-samples must be at least 16");
  require(cfg.samples >= 1, "samples must be positive");
  require(p >= ExtReal(1), "p must be >= 1");
  require(q >= 1, "q must be a finite value >= 1");
  require(cfg.domain == "full" || cfg.domain == "region", "domain must be full or region");
  require(cfg.mode == "neumann" || cfg.mode == "lsq", "mode must be neumann or lsq");
  require(cfg.target == "manufactured" || cfg.target == "offlattice" || cfg.target == "zero",
          "target must be manufactured, offlattice or zero");
  require(cfg.weight == "statement" || cfg.weight == "pairing", "weight must be statement or pairing");
  require(cfg.iters >= 1, "iters must be >= 1");
  require(cfg.validation >= 1, "validation must be >= 1");
  require(cfg.interior > 0.0 && cfg.interior <= 1.0, "interior must lie in (0, 1]");
  require(cfg.spread > 0.0, "spread must be positive");

  quad.omega_radius = cfg.omega_radius;
  quad.x_half_width = cfg.x_half_width;
  quad.resolution = cfg.resolution;
  quad.order = cfg.order;
  quad.refine_depth = cfg.refine_depth;
  quad.tolerance = cfg.tolerance;
  quad.seed = cfg.seed;
  quad.domain = cfg.domain == "full" ? Domain::full : Domain::region;
  try {
    quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  hash = config_hash(cfg);
}

}  // namespace symcone::cli
