#ifndef CORRFIX_SCENARIO_HPP
#define CORRFIX_SCENARIO_HPP

#include <json.hpp>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "corrfix/correspondence.hpp"
#include "corrfix/quasi_game.hpp"
#include "corrfix/witness.hpp"

namespace corrfix {

/// Effective numeric defaults for a run; scenario config overridden by CLI.
struct RunConfig {
  int mesh = 32;
  double tol = 1e-9;
  double eps = 1e-6;
  double eta = 0.05;
  std::uint64_t seed = 1;
};

/// A parsed scenario file: named domains, correspondences and witnesses,
/// plus the raw operation blocks each command dispatches on.
///
/// Correspondence kinds: `constant`, `affine_vertices`, `piecewise_region`,
/// `empty_outside_region` (see README for the schema).
struct Scenario {
  std::string path;
  std::string version;
  std::uint64_t digest = 0;
  RunConfig config;

  std::map<std::string, SimplexDomain> simplices;
  std::map<std::string, ProductDomain> products;
  std::map<std::string, PolytopeSet> polytopes;
  std::map<std::string, Correspondence> correspondences;
  std::map<std::string, WnqWitness> wnq_witnesses;
  std::map<std::string, BiconvexWitness> biconvex_witnesses;

  nlohmann::json raw;

  const SimplexDomain& simplex(const std::string& name) const;
  const ProductDomain& domain(const std::string& name) const; // simplex or product
  const Correspondence& correspondence(const std::string& name) const;
  const WnqWitness& wnq_witness(const std::string& name) const;
  const BiconvexWitness& biconvex_witness(const std::string& name) const;
};

Scenario load_scenario(const std::string& path);

/// Builds the QuasiGame declared by the scenario's `equilibrium` block.
QuasiGame build_game(const Scenario& sc);
GameVariant game_variant(const Scenario& sc);

/// Fully specified uniform in [0,1) from the engine's raw bits (the
/// distribution adapters are implementation-defined; reports must not be).
double rng_uniform(std::mt19937_64& gen);

} // namespace corrfix

#endif
