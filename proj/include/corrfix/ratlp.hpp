#ifndef CORRFIX_RATLP_HPP
#define CORRFIX_RATLP_HPP

#include <boost/multiprecision/gmp.hpp>
#include <optional>
#include <string>
#include <vector>

#include "corrfix/common.hpp"

namespace corrfix::ratlp {

// Exact rational arithmetic over the GMP backend. Doubles convert exactly
// (every finite double is dyadic), so feasibility verdicts computed here are
// exact statements about the floating-point inputs.
using Rat = boost::multiprecision::mpq_rational;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

Rat rat_from_double(double x);
double rat_to_double(const Rat& r);
std::string rat_to_string(const Rat& r);

/// Outcome of an exact feasibility solve for {z >= 0 : A z = b}.
/// Exactly one of `point` / `farkas` is populated. The Farkas vector u
/// satisfies u^T A <= 0 componentwise and u^T b > 0, re-verified before
/// return, so it is a standalone infeasibility certificate.
struct Feasibility {
  bool feasible = false;
  RatVec point;
  RatVec farkas;
};

/// Phase-I simplex with Bland's rule (terminating, exact).
Feasibility feasibility(RatMat A, RatVec b);

/// All basic feasible points of {z >= 0 : A z = b}; empty when infeasible.
/// Combinatorial in the column count; callers keep instances desk-scale.
std::vector<RatVec> basic_feasible_points(const RatMat& A, const RatVec& b);

/// Convex-combination membership: y in conv(verts)?
Feasibility membership_program(const std::vector<Vec>& verts, const Vec& y);

/// Joint convex-combination program for conv(P) ∩ conv(Q).
Feasibility intersection_program(const std::vector<Vec>& P,
                                 const std::vector<Vec>& Q);

/// Vertices of conv(P) ∩ conv(Q), as images of the basic feasible points of
/// the joint program. The returned list spans the intersection exactly
/// (it may contain non-extreme points; callers canonicalize).
std::vector<Vec> intersection_vertices(const std::vector<Vec>& P,
                                       const std::vector<Vec>& Q);

/// Serialized Farkas certificate ("u1,u2,...") or the basic point for a
/// feasible program; embedded in reports as the emptiness proof token.
std::string token(const Feasibility& f);

} // namespace corrfix::ratlp

#endif
