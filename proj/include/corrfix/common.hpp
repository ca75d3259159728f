#ifndef CORRFIX_COMMON_HPP
#define CORRFIX_COMMON_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace corrfix {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  invalid_dimension,
  dimension_mismatch,
  outside_domain,
  invalid_argument,
  witness_invalid,
  witness_normalization,
  witness_misaligned,
  affinely_dependent,
  invalid_scenario,
  iteration_cap,
  missing_witness,
};

/// Library-wide exception. `code()` distinguishes the failure classes the
/// callers branch on (CLI exit statuses, witness rejection vs. normalization
/// inconsistency, ...).
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

/// Outside-domain rejection carrying the distance to the domain's hull.
class OutsideDomainError : public Error {
public:
  OutsideDomainError(const std::string& msg, double hull_distance)
      : Error(ErrorCode::outside_domain, msg), hull_distance_(hull_distance) {}
  double hull_distance() const { return hull_distance_; }

private:
  double hull_distance_ = 0.0;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

/// Deterministic float formatting used by every report writer.
std::string fmt_double(double x);

std::string fmt_vec(const Vec& v);

/// Chunked parallel loop over [0, n). Results must be written by index into
/// pre-sized storage so the output is independent of the thread count.
/// Thread count is capped by the CORRFIX_THREADS environment variable.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

std::size_t thread_cap();

/// FNV-1a 64-bit digest, used to fingerprint scenario files in reports.
std::uint64_t fnv1a64(const std::string& bytes);

inline bool approx_eq(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

inline bool vec_approx_eq(const Vec& a, const Vec& b, double tol = 1e-12) {
  if (a.size() != b.size()) return false;
  return (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

/// Lexicographic comparison of coordinate vectors; total order used for
/// deterministic tie-breaking and report sorting.
bool lex_less(const Vec& a, const Vec& b);

} // namespace corrfix

#endif
