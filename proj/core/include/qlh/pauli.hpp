#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qlh {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix4d = Eigen::Matrix4d;
using Matrix3d = Eigen::Matrix3d;
using Vector3d = Eigen::Vector3d;

/// A 4x4 Hermitian operator on a qubit pair. The first tensor factor acts on
/// the term's qubit `i`; basis index = 2*b_i + b_j.
class Hermitian4 {
 public:
  static constexpr double kTolerance = 1e-12;

  Hermitian4() : m_(Matrix4c::Zero()) {}
  /// Throws ValidationError when m differs from its adjoint by more than
  /// kTolerance in any entry. The stored matrix is the Hermitian part.
  explicit Hermitian4(const Matrix4c& m);

  const Matrix4c& matrix() const noexcept { return m_; }
  Complex operator()(int a, int b) const { return m_(a, b); }

 private:
  Matrix4c m_;
};

/// alpha(k, l) multiplies sigma^k (x) sigma^l, index 0 is the identity.
struct PauliCoeffs {
  Matrix4d alpha = Matrix4d::Zero();

  double operator()(int k, int l) const { return alpha(k, l); }
  double& operator()(int k, int l) { return alpha(k, l); }
};

/// Gamma(l, m) = Tr[sigma^l (x) sigma^m H] split into its blocks.
struct TwoMoment {
  double scalar_one = 0.0;
  Vector3d u = Vector3d::Zero();  ///< Gamma(k, 0), first-qubit 1-local part
  Vector3d v = Vector3d::Zero();  ///< Gamma(0, l), second-qubit 1-local part
  Matrix3d R = Matrix3d::Zero();  ///< Gamma(k, l) for k, l >= 1
};

enum class InstanceKind { projector, strictly_quadratic_projector, traceless, generic };

struct InstanceType {
  InstanceKind kind = InstanceKind::generic;
  int rank = 0;  ///< only meaningful for the two projector kinds

  friend bool operator==(const InstanceType&, const InstanceType&) = default;
};

std::string to_string(const InstanceType& t);
/// Parses "projector(2)", "strictly_quadratic_projector(1)", "traceless",
/// "generic". Throws ValidationError otherwise.
InstanceType parse_instance_type(const std::string& s);

struct TwoLocalTerm {
  int i = 0;
  int j = 1;
  double weight = 1.0;
  PauliCoeffs coeffs;
};

struct Instance {
  int n = 0;
  InstanceType kind;
  std::vector<TwoLocalTerm> terms;  ///< multiedges are kept as separate terms
};

/// Single-qubit Bloch vectors; theta[i] has norm <= 1.
struct ProductState {
  std::vector<Vector3d> thetas;

  bool is_pure(double tol = 1e-9) const;
};

namespace pauli {

/// sigma^0..sigma^3 = I, X, Y, Z.
const Matrix2c& sigma(int k);
/// sigma^k (x) sigma^l.
Matrix4c sigma_pair(int k, int l);

PauliCoeffs decompose(const Hermitian4& h);
Hermitian4 reconstruct(const PauliCoeffs& c);
TwoMoment two_moment(const Hermitian4& h);
TwoMoment two_moment(const PauliCoeffs& c);
Matrix4d gamma_matrix(const TwoMoment& m);

// ---------------------------------------------------------------------------
// Polytopes confining diagonal 2-moments.

enum class PolytopeName { S, T, negS };

struct Facet {
  Vector3d normal;
  double bound;  ///< normal . x <= bound
};

struct Polytope3 {
  PolytopeName name;
  std::vector<Vector3d> vertices;
  std::vector<Facet> facets;
};

const Polytope3& polytope(PolytopeName name);
/// S, T, -S for rank 1, 2, 3.
const Polytope3& rank_polytope(int k);
/// Largest facet violation max_f (n_f . x - b_f); <= 0 inside.
double facet_violation(const Polytope3& p, const Vector3d& x);
bool polytope_contains(const Polytope3& p, const Vector3d& x, double tol);
/// Re-derives the facet list from the vertices: every vertex satisfies every
/// facet, and each facet is tight on exactly three affinely independent
/// vertices. Returns false on mismatch.
bool facets_match_vertices(const Polytope3& p, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Generators.

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

Eigen::Vector4cd bell_vector(BellState b);
Matrix4c bell_projector(BellState b);
/// The singlet projector (I - XX - YY - ZZ)/4.
Hermitian4 singlet_projector();

Matrix2c haar_unitary2(std::uint64_t seed, std::uint64_t stream);
Matrix4c haar_unitary4(std::uint64_t seed, std::uint64_t stream);

/// Haar-random rank-k projector: span of the first k columns of a
/// phase-fixed QR of a complex Ginibre matrix.
Hermitian4 random_projector(int k, std::uint64_t seed);
/// Sum of distinct Bell projectors (k = 1, 2) or I minus one (k = 3), then
/// conjugated by independent Haar single-qubit unitaries.
Hermitian4 random_sq_projector(int k, std::uint64_t seed);
/// The same construction with explicit Bell choices and local unitaries.
Hermitian4 bell_sum_projector(std::span<const BellState> bells, bool complement,
                              const Matrix2c& u1, const Matrix2c& u2);
/// Mixed 2-qubit density: G G^dagger / Tr with complex Ginibre G of the given
/// column count (1 gives a pure state, 4 the Hilbert-Schmidt measure).
Hermitian4 random_density(std::uint64_t seed, int columns = 4);

struct Literal {
  int var = 0;
  bool negated = false;
};
using Clause = std::array<Literal, 2>;

/// Each clause becomes the diagonal rank-3 projector onto its satisfying
/// assignments; qubit value 1 means the variable is true.
Instance encode_max2sat(std::span<const Clause> clauses, int n);

struct WeightedEdge {
  int i = 0;
  int j = 1;
  double weight = 1.0;
};

/// Weighted singlet projector on every edge.
Instance encode_heisenberg(std::span<const WeightedEdge> edges, int n);

/// Random edge list over n vertices: uniform distinct endpoints, multiedges
/// allowed, weights uniform in [lo, hi).
std::vector<WeightedEdge> random_edges(int n, int count, std::uint64_t seed,
                                       double lo = 0.5, double hi = 1.5);

Instance random_projector_instance(int k, int n, int edges, std::uint64_t seed);
Instance random_sq_instance(int k, int n, int edges, std::uint64_t seed);
std::vector<Clause> random_clauses(int n, int count, std::uint64_t seed);
/// -Z(x)Z on every cross edge of a random bipartite graph (sides of size
/// ceil(n/2) and floor(n/2)); traceless kind.
Instance random_ising_bipartite(int n, int edges, std::uint64_t seed);
/// Single-Pauli-product traceless instance: weight * sigma^k (x) sigma^l.
Instance ising_instance(std::span<const WeightedEdge> edges, int n, int k = 3,
                        int l = 3);

/// Rank-k instances on two qubits with lambda_max 1 whose best product
/// value is 1/2, 2/3, 5/6 (one term for k = 1, three weighted terms else).
Instance gap_instance(int k);

// ---------------------------------------------------------------------------
// Validation.

struct ValidationIssue {
  int term = -1;  ///< -1 for instance-level problems
  std::string check;
  std::string message;
  bool flag_only = false;  ///< informational; does not fail the report
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;

  std::string summary() const;
};

inline constexpr double kProjectorTolerance = 1e-9;
inline constexpr double kRankThreshold = 0.5;
inline constexpr double kCoefficientTolerance = 1e-12;

/// Never throws; all problems are reported as issues.
ValidationReport validate_instance(const Instance& inst);
/// Throws ValidationError carrying the summary when the report fails.
void require_valid(const Instance& inst);

}  // namespace pauli
}  // namespace qlh
