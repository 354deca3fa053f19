#include "qlh/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlh/error.hpp"
#include "qlh/rng.hpp"

namespace qlh {

namespace {

constexpr std::uint64_t kStreamProjector = 0x50524F4Aull;
constexpr std::uint64_t kStreamSqProjector = 0x5351504Aull;
constexpr std::uint64_t kStreamDensity = 0x44454E53ull;
constexpr std::uint64_t kStreamEdges = 0x45444745ull;
constexpr std::uint64_t kStreamClauses = 0x434C4155ull;

std::uint64_t term_seed(std::uint64_t seed, std::uint64_t tag, std::size_t t) {
  return mix64(seed ^ mix64(tag + 0x1000 * (t + 1)));
}

Complex ginibre_entry(CounterRng& rng) {
  const double re = rng.normal();
  const double im = rng.normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

template <int N>
Eigen::Matrix<Complex, N, N> haar_unitary(std::uint64_t seed, std::uint64_t stream) {
  using Mat = Eigen::Matrix<Complex, N, N>;
  CounterRng rng(seed, stream);
  Mat g;
  for (int c = 0; c < N; ++c)
    for (int r = 0; r < N; ++r) g(r, c) = ginibre_entry(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int c = 0; c < N; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0) q.col(c) *= d / mag;
  }
  return q;
}

Matrix4c hermitian_part(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

void check_rank(int k) {
  if (k < 1 || k > 3) throw ValidationError("projector rank must be 1, 2 or 3");
}

std::string coeff_name(int k, int l) {
  std::ostringstream os;
  os << "alpha(" << k << "," << l << ")";
  return os.str();
}

}  // namespace

Hermitian4::Hermitian4(const Matrix4c& m) {
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(dev <= kTolerance)) {
    std::ostringstream os;
    os << "operator is not Hermitian: max |H - H^dagger| = " << dev;
    throw ValidationError(os.str());
  }
  m_ = hermitian_part(m);
}

std::string to_string(const InstanceType& t) {
  switch (t.kind) {
    case InstanceKind::projector:
      return "projector(" + std::to_string(t.rank) + ")";
    case InstanceKind::strictly_quadratic_projector:
      return "strictly_quadratic_projector(" + std::to_string(t.rank) + ")";
    case InstanceKind::traceless:
      return "traceless";
    case InstanceKind::generic:
      return "generic";
  }
  return "generic";
}

InstanceType parse_instance_type(const std::string& s) {
  if (s == "traceless") return {InstanceKind::traceless, 0};
  if (s == "generic") return {InstanceKind::generic, 0};
  auto ranked = [&](const std::string& prefix) -> int {
    if (s.size() != prefix.size() + 3 || s.compare(0, prefix.size(), prefix) != 0 ||
        s[prefix.size()] != '(' || s.back() != ')')
      return -1;
    const char c = s[prefix.size() + 1];
    if (c < '1' || c > '3') return -1;
    return c - '0';
  };
  if (int k = ranked("projector"); k > 0) return {InstanceKind::projector, k};
  if (int k = ranked("strictly_quadratic_projector"); k > 0)
    return {InstanceKind::strictly_quadratic_projector, k};
  throw ValidationError("unknown instance kind '" + s + "'");
}

bool ProductState::is_pure(double tol) const {
  return std::all_of(thetas.begin(), thetas.end(),
                     [&](const Vector3d& t) { return std::abs(t.norm() - 1.0) <= tol; });
}

namespace pauli {

const Matrix2c& sigma(int k) {
  static const std::array<Matrix2c, 4> table = [] {
    std::array<Matrix2c, 4> s;
    const Complex i(0, 1);
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -i, i, 0;
    s[3] << 1, 0, 0, -1;
    return s;
  }();
  return table.at(static_cast<std::size_t>(k));
}

Matrix4c sigma_pair(int k, int l) {
  const Matrix2c& a = sigma(k);
  const Matrix2c& b = sigma(l);
  Matrix4c out;
  for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1)
      out.block<2, 2>(2 * r1, 2 * c1) = a(r1, c1) * b;
  return out;
}

PauliCoeffs decompose(const Hermitian4& h) {
  PauliCoeffs c;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      c.alpha(k, l) = (sigma_pair(k, l) * h.matrix()).trace().real() / 4.0;
  return c;
}

Hermitian4 reconstruct(const PauliCoeffs& c) {
  Matrix4c m = Matrix4c::Zero();
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      if (c.alpha(k, l) != 0.0) m += c.alpha(k, l) * sigma_pair(k, l);
  return Hermitian4(m);
}

TwoMoment two_moment(const PauliCoeffs& c) {
  TwoMoment out;
  const Matrix4d g = 4.0 * c.alpha;
  out.scalar_one = g(0, 0);
  out.u = g.block<3, 1>(1, 0);
  out.v = g.block<1, 3>(0, 1).transpose();
  out.R = g.block<3, 3>(1, 1);
  return out;
}

TwoMoment two_moment(const Hermitian4& h) { return two_moment(decompose(h)); }

Matrix4d gamma_matrix(const TwoMoment& m) {
  Matrix4d g;
  g(0, 0) = m.scalar_one;
  g.block<3, 1>(1, 0) = m.u;
  g.block<1, 3>(0, 1) = m.v.transpose();
  g.block<3, 3>(1, 1) = m.R;
  return g;
}

// ---------------------------------------------------------------------------

const Polytope3& polytope(PolytopeName name) {
  static const Polytope3 s = [] {
    Polytope3 p{PolytopeName::S, {}, {}};
    p.vertices = {{-1, -1, -1}, {-1, 1, 1}, {1, -1, 1}, {1, 1, -1}};
    p.facets = {{{1, 1, 1}, 1}, {{-1, -1, 1}, 1}, {{-1, 1, -1}, 1}, {{1, -1, -1}, 1}};
    return p;
  }();
  static const Polytope3 neg_s = [] {
    Polytope3 p{PolytopeName::negS, {}, {}};
    for (const auto& v : s.vertices) p.vertices.push_back(-v);
    for (const auto& f : s.facets) p.facets.push_back({-f.normal, f.bound});
    return p;
  }();
  static const Polytope3 t = [] {
    Polytope3 p{PolytopeName::T, {}, {}};
    for (int a = 0; a < 3; ++a) {
      Vector3d e = Vector3d::Zero();
      e[a] = 2.0;
      p.vertices.push_back(e);
      p.vertices.push_back(-e);
    }
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) p.facets.push_back({Vector3d(sx, sy, sz), 2.0});
    return p;
  }();
  switch (name) {
    case PolytopeName::S:
      return s;
    case PolytopeName::T:
      return t;
    case PolytopeName::negS:
      return neg_s;
  }
  return s;
}

const Polytope3& rank_polytope(int k) {
  check_rank(k);
  static constexpr std::array<PolytopeName, 3> names = {PolytopeName::S, PolytopeName::T,
                                                        PolytopeName::negS};
  return polytope(names[static_cast<std::size_t>(k - 1)]);
}

double facet_violation(const Polytope3& p, const Vector3d& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : p.facets) worst = std::max(worst, f.normal.dot(x) - f.bound);
  return worst;
}

bool polytope_contains(const Polytope3& p, const Vector3d& x, double tol) {
  return facet_violation(p, x) <= tol;
}

bool facets_match_vertices(const Polytope3& p, double tol) {
  for (const auto& f : p.facets) {
    std::vector<Vector3d> tight;
    for (const auto& v : p.vertices) {
      const double s = f.normal.dot(v) - f.bound;
      if (s > tol) return false;
      if (std::abs(s) <= tol) tight.push_back(v);
    }
    if (tight.size() < 3) return false;
    Eigen::MatrixXd diffs(3, static_cast<Eigen::Index>(tight.size() - 1));
    for (std::size_t a = 1; a < tight.size(); ++a)
      diffs.col(static_cast<Eigen::Index>(a - 1)) = tight[a] - tight[0];
    if (Eigen::FullPivLU<Eigen::MatrixXd>(diffs).rank() != 2) return false;
  }
  // Every vertex must be tight on at least three facets.
  for (const auto& v : p.vertices) {
    int count = 0;
    for (const auto& f : p.facets)
      if (std::abs(f.normal.dot(v) - f.bound) <= tol) ++count;
    if (count < 3) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Eigen::Vector4cd bell_vector(BellState b) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  const double h = M_SQRT1_2;
  switch (b) {
    case BellState::PhiPlus:
      v[0] = h;
      v[3] = h;
      break;
    case BellState::PhiMinus:
      v[0] = h;
      v[3] = -h;
      break;
    case BellState::PsiPlus:
      v[1] = h;
      v[2] = h;
      break;
    case BellState::PsiMinus:
      v[1] = h;
      v[2] = -h;
      break;
  }
  return v;
}

Matrix4c bell_projector(BellState b) {
  const Eigen::Vector4cd v = bell_vector(b);
  return v * v.adjoint();
}

Hermitian4 singlet_projector() { return Hermitian4(bell_projector(BellState::PsiMinus)); }

Matrix2c haar_unitary2(std::uint64_t seed, std::uint64_t stream) {
  return haar_unitary<2>(seed, stream);
}

Matrix4c haar_unitary4(std::uint64_t seed, std::uint64_t stream) {
  return haar_unitary<4>(seed, stream);
}

Hermitian4 random_projector(int k, std::uint64_t seed) {
  check_rank(k);
  const Matrix4c q = haar_unitary4(seed, kStreamProjector);
  const Eigen::MatrixXcd cols = q.leftCols(k);
  return Hermitian4(hermitian_part(cols * cols.adjoint()));
}

Hermitian4 bell_sum_projector(std::span<const BellState> bells, bool complement,
                              const Matrix2c& u1, const Matrix2c& u2) {
  Matrix4c p = Matrix4c::Zero();
  for (BellState b : bells) p += bell_projector(b);
  if (complement) p = Matrix4c::Identity() - p;
  Matrix4c local;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) local.block<2, 2>(2 * r, 2 * c) = u1(r, c) * u2;
  return Hermitian4(hermitian_part(local * p * local.adjoint()));
}

Hermitian4 random_sq_projector(int k, std::uint64_t seed) {
  check_rank(k);
  CounterRng rng(seed, kStreamSqProjector);
  std::array<BellState, 4> all = {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus,
                                  BellState::PsiMinus};
  // Partial Fisher-Yates: the first two entries become a uniform ordered pair.
  for (std::size_t a = 0; a < 2; ++a) {
    const std::size_t b = a + static_cast<std::size_t>(rng.below(4 - a));
    std::swap(all[a], all[b]);
  }
  const Matrix2c u1 = haar_unitary2(seed, kStreamSqProjector + 1);
  const Matrix2c u2 = haar_unitary2(seed, kStreamSqProjector + 2);
  const std::size_t count = (k == 2) ? 2 : 1;
  return bell_sum_projector(std::span<const BellState>(all.data(), count), k == 3, u1, u2);
}

Hermitian4 random_density(std::uint64_t seed, int columns) {
  if (columns < 1 || columns > 16) throw ValidationError("density column count out of range");
  CounterRng rng(seed, kStreamDensity);
  Eigen::MatrixXcd g(4, columns);
  for (int c = 0; c < columns; ++c)
    for (int r = 0; r < 4; ++r) g(r, c) = ginibre_entry(rng);
  Matrix4c rho = g * g.adjoint();
  rho /= rho.trace().real();
  return Hermitian4(hermitian_part(rho));
}

// ---------------------------------------------------------------------------

namespace {

void check_pair(int i, int j, int n, const char* what) {
  if (i < 0 || j < 0 || i >= n || j >= n) {
    std::ostringstream os;
    os << what << " (" << i << ", " << j << ") out of range for n = " << n;
    throw ValidationError(os.str());
  }
  if (i == j) {
    std::ostringstream os;
    os << what << " (" << i << ", " << j << ") must join two distinct qubits";
    throw ValidationError(os.str());
  }
}

PauliCoeffs singlet_coeffs() {
  PauliCoeffs c;
  c.alpha(0, 0) = 0.25;
  c.alpha(1, 1) = c.alpha(2, 2) = c.alpha(3, 3) = -0.25;
  return c;
}

}  // namespace

Instance encode_max2sat(std::span<const Clause> clauses, int n) {
  if (n < 0) throw ValidationError("variable count must be nonnegative");
  Instance inst;
  inst.n = n;
  inst.kind = {InstanceKind::projector, 3};
  for (const Clause& cl : clauses) {
    check_pair(cl[0].var, cl[1].var, n, "clause");
    const double si = cl[0].negated ? -1.0 : 1.0;
    const double sj = cl[1].negated ? -1.0 : 1.0;
    TwoLocalTerm t;
    t.i = cl[0].var;
    t.j = cl[1].var;
    t.weight = 1.0;
    t.coeffs.alpha(0, 0) = 0.75;
    t.coeffs.alpha(3, 0) = -0.25 * si;
    t.coeffs.alpha(0, 3) = -0.25 * sj;
    t.coeffs.alpha(3, 3) = -0.25 * si * sj;
    inst.terms.push_back(t);
  }
  return inst;
}

Instance encode_heisenberg(std::span<const WeightedEdge> edges, int n) {
  Instance inst;
  inst.n = n;
  inst.kind = {InstanceKind::strictly_quadratic_projector, 1};
  for (const auto& e : edges) {
    check_pair(e.i, e.j, n, "edge");
    inst.terms.push_back({e.i, e.j, e.weight, singlet_coeffs()});
  }
  return inst;
}

std::vector<WeightedEdge> random_edges(int n, int count, std::uint64_t seed, double lo,
                                       double hi) {
  if (count > 0 && n < 2) throw ValidationError("need at least two qubits for an edge");
  CounterRng rng(seed, kStreamEdges);
  std::vector<WeightedEdge> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int e = 0; e < count; ++e) {
    int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);
    out.push_back({i, j, lo + (hi - lo) * rng.uniform()});
  }
  return out;
}

Instance random_projector_instance(int k, int n, int edges, std::uint64_t seed) {
  check_rank(k);
  Instance inst;
  inst.n = n;
  inst.kind = {InstanceKind::projector, k};
  const auto es = random_edges(n, edges, seed);
  for (std::size_t t = 0; t < es.size(); ++t)
    inst.terms.push_back({es[t].i, es[t].j, es[t].weight,
                          decompose(random_projector(k, term_seed(seed, kStreamProjector, t)))});
  return inst;
}

Instance random_sq_instance(int k, int n, int edges, std::uint64_t seed) {
  check_rank(k);
  Instance inst;
  inst.n = n;
  inst.kind = {InstanceKind::strictly_quadratic_projector, k};
  const auto es = random_edges(n, edges, seed);
  for (std::size_t t = 0; t < es.size(); ++t) {
    PauliCoeffs c = decompose(random_sq_projector(k, term_seed(seed, kStreamSqProjector, t)));
    // Local conjugation keeps the 1-local parts at zero; drop rounding noise.
    for (int a = 1; a < 4; ++a) c.alpha(a, 0) = c.alpha(0, a) = 0.0;
    inst.terms.push_back({es[t].i, es[t].j, es[t].weight, c});
  }
  return inst;
}

std::vector<Clause> random_clauses(int n, int count, std::uint64_t seed) {
  if (count > 0 && n < 2) throw ValidationError("need at least two variables per clause");
  CounterRng rng(seed, kStreamClauses);
  std::vector<Clause> out;
  for (int c = 0; c < count; ++c) {
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (b >= a) ++b;
    const bool na = rng.below(2) == 1;
    const bool nb = rng.below(2) == 1;
    out.push_back({Literal{a, na}, Literal{b, nb}});
  }
  return out;
}

Instance ising_instance(std::span<const WeightedEdge> edges, int n, int k, int l) {
  if (k < 1 || k > 3 || l < 1 || l > 3) throw ValidationError("Pauli index must be 1..3");
  Instance inst;
  inst.n = n;
  inst.kind = {InstanceKind::traceless, 0};
  for (const auto& e : edges) {
    check_pair(e.i, e.j, n, "edge");
    PauliCoeffs c;
    c.alpha(k, l) = 1.0;
    inst.terms.push_back({e.i, e.j, e.weight, c});
  }
  return inst;
}

Instance random_ising_bipartite(int n, int edges, std::uint64_t seed) {
  if (n < 2) throw ValidationError("bipartite instance needs at least two qubits");
  const int left = (n + 1) / 2;
  const int right = n - left;
  CounterRng rng(seed, kStreamEdges + 7);
  std::vector<WeightedEdge> es;
  for (int e = 0; e < edges; ++e) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(left)));
    const int j = left + static_cast<int>(rng.below(static_cast<std::uint64_t>(right)));
    es.push_back({i, j, -1.0});
  }
  return ising_instance(es, n);
}

Instance gap_instance(int k) {
  check_rank(k);
  Instance inst;
  inst.n = 2;
  inst.kind = {InstanceKind::strictly_quadratic_projector, k};
  const Matrix2c id = Matrix2c::Identity();
  if (k == 1) {
    inst.terms.push_back({0, 1, 1.0, decompose(singlet_projector())});
    return inst;
  }
  const std::array<BellState, 3> others = {BellState::PhiPlus, BellState::PhiMinus,
                                           BellState::PsiPlus};
  for (BellState b : others) {
    Hermitian4 p = (k == 2)
                       ? bell_sum_projector(std::array<BellState, 2>{BellState::PsiMinus, b},
                                            false, id, id)
                       : bell_sum_projector(std::array<BellState, 1>{b}, true, id, id);
    inst.terms.push_back({0, 1, 1.0 / 3.0, decompose(p)});
  }
  return inst;
}

// ---------------------------------------------------------------------------

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (ok ? "valid" : "invalid");
  std::size_t failures = 0, flags = 0;
  for (const auto& i : issues) (i.flag_only ? flags : failures)++;
  os << " (" << failures << " failure(s), " << flags << " flag(s))";
  for (const auto& i : issues) {
    os << "\n  " << (i.flag_only ? "flag" : "fail");
    if (i.term >= 0) os << " term " << i.term;
    os << " [" << i.check << "] " << i.message;
  }
  return os.str();
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  auto fail = [&](int term, std::string check, std::string msg, bool flag = false) {
    rep.issues.push_back({term, std::move(check), std::move(msg), flag});
    if (!flag) rep.ok = false;
  };
  if (inst.n < 0) fail(-1, "size", "qubit count is negative");
  const InstanceType& kind = inst.kind;
  const bool projector_kind = kind.kind == InstanceKind::projector ||
                              kind.kind == InstanceKind::strictly_quadratic_projector;
  if (projector_kind && (kind.rank < 1 || kind.rank > 3))
    fail(-1, "rank", "projector kinds need rank 1, 2 or 3");

  for (std::size_t idx = 0; idx < inst.terms.size(); ++idx) {
    const int t = static_cast<int>(idx);
    const TwoLocalTerm& term = inst.terms[idx];
    if (term.i < 0 || term.j < 0 || term.i >= inst.n || term.j >= inst.n) {
      fail(t, "range", "qubit index out of range");
      continue;
    }
    if (term.i == term.j) {
      fail(t, "range", "term acts twice on the same qubit");
      continue;
    }
    if (!std::isfinite(term.weight) || !term.coeffs.alpha.allFinite()) {
      fail(t, "finite", "weight or coefficients are not finite");
      continue;
    }
    const Matrix4d& a = term.coeffs.alpha;

    if (projector_kind) {
      if (term.weight < 0) fail(t, "weight", "projector terms need a nonnegative weight");
      const Matrix4c p = reconstruct(term.coeffs).matrix();
      const double idem = (p * p - p).norm();
      if (idem > kProjectorTolerance) {
        std::ostringstream os;
        os << "||P^2 - P||_F = " << idem;
        fail(t, "idempotence", os.str());
      }
      Eigen::SelfAdjointEigenSolver<Matrix4c> es(p, Eigen::EigenvaluesOnly);
      const int rank = static_cast<int>((es.eigenvalues().array() > kRankThreshold).count());
      if (rank != kind.rank && kind.rank >= 1) {
        std::ostringstream os;
        os << "rank " << rank << " under declared rank " << kind.rank;
        fail(t, "rank", os.str(), rank > kind.rank);
      }
    }

    const bool needs_sq = kind.kind == InstanceKind::strictly_quadratic_projector ||
                          kind.kind == InstanceKind::traceless;
    if (needs_sq) {
      for (int c = 1; c < 4; ++c) {
        for (auto [k, l] : {std::pair{c, 0}, std::pair{0, c}}) {
          if (std::abs(a(k, l)) > kCoefficientTolerance) {
            std::ostringstream os;
            os << coeff_name(k, l) << " = " << a(k, l) << " is a nonzero 1-local coefficient";
            fail(t, "strictly_quadratic", os.str());
          }
        }
      }
    }
    if (kind.kind == InstanceKind::traceless) {
      if (std::abs(a(0, 0)) > kCoefficientTolerance) {
        std::ostringstream os;
        os << coeff_name(0, 0) << " = " << a(0, 0) << " is nonzero";
        fail(t, "traceless", os.str());
      }
      int nonzero = 0;
      for (int k = 1; k < 4; ++k)
        for (int l = 1; l < 4; ++l)
          if (std::abs(a(k, l)) > kCoefficientTolerance) ++nonzero;
      if (nonzero != 1) {
        std::ostringstream os;
        os << nonzero << " nonzero quadratic coefficients, expected exactly one";
        fail(t, "single_pauli_product", os.str());
      }
    }
  }
  return rep;
}

void require_valid(const Instance& inst) {
  const ValidationReport rep = validate_instance(inst);
  if (!rep.ok) throw ValidationError(rep.summary());
}

}  // namespace pauli
}  // namespace qlh
