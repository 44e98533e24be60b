#pragma once

#include <cstdint>
#include <stdexcept>

#include "jlanczos/cg.hpp"
#include "jlanczos/linalg.hpp"
#include "jlanczos/operators.hpp"

namespace jlanczos {

/// normal: the Krylov operator is A. invert: it is A^-1, applied by CG, and T
/// holds Ritz values of A^-1.
enum class SolveMode { normal, invert };

/// Thrown when a diagonal entry v^H op v has an imaginary part too large to be
/// rounding, i.e. the operator is not Hermitian.
class NonHermitianError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A length-j Lanczos decomposition op V_j = V_j T_j + v_{j+1} t_{j+1,:}.
///
/// v holds v_1..v_{j+1} (0-based v[0..j]); w holds J v_i* for the same columns
/// in the J-symmetric variant and is empty otherwise. t has room for m columns.
struct KrylovState {
  Basis v;
  Basis w;
  ProjectedMatrix t;
  std::size_t j = 0;
  SolveMode mode = SolveMode::normal;
  bool jsym = false;
  CGConfig cg;
  std::uint64_t matvecs = 0;

  /// k = 0 state from a unit start vector. Pass j_op for the J-symmetric variant.
  static KrylovState start(ComplexVector v1, std::size_t m, SolveMode mode, const JOperator *j_op,
                           const CGConfig &cg = {});
};

struct ExtendStatus {
  /// An invariant subspace was found: the new vector vanished under
  /// orthogonalization. The state then holds j = column complete columns, v has
  /// j entries (v_{j+1} missing) and t(j, j-1) = 0.
  bool breakdown = false;
  std::size_t column = 0;
  int capped_steps = 0; // steps that hit the reorthogonalization sweep cap
};

/// Extends a length-k decomposition to length m, orthogonalizing each new
/// vector against w_i then v_i for ascending i and forming w_{j+1} = J v_{j+1}*.
ExtendStatus lanczos_extend_jsym(const LinearOperator &op, const JOperator &j_op, KrylovState &state, std::size_t k,
                                 std::size_t m);

/// As lanczos_extend_jsym without the dual basis.
ExtendStatus lanczos_extend_plain(const LinearOperator &op, KrylovState &state, std::size_t k, std::size_t m);

/// max |(V^H V - I)_rc| over the first `count` columns.
double orthonormality_error(const Basis &v, std::size_t count);
/// max |(A^H B)_rc| over the first `count` columns of each.
double cross_inner_max(const Basis &a, const Basis &b, std::size_t count);
/// max |(V^H A W)_rc| over the first `count` columns, with uncounted applications.
double operator_cross_inner_max(const LinearOperator &op, const Basis &v, const Basis &w, std::size_t count);
/// max_rc |op V_j - V_j T_j - v_{j+1} t_{j+1,:}| for the state's mode; invert
/// mode solves with CG on uncounted applications.
double decomposition_residual(const LinearOperator &op, const KrylovState &state);

} // namespace jlanczos
