#pragma once

// Defining data of the quantum matrix oracle O_q(M_{k,n}).  Every
// convention the oracle depends on lives here.
//
// Generators x_{ab} (row a, column b, both 1-based) are ordered
// lexicographically: x_{ab} < x_{cd} iff (a,b) < (c,d).  A word is in
// normal form when its generators are weakly increasing.
//
// Relations, for a < c and b < d:
//   x_{ab} x_{ad} = q x_{ad} x_{ab}            (same row)
//   x_{ab} x_{cb} = q x_{cb} x_{ab}            (same column)
//   x_{ad} x_{cb} = x_{cb} x_{ad}              (anti-diagonal pair)
//   x_{ab} x_{cd} - x_{cd} x_{ab} = (q - q^-1) x_{ad} x_{cb}
//
// Read right to left they are rewriting rules that move a larger generator
// past a smaller one (see RewriteRule below).
//
// Quantum minors on rows R = {r_1 < ... < r_m} and columns C = {c_1 < ... < c_m}:
//   Delta = sum over permutations s of (-q)^inv(s) x_{r_1 c_s(1)} ... x_{r_m c_s(m)}.

namespace qcluster::qmatrix {

/// Doubled exponent of the single parameter q (q = q^(2/2)).
inline constexpr int kQ = 2;

/// Name of the parameter in printed output.
inline constexpr const char* kParamName = "q";

/// The coefficient attached to one inversion in the minor expansion: -q.
inline constexpr int kMinorSign = -1;
inline constexpr int kMinorQPower = kQ;

/// How a descent x_u x_v (u > v) is rewritten, by relative position of u
/// and v.  "Factor" is the doubled q-exponent of the swapped term.
enum class RewriteRule {
    SameRow,       // x_{ad} x_{ab} = q^-1 x_{ab} x_{ad}
    SameColumn,    // x_{cb} x_{ab} = q^-1 x_{ab} x_{cb}
    AntiDiagonal,  // x_{cb} x_{ad} = x_{ad} x_{cb}
    Diagonal,      // x_{cd} x_{ab} = x_{ab} x_{cd} - (q - q^-1) x_{ad} x_{cb}
};

inline constexpr int kSameRowFactor = -kQ;
inline constexpr int kSameColumnFactor = -kQ;
inline constexpr int kAntiDiagonalFactor = 0;

} // namespace qcluster::qmatrix
