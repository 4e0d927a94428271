#pragma once
// Growth data of the edge module of a finite graph: exact per-level path
// counts, Perron spectral data, the normalized limit coefficients attached to
// paths, the two convergence hypotheses gating the conjugate-dual
// constructions, and the limit expectation phi_infinity built from them.
//
// The count vector at level n is beta_n(v) = #{paths of length n with range v}
// = (A^n 1)(v).  Conjugating a path vector delta_alpha by these counts scales
// it by the exact rational
//
//     q_n(alpha) = beta_{n-k}(s(alpha)) / beta_n(r(alpha)),   k = |alpha|,
//
// and everything in this module is about the large-n behaviour of these
// numbers: their limits, how fast they converge (geometric vs polynomial),
// whether the limit depends only on the range vertex and is nonzero (the
// "super-strong" uniform-coefficient condition), and the expectation values
// assembled from the limits.  Sequences are kept as exact rationals; limit
// extrapolation and decay fits run in 50-digit floats so that geometric
// residuals far below double precision stay meaningful; reported numbers are
// doubles.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cpk/graph.hpp"
#include "cpk/intmatrix.hpp"

namespace cpk {

using float50 = boost::multiprecision::cpp_bin_float_50;

// --- exact path counts -------------------------------------------------

// Per-vertex count of length-n paths by range vertex.
struct WatataniVector {
    int n = 0;
    std::vector<bigint> values;  // indexed like g.vertices
};

// beta_0 = all-ones; beta_{n+1} = A * beta_n.  Exact.
WatataniVector watatani_index(const DirectedGraph& g, int n);

// The exact coefficient q_n(alpha) above.  Throws hypothesis_error when the
// count at r(alpha) vanishes at level n (the conjugation is undefined there;
// happens only on graphs with source vertices).
bigrat q_coefficient(const DirectedGraph& g, const Path& alpha, int n);

// --- Perron data -------------------------------------------------------

struct PerronData {
    bool primitive = false;
    bool converged = false;
    bool data_valid = false;  // lambda / w meaningful: primitive and converged
    double lambda = 0.0;
    std::vector<double> w;     // right eigenvector, normalized max = 1; empty when withheld
    double residual = 0.0;     // ||A w - lambda w||_inf at exit
    double contraction = 0.0;  // observed per-step error factor (second eigenvalue ratio)
    double spectral_gap = 0.0; // 1 - contraction, clamped to [0, 1]
    int iterations = 0;
    std::string note;
};

// Power iteration on the adjacency matrix.  Requires a graph with no sources
// and no sinks (throws hypothesis_error otherwise).  For non-primitive graphs
// the spectral data is withheld (data_valid = false) rather than reported,
// since the iteration need not converge and the limit theory does not apply.
// Non-convergence within max_iter is flagged, not thrown.
PerronData perron(const DirectedGraph& g, double tol = 1e-12, int max_iter = 20000);

// --- limit coefficients ------------------------------------------------

// How q_n(alpha) approaches its limit:
//   Geometric        |q_n - L| <= C rho^n, rho in (0,1)   (rate = rho; 0 when exact)
//   Polynomial       |q_n - L| <= C n^(-delta)            (rate = delta)
//   DivergentToZero  q_n itself decays geometrically to 0 (rate = step ratio)
//   None             no stabilization detected by n_max
enum class DecayClass { Geometric, Polynomial, DivergentToZero, None };
const char* decay_class_name(DecayClass c);

struct QLimitResult {
    std::string path;  // edge names, range-side first
    int k = 0;         // path length

    bool exact = false;   // constant tail: the limit is the exact rational below
    bigrat exact_limit;   // valid when exact
    double limit = 0.0;   // extrapolated limit (0 for the to-zero classes)
    DecayClass decay = DecayClass::None;
    double rate = 0.0;    // see DecayClass
    double fit_r2 = 0.0;  // quality of the winning fit in log space (1 = perfect)

    // Cross-check against w(s(alpha)) / (lambda^k w(r(alpha))) on primitive
    // graphs with valid Perron data.
    bool closed_form_checked = false;
    double closed_form_value = 0.0;
    double closed_form_gap = 0.0;

    std::vector<double> tail;  // q_n over the fit window, for reports
    std::string note;
};

// Exact rational sequence out to n_max, then limit extrapolation (iterated
// Aitken for geometric behaviour, reciprocal-node Neville for polynomial
// behaviour — the better-fitting candidate wins) and decay classification over
// the window n in [n_max/2, n_max].  tol is the zero-snap / cross-check
// tolerance, not a Cauchy cutoff: polynomially convergent sequences are still
// far from their limits at n_max and are classified by fit, not by |q_{n_max} - L|.
// Throws hypothesis_error on vanishing counts (source vertices).
QLimitResult q_limit(const DirectedGraph& g, const Path& alpha, int n_max = 48,
                     double tol = 1e-9);

// --- the two hypotheses ------------------------------------------------

// For every path of length <= k_max, does q_n(alpha) converge at some
// detectable rate?  (The candidate limit vector is q(delta_alpha) =
// limit * delta_alpha; the residual sequence is |q_n - limit|.)
struct AssumptionOneReport {
    int k_max = 0;
    int n_max = 0;
    std::vector<QLimitResult> rows;  // all paths with 1 <= |alpha| <= k_max
    std::vector<bool> holds_at;      // [k-1]: every length-k path classified
    bool holds = false;
    std::optional<double> min_poly_exponent;  // over Polynomial rows
    std::optional<double> max_geom_ratio;     // over Geometric / DivergentToZero rows
    std::string summary;
};
AssumptionOneReport assumption_one_check(const DirectedGraph& g, int k_max = 3,
                                         int n_max = 48, double tol = 1e-9);

// Uniform-coefficient ("super-strong") condition: for each k the limit
// coefficient must depend only on the range vertex and be nonzero, so that
// q acts on length-k path vectors as a central invertible coefficient c_k.
// Returns the vertex-indexed c_k vectors when the condition holds, or a
// witness: two same-range paths with distinct limits, or a path whose limit
// vanishes.
struct SuperStrongWitness {
    int k = 0;
    std::string vertex;  // shared range
    std::string path_a;
    std::string path_b;  // empty when the defect is a lone zero coefficient
    double coeff_a = 0.0;
    double coeff_b = 0.0;
    std::string reason;
};

struct SuperStrongReport {
    bool assumption_holds = false;
    bool holds = false;
    int k_checked = 0;
    // c[k-1][v]: the common coefficient at level k and vertex v (0 where no
    // length-k path arrives; noted).  Filled up to the first failing level.
    std::vector<std::vector<double>> c;
    bool c_exact = false;  // every coefficient came from an exact constant tail
    std::optional<SuperStrongWitness> witness;
    std::string note;
};
SuperStrongReport super_strong_check(const DirectedGraph& g, int k_max = 3,
                                     double tol = 1e-6, int n_max = 48);

// --- limit expectation -------------------------------------------------

// phi_infinity(S_mu S_nu^*): zero unless mu == nu; on the diagonal the value
// is the limit coefficient of mu supported at r(mu).  Requires a classified
// (convergent) coefficient — hypothesis_error otherwise, and for empty paths.
struct PhiInfinityValue {
    bool diagonal = false;
    std::vector<double> values;       // per vertex
    bool exact = false;
    std::vector<bigrat> exact_values; // valid when exact
    QLimitResult q;                   // underlying limit data (diagonal case)
    std::string note;
};
PhiInfinityValue phi_infinity(const DirectedGraph& g, const Path& mu, const Path& nu,
                              int n_max = 48);

}  // namespace cpk
