#pragma once
// The Z-graded shift-and-rotation picture at a finite window: the
// number-operator extension representative, the doubled self-adjoint operator
// N#D with its generator commutators, compressed index pairings certified
// stable across two window sizes, and the explicit component list of the
// rotation-algebra duality class.
//
// Basis vectors are pairs (n, j): a grading level n in [-W, W] and a fiber
// mode index j in [0, M) whose Fourier mode value is j - M/2.  The shift U
// raises n by one, the rotation unitary multiplies mode m by its phase, and
// the fiber Dirac operator is the diagonal mode multiplier.  Operators that
// would leave the window are clipped, and the clipping is tracked separately
// from genuine annihilation so index counts can exclude truncation artifacts.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cpk/intmatrix.hpp"

namespace cpk {

// An angle, exact when given as a rational number of full turns.
struct Angle {
    bool rational = false;
    long long num = 0;  // turns = num/den when rational
    long long den = 1;
    double radians = 0.0;

    static Angle turns(long long num, long long den);
    static Angle from_radians(double r);

    // e^{i k theta}; exact exponent arithmetic in the rational case
    std::complex<double> phase(long long k) const;
};

struct GradedTruncation {
    int n_window = 0;  // levels n in [-n_window, n_window]
    int modes = 1;     // fiber dimension
    Angle theta;

    int dim() const { return (2 * n_window + 1) * modes; }
    int index_of(int n, int j) const;  // -1 when outside the window
    int level_of(int idx) const;
    int mode_slot_of(int idx) const;
    int mode_value(int j) const { return j - modes / 2; }

    // invariants, certified exactly at build time
    bool shift_number_commutator_ok = false;  // [N, U] = U on the interior
    bool rotation_number_commutes = false;    // [N, W] = 0 everywhere
    bool rotation_unitary = false;            // unit-modulus phases
};

// pre: n_window >= 4, modes >= 1
GradedTruncation build_graded_truncation(int n_window, int modes, Angle theta);

// A window-truncated generalized permutation operator with unit-modulus
// amplitudes: each basis vector maps to at most one basis vector.  The
// forward and backward maps carry matching escape bookkeeping.
struct PhaseOp {
    static constexpr int kZero = -1;     // genuinely annihilated
    static constexpr int kEscaped = -2;  // image exists but leaves the window

    std::vector<int> forward;  // column -> row, or a code
    std::vector<std::complex<double>> amp;
    std::vector<int> backward;  // row -> column, or a code
    std::vector<std::complex<double>> back_amp;
    int grading_shift = 0;  // uniform shift of the level n

    int dim() const { return static_cast<int>(forward.size()); }
    static PhaseOp identity(int dim);
    PhaseOp then(const PhaseOp& second) const;  // apply *this first, then second
};

// Words over the generators: whitespace-separated tokens "U", "W", "z", each
// with an optional integer power such as "U^2" or "z^-1"; the product applies
// the rightmost token first.  The left multiplier z acts at level n with the
// phase e^{i n theta} (its action is twisted by the rotation).
PhaseOp generator_op(const GradedTruncation& t, const std::string& word);

struct IndexPairingReport {
    std::string generator;
    int window = 0;
    int index = 0;
    int dim_ker = 0;
    int dim_coker = 0;
    int artifacts_excluded = 0;
    int index_at_larger = 0;  // same computation at window + 4
    bool stable = false;
};

// Index of the nonnegative-level compression of the generator word, counted
// on the window with escape artifacts excluded on both sides.
IndexPairingReport ext_index_pairing(const GradedTruncation& t,
                                     const std::string& generator);

// The doubled operator [[0, N - iD], [N + iD, 0]] at one window.
struct NSharpD {
    int window = 0;
    int modes = 0;
    bool self_adjoint_exact = false;    // conj(upper diagonal) == lower diagonal
    bool grading_anticommutes = false;  // {Gamma, N#D} = 0
    // closed-form commutator norm per generator word (exact for phase ops)
    std::vector<std::pair<std::string, double>> commutator_norms;
    double dense_cross_check = -1.0;  // closed form vs dense SVD; -1 if skipped
    std::string note;
};

NSharpD build_nsharpd(const GradedTruncation& t,
                      const std::vector<std::string>& generators);

struct CommutatorRow {
    std::string generator;
    std::vector<double> norms;       // one per window
    double max_variation = 0.0;      // relative spread across windows
};

struct NSharpDSweep {
    Angle theta;
    int modes = 0;
    std::vector<int> windows;
    std::vector<CommutatorRow> rows;
    bool all_self_adjoint = false;
    bool all_anticommute = false;
    double worst_variation = 0.0;
    double dense_cross_check = -1.0;  // from the smallest window
};

// Commutator norms across several windows; variation measures boundedness.
NSharpDSweep nsharpd_commutator_sweep(Angle theta, int modes,
                                      const std::vector<int>& windows,
                                      const std::vector<std::string>& generators);

struct DeltaSummand {
    std::string label;
    std::string paired_generator;  // empty when no leg meets the grading
    int pairing = 0;
    bool nontrivial = false;
    std::string note;
};

struct RotationDeltaReport {
    Angle theta;
    int window = 0;
    int modes = 0;
    std::vector<DeltaSummand> summands;
    std::vector<double> t_samples;
    // the associated projection family, checked in exact rational arithmetic
    double ew_interior_residual = 0.0;   // identically zero away from the rim
    double ew_boundary_defect = 0.0;     // worst clipped-corner defect
    double ew_boundary_predicted = 0.0;  // t^2/(1+t^2)^2 maximized over samples
    bool ew_exact = false;
};

// The four formal components of the duality class for the rotation picture,
// each paired with the graded compression, plus the projection-family check.
RotationDeltaReport rotation_delta_components(Angle theta, int n_window, int modes);

}  // namespace cpk
