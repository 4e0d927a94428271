#pragma once

// Two-hexagon ladder linking the K-homology long exact sequence of a graph
// algebra with the K-theory sequence of its chosen dual, verification that the
// ladder commutes, a solved-and-certified connecting isomorphism theta, the
// formal Kaminker-Putnam class, and the duality report.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cpk/abelian.hpp"
#include "cpk/graph.hpp"
#include "cpk/pimsner.hpp"

namespace cpk {

// Hexagon positions are cyclic, 0..5.  Node i maps to node (i+1) % 6.  The
// inner hexagon is the K-homology sequence of O(G); the outer hexagon is the
// K-theory sequence of the chosen dual algebra.  Rungs point outer -> inner
// (the mu pairing maps); positions 0 and 3 carry no rung — they are the two
// components of theta, solved separately.
//
// Layout (vertex algebra written A, n = |vertices|):
//   pos   inner node        inner arrow to next     outer node        outer arrow
//   0     K^0(O(G))         restriction (ker incl)  K_1(dual O)       boundary (ker incl)
//   1     K^0(A) = Z^n      1 - A                   K_0(A-dual) = Z^n 1 - A
//   2     K^0(A) = Z^n      boundary (quotient)     K_0(A-dual) = Z^n inclusion-induced (quotient)
//   3     K^1(O(G))         0                       K_0(dual O)       0
//   4     K^1(A) = 0        0                       K_1(A-dual) = 0   0
//   5     K^1(A) = 0        0                       K_1(A-dual) = 0   0
struct SixTermLadder {
    DualChoice choice = DualChoice::Eop;
    std::array<FgAbGroup, 6> inner, outer;
    std::array<GroupHom, 6> inner_maps, outer_maps;
    std::array<std::optional<GroupHom>, 6> rungs;  // empty exactly at the theta slots
    std::array<std::string, 6> inner_labels, outer_labels;
    static constexpr std::array<int, 2> theta_slots{0, 3};
    std::optional<GroupHom> theta1;  // slot 0: K_1(dual) -> K^0(O(G))
    std::optional<GroupHom> theta0;  // slot 3: K_0(dual) -> K^1(O(G))
};

// Build the ladder for the chosen dual.  Throws hypothesis_error when the
// pairing-product gates fail (sources always forbidden; Eop also needs no
// sinks), and logic_error if either hexagon fails its exactness
// self-verification (an internal bug, never a data condition).
SixTermLadder build_pd_diagram(const DirectedGraph& g, DualChoice choice);

struct LadderCommutation {
    bool ok = false;
    // names like "square(1,2)", "rectangle(2->4)", "theta-square(0,1)"
    std::vector<std::string> failing_squares;
};

// Verify every square made of two adjacent rungs, the two long rectangles that
// bypass a theta slot, and — when theta components are installed — the dashed
// squares on both sides of each theta slot.  Failures are reported, not thrown.
LadderCommutation check_ladder_commutes(const SixTermLadder& ladder);

struct ThetaSolution {
    std::optional<GroupHom> theta1, theta0;
    IsoCheck iso1, iso0;
    std::string note;  // which constraint block failed, if any
    bool found() const { return theta1.has_value() && theta0.has_value(); }
    bool certified() const { return found() && iso1.ok() && iso0.ok(); }
};

// Solve the dashed-square constraints for both theta components as integer
// linear systems, then certify each solution as an isomorphism.  On success the
// components are installed into the ladder so check_ladder_commutes can verify
// the dashed squares too.  Infeasibility is reported in the note, never thrown.
ThetaSolution solve_theta(SixTermLadder& ladder);

enum class KPSign { Delta, DeltaBar };
std::string kp_sign_name(KPSign s);

// Formal duality class: one summand per edge of the working graph, each
// standing for (adjoint generator) tensor (opposite generator) at that edge.
// Defined directly only when no ordered vertex pair carries two edges;
// otherwise the class is built on the dual graph, which always satisfies the
// condition, and built_on_dual records the substitution.
struct FormalKPClass {
    std::vector<std::string> summands;  // edge names of the working graph
    std::string sign;                   // "minus" (delta) or "plus" (delta-bar)
    bool built_on_dual = false;
    std::string note;
};

FormalKPClass kaminker_putnam_delta(const DirectedGraph& g, KPSign sign);

// Difference of the two beta-pairing product matrices entering the evaluation
// identity for the requested sign; the duality hypothesis says it vanishes.
// Throws hypothesis_error when the needed products are gated off.
IntMatrix verify_delta_ev_vanishes(const DirectedGraph& g, KPSign sign);

struct DualPathReport {
    std::string algebra;
    bool hypothesis_ok = false;
    std::string gate_note;
    std::optional<KData> k;          // K-theory of the dual algebra
    bool ladder_exact = false;
    bool ladder_commutes = false;
    ThetaSolution theta;
    bool ev_residual_zero = false;
    // EbarOp only: verdict of the uniform-limit-coefficient ("super-strong")
    // check from the watatani module.  Informational for the K-level checks
    // above, but the conjugate-module cycle construction needs it, so its
    // failure flags this path.  Empty on the Eop path, and empty with a note
    // when the coefficient sequences cannot be evaluated at all.
    std::optional<bool> super_strong;
    std::string super_strong_note;
};

struct PdReport {
    std::string graph_name;
    KData k_theory, k_homology;      // of O(G) itself
    DualPathReport eop, ebarop;
    bool k0_side_torsion_free = false;     // K^0 of O(G)
    bool ranks_match = false;              // all four ranks K_0, K_1, K^0, K^1 coincide
    bool duals_isomorphic_k = false;       // certified iso between the duals' K-data
    bool delta_pair_difference_zero = false;  // both beta-products defined and equal
    nlohmann::ordered_json to_json() const;
    std::string to_markdown() const;
};

// Full duality report for one graph.  Individual check failures are embedded
// in the report rather than thrown; only file-level problems escape.
PdReport pd_report(const DirectedGraph& g);

}  // namespace cpk
