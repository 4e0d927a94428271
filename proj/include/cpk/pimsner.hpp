#pragma once
// K-theory and K-homology of the Cuntz–Pimsner algebra of a finite graph, in
// the exact presentation coming from the defining extension: with n = |G^0|
// and A the adjacency matrix (rows = range),
//
//   K_0(O_G)  = coker(1 - A^t)     K_1(O_G)  = ker(1 - A^t)
//   K^0(O_G)  = ker(1 - A)         K^1(O_G)  = coker(1 - A)
//
// and for both dual algebras (the opposite-orientation graph algebra and the
// opposite algebra) K_0 = coker(1 - A), K_1 = ker(1 - A).  Alongside the
// groups we keep the connecting maps of the defining exact sequence, so
// exactness is a checkable property rather than a comment.
//
// Also here: the six pairing products of the two vertex classes with the three
// edge-module classes.  Each is computed from its own construction recipe
// (slot evaluations of edge endpoints) and compared with the adjacency matrix;
// the point is that three independently-built recipes agree on each side.

#include <optional>
#include <string>
#include <vector>

#include "cpk/abelian.hpp"
#include "cpk/graph.hpp"

namespace cpk {

// guard failures for constructions that need no-source / no-sink hypotheses
struct hypothesis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class KMode { Theory, Homology };
enum class DualChoice { Eop, EbarOp };

inline const char* dual_choice_name(DualChoice c) {
    return c == DualChoice::Eop ? "Eop" : "EbarOp";
}

struct KData {
    KMode mode = KMode::Theory;
    std::string algebra;      // which algebra this describes (label only)
    IntMatrix presentation;   // the matrix whose coker/ker the groups come from
    FgAbGroup k0, k1;         // theory: (K_0, K_1); homology: (K^0, K^1)
    GroupHom map_in, map_out; // the two interesting arrows of the extension:
                              // theory:   map_in  : K_0(C(G^0)) -> K_0(O),  quotient
                              //           map_out : K_1(O) -> K_0(C(G^0)),  kernel inclusion
                              // homology: map_in  : K^0(C(G^0)) -> K^1(O),  quotient
                              //           map_out : K^0(O) -> K^0(C(G^0)),  kernel inclusion

    nlohmann::ordered_json to_json() const;
};

KData cp_k_theory(const DirectedGraph& g);
KData cp_k_homology(const DirectedGraph& g);

// K-data of the chosen dual algebra.  Eop goes through the opposite graph's
// own defining extension (and needs no sinks, for injectivity of the relevant
// action); EbarOp goes through the transpose functor applied to the K-data of
// the algebra itself (and needs no sources).
KData dual_k_data(const DirectedGraph& g, DualChoice choice);

// vertex-space duality pairing data: both classes are diagonal over C(G^0)
struct PairingData {
    IntMatrix mu;    // identity on the vertex space
    IntMatrix beta;  // identity on the vertex space
    int degree_shift = 0;
};
PairingData make_pairing(const DirectedGraph& g);

// one product of a vertex class with an edge-module class
struct CapProduct {
    std::string label;
    bool available = false;    // false if the hypothesis gate fails
    std::string gate_note;     // which hypothesis and which vertices block it
    IntMatrix matrix;          // edge-count matrix, rows at range, cols at source
    bool matches_adjacency = false;
};

struct CapProducts {
    CapProduct fund_e_mu, fund_eop_mu, fund_ebarop_mu;  // module-class x mu
    CapProduct beta_e, beta_eop, beta_ebarop;           // beta x module-class
    bool mu_family_consistent = false;    // available mu-products all equal
    bool beta_family_consistent = false;  // available beta-products all equal
};
CapProducts cap_products(const DirectedGraph& g);

// transpose functor on a K_0 class given by integer projection data: the
// matrix transposes and the algebra flips to its opposite
struct ProjectionClass {
    IntMatrix p;
    std::string algebra;
    bool opposite = false;
};
ProjectionClass transpose_projection_class(const ProjectionClass& c);

}  // namespace cpk
