#pragma once
// Finitely generated abelian groups presented as Z^gens / colspan(rel), and
// homomorphisms between such presentations, with everything decided exactly:
// well-definedness, equality, composition, isomorphism certificates, exactness
// of a two-arrow segment, and solving for an unknown hom under commutation
// constraints (one integer linear system over all unknowns).

#include <optional>
#include <string>
#include <vector>

#include "cpk/intmatrix.hpp"
#include "cpk/smith.hpp"

#include <nlohmann/json.hpp>

namespace cpk {

struct FgAbGroup {
    int gens = 0;
    IntMatrix rel;  // gens x nrels; the subgroup of relations is its column span

    // canonical invariants (computed on construction)
    int free_rank = 0;
    std::vector<bigint> torsion;  // elementary divisors > 1, divisibility order

    static FgAbGroup free_group(int n);
    static FgAbGroup from_relations(const IntMatrix& rel);
    static FgAbGroup trivial() { return free_group(0); }

    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }

    // same abstract isomorphism type (not same presentation)
    bool same_type(const FgAbGroup& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }

    // does this column vector represent 0 in the quotient?
    bool element_is_zero(const IntMatrix& col) const;

    nlohmann::ordered_json to_json() const;
};

struct GroupHom {
    FgAbGroup dom, cod;
    IntMatrix m;  // cod.gens x dom.gens, acting on presentation generators

    static GroupHom make(const FgAbGroup& dom, const FgAbGroup& cod, const IntMatrix& m);
    static GroupHom identity(const FgAbGroup& g) {
        return make(g, g, IntMatrix::identity(g.gens));
    }
    static GroupHom zero(const FgAbGroup& dom, const FgAbGroup& cod) {
        return make(dom, cod, IntMatrix(cod.gens, dom.gens));
    }
};

// does m map relations into relations (descends to the quotients)?
bool well_defined(const GroupHom& h);

// equality as maps on the quotients (difference lands in relations)
bool homs_equal(const GroupHom& f, const GroupHom& g);

GroupHom compose(const GroupHom& g, const GroupHom& f);  // g after f

// Certified isomorphism test: well-defined + surjective + injective, each part
// decided by a Smith computation.  Returns a human-auditable reason on failure.
struct IsoCheck {
    bool well_def = false, surjective = false, injective = false;
    bool ok() const { return well_def && surjective && injective; }
    std::string reason;
};
IsoCheck is_isomorphism(const GroupHom& h);

// Exactness of  X --f--> Y --g--> Z  at Y:  im f == ker g, both decided exactly
// (composite zero into relations, and every kernel generator lies in the image).
struct ExactnessCheck {
    bool composite_zero = false;
    bool kernel_in_image = false;
    bool ok() const { return composite_zero && kernel_in_image; }
    std::string reason;
};
ExactnessCheck exact_at(const GroupHom& f, const GroupHom& g);

// One constraint  L ∘ X ∘ R == C  on an unknown hom X : dom → cod.
// Absent L means identity on cod; absent R means identity on dom.
// rhs is the matrix of C on generators (its codomain is L's codomain).
struct HomConstraint {
    std::optional<GroupHom> left;
    std::optional<GroupHom> right;
    IntMatrix rhs;
};

// Solve for X : dom → cod with all constraints holding in the target quotients.
// Unknowns: entries of X, a well-definedness witness, and one relation-witness
// per constraint; a single integer linear system decides solvability.
// The returned hom is re-verified against every constraint before returning.
std::optional<GroupHom> solve_hom_constraints(const FgAbGroup& dom, const FgAbGroup& cod,
                                              const std::vector<HomConstraint>& constraints);

}  // namespace cpk
