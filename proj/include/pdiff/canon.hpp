#pragma once

#include "pdiff/poly.hpp"
#include "pdiff/term.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace pdiff {

/// Derivative multi-index over the argument positions of a function variable,
/// kept as a non-decreasing sequence so that structural equality realizes
/// permutation equivalence of derivative orders.
class DerivIndex {
public:
    DerivIndex() = default;
    /// Sorts the positions; each must lie in [0, arity).
    DerivIndex(std::vector<int> positions, int arity);

    const std::vector<int>& positions() const { return pos_; }
    int order() const { return static_cast<int>(pos_.size()); }
    /// The index for one more derivative at position i, re-sorted.
    DerivIndex with(int i, int arity) const;

    bool operator==(const DerivIndex& o) const { return pos_ == o.pos_; }
    auto operator<=>(const DerivIndex& o) const = default;
    std::string str() const;

private:
    std::vector<int> pos_;
};

/// Canonical forms: rationals, sums and products of canonical forms, and
/// atomic expressions (variables and derivative-indexed applications
/// f_m(c0,...,c_{n-1})). Atoms are the canonical forms whose tag is Var or
/// FApp. Immutable shared trees; equality is structural.
class Canon {
public:
    enum class Tag { Const, Var, FApp, Sum, Prod };

    Canon() = default;

    static Canon constant(Rat r);
    static Canon variable(VarName x);
    static Canon fapp(FnVar f, DerivIndex m, std::vector<Canon> args);
    static Canon sum(Canon a, Canon b);
    static Canon product(Canon a, Canon b);

    bool valid() const { return node_ != nullptr; }
    Tag tag() const;
    bool is_atom() const { return tag() == Tag::Var || tag() == Tag::FApp; }

    const Rat& const_value() const;
    const VarName& var_name() const;
    const FnVar& fn() const;
    const DerivIndex& deriv_index() const;
    const std::vector<Canon>& args() const;
    const Canon& lhs() const;
    const Canon& rhs() const;

    const std::set<VarName>& free_vars() const;
    const std::map<std::string, int>& fn_arities() const;
    int size() const;

    bool operator==(const Canon& o) const { return compare(*this, o) == 0; }
    static int compare(const Canon& a, const Canon& b);

    /// Printed in the f_[0,1](...) syntax.
    std::string str() const;

private:
    struct Node;
    explicit Canon(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Canon make_pair_node(Tag tag, Canon a, Canon b);
    const Node& node() const;
    std::shared_ptr<const Node> node_;
};

/// Assignment of separation variables to the equivalence classes of a finite
/// atom set: equal names exactly characterise the equivalence.
class SepAssign {
public:
    /// Partitions `atoms` by atom_equiv; class variables are named
    /// <prefix>0, <prefix>1, ... skipping any free variable of the atoms.
    static SepAssign build(const std::vector<Canon>& atoms, const std::string& prefix = "s");

    /// Variable of the class containing this atom, if any.
    std::optional<VarName> var_of(const Canon& atom) const;
    const std::vector<std::pair<Canon, VarName>>& classes() const { return classes_; }

private:
    std::vector<std::pair<Canon, VarName>> classes_;  // representative -> variable
};

/// Expansion of a canonical form back into the expression language; f_m
/// becomes the derivative tower over f(x0,...,x_{n-1}) instantiated at the
/// arguments.
Expr to_expr(const Canon& c);

/// Immediate atomic subexpressions, first-occurrence order, deduplicated.
std::vector<Canon> immediate_atoms(const Canon& c);

/// Capture-free substitution of a canonical form for a variable; canonical
/// forms are closed under this.
Canon canon_subst(const Canon& c, const VarName& x, const Canon& value);

/// Folds sums and products of two constants along the spine of a canonical
/// form (atoms are left untouched). Canonicalization keeps its results
/// normalized under this, so closed expressions reduce to single constants.
Canon fold_constants(const Canon& c);

/// A canonical form c' with |- PDiff(x. c, at) = c'.
Canon deriv_at(const Canon& c, const VarName& x, const Canon& at);

/// A canonical form CF(e) with |- e = CF(e); function variables and free
/// variables of the result are contained in those of e.
Canon canonicalize(const Expr& e);

bool atom_equiv(const Canon& a, const Canon& b);
bool canon_equiv(const Canon& a, const Canon& b);

/// Node polynomial: the canonical form with each immediate-atom class
/// replaced by its separation variable. Every immediate atom of c must be
/// covered by w.
Poly node_poly(const Canon& c, const SepAssign& w);

/// Decides provable equality in the theory of partial differentiation.
bool decide(const Expr& e1, const Expr& e2);

/// Least superset closed under immediate atomic subexpressions and under
/// taking the arguments of f_m applications.
std::vector<Canon> saturate(std::vector<Canon> set);

}  // namespace pdiff
