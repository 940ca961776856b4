#pragma once

#include "pdiff/term.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace pdiff {

/// The standard commutative-ring axioms, with subtraction written as (-1)*.
enum class RingAxiom {
    AddAssoc,     // (x + y) + z = x + (y + z)
    AddComm,      // x + y = y + x
    AddZero,      // x + 0 = x
    AddInverse,   // x + -1*x = 0
    MulAssoc,     // (x*y)*z = x*(y*z)
    MulComm,      // x*y = y*x
    MulOne,       // x*1 = x
    DistribLeft,  // x*(y + z) = x*y + x*z
    DistribRight  // (x + y)*z = x*z + y*z
};

/// The four differentiation axioms.
enum class DiffAxiom {
    DiffAdd,  // D[x](x + y) = 1
    DiffMul,  // D[x](y*x) = y
    Chain2,   // binary chain rule
    Commute   // D[y](D[x](f(x,y))) = D[x](D[y](f(x,y)))
};

/// Addition/multiplication table instance r1 op r2 = r3; the checker verifies
/// the arithmetic side condition.
struct ConstTable {
    char op;  // '+' or '*'
    Rat a, b, result;
    bool operator==(const ConstTable& o) const = default;
};

using AxiomId = std::variant<RingAxiom, DiffAxiom, ConstTable>;

struct Equation {
    Expr lhs, rhs;
    bool operator==(const Equation& o) const = default;
};

/// The (fixed) equation of an axiom; throws on an incorrect constant table.
Equation axiom_equation(const AxiomId& id);
std::string axiom_name(const AxiomId& id);

struct CheckError : std::runtime_error {
    std::string path;
    CheckError(const std::string& at, const std::string& msg)
        : std::runtime_error(at.empty() ? msg : "at " + at + ": " + msg), path(at) {}
};

/// Derivation tree over the equational rules: axioms closed under equality
/// rules, congruence, and both substitution rules. The conclusion of every
/// node is computable from its children; `check` recomputes and validates it.
class Proof {
public:
    enum class Rule { Axiom, Refl, Sym, Trans, CongSum, CongProd, CongApp, CongPDiff, SubstVar, SubstFn };

    Proof() = default;

    static Proof axiom(AxiomId id);
    static Proof refl(Expr e);
    static Proof sym(Proof p);
    static Proof trans(Proof a, Proof b);
    static Proof cong_sum(Proof a, Proof b);
    static Proof cong_prod(Proof a, Proof b);
    static Proof cong_app(FnVar f, std::vector<Proof> args);
    static Proof cong_pdiff(VarName binder, Proof body, Proof at);
    static Proof subst_var(Proof p, std::vector<std::pair<VarName, Expr>> bindings);
    static Proof subst_fn(Proof p, std::vector<std::pair<FnVar, Abstract>> bindings);

    bool valid() const { return node_ != nullptr; }
    Rule rule() const;
    const AxiomId& axiom_id() const;
    const Expr& refl_expr() const;
    const std::vector<Proof>& children() const;
    const FnVar& app_fn() const;
    const VarName& binder() const;
    const std::vector<std::pair<VarName, Expr>>& var_bindings() const;
    const std::vector<std::pair<FnVar, Abstract>>& fn_bindings() const;

    bool operator==(const Proof& o) const;

private:
    struct Node;
    explicit Proof(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Proof make(Rule rule, std::vector<Proof> kids);
    const Node& node() const;
    std::shared_ptr<const Node> node_;
};

/// Recomputes and returns the proven equation, or throws CheckError naming
/// the offending node. With `rtc` set, any use of the differentiation axioms
/// other than commutativity is rejected (the RTC fragment).
Equation check(const Proof& p, bool rtc = false);

/// A certificate whose conclusion is e = to_expr(canonicalize(e)), built by
/// the same recursion as canonicalize itself.
Proof certify_canonicalize(const Expr& e);

/// S-expression certificate syntax, e.g.
///   (trans (sym (axiom diff-add)) (refl "1"))
/// with embedded expressions in the term grammar, quoted.
Proof parse_proof(std::string_view text);
std::string print_proof(const Proof& p);

}  // namespace pdiff
