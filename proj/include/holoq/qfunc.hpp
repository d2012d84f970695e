#pragma once

#include <memory>
#include <string>

#include "holoq/quaternion.hpp"

namespace holoq {

/// Value of a quaternionic function together with its doubling-form split
/// psi = phi1 + phi2*j. The split is a re-labeling of the four components,
/// so from_doubling(phi1, phi2) == value bit-for-bit.
struct EvalResult {
    Quaternion value{};
    Complex phi1{};
    Complex phi2{};
};

enum class NodeKind {
    var,         // the quaternionic variable p
    real_const,  // real scalar (commutes with everything)
    quat_const,  // quaternion constant; raw mode only
    add,
    sub,
    neg,
    mul,      // side == none: catalog product; left/right: raw, order-tagged
    pow_int,  // integer power of the child, exponent may be negative
    recip,
    exp,
    ln,  // principal branch, cut on the closed negative real axis
    sin,
    cos,
};

/// Placement tag for raw-mode multiplication. none marks a catalog product
/// (operand order kept but immaterial for holomorphic operands); left/right
/// say on which side rhs multiplies lhs and make the tree non-catalog.
enum class MulSide { none, left, right };

/// Immutable expression tree over the variable p. Catalog trees (no
/// quaternion constants, no side-tagged products) evaluate inside the
/// commutative subalgebra spanned by 1 and the unit imaginary direction of
/// p, which is what makes them differentiable like their complex analogues.
/// Shared subtrees are fine; evaluation never mutates nodes.
class QFunction {
  public:
    struct Node {
        NodeKind kind = NodeKind::var;
        double value = 0.0;       // real_const
        Quaternion qvalue{};      // quat_const
        int exponent = 0;         // pow_int
        MulSide side = MulSide::none;
        std::shared_ptr<const Node> lhs;  // single child for unary kinds
        std::shared_ptr<const Node> rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    QFunction() : QFunction(var()) {}
    explicit QFunction(NodePtr root) : root_(std::move(root)) {}

    static QFunction var();
    static QFunction constant(double c);
    static QFunction quat_constant(const Quaternion& q);

    const Node& root() const { return *root_; }
    NodePtr root_ptr() const { return root_; }

    /// True when the tree contains no quat_const and no side-tagged mul.
    bool is_catalog() const;

    /// Evaluate at p. Throws DomainError/BranchCutError inside singular sets.
    EvalResult eval(const Quaternion& p) const;

    /// Derivative tree by the complex differentiation rules, with constant
    /// folding so repeated application keeps the expected closed forms.
    /// Throws UnsupportedNodeError on raw-mode trees.
    QFunction derivative() const;
    QFunction derivative(int order) const;

    /// Substitute `inner` for the variable p.
    QFunction compose(const QFunction& inner) const;

    bool structurally_equal(const QFunction& other) const;

  private:
    NodePtr root_;
};

QFunction operator+(const QFunction& f, const QFunction& g);
QFunction operator-(const QFunction& f, const QFunction& g);
QFunction operator-(const QFunction& f);
QFunction operator*(const QFunction& f, const QFunction& g);

/// Raw products with explicit placement: mul_left is g*f, mul_right is f*g.
/// Both tag the node and thereby leave the catalog.
QFunction mul_left(const QFunction& f, const QFunction& g);
QFunction mul_right(const QFunction& f, const QFunction& g);

QFunction pow_int(const QFunction& f, int n);
QFunction recip(const QFunction& f);
QFunction exp(const QFunction& f);
QFunction ln(const QFunction& f);
QFunction sin(const QFunction& f);
QFunction cos(const QFunction& f);

/// Builtin catalog: complex holomorphic prototypes with the variable
/// replaced by p as a whole.
QFunction builtin_exp();
QFunction builtin_ln();
QFunction builtin_powi(int n);
QFunction builtin_recip();
QFunction builtin_sin();
QFunction builtin_cos();

/// Quaternionic conjugation of f, built from raw parts via
/// conj(q) = -(q + i*q*i + j*q*j + k*q*k)/2. Non-catalog by construction;
/// the stock negative control for the holomorphy checker.
QFunction raw_conj(const QFunction& f);

/// Evaluate a catalog tree on the complex plane: p = (re, im, 0, 0).
/// phi2 vanishes there; returns phi1. Throws UnsupportedNodeError on raw
/// trees and propagates evaluation errors.
Complex restrict_to_complex(const QFunction& f, const Complex& xi);

}  // namespace holoq
