#include "holoq/qfunc.hpp"

#include <cmath>
#include <utility>

namespace holoq {

namespace {

using Node = QFunction::Node;
using NodePtr = QFunction::NodePtr;

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr make_leaf(NodeKind kind) {
    Node n;
    n.kind = kind;
    return make_node(std::move(n));
}

NodePtr make_unary(NodeKind kind, NodePtr child) {
    Node n;
    n.kind = kind;
    n.lhs = std::move(child);
    return make_node(std::move(n));
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs, MulSide side = MulSide::none) {
    Node n;
    n.kind = kind;
    n.side = side;
    n.lhs = std::move(lhs);
    n.rhs = std::move(rhs);
    return make_node(std::move(n));
}

NodePtr make_const(double c) {
    Node n;
    n.kind = NodeKind::real_const;
    n.value = c;
    return make_node(std::move(n));
}

NodePtr make_pow(NodePtr child, int n_exp) {
    Node n;
    n.kind = NodeKind::pow_int;
    n.exponent = n_exp;
    n.lhs = std::move(child);
    return make_node(std::move(n));
}

// --- evaluation ----------------------------------------------------------

// sin(v)/v; series below 1e-4 where the quotient is 0/0-shaped.
double sinc(double v) {
    if (v < 1e-4) {
        const double v2 = v * v;
        return 1.0 + v2 * (-1.0 / 6.0 + v2 * (1.0 / 120.0 + v2 * (-1.0 / 5040.0
                   + v2 * (1.0 / 362880.0 - v2 / 39916800.0))));
    }
    return std::sin(v) / v;
}

// sinh(v)/v with the same switch point.
double sinhc(double v) {
    if (v < 1e-4) {
        const double v2 = v * v;
        return 1.0 + v2 * (1.0 / 6.0 + v2 * (1.0 / 120.0 + v2 * (1.0 / 5040.0
                   + v2 * (1.0 / 362880.0 + v2 / 39916800.0))));
    }
    return std::sinh(v) / v;
}

// Scalar c applied to the imaginary part: x' + c*(y i + z j + u k).
Quaternion with_vector(double real_part, double c, const Quaternion& w) {
    return {real_part, c * w.y, c * w.z, c * w.u};
}

Quaternion eval_exp(const Quaternion& w) {
    const double v = vec_norm(w);
    const double ex = std::exp(w.x);
    return with_vector(ex * std::cos(v), ex * sinc(v), w);
}

Quaternion eval_sin(const Quaternion& w) {
    const double v = vec_norm(w);
    return with_vector(std::sin(w.x) * std::cosh(v), std::cos(w.x) * sinhc(v), w);
}

Quaternion eval_cos(const Quaternion& w) {
    const double v = vec_norm(w);
    return with_vector(std::cos(w.x) * std::cosh(v), -std::sin(w.x) * sinhc(v), w);
}

Quaternion eval_ln(const Quaternion& w) {
    const double v = vec_norm(w);
    const double n = norm(w);
    if (n == 0.0) throw DomainError("Ln at p = 0");
    if (v == 0.0) {
        if (w.x < 0.0) throw BranchCutError("Ln on the closed negative real axis");
        return Quaternion::real(std::log(w.x));
    }
    // theta/v with theta = atan2(v, x), the principal angle in [0, pi].
    return with_vector(std::log(n), std::atan2(v, w.x) / v, w);
}

Quaternion eval_recip(const Quaternion& w) {
    if (norm_sq(w) == 0.0) throw DomainError("reciprocal of zero");
    return inverse(w);
}

Quaternion eval_powi(Quaternion base, long long n) {
    if (n < 0) {
        if (norm_sq(base) == 0.0) throw DomainError("negative power of zero");
        base = inverse(base);
        n = -n;
    }
    Quaternion acc = Quaternion::real(1.0);
    while (n > 0) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

Quaternion eval_node(const Node& n, const Quaternion& p) {
    switch (n.kind) {
        case NodeKind::var: return p;
        case NodeKind::real_const: return Quaternion::real(n.value);
        case NodeKind::quat_const: return n.qvalue;
        case NodeKind::add: return eval_node(*n.lhs, p) + eval_node(*n.rhs, p);
        case NodeKind::sub: return eval_node(*n.lhs, p) - eval_node(*n.rhs, p);
        case NodeKind::neg: return -eval_node(*n.lhs, p);
        case NodeKind::mul: {
            const Quaternion a = eval_node(*n.lhs, p);
            const Quaternion b = eval_node(*n.rhs, p);
            return n.side == MulSide::left ? b * a : a * b;
        }
        case NodeKind::pow_int: return eval_powi(eval_node(*n.lhs, p), n.exponent);
        case NodeKind::recip: return eval_recip(eval_node(*n.lhs, p));
        case NodeKind::exp: return eval_exp(eval_node(*n.lhs, p));
        case NodeKind::ln: return eval_ln(eval_node(*n.lhs, p));
        case NodeKind::sin: return eval_sin(eval_node(*n.lhs, p));
        case NodeKind::cos: return eval_cos(eval_node(*n.lhs, p));
    }
    throw Error("corrupt expression node");
}

// --- derivative ----------------------------------------------------------

// Folding constructors keep derivative output in the closed forms users
// expect (2*p, exp(p), 2*p^-3, ...). The parser does not use them, so parse
// trees stay verbatim.

bool is_const(const NodePtr& n, double c) {
    return n->kind == NodeKind::real_const && n->value == c;
}

NodePtr fold_neg(NodePtr a);

NodePtr fold_mul(NodePtr a, NodePtr b) {
    if (a->kind == NodeKind::real_const && b->kind == NodeKind::real_const)
        return make_const(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    // real scalars commute: keep constants leftmost and merged
    if (b->kind == NodeKind::real_const) return fold_mul(b, a);
    if (a->kind == NodeKind::real_const && b->kind == NodeKind::mul &&
        b->side == MulSide::none && b->lhs->kind == NodeKind::real_const)
        return fold_mul(make_const(a->value * b->lhs->value), b->rhs);
    return make_binary(NodeKind::mul, std::move(a), std::move(b));
}

NodePtr fold_neg(NodePtr a) {
    if (a->kind == NodeKind::real_const) return make_const(-a->value);
    if (a->kind == NodeKind::neg) return a->lhs;
    if (a->kind == NodeKind::mul && a->side == MulSide::none &&
        a->lhs->kind == NodeKind::real_const)
        return fold_mul(make_const(-a->lhs->value), a->rhs);
    return make_unary(NodeKind::neg, std::move(a));
}

NodePtr fold_add(NodePtr a, NodePtr b) {
    if (a->kind == NodeKind::real_const && b->kind == NodeKind::real_const)
        return make_const(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make_binary(NodeKind::add, std::move(a), std::move(b));
}

NodePtr fold_sub(NodePtr a, NodePtr b) {
    if (a->kind == NodeKind::real_const && b->kind == NodeKind::real_const)
        return make_const(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return fold_neg(std::move(b));
    return make_binary(NodeKind::sub, std::move(a), std::move(b));
}

NodePtr fold_pow(NodePtr child, int n) {
    if (n == 0) return make_const(1.0);
    if (n == 1) return child;
    return make_pow(std::move(child), n);
}

NodePtr diff(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::var: return make_const(1.0);
        case NodeKind::real_const: return make_const(0.0);
        case NodeKind::quat_const:
            throw UnsupportedNodeError("cannot differentiate a quaternion constant");
        case NodeKind::add: return fold_add(diff(n->lhs), diff(n->rhs));
        case NodeKind::sub: return fold_sub(diff(n->lhs), diff(n->rhs));
        case NodeKind::neg: return fold_neg(diff(n->lhs));
        case NodeKind::mul:
            if (n->side != MulSide::none)
                throw UnsupportedNodeError("cannot differentiate a side-tagged product");
            return fold_add(fold_mul(diff(n->lhs), n->rhs), fold_mul(n->lhs, diff(n->rhs)));
        case NodeKind::pow_int:
            if (n->exponent == 0) return make_const(0.0);
            return fold_mul(fold_mul(make_const(n->exponent), fold_pow(n->lhs, n->exponent - 1)),
                            diff(n->lhs));
        case NodeKind::recip:
            return fold_neg(fold_mul(diff(n->lhs), make_pow(n->lhs, -2)));
        case NodeKind::exp: return fold_mul(make_unary(NodeKind::exp, n->lhs), diff(n->lhs));
        case NodeKind::ln: return fold_mul(diff(n->lhs), make_unary(NodeKind::recip, n->lhs));
        case NodeKind::sin: return fold_mul(make_unary(NodeKind::cos, n->lhs), diff(n->lhs));
        case NodeKind::cos:
            return fold_neg(fold_mul(make_unary(NodeKind::sin, n->lhs), diff(n->lhs)));
    }
    throw Error("corrupt expression node");
}

bool catalog_walk(const Node& n) {
    if (n.kind == NodeKind::quat_const) return false;
    if (n.kind == NodeKind::mul && n.side != MulSide::none) return false;
    if (n.lhs && !catalog_walk(*n.lhs)) return false;
    if (n.rhs && !catalog_walk(*n.rhs)) return false;
    return true;
}

NodePtr substitute(const NodePtr& n, const NodePtr& replacement) {
    if (n->kind == NodeKind::var) return replacement;
    if (!n->lhs) return n;
    Node out = *n;
    out.lhs = substitute(n->lhs, replacement);
    if (n->rhs) out.rhs = substitute(n->rhs, replacement);
    return make_node(std::move(out));
}

bool equal_walk(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.side != b.side) return false;
    if (a.kind == NodeKind::real_const && a.value != b.value) return false;
    if (a.kind == NodeKind::quat_const && !(a.qvalue == b.qvalue)) return false;
    if (a.kind == NodeKind::pow_int && a.exponent != b.exponent) return false;
    if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs)) return false;
    if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
    if (a.lhs && !equal_walk(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !equal_walk(*a.rhs, *b.rhs)) return false;
    return true;
}

}  // namespace

QFunction QFunction::var() { return QFunction(make_leaf(NodeKind::var)); }

QFunction QFunction::constant(double c) { return QFunction(make_const(c)); }

QFunction QFunction::quat_constant(const Quaternion& q) {
    Node n;
    n.kind = NodeKind::quat_const;
    n.qvalue = q;
    return QFunction(make_node(std::move(n)));
}

bool QFunction::is_catalog() const { return catalog_walk(*root_); }

EvalResult QFunction::eval(const Quaternion& p) const {
    const Quaternion value = eval_node(*root_, p);
    const DoublingForm d = to_doubling(value);
    return {value, d.a, d.b};
}

QFunction QFunction::derivative() const { return QFunction(diff(root_)); }

QFunction QFunction::derivative(int order) const {
    QFunction out = *this;
    for (int i = 0; i < order; ++i) out = out.derivative();
    return out;
}

QFunction QFunction::compose(const QFunction& inner) const {
    return QFunction(substitute(root_, inner.root_));
}

bool QFunction::structurally_equal(const QFunction& other) const {
    return equal_walk(*root_, *other.root_);
}

QFunction operator+(const QFunction& f, const QFunction& g) {
    return QFunction(make_binary(NodeKind::add, f.root_ptr(), g.root_ptr()));
}

QFunction operator-(const QFunction& f, const QFunction& g) {
    return QFunction(make_binary(NodeKind::sub, f.root_ptr(), g.root_ptr()));
}

QFunction operator-(const QFunction& f) {
    return QFunction(make_unary(NodeKind::neg, f.root_ptr()));
}

QFunction operator*(const QFunction& f, const QFunction& g) {
    return QFunction(make_binary(NodeKind::mul, f.root_ptr(), g.root_ptr()));
}

QFunction mul_left(const QFunction& f, const QFunction& g) {
    return QFunction(make_binary(NodeKind::mul, f.root_ptr(), g.root_ptr(), MulSide::left));
}

QFunction mul_right(const QFunction& f, const QFunction& g) {
    return QFunction(make_binary(NodeKind::mul, f.root_ptr(), g.root_ptr(), MulSide::right));
}

QFunction pow_int(const QFunction& f, int n) { return QFunction(make_pow(f.root_ptr(), n)); }

QFunction recip(const QFunction& f) {
    return QFunction(make_unary(NodeKind::recip, f.root_ptr()));
}

QFunction exp(const QFunction& f) { return QFunction(make_unary(NodeKind::exp, f.root_ptr())); }
QFunction ln(const QFunction& f) { return QFunction(make_unary(NodeKind::ln, f.root_ptr())); }
QFunction sin(const QFunction& f) { return QFunction(make_unary(NodeKind::sin, f.root_ptr())); }
QFunction cos(const QFunction& f) { return QFunction(make_unary(NodeKind::cos, f.root_ptr())); }

QFunction builtin_exp() { return exp(QFunction::var()); }
QFunction builtin_ln() { return ln(QFunction::var()); }
QFunction builtin_powi(int n) { return pow_int(QFunction::var(), n); }
QFunction builtin_recip() { return recip(QFunction::var()); }
QFunction builtin_sin() { return sin(QFunction::var()); }
QFunction builtin_cos() { return cos(QFunction::var()); }

QFunction raw_conj(const QFunction& f) {
    const auto sandwich = [&](const Quaternion& unit) {
        const QFunction c = QFunction::quat_constant(unit);
        return mul_left(mul_right(f, c), c);  // unit * (f * unit)
    };
    // balanced association keeps each component a paired x+x / x-x sum, so
    // the identity is exact in floating point
    const QFunction sum = (f + sandwich(Quaternion::unit_i())) +
                          (sandwich(Quaternion::unit_j()) + sandwich(Quaternion::unit_k()));
    return QFunction::constant(-0.5) * sum;
}

Complex restrict_to_complex(const QFunction& f, const Complex& xi) {
    if (!f.is_catalog())
        throw UnsupportedNodeError("complex restriction requires a catalog tree");
    const EvalResult r = f.eval(Quaternion{xi.real(), xi.imag(), 0.0, 0.0});
    return r.phi1;
}

}  // namespace holoq
