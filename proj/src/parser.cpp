#include "holoq/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

namespace holoq {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    Span span;
    double value = 0.0;      // number
    std::string_view text{}; // ident
};

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const auto push = [&](Tok kind, std::size_t begin, std::size_t end) {
        out.push_back({kind, {begin, end}});
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t begin = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i < text.size() && text[i] == '.') {
                ++i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                    i = j;
                    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                        ++i;
                }
            }
            Token t{Tok::number, {begin, i}};
            const auto res =
                std::from_chars(text.data() + begin, text.data() + i, t.value);
            if (res.ec != std::errc{})
                throw SyntaxError({begin, i}, "malformed numeric literal");
            out.push_back(t);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t begin = i;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                ++i;
            Token t{Tok::ident, {begin, i}};
            t.text = text.substr(begin, i - begin);
            out.push_back(t);
            continue;
        }
        switch (c) {
            case '+': push(Tok::plus, i, i + 1); break;
            case '-': push(Tok::minus, i, i + 1); break;
            case '*': push(Tok::star, i, i + 1); break;
            case '/': push(Tok::slash, i, i + 1); break;
            case '^': push(Tok::caret, i, i + 1); break;
            case '(': push(Tok::lparen, i, i + 1); break;
            case ')': push(Tok::rparen, i, i + 1); break;
            default:
                throw SyntaxError({i, i + 1},
                                  std::string("unexpected character '") + c + "'");
        }
        ++i;
    }
    out.push_back({Tok::end, {text.size(), text.size()}});
    return out;
}

bool contains_var(const QFunction::Node& n) {
    if (n.kind == NodeKind::var) return true;
    if (n.lhs && contains_var(*n.lhs)) return true;
    if (n.rhs && contains_var(*n.rhs)) return true;
    return false;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

    QFunction run() {
        QFunction f = parse_expr();
        if (peek().kind != Tok::end)
            throw SyntaxError(peek().span,
                              "unexpected trailing input (implicit multiplication is not "
                              "supported)");
        return f;
    }

  private:
    const Token& peek() const { return tokens_[pos_]; }
    Token advance() { return tokens_[pos_++]; }
    bool accept(Tok kind) {
        if (peek().kind != kind) return false;
        ++pos_;
        return true;
    }

    QFunction parse_expr() {
        QFunction lhs = parse_term();
        while (true) {
            if (accept(Tok::plus)) {
                QFunction rhs = parse_term();
                // canonicalize a + -b as a - b; the printer renders that
                // shape as a subtraction, so round-trips stay structural
                if (rhs.root().kind == NodeKind::neg)
                    lhs = lhs - QFunction(rhs.root().lhs);
                else
                    lhs = lhs + rhs;
            } else if (accept(Tok::minus)) {
                lhs = lhs - parse_term();
            } else {
                return lhs;
            }
        }
    }

    QFunction parse_term() {
        QFunction lhs = parse_factor();
        while (true) {
            if (accept(Tok::star))
                lhs = lhs * parse_factor();
            else if (accept(Tok::slash))
                lhs = lhs * recip(parse_factor());
            else
                return lhs;
        }
    }

    QFunction parse_factor() {
        if (accept(Tok::minus)) {
            QFunction operand = parse_factor();
            // fold a minus applied directly to a literal, so "-3" is a constant
            if (operand.root().kind == NodeKind::real_const)
                return QFunction::constant(-operand.root().value);
            return -operand;
        }
        return parse_power();
    }

    QFunction parse_power() {
        QFunction base = parse_atom();
        if (!accept(Tok::caret)) return base;
        const Span exp_begin = peek().span;
        QFunction exponent = parse_factor();
        const Span exp_span{exp_begin.begin, tokens_[pos_ - 1].span.end};
        if (contains_var(exponent.root()))
            throw NonIntegerExponentError(exp_span, "exponent must be a constant integer");
        double value = 0.0;
        try {
            value = exponent.eval(Quaternion{}).value.x;
        } catch (const Error&) {
            throw NonIntegerExponentError(exp_span, "exponent does not evaluate to a number");
        }
        if (!std::isfinite(value) || std::nearbyint(value) != value ||
            std::abs(value) > 1e9)
            throw NonIntegerExponentError(exp_span, "exponent must be a constant integer");
        return pow_int(base, static_cast<int>(value));
    }

    QFunction parse_atom() {
        const Token t = advance();
        switch (t.kind) {
            case Tok::number: return QFunction::constant(t.value);
            case Tok::lparen: {
                QFunction inner = parse_expr();
                if (!accept(Tok::rparen))
                    throw SyntaxError(peek().span, "expected ')'");
                return inner;
            }
            case Tok::ident: {
                if (t.text == "p") return QFunction::var();
                if (t.text == "exp" || t.text == "ln" || t.text == "sin" ||
                    t.text == "cos" || t.text == "recip") {
                    if (!accept(Tok::lparen))
                        throw SyntaxError(peek().span,
                                          "expected '(' after function name");
                    QFunction inner = parse_expr();
                    if (!accept(Tok::rparen))
                        throw SyntaxError(peek().span, "expected ')'");
                    if (t.text == "exp") return exp(inner);
                    if (t.text == "ln") return ln(inner);
                    if (t.text == "sin") return sin(inner);
                    if (t.text == "cos") return cos(inner);
                    return recip(inner);
                }
                throw UnknownIdentifierError(
                    t.span, "unknown identifier '" + std::string(t.text) + "'");
            }
            default:
                throw SyntaxError(t.span, "expected a number, 'p', a function call or '('");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// --- formatting -----------------------------------------------------------

// Binding strengths used by the printer. Negative literals print with a
// leading '-' and therefore bind like a unary minus.
constexpr int kPrecAdd = 1;
constexpr int kPrecMul = 2;
constexpr int kPrecNeg = 3;
constexpr int kPrecPow = 4;
constexpr int kPrecAtom = 5;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int node_prec(const QFunction::Node& n) {
    switch (n.kind) {
        case NodeKind::add:
        case NodeKind::sub: return kPrecAdd;
        case NodeKind::mul: return n.side == MulSide::none ? kPrecMul : kPrecAtom;
        case NodeKind::neg: return kPrecNeg;
        case NodeKind::pow_int: return kPrecPow;
        case NodeKind::real_const:
            return std::signbit(n.value) ? kPrecNeg : kPrecAtom;
        default: return kPrecAtom;
    }
}

void print_node(const QFunction::Node& n, std::string& out);

void print_child(const QFunction::Node& child, int min_prec, std::string& out) {
    const bool parens = node_prec(child) < min_prec;
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

void print_call(const char* name, const QFunction::Node& inner, std::string& out) {
    out += name;
    out += '(';
    print_node(inner, out);
    out += ')';
}

void print_node(const QFunction::Node& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::var: out += 'p'; return;
        case NodeKind::real_const: out += format_double(n.value); return;
        case NodeKind::quat_const:
            // display form only; quaternion literals are not in the grammar
            out += "quat(" + format_double(n.qvalue.x) + ", " + format_double(n.qvalue.y) +
                   ", " + format_double(n.qvalue.z) + ", " + format_double(n.qvalue.u) + ")";
            return;
        case NodeKind::add:
            print_child(*n.lhs, kPrecAdd, out);
            // a + -b reads as a subtraction
            if (n.rhs->kind == NodeKind::neg) {
                out += " - ";
                print_child(*n.rhs->lhs, kPrecAdd + 1, out);
                return;
            }
            out += " + ";
            print_child(*n.rhs, kPrecAdd + 1, out);
            return;
        case NodeKind::sub:
            print_child(*n.lhs, kPrecAdd, out);
            out += " - ";
            print_child(*n.rhs, kPrecAdd + 1, out);
            return;
        case NodeKind::mul:
            if (n.side != MulSide::none) {
                // display form only, mirrors the raw constructors
                out += n.side == MulSide::left ? "mul_left(" : "mul_right(";
                print_node(*n.lhs, out);
                out += ", ";
                print_node(*n.rhs, out);
                out += ')';
                return;
            }
            print_child(*n.lhs, kPrecMul, out);
            out += " * ";
            print_child(*n.rhs, kPrecMul + 1, out);
            return;
        case NodeKind::neg:
            out += '-';
            print_child(*n.lhs, kPrecNeg, out);
            return;
        case NodeKind::pow_int:
            print_child(*n.lhs, kPrecAtom, out);
            out += '^';
            out += std::to_string(n.exponent);
            return;
        case NodeKind::recip: print_call("recip", *n.lhs, out); return;
        case NodeKind::exp: print_call("exp", *n.lhs, out); return;
        case NodeKind::ln: print_call("ln", *n.lhs, out); return;
        case NodeKind::sin: print_call("sin", *n.lhs, out); return;
        case NodeKind::cos: print_call("cos", *n.lhs, out); return;
    }
}

}  // namespace

QFunction parse(std::string_view text) { return Parser(text).run(); }

std::string format(const QFunction& f) {
    std::string out;
    print_node(f.root(), out);
    return out;
}

std::string_view grammar_text() {
    return R"ebnf(expr     = term { ("+" | "-") term } ;
term     = factor { ("*" | "/") factor } ;
factor   = "-" factor | power ;
power    = atom [ "^" exponent ] ;
exponent = factor ;                 (* must fold to a constant integer *)
atom     = number | "p" | call | "(" expr ")" ;
call     = ("exp" | "ln" | "sin" | "cos" | "recip") "(" expr ")" ;
number   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
)ebnf";
}

}  // namespace holoq
