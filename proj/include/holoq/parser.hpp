#pragma once

#include <string>
#include <string_view>

#include "holoq/qfunc.hpp"

namespace holoq {

/// Parse the expression language over the variable p:
///   operators + - * / ^ with standard precedence, ^ right-associative and
///   restricted to constant integer exponents, unary minus, parentheses,
///   calls exp(.), ln(.), sin(.), cos(.), recip(.).
/// Division desugars to multiplication by recip. No implicit multiplication.
/// Throws SyntaxError / NonIntegerExponentError / UnknownIdentifierError,
/// each carrying a byte span into `text`.
QFunction parse(std::string_view text);

/// Render a tree back to source form. parse(format(f)) is structurally
/// equal to f for every parser-producible tree.
std::string format(const QFunction& f);

/// EBNF of the expression language, as shipped in docs and CLI help.
std::string_view grammar_text();

}  // namespace holoq
