#pragma once

#include <string_view>

#include "lofdesign/measures.hpp"

namespace lofd {

/// Parses a regression function of x. Grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'x' | 'T' ['_'] integer '(' expr ')' | '(' expr ')'
///
/// `T_j(.)` is the Chebyshev polynomial of the first kind. Throws
/// std::invalid_argument with the offending position on malformed input.
RegressionFunction parse_expression(std::string_view text);

}  // namespace lofd
