#pragma once

#include <string>

#include "wittkit/algebra.hpp"

namespace wittkit {

/// Parses `+ - * ^` expressions over the algebra's variables. Exponents are
/// integers or fractions `(a/p^k)`, `(a/p)`, `(a/b)` with b a power of p.
/// The identifier `p` denotes the prime unless it is a variable name.
/// `line`/`column` locate the text inside a larger file for error messages.
PolyElement parse_polynomial(const std::string& text, const AlgebraPtr& alg, int line = 1, int column = 1);

}  // namespace wittkit
