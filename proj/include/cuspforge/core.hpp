#pragma once

// Number types and the exception hierarchy shared by every cuspforge module.

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace cuspforge {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad encodings, invalid parameters).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A truncated series cannot answer an order or coefficient query.
class PrecisionExhausted : public Error {
public:
    using Error::Error;
};

/// Newton polygon edge polynomial without a full set of rational roots.
class IrrationalCoefficient : public Error {
public:
    using Error::Error;
};

/// Inconsistent blow-up / blow-down bookkeeping on a configuration.
class SurfaceError : public Error {
public:
    using Error::Error;
};

inline Integer gcd(const Integer& a, const Integer& b)
{
    return boost::multiprecision::gcd(a, b);
}

inline std::string to_string(const Integer& v) { return v.str(); }

inline std::string to_string(const Rational& v) { return v.str(); }

/// Narrowing conversion that refuses to lose information.
inline std::int64_t to_int64(const Integer& v)
{
    if (v > Integer(INT64_MAX) || v < Integer(INT64_MIN)) {
        throw InvalidInput("integer " + v.str() + " does not fit in 64 bits");
    }
    return v.convert_to<std::int64_t>();
}

/// Exact square root when `v` is a perfect square.
inline std::optional<Integer> exact_sqrt(const Integer& v)
{
    if (v < 0) {
        return std::nullopt;
    }
    Integer r = boost::multiprecision::sqrt(v);
    if (r * r != v) {
        return std::nullopt;
    }
    return r;
}

inline Integer ipow(const Integer& base, unsigned exp)
{
    return boost::multiprecision::pow(base, exp);
}

} // namespace cuspforge
