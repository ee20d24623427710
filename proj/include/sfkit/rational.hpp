#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace sfkit {

// Arbitrary-precision integers and exact rationals. All combinatorial
// identities in this library are exact; nothing here touches floating point.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int rational_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int rational_den(const Rational& r) { return boost::multiprecision::denominator(r); }

/// A fraction p/q with 0 < p < q and gcd(p,q) = 1. The constructor rejects
/// anything else instead of silently reducing, so a ReducedFraction is a
/// certificate, not just a value.
class ReducedFraction {
public:
    ReducedFraction(Int p, Int q) : p_(std::move(p)), q_(std::move(q)) {
        if (p_ <= 0 || p_ >= q_)
            throw std::domain_error("ReducedFraction: need 0 < p < q, got " + to_string());
        if (boost::multiprecision::gcd(p_, q_) != 1)
            throw std::domain_error("ReducedFraction: not coprime: " + to_string());
    }
    ReducedFraction(long long p, long long q) : ReducedFraction(Int(p), Int(q)) {}

    const Int& num() const { return p_; }
    const Int& den() const { return q_; }

    Rational value() const { return Rational(p_, q_); }

    /// (q-p)/q, the weight of the opposite flag. Coprimality is inherited.
    ReducedFraction complement_fraction() const { return ReducedFraction(q_ - p_, q_); }

    bool operator==(const ReducedFraction& o) const { return p_ == o.p_ && q_ == o.q_; }
    bool operator!=(const ReducedFraction& o) const { return !(*this == o); }

    std::string to_string() const { return p_.str() + "/" + q_.str(); }

private:
    Int p_, q_;
};

} // namespace sfkit
