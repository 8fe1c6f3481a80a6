#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dimerlab {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Thrown for malformed input and violated preconditions.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::int64_t narrow(const Integer& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error("integer overflow while narrowing to 64 bits");
    return static_cast<std::int64_t>(v);
}

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    auto parse_int = [&](const std::string& t) {
        if (t.empty()) throw Error("bad rational '" + s + "'");
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) throw Error("bad rational '" + s + "'");
        for (std::size_t j = i; j < t.size(); ++j)
            if (t[j] < '0' || t[j] > '9') throw Error("bad rational '" + s + "'");
        return Integer(t[0] == '+' ? t.substr(1) : t);
    };
    if (slash == std::string::npos) return Rational(parse_int(s));
    Integer den = parse_int(s.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + s + "'");
    return Rational(parse_int(s.substr(0, slash)), den);
}

// Lattice point / integer vector in the plane.
struct Pt {
    std::int64_t x = 0, y = 0;
    auto operator<=>(const Pt&) const = default;
    Pt operator+(const Pt& o) const { return {x + o.x, y + o.y}; }
    Pt operator-(const Pt& o) const { return {x - o.x, y - o.y}; }
    Pt operator-() const { return {-x, -y}; }
    Pt operator*(std::int64_t k) const { return {x * k, y * k}; }
};

inline std::int64_t cross(const Pt& a, const Pt& b) { return a.x * b.y - a.y * b.x; }
inline std::int64_t dot(const Pt& a, const Pt& b) { return a.x * b.x + a.y * b.y; }
inline std::int64_t lattice_length(const Pt& v) { return std::gcd(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y); }
inline Pt primitive(const Pt& v) {
    auto g = lattice_length(v);
    return g == 0 ? v : Pt{v.x / g, v.y / g};
}
inline std::string to_string(const Pt& p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

// Exact rational point, used for tropical node positions.
struct QPt {
    Rational x, y;
    bool operator==(const QPt&) const = default;
};
inline std::string to_string(const QPt& p) { return "(" + to_string(p.x) + "," + to_string(p.y) + ")"; }

}  // namespace dimerlab
