#pragma once

// The three known four-cliques over Z_15, Z_21 and Z_27, byte-identical to
// certs/k15.cert, certs/k21.cert and certs/k27.cert.

#include "bijclique/certificate.hpp"

#include <string_view>
#include <vector>

namespace bijclique::known {

inline constexpr std::string_view k15_text =
    "# 4-clique in G_15: zero, identity and two further functions\n"
    "15 4\n"
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n"
    "0 1 2 3 4 5 6 7 8 9 10 11 12 13 14\n"
    "0 9 3 2 13 11 10 12 4 6 8 14 7 5 1\n"
    "0 12 4 11 10 9 5 2 6 14 7 3 13 1 8\n";

inline constexpr std::string_view k21_text =
    "# 4-clique in G_21: zero, identity and two further functions\n"
    "21 4\n"
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n"
    "0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20\n"
    "13 11 14 0 2 1 5 7 3 10 15 17 16 20 4 18 9 19 12 6 8\n"
    "14 5 4 13 9 18 2 15 6 10 17 1 11 19 8 3 7 12 0 16 20\n";

inline constexpr std::string_view k27_text =
    "# 4-clique in G_27: zero, identity and two further functions\n"
    "27 4\n"
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n"
    "0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20 21 22 23 24 25 26\n"
    "12 17 11 20 5 19 1 9 0 13 15 18 6 10 22 3 2 8 14 25 4 24 21 16 7 23 26\n"
    "4 6 5 15 19 18 3 13 24 16 20 1 7 0 8 11 9 17 26 21 2 12 14 22 25 23 10\n";

inline Certificate k15() { return Certificate::check(parse_certificate(k15_text)); }
inline Certificate k21() { return Certificate::check(parse_certificate(k21_text)); }
inline Certificate k27() { return Certificate::check(parse_certificate(k27_text)); }

inline std::vector<Certificate> all() { return {k15(), k21(), k27()}; }

} // namespace bijclique::known
