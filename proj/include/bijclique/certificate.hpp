#pragma once

// Clique certificates: lists of functions that are pairwise adjacent in G_k.
//
// UncheckedCertificate is well-formed (shapes and ranges) but carries no claim
// about adjacency. Certificate can only be obtained through verification, so
// everything downstream that accepts a Certificate is working from a clique.

#include "bijclique/core.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bijclique {

class UncheckedCertificate {
public:
    UncheckedCertificate(Modulus k, std::vector<ModFunction> rows) : k_(k), rows_(std::move(rows)) {
        if (rows_.empty()) throw invalid_argument("a certificate needs at least one row");
        for (const auto& r : rows_)
            if (r.modulus() != k_) throw modulus_mismatch(k_.value(), r.modulus().value());
    }

    Modulus modulus() const noexcept { return k_; }
    std::size_t size() const noexcept { return rows_.size(); }
    const std::vector<ModFunction>& rows() const noexcept { return rows_; }
    const ModFunction& operator[](std::size_t i) const { return rows_[i]; }

    friend bool operator==(const UncheckedCertificate&, const UncheckedCertificate&) = default;

private:
    Modulus k_;
    std::vector<ModFunction> rows_;
};

/// Pair (s, t), s < t, whose difference rows[t] - rows[s] takes the same value at a and b.
struct Collision {
    std::size_t s;
    std::size_t t;
    residue a;
    residue b;
    residue value;

    friend bool operator==(const Collision&, const Collision&) = default;
};

struct VerificationReport {
    bool ok = true;
    std::vector<Collision> violations;
};

/// Checks every unordered pair of rows in O(m^2 k). Reports one witness collision per failing pair.
inline VerificationReport verify(const UncheckedCertificate& c) {
    VerificationReport report;
    const Modulus k = c.modulus();
    const std::size_t n = k.value();
    constexpr residue unseen = std::numeric_limits<residue>::max();
    std::vector<residue> first_at(n);
    for (std::size_t s = 0; s < c.size(); ++s) {
        for (std::size_t t = s + 1; t < c.size(); ++t) {
            std::fill(first_at.begin(), first_at.end(), unseen);
            for (residue x = 0; x < n; ++x) {
                const residue d = k.sub(c[t][x], c[s][x]);
                if (first_at[d] != unseen) {
                    report.violations.push_back({s, t, first_at[d], x, d});
                    break;
                }
                first_at[d] = x;
            }
        }
    }
    report.ok = report.violations.empty();
    return report;
}

class verification_failed : public error {
public:
    explicit verification_failed(VerificationReport report)
        : error(describe(report)), report_(std::move(report)) {}

    const VerificationReport& report() const noexcept { return report_; }

private:
    static std::string describe(const VerificationReport& r) {
        std::string s = "certificate does not verify: " + std::to_string(r.violations.size()) +
                        " violating pair(s)";
        if (!r.violations.empty()) {
            const auto& v = r.violations.front();
            s += ", first (" + std::to_string(v.s) + ", " + std::to_string(v.t) + ") at points " +
                 std::to_string(v.a) + " and " + std::to_string(v.b);
        }
        return s;
    }
    VerificationReport report_;
};

/// A verified clique in G_k.
class Certificate {
public:
    /// Throws verification_failed with the full report if c is not a clique.
    static Certificate check(UncheckedCertificate c) {
        auto report = verify(c);
        if (!report.ok) throw verification_failed(std::move(report));
        return Certificate(std::move(c));
    }

    static std::optional<Certificate> try_check(UncheckedCertificate c) {
        if (!verify(c).ok) return std::nullopt;
        return Certificate(std::move(c));
    }

    Modulus modulus() const noexcept { return c_.modulus(); }
    std::size_t size() const noexcept { return c_.size(); }
    const std::vector<ModFunction>& rows() const noexcept { return c_.rows(); }
    const ModFunction& operator[](std::size_t i) const { return c_[i]; }
    const UncheckedCertificate& unchecked() const noexcept { return c_; }

    friend bool operator==(const Certificate&, const Certificate&) = default;

private:
    explicit Certificate(UncheckedCertificate c) : c_(std::move(c)) {}
    UncheckedCertificate c_;
};

/// Canonical representative: rows[0] = 0, rows[1] = identity, rows[t](0) = 0 for t >= 2,
/// rows 2.. sorted lexicographically. Equivalent under translation, domain relabeling and
/// constant shifts, so it is a clique whenever c is.
inline Certificate normalize(const Certificate& c) {
    if (c.size() < 2) throw invalid_argument("normalize needs at least two rows");
    const Modulus k = c.modulus();
    const ModFunction base = c[0];
    std::vector<ModFunction> rows;
    rows.reserve(c.size());
    for (const auto& r : c.rows()) rows.push_back(difference(r, base));

    const ModFunction relabel = inverse(rows[1]);
    for (auto& r : rows) r = precompose(r, relabel);

    for (std::size_t t = 2; t < rows.size(); ++t) rows[t] = shift(rows[t], k.sub(0, rows[t][0]));
    std::sort(rows.begin() + 2, rows.end());
    return Certificate::check(UncheckedCertificate(k, std::move(rows)));
}

inline bool is_normalized(const Certificate& c) {
    if (c.size() < 2) return false;
    const Modulus k = c.modulus();
    if (c[0] != ModFunction::zero(k) || c[1] != ModFunction::identity(k)) return false;
    for (std::size_t t = 2; t < c.size(); ++t) {
        if (c[t][0] != 0) return false;
        if (t > 2 && !(c[t - 1] < c[t])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Text format
//
//   # optional comment lines
//   k m
//   <k residues>     (m lines)
//
// Fields are base-10 and separated by single spaces in canonical output; the
// parser also accepts runs of spaces/tabs, CRLF line ends, blank lines and
// comments anywhere.

namespace detail {

struct Token {
    std::uint64_t value;
    std::size_t column;
};

inline std::vector<Token> tokenize_line(std::string_view line, std::size_t lineno) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char ch = line[i];
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            ++i;
            continue;
        }
        if (ch < '0' || ch > '9')
            throw parse_error(lineno, i + 1, std::string("unexpected character '") + ch + "'");
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), v);
        if (ec != std::errc{}) throw parse_error(lineno, i + 1, "integer out of range");
        const std::size_t end = static_cast<std::size_t>(ptr - line.data());
        if (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r')
            throw parse_error(lineno, end + 1, std::string("unexpected character '") + line[end] + "'");
        out.push_back({v, i + 1});
        i = end;
    }
    return out;
}

} // namespace detail

inline UncheckedCertificate parse_certificate(std::string_view text) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    std::optional<Modulus> k;
    std::uint64_t m = 0;
    std::size_t header_line = 0;
    std::vector<ModFunction> rows;

    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineno;
        if (!line.empty() && line.front() == '#') continue;
        const auto tokens = detail::tokenize_line(line, lineno);
        if (tokens.empty()) continue;

        if (!k) {
            if (tokens.size() != 2)
                throw parse_error(lineno, 1, "header must be \"k m\", found " +
                                                 std::to_string(tokens.size()) + " field(s)");
            if (tokens[0].value < 2 || tokens[0].value > Modulus::max_value)
                throw parse_error(lineno, tokens[0].column, "modulus must be in [2, 2^32)");
            if (tokens[1].value < 1) throw parse_error(lineno, tokens[1].column, "row count must be at least 1");
            k.emplace(tokens[0].value);
            m = tokens[1].value;
            header_line = lineno;
            continue;
        }

        if (rows.size() == m)
            throw parse_error(lineno, 1, "more rows than the " + std::to_string(m) + " declared in the header");
        if (tokens.size() != k->value())
            throw parse_error(lineno, 1, "row has " + std::to_string(tokens.size()) + " value(s), expected " +
                                             std::to_string(k->value()));
        std::vector<residue> values(tokens.size());
        for (std::size_t j = 0; j < tokens.size(); ++j) {
            if (tokens[j].value >= k->value())
                throw parse_error(lineno, tokens[j].column,
                                  "value " + std::to_string(tokens[j].value) + " is outside [0, " +
                                      std::to_string(k->value()) + ")");
            values[j] = static_cast<residue>(tokens[j].value);
        }
        rows.emplace_back(*k, std::move(values));
    }

    if (!k) throw parse_error(lineno + 1, 1, "missing \"k m\" header");
    if (rows.size() != m)
        throw parse_error(lineno + 1, 1, "header on line " + std::to_string(header_line) + " declares " +
                                             std::to_string(m) + " row(s), found " + std::to_string(rows.size()));
    return UncheckedCertificate(*k, std::move(rows));
}

inline std::string serialize(const UncheckedCertificate& c) {
    std::ostringstream os;
    os << c.modulus().value() << ' ' << c.size() << '\n';
    for (const auto& r : c.rows()) os << r << '\n';
    return os.str();
}

inline std::string serialize(const Certificate& c) { return serialize(c.unchecked()); }

inline UncheckedCertificate load_certificate(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_certificate(buf.str());
    } catch (const parse_error& e) {
        throw parse_error(e.line(), e.column(), e.message(), path.string());
    }
}

inline void save_certificate(const std::filesystem::path& path, const Certificate& c) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot write " + path.string());
    out << serialize(c);
    if (!out) throw error("write failed for " + path.string());
}

} // namespace bijclique
