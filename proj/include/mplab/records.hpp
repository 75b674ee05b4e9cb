#pragma once

#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mplab/arith.hpp"
#include "mplab/error.hpp"
#include "mplab/search.hpp"

namespace mplab {

// Record grammar, one per line:
//   record := "k=" INT ";" WS "m=" factor ("*" factor)* (";" WS "src=" TEXT)?
//   factor := INT ("^" INT)?
// Whitespace around '*' and after ';' is optional.

struct MultiperfectRecord {
    Factorization m;
    mpz_class k;
    std::string source;
    std::size_t line = 0;  // 1-based line in the source file, 0 if not from a file
};

class RecordError : public DomainError {
public:
    enum class Kind { syntax, composite_prime, validation };

    RecordError(Kind kind, std::size_t column, const std::string& what)
        : DomainError(what), kind_(kind), column_(column) {}

    Kind kind() const noexcept { return kind_; }
    /// 1-based column of the offending token (syntax and prime errors).
    std::size_t column() const noexcept { return column_; }

private:
    Kind kind_;
    std::size_t column_;
};

namespace detail {

class RecordScanner {
public:
    explicit RecordScanner(std::string_view text) : text_(text) {}

    std::size_t column() const { return pos_ + 1; }
    bool at_end() const { return pos_ >= text_.size(); }

    void skip_ws() {
        while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    void expect(std::string_view literal) {
        if (text_.substr(pos_, literal.size()) != literal) fail("expected '" + std::string(literal) + "'");
        pos_ += literal.size();
    }

    bool accept(char c) {
        if (!at_end() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::pair<mpz_class, std::size_t> integer() {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return {mpz_class(std::string(text_.substr(start, pos_ - start))), start + 1};
    }

    std::string_view rest() {
        auto r = text_.substr(pos_);
        pos_ = text_.size();
        return r;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw RecordError(RecordError::Kind::syntax, column(),
                          "syntax error at column " + std::to_string(column()) + ": " + message);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

/// Parses and validates one record. Throws RecordError on bad syntax, a
/// composite prime token, or sigma(m) != k*m.
inline MultiperfectRecord parse_record(std::string_view line) {
    using Kind = RecordError::Kind;
    detail::RecordScanner in(detail::trim(line));

    in.expect("k=");
    auto [k, k_col] = in.integer();
    in.expect(";");
    in.skip_ws();
    in.expect("m=");

    std::vector<PrimePower> factors;
    do {
        in.skip_ws();
        auto [p, p_col] = in.integer();
        std::uint32_t e = 1;
        if (in.accept('^')) {
            auto [exp, e_col] = in.integer();
            if (exp < 1 || !mpz_fits_uint_p(exp.get_mpz_t()))
                throw RecordError(Kind::syntax, e_col, "syntax error at column " + std::to_string(e_col) +
                                                           ": exponent must be a positive machine integer");
            e = static_cast<std::uint32_t>(exp.get_ui());
        }
        if (!is_prime(p))
            throw RecordError(Kind::composite_prime, p_col,
                              "factor " + p.get_str() + " at column " + std::to_string(p_col) + " is not prime");
        factors.push_back({p, e});
        in.skip_ws();
    } while (in.accept('*'));

    MultiperfectRecord rec;
    if (in.accept(';')) {
        in.skip_ws();
        in.expect("src=");
        rec.source = std::string(detail::trim(in.rest()));
    }
    if (!in.at_end()) in.fail("unexpected trailing text");

    rec.m = Factorization::from_unordered(std::move(factors));
    rec.k = k;
    if (k < 2) throw RecordError(Kind::validation, k_col, "validation failed: k must be >= 2, got " + k.get_str());
    const mpz_class value = rec.m.value();
    const mpz_class s = sigma(rec.m);
    if (s != k * value)
        throw RecordError(Kind::validation, 0,
                          "validation failed for m = " + value.get_str() + ": sigma(m) = " + s.get_str() +
                              " != k*m = " + mpz_class(k * value).get_str());
    return rec;
}

/// Canonical text for a record, e.g. "k=2; m=2 * 3; src=search".
inline std::string format_record(const MultiperfectRecord& rec) {
    std::string out = "k=" + rec.k.get_str() + "; m=" + to_string(rec.m);
    if (!rec.source.empty()) out += "; src=" + rec.source;
    return out;
}

struct LineError {
    std::size_t line;
    std::string message;
};

class DatabaseError : public DomainError {
public:
    DatabaseError(const std::string& path, std::vector<LineError> errors)
        : DomainError(summarize(path, errors)), errors_(std::move(errors)) {}

    const std::vector<LineError>& errors() const noexcept { return errors_; }

private:
    static std::string summarize(const std::string& path, const std::vector<LineError>& errors) {
        std::string s = path + ": " + std::to_string(errors.size()) + " invalid line(s)";
        for (const auto& e : errors) s += "\n  line " + std::to_string(e.line) + ": " + e.message;
        return s;
    }

    std::vector<LineError> errors_;
};

struct Database {
    std::vector<MultiperfectRecord> records;
    std::vector<std::string> warnings;
};

/// One record per line; blank lines and '#' comments skipped. Any invalid
/// line aborts with a DatabaseError listing every bad line. Repeated m values
/// keep the first occurrence and add a warning.
inline Database load_database(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open database " + path.string());
    Database db;
    std::vector<LineError> errors;
    std::set<mpz_class> seen;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        const auto text = detail::trim(line);
        if (text.empty() || text.front() == '#') continue;
        try {
            auto rec = parse_record(text);
            rec.line = number;
            const mpz_class value = rec.m.value();
            if (!seen.insert(value).second) {
                db.warnings.push_back("line " + std::to_string(number) + ": duplicate m = " + value.get_str() +
                                      " collapsed");
                continue;
            }
            db.records.push_back(std::move(rec));
        } catch (const RecordError& e) {
            errors.push_back({number, e.what()});
        }
    }
    if (in.bad()) throw DomainError("read error on " + path.string());
    if (!errors.empty()) throw DatabaseError(path.string(), std::move(errors));
    return db;
}

struct PersistReport {
    std::size_t appended = 0;
    std::vector<std::string> notices;  // one per skipped duplicate
};

/// Appends hits to a database file in record grammar (src=search). Hits whose
/// m is already present in the file are skipped with a notice.
inline PersistReport persist_hits(std::span<const SearchHit> hits, const std::filesystem::path& path) {
    PersistReport report;
    if (hits.empty()) return report;

    std::set<mpz_class> existing;
    if (std::filesystem::exists(path))
        for (const auto& rec : load_database(path).records) existing.insert(rec.m.value());

    std::ofstream out(path, std::ios::app);
    if (!out) throw DomainError("cannot open " + path.string() + " for appending");
    for (const auto& hit : hits) {
        const mpz_class m = static_cast<unsigned long>(hit.m);
        if (!existing.insert(m).second) {
            report.notices.push_back("m = " + m.get_str() + " already present; skipped");
            continue;
        }
        MultiperfectRecord rec{factorize(m, FactorEffort::unlimited()), static_cast<unsigned long>(hit.k), "search"};
        if (sigma(rec.m) != rec.k * m) throw DomainError("refusing to persist unvalidated hit m = " + m.get_str());
        out << format_record(rec) << '\n';
        ++report.appended;
    }
    out.flush();
    if (!out) throw DomainError("write error on " + path.string());
    return report;
}

}  // namespace mplab
