#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigkl {

using Rational = mpq_class;
using Integer = mpz_class;

enum class ErrorKind {
    UnknownType,
    InconsistentMarking,
    NotInRootLattice,
    CutoffExceeded,
    NotOnHyperplane,
    NullSpaceDimensionUnexpected,
    SingularOverFunctionField,
    DegenerateDirection,
    ChamberCrossing,
    MultipleHyperplanes,
    GroupTooLarge,
    NotAntidominant,
    NotRegular,
    IntegralityMismatch,
    NotInWallachRegion,
    UnresolvablePerturbation,
    AnchorMismatch,
    ResourceGuard,
    Config,
    Internal
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::UnknownType: return "UnknownType";
        case ErrorKind::InconsistentMarking: return "InconsistentMarking";
        case ErrorKind::NotInRootLattice: return "NotInRootLattice";
        case ErrorKind::CutoffExceeded: return "CutoffExceeded";
        case ErrorKind::NotOnHyperplane: return "NotOnHyperplane";
        case ErrorKind::NullSpaceDimensionUnexpected: return "NullSpaceDimensionUnexpected";
        case ErrorKind::SingularOverFunctionField: return "SingularOverFunctionField";
        case ErrorKind::DegenerateDirection: return "DegenerateDirection";
        case ErrorKind::ChamberCrossing: return "ChamberCrossing";
        case ErrorKind::MultipleHyperplanes: return "MultipleHyperplanes";
        case ErrorKind::GroupTooLarge: return "GroupTooLarge";
        case ErrorKind::NotAntidominant: return "NotAntidominant";
        case ErrorKind::NotRegular: return "NotRegular";
        case ErrorKind::IntegralityMismatch: return "IntegralityMismatch";
        case ErrorKind::NotInWallachRegion: return "NotInWallachRegion";
        case ErrorKind::UnresolvablePerturbation: return "UnresolvablePerturbation";
        case ErrorKind::AnchorMismatch: return "AnchorMismatch";
        case ErrorKind::ResourceGuard: return "ResourceGuard";
        case ErrorKind::Config: return "Config";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/// Accepts "p", "p/q", with optional sign; result is canonicalized.
inline Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    if (s.empty()) throw Error(ErrorKind::Config, "empty rational");
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
            throw Error(ErrorKind::Config, "malformed rational '" + text + "'");
    if (s[0] == '+') s.erase(0, 1);
    Rational r;
    try {
        r = Rational(s, 10);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::Config, "malformed rational '" + text + "'");
    }
    if (r.get_den() == 0) throw Error(ErrorKind::Config, "zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer floor_of(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil_of(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw Error(ErrorKind::Internal, "integer overflow converting " + z.get_str());
    return z.get_si();
}

inline int sign_of(const Rational& r) { return sgn(r); }

}  // namespace sigkl
