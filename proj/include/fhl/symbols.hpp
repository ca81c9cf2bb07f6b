#pragma once
//
// fhl/symbols.hpp
//
// Symbol values f : C -> C with a tiny parseable grammar, angular-frequency
// metadata and declared circles of non-smoothness.
//
//   expr    := "xia" | "poly(" complex-list ")" | "conj(" expr ")"
//            | "radial(nu=" int ", g=" gtag ")" | "indicator(" real ")"
//   gtag    := "invr_outside(" real ")" | "power(" real ")" | "indicator(" real ")"
//   complex := a | a+bi | a-bi
//
// "xia" is the piecewise symbol 1/z for |z| >= 1 and 0 inside the unit disk
// (closed cut at |z| = 1). indicator(c) is 1 on |z| < c and 0 outside.
//

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fhl/common.hpp"
#include "fhl/errors.hpp"

namespace fhl::symbols {

enum class ProfileTag { invr_outside, power, indicator };

// radial profile g(rho) from a small registry
struct RadialProfile {
    ProfileTag tag = ProfileTag::power;
    double param = 1.0;

    double operator()(double rho) const {
        switch (tag) {
            case ProfileTag::invr_outside: return rho >= param ? 1.0 / rho : 0.0;
            case ProfileTag::power:        return param == 0.0 ? 1.0 : std::pow(rho, param);
            case ProfileTag::indicator:    return rho < param ? 1.0 : 0.0;
        }
        return 0.0;
    }
    double support_min() const { return tag == ProfileTag::invr_outside ? param : 0.0; }
    double support_max() const {
        return tag == ProfileTag::indicator ? param : std::numeric_limits<double>::infinity();
    }
    std::vector<double> break_radii() const {
        if (tag == ProfileTag::power) return {};
        return {param};
    }
    bool bounded() const { return tag != ProfileTag::power || param == 0.0; }
    bool operator==(const RadialProfile&) const = default;
};

class Symbol;

struct SingleFrequency {
    int nu = 0;
    RadialProfile g;
};
struct Polynomial {
    std::vector<Complex> coeffs; // ascending degree
};
struct Conjugate {
    std::shared_ptr<const Symbol> inner;
};
struct General {
    std::function<Complex(Complex)> fn;
    std::string label;
};

class Symbol {
public:
    using Kind = std::variant<SingleFrequency, Polynomial, Conjugate, General>;

    static Symbol xia() {
        return single_frequency(-1, {ProfileTag::invr_outside, 1.0});
    }
    static Symbol single_frequency(int nu, RadialProfile g) {
        Symbol s;
        s.kind_ = SingleFrequency{nu, g};
        s.breaks_ = g.break_radii();
        s.bounded_ = g.bounded();
        return s;
    }
    static Symbol polynomial(std::vector<Complex> coeffs) {
        Symbol s;
        bool constant = true;
        for (std::size_t k = 1; k < coeffs.size(); ++k)
            if (coeffs[k] != Complex(0, 0)) constant = false;
        s.bounded_ = constant;
        s.kind_ = Polynomial{std::move(coeffs)};
        return s;
    }
    static Symbol conjugate(Symbol inner) {
        Symbol s;
        s.breaks_ = inner.breaks_;
        s.bounded_ = inner.bounded_;
        s.kind_ = Conjugate{std::make_shared<const Symbol>(std::move(inner))};
        return s;
    }
    static Symbol general(std::function<Complex(Complex)> fn, std::string label,
                          std::vector<double> breaks = {}, bool bounded = false) {
        Symbol s;
        s.kind_ = General{std::move(fn), std::move(label)};
        s.breaks_ = std::move(breaks);
        s.bounded_ = bounded;
        return s;
    }

    Complex operator()(Complex z) const {
        if (const auto* sf = std::get_if<SingleFrequency>(&kind_)) {
            const double rho = std::abs(z);
            const double g = sf->g(rho);
            if (g == 0.0) return {0.0, 0.0};
            return std::polar(g, sf->nu * std::arg(z));
        }
        if (const auto* poly = std::get_if<Polynomial>(&kind_)) {
            Complex acc(0, 0);
            for (auto it = poly->coeffs.rbegin(); it != poly->coeffs.rend(); ++it)
                acc = acc * z + *it;
            return acc;
        }
        if (const auto* cj = std::get_if<Conjugate>(&kind_))
            return std::conj((*cj->inner)(z));
        return std::get<General>(kind_).fn(z);
    }

    const Kind& kind() const { return kind_; }
    const std::vector<double>& break_radii() const { return breaks_; }
    bool bounded() const { return bounded_; }

    // degree of the polynomial content (0 when not polynomial); used by the
    // operator modules to size plane truncations
    int degree_hint() const {
        if (const auto* poly = std::get_if<Polynomial>(&kind_)) {
            int d = 0;
            for (std::size_t k = 0; k < poly->coeffs.size(); ++k)
                if (poly->coeffs[k] != Complex(0, 0)) d = static_cast<int>(k);
            return d;
        }
        if (const auto* cj = std::get_if<Conjugate>(&kind_)) return cj->inner->degree_hint();
        return 0;
    }

private:
    Kind kind_ = Polynomial{{Complex(0, 0)}};
    std::vector<double> breaks_;
    bool bounded_ = true;
};

inline Complex eval(const Symbol& s, Complex z) { return s(z); }

// nu when the symbol is e^{i nu theta} g(rho); conjugation flips the sign.
// Polynomials qualify only with a single monomial.
inline std::optional<int> frequency_of(const Symbol& s) {
    if (const auto* sf = std::get_if<SingleFrequency>(&s.kind())) return sf->nu;
    if (const auto* cj = std::get_if<Conjugate>(&s.kind())) {
        auto inner = frequency_of(*cj->inner);
        if (inner) return -*inner;
        return std::nullopt;
    }
    if (const auto* poly = std::get_if<Polynomial>(&s.kind())) {
        int nu = 0, nonzero = 0;
        for (std::size_t k = 0; k < poly->coeffs.size(); ++k) {
            if (poly->coeffs[k] != Complex(0, 0)) {
                ++nonzero;
                nu = static_cast<int>(k);
            }
        }
        if (nonzero <= 1) return nu;
        return std::nullopt;
    }
    return std::nullopt;
}

// Single-frequency access with a real radial profile, drilling through
// conjugations (the registry profiles are all real-valued).
struct FrequencyView {
    int nu = 0;
    RadialProfile g;
    double support_min = 0.0;
    double support_max = std::numeric_limits<double>::infinity();
};

inline std::optional<FrequencyView> single_frequency_view(const Symbol& s) {
    if (const auto* sf = std::get_if<SingleFrequency>(&s.kind()))
        return FrequencyView{sf->nu, sf->g, sf->g.support_min(), sf->g.support_max()};
    if (const auto* cj = std::get_if<Conjugate>(&s.kind())) {
        auto inner = single_frequency_view(*cj->inner);
        if (!inner) return std::nullopt;
        inner->nu = -inner->nu;
        return inner;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- parsing

namespace detail {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool consume(std::string_view token) {
        skip_ws();
        if (text.substr(pos, token.size()) == token) {
            pos += token.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view token) {
        if (!consume(token))
            throw ParseError("expected '" + std::string(token) + "'", pos);
    }
    double real() {
        skip_ws();
        const std::string buf(text.substr(pos));
        char* end = nullptr;
        const double v = std::strtod(buf.c_str(), &end);
        if (end == buf.c_str()) throw ParseError("expected a number", pos);
        pos += static_cast<std::size_t>(end - buf.c_str());
        return v;
    }
    long integer() {
        skip_ws();
        const std::string buf(text.substr(pos));
        char* end = nullptr;
        const long v = std::strtol(buf.c_str(), &end, 10);
        if (end == buf.c_str()) throw ParseError("expected an integer", pos);
        pos += static_cast<std::size_t>(end - buf.c_str());
        return v;
    }
    // a | a+bi | a-bi
    Complex complex_literal() {
        const double re = real();
        const std::size_t mark = pos;
        skip_ws();
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            const double im = real();
            if (pos < text.size() && text[pos] == 'i') {
                ++pos;
                return {re, im};
            }
            pos = mark; // lone real followed by something else
        }
        return {re, 0.0};
    }
};

inline RadialProfile parse_gtag(Cursor& c) {
    c.skip_ws();
    if (c.consume("invr_outside(")) {
        const double cut = c.real();
        c.expect(")");
        if (!(cut > 0)) throw ParseError("invr_outside needs a positive cut", c.pos);
        return {ProfileTag::invr_outside, cut};
    }
    if (c.consume("power(")) {
        const double p = c.real();
        c.expect(")");
        if (p < 0) throw ParseError("power exponent must be >= 0", c.pos);
        return {ProfileTag::power, p};
    }
    if (c.consume("indicator(")) {
        const double cut = c.real();
        c.expect(")");
        if (!(cut > 0)) throw ParseError("indicator needs a positive cut", c.pos);
        return {ProfileTag::indicator, cut};
    }
    throw UnsupportedSymbolError("unknown radial profile tag at position "
                                 + std::to_string(c.pos));
}

inline Symbol parse_expr(Cursor& c) {
    c.skip_ws();
    if (c.consume("xia")) return Symbol::xia();
    if (c.consume("conj(")) {
        Symbol inner = parse_expr(c);
        c.expect(")");
        return Symbol::conjugate(std::move(inner));
    }
    if (c.consume("poly(")) {
        std::vector<Complex> coeffs;
        coeffs.push_back(c.complex_literal());
        while (c.consume(",")) coeffs.push_back(c.complex_literal());
        c.expect(")");
        return Symbol::polynomial(std::move(coeffs));
    }
    if (c.consume("radial(")) {
        c.expect("nu=");
        const long nu = c.integer();
        c.expect(",");
        c.expect("g=");
        RadialProfile g = parse_gtag(c);
        c.expect(")");
        return Symbol::single_frequency(static_cast<int>(nu), g);
    }
    if (c.consume("indicator(")) {
        const double cut = c.real();
        c.expect(")");
        if (!(cut > 0)) throw ParseError("indicator needs a positive cut", c.pos);
        return Symbol::single_frequency(0, {ProfileTag::indicator, cut});
    }
    throw ParseError("expected a symbol expression", c.pos);
}

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return format_real(z.real());
    std::string out = format_real(z.real());
    out += z.imag() < 0 ? "-" : "+";
    out += format_real(std::abs(z.imag()));
    out += "i";
    return out;
}

} // namespace detail

inline Symbol parse_symbol(std::string_view text) {
    detail::Cursor c{text};
    Symbol s = detail::parse_expr(c);
    c.skip_ws();
    if (c.pos != text.size()) throw ParseError("trailing characters", c.pos);
    return s;
}

inline std::string print_symbol(const Symbol& s) {
    if (const auto* sf = std::get_if<SingleFrequency>(&s.kind())) {
        if (sf->nu == -1 && sf->g == RadialProfile{ProfileTag::invr_outside, 1.0})
            return "xia";
        if (sf->nu == 0 && sf->g.tag == ProfileTag::indicator)
            return "indicator(" + detail::format_real(sf->g.param) + ")";
        std::string g;
        switch (sf->g.tag) {
            case ProfileTag::invr_outside: g = "invr_outside"; break;
            case ProfileTag::power:        g = "power"; break;
            case ProfileTag::indicator:    g = "indicator"; break;
        }
        return "radial(nu=" + std::to_string(sf->nu) + ", g=" + g + "("
               + detail::format_real(sf->g.param) + "))";
    }
    if (const auto* poly = std::get_if<Polynomial>(&s.kind())) {
        std::string out = "poly(";
        for (std::size_t k = 0; k < poly->coeffs.size(); ++k) {
            if (k) out += ",";
            out += detail::format_complex(poly->coeffs[k]);
        }
        return out + ")";
    }
    if (const auto* cj = std::get_if<Conjugate>(&s.kind()))
        return "conj(" + print_symbol(*cj->inner) + ")";
    return std::get<General>(s.kind()).label;
}

} // namespace fhl::symbols
