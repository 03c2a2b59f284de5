#include "acslab/scalar_parse.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace acslab {

namespace {

struct Token {
    enum Kind { Num, Ident, Op, End } kind = End;
    Int num;
    std::string text;
    char op = 0;
};

struct Lexer {
    std::string src;
    size_t pos = 0;
    Token cur;

    explicit Lexer(const std::string& s) : src(s) { advance(); }

    void advance() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) pos++;
        if (pos >= src.size()) { cur = Token{Token::End, 0, "", 0}; return; }
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) pos++;
            cur = Token{Token::Num, Int(src.substr(start, pos - start)), "", 0};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                pos++;
            cur = Token{Token::Ident, 0, src.substr(start, pos - start), 0};
            return;
        }
        if (std::string("+-*/^()").find(c) != std::string::npos) {
            pos++;
            cur = Token{Token::Op, 0, "", c};
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'");
    }

    bool isOp(char c) const { return cur.kind == Token::Op && cur.op == c; }
    void expectOp(char c) {
        if (!isOp(c)) throw ParseError(std::string("expected '") + c + "'");
        advance();
    }
};

struct Parser {
    Lexer lex;
    GenEnvPtr env;

    Parser(const GenEnvPtr& e, const std::string& s) : lex(s), env(e) {}

    Int parseInt() {
        bool neg = false;
        if (lex.isOp('-')) { neg = true; lex.advance(); }
        else if (lex.isOp('+')) lex.advance();
        if (lex.cur.kind != Token::Num) throw ParseError("expected integer");
        Int v = lex.cur.num;
        lex.advance();
        return neg ? -v : v;
    }

    // A factor is one constant, "i", or one generator power.
    OscillatorElement factor() {
        if (lex.cur.kind == Token::Num) {
            Rational r(lex.cur.num);
            lex.advance();
            // "p/q" only when the divisor is a bare integer; "p/(...)" belongs
            // to the enclosing fraction.
            if (lex.isOp('/')) {
                size_t savePos = lex.pos;
                Token saveTok = lex.cur;
                lex.advance();
                if (lex.cur.kind == Token::Num) {
                    if (lex.cur.num == 0) throw ParseError("zero denominator in rational");
                    r /= Rational(lex.cur.num);
                    lex.advance();
                } else {
                    lex.pos = savePos;
                    lex.cur = saveTok;
                }
            }
            return OscillatorElement::constant(env, GaussianRational(r));
        }
        if (lex.cur.kind == Token::Ident) {
            std::string name = lex.cur.text;
            lex.advance();
            if (name == "i")
                return OscillatorElement::constant(env, GaussianRational::unit_i());
            int slot = -1;
            if (int oi = env->oscIndex(name); oi >= 0) slot = oi;
            else if (int pj = env->parIndex(name); pj >= 0) slot = env->parSlot(pj);
            else if (name.size() > 1 && name[0] == 'c') {
                if (int pj = env->parIndex(name.substr(1)); pj >= 0) slot = env->parSlot(pj) + 1;
            }
            if (slot < 0) throw ParseError("unknown generator '" + name + "'");
            long e = 1;
            if (lex.isOp('^')) {
                lex.advance();
                Int ev = parseInt();
                e = static_cast<long>(ev);
            }
            return OscillatorElement::generatorSlot(env, slot, static_cast<int>(e));
        }
        throw ParseError("expected factor");
    }

    bool startsFactor() const {
        return lex.cur.kind == Token::Num || lex.cur.kind == Token::Ident;
    }

    OscillatorElement term() {
        OscillatorElement p = factor();
        for (;;) {
            if (lex.isOp('*')) { lex.advance(); p = p * factor(); }
            else if (startsFactor()) p = p * factor();  // juxtaposition, e.g. "2i", "3u1"
            else break;
        }
        return p;
    }

    OscillatorElement poly() {
        OscillatorElement p(env);
        bool neg = false;
        if (lex.isOp('-')) { neg = true; lex.advance(); }
        else if (lex.isOp('+')) lex.advance();
        OscillatorElement t = term();
        p = neg ? p - t : p + t;
        while (lex.isOp('+') || lex.isOp('-')) {
            bool minus = lex.isOp('-');
            lex.advance();
            t = term();
            p = minus ? p - t : p + t;
        }
        return p;
    }

    ScalarFraction fraction() {
        OscillatorElement num = poly();
        if (lex.isOp('/')) {
            lex.advance();
            lex.expectOp('(');
            OscillatorElement den = poly();
            lex.expectOp(')');
            atEnd();
            return ScalarFraction(num, den);
        }
        atEnd();
        return ScalarFraction(num);
    }

    void atEnd() {
        if (lex.cur.kind != Token::End) throw ParseError("trailing input");
    }
};

std::string renderUnsignedMonoTerm(const Rational& coeff, bool timesI,
                                   const Mono& mono, const GenEnvPtr& env) {
    std::ostringstream out;
    bool wrote = false;
    Rational a = coeff < 0 ? Rational(-coeff) : coeff;
    if (a != 1 || (!timesI && std::all_of(mono.begin(), mono.end(),
                                          [](int e) { return e == 0; }))) {
        out << render(a);
        wrote = true;
    }
    if (timesI) {
        if (wrote) out << "*";
        out << "i";
        wrote = true;
    }
    for (size_t k = 0; k < mono.size(); ++k) {
        if (mono[k] == 0) continue;
        if (wrote) out << "*";
        out << env->slotName(static_cast<int>(k));
        if (mono[k] != 1) out << "^" << mono[k];
        wrote = true;
    }
    return out.str();
}

} // namespace

Rational parseRational(const std::string& s) {
    GaussianRational g = parseGaussian(s);
    if (!g.isReal()) throw ParseError("expected a real rational, got '" + s + "'");
    return g.re;
}

GaussianRational parseGaussian(const std::string& s) {
    OscillatorElement p = parsePoly(emptyEnv(), s);
    if (!p.isConstant()) throw ParseError("expected a constant, got '" + s + "'");
    return p.asConstant();
}

OscillatorElement parsePoly(const GenEnvPtr& env, const std::string& s) {
    Parser p(env, s);
    OscillatorElement v = p.poly();
    p.atEnd();
    return v;
}

ScalarFraction parseFraction(const GenEnvPtr& env, const std::string& s) {
    Parser p(env, s);
    return p.fraction();
}

std::string render(const Rational& r) {
    std::ostringstream out;
    out << numerator(r);
    if (denominator(r) != 1) out << "/" << denominator(r);
    return out.str();
}

std::string render(const GaussianRational& g) {
    return render(OscillatorElement::constant(emptyEnv(), g));
}

std::string render(const OscillatorElement& p) {
    if (p.isZero()) return "0";
    std::ostringstream out;
    bool first = true;
    auto emit = [&](const Rational& coeff, bool timesI, const Mono& mono) {
        if (coeff == 0) return;
        bool neg = coeff < 0;
        if (first) { if (neg) out << "-"; }
        else out << (neg ? " - " : " + ");
        out << renderUnsignedMonoTerm(coeff, timesI, mono, p.env);
        first = false;
    };
    for (const auto& [mono, c] : p.terms) {
        emit(c.re, false, mono);
        emit(c.im, true, mono);
    }
    return out.str();
}

std::string render(const ScalarFraction& f) {
    if (f.den.isConstant() && f.den.asConstant() == GaussianRational(Rational(1)))
        return render(f.num);
    return render(f.num) + " / (" + render(f.den) + ")";
}

} // namespace acslab
