#include "stlmine/parser.hpp"

#include <cctype>
#include <charconv>

namespace stlmine {

namespace {

enum class Tok {
    Lparen, Rparen, Lbracket, Rbracket, Comma,
    Bang, Amp, Pipe,
    Gt, Ge, Le, Lt,
    Ident, Number, Placeholder,
    KwTrue, KwF, KwG, KwU,
    End,
};

struct Token {
    Tok kind;
    std::string text;   // ident / placeholder name
    double value = 0.0; // number
    int pos = 0;        // 1-based character position
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        int pos = static_cast<int>(i_) + 1;
        if (i_ >= text_.size()) return {Tok::End, "", 0.0, pos};
        char c = text_[i_];
        switch (c) {
            case '(': ++i_; return {Tok::Lparen, "(", 0.0, pos};
            case ')': ++i_; return {Tok::Rparen, ")", 0.0, pos};
            case '[': ++i_; return {Tok::Lbracket, "[", 0.0, pos};
            case ']': ++i_; return {Tok::Rbracket, "]", 0.0, pos};
            case ',': ++i_; return {Tok::Comma, ",", 0.0, pos};
            case '!': ++i_; return {Tok::Bang, "!", 0.0, pos};
            case '&': ++i_; return {Tok::Amp, "&", 0.0, pos};
            case '|': ++i_; return {Tok::Pipe, "|", 0.0, pos};
            case '>':
                ++i_;
                if (i_ < text_.size() && text_[i_] == '=') { ++i_; return {Tok::Ge, ">=", 0.0, pos}; }
                return {Tok::Gt, ">", 0.0, pos};
            case '<':
                ++i_;
                if (i_ < text_.size() && text_[i_] == '=') { ++i_; return {Tok::Le, "<=", 0.0, pos}; }
                return {Tok::Lt, "<", 0.0, pos};
            case '?': {
                ++i_;
                std::string name = read_ident();
                if (name.empty()) throw Error("expected placeholder name after '?' at position " + std::to_string(pos));
                return {Tok::Placeholder, name, 0.0, pos};
            }
            default:
                break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+')
            return read_number(pos);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name = read_ident();
            if (name == "true") return {Tok::KwTrue, name, 0.0, pos};
            if (name == "F") return {Tok::KwF, name, 0.0, pos};
            if (name == "G") return {Tok::KwG, name, 0.0, pos};
            if (name == "U") return {Tok::KwU, name, 0.0, pos};
            return {Tok::Ident, name, 0.0, pos};
        }
        throw Error(std::string("unexpected character '") + c + "' at position " + std::to_string(pos));
    }

private:
    std::string read_ident() {
        std::string out;
        while (i_ < text_.size()) {
            char c = text_[i_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
                out.push_back(c);
                ++i_;
            } else {
                break;
            }
        }
        return out;
    }

    Token read_number(int pos) {
        size_t start = i_;
        if (text_[i_] == '-' || text_[i_] == '+') ++i_;
        bool any = false;
        while (i_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[i_])) || text_[i_] == '.')) {
            any = any || std::isdigit(static_cast<unsigned char>(text_[i_]));
            ++i_;
        }
        if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
            size_t save = i_;
            ++i_;
            if (i_ < text_.size() && (text_[i_] == '-' || text_[i_] == '+')) ++i_;
            if (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
                while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
            } else {
                i_ = save;
            }
        }
        if (!any) throw Error("malformed number at position " + std::to_string(pos));
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + i_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + i_)
            throw Error("malformed number at position " + std::to_string(pos));
        return {Tok::Number, text_.substr(start, i_ - start), value, pos};
    }

    const std::string& text_;
    size_t i_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { advance(); }

    NodePtr parse() {
        NodePtr f = parse_or();
        expect(Tok::End, "end of input");
        return f;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& expected) {
        std::string got = cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'";
        throw Error("expected " + expected + " but found " + got + " at position " +
                    std::to_string(cur_.pos));
    }

    void expect(Tok kind, const std::string& what) {
        if (cur_.kind != kind) fail(what);
        advance();
    }

    Num parse_num(const std::string& what) {
        if (cur_.kind == Tok::Number) {
            Num v(cur_.value);
            advance();
            return v;
        }
        if (cur_.kind == Tok::Placeholder) {
            Num v = Num::placeholder(cur_.text);
            advance();
            return v;
        }
        fail(what);
    }

    std::pair<Num, Num> parse_interval() {
        expect(Tok::Lbracket, "'['");
        Num a = parse_num("interval lower bound");
        expect(Tok::Comma, "','");
        Num b = parse_num("interval upper bound");
        expect(Tok::Rbracket, "']'");
        return {std::move(a), std::move(b)};
    }

    NodePtr parse_or() {
        NodePtr l = parse_and();
        while (cur_.kind == Tok::Pipe) {
            advance();
            l = make_or(std::move(l), parse_and());
        }
        return l;
    }

    NodePtr parse_and() {
        NodePtr l = parse_until();
        while (cur_.kind == Tok::Amp) {
            advance();
            l = make_and(std::move(l), parse_until());
        }
        return l;
    }

    NodePtr parse_until() {
        NodePtr l = parse_unary();
        if (cur_.kind == Tok::KwU) {
            int pos = cur_.pos;
            advance();
            auto [a, b] = parse_interval();
            NodePtr r = parse_until();
            try {
                return make_until(a, b, std::move(l), std::move(r));
            } catch (const Error& e) {
                throw Error(std::string(e.what()) + " at position " + std::to_string(pos));
            }
        }
        return l;
    }

    NodePtr parse_unary() {
        if (cur_.kind == Tok::Bang) {
            advance();
            return make_not(parse_unary());
        }
        if (cur_.kind == Tok::KwF || cur_.kind == Tok::KwG) {
            bool eventually = cur_.kind == Tok::KwF;
            int pos = cur_.pos;
            advance();
            auto [a, b] = parse_interval();
            NodePtr child = parse_unary();
            try {
                return eventually ? make_eventually(a, b, std::move(child))
                                  : make_globally(a, b, std::move(child));
            } catch (const Error& e) {
                throw Error(std::string(e.what()) + " at position " + std::to_string(pos));
            }
        }
        return parse_primary();
    }

    NodePtr parse_primary() {
        if (cur_.kind == Tok::KwTrue) {
            advance();
            return make_true();
        }
        if (cur_.kind != Tok::Lparen) fail("'true', '(', '!', 'F', 'G'");
        advance();
        if (cur_.kind == Tok::Ident) {
            // atom: (x > 3)
            std::string var = cur_.text;
            advance();
            Relation rel;
            switch (cur_.kind) {
                case Tok::Gt:
                case Tok::Ge:
                    rel = Relation::Greater;
                    break;
                case Tok::Le:
                case Tok::Lt:
                    rel = Relation::LessEqual;
                    break;
                default:
                    fail("a relation ('>', '>=', '<=', '<')");
            }
            advance();
            Num t = parse_num("a threshold");
            expect(Tok::Rparen, "')'");
            return make_atom(std::move(var), rel, std::move(t));
        }
        NodePtr inner = parse_or();
        expect(Tok::Rparen, "')'");
        return inner;
    }

    Lexer lexer_;
    Token cur_;
};

}  // namespace

Formula parse_formula(const std::string& text) { return Formula(Parser(text).parse()); }

ParametricFormula parse_template(const std::string& text) {
    return ParametricFormula(Parser(text).parse());
}

}  // namespace stlmine
