#include "sono/script/lexer.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace sono::script {
namespace {

const std::unordered_map<std::string_view, Tok>& keywords()
{
    static const std::unordered_map<std::string_view, Tok> table = {
        {"title", Tok::KwTitle},   {"summary", Tok::KwSummary}, {"let", Tok::KwLet},
        {"fn", Tok::KwFn},         {"if", Tok::KwIf},           {"else", Tok::KwElse},
        {"for", Tok::KwFor},       {"in", Tok::KwIn},           {"while", Tok::KwWhile},
        {"true", Tok::KwTrue},     {"false", Tok::KwFalse},     {"return", Tok::KwReturn},
        {"break", Tok::KwBreak},   {"continue", Tok::KwContinue}, {"and", Tok::And},
        {"or", Tok::Or},           {"not", Tok::Not},
    };
    return table;
}

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
public:
    Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

    std::vector<Token> run()
    {
        while (!at_end()) {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '\n') {
                const SourcePos pos = pos_;
                advance();
                if (nesting_ == 0)
                    emit(Tok::Newline, "\\n", pos);
            } else if (c == '#' || (c == '/' && peek(1) == '/')) {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
                number();
            } else if (ident_start(c)) {
                identifier();
            } else if (c == '"') {
                string();
            } else {
                punctuation();
            }
        }
        emit(Tok::Eof, "end of file", pos_);
        return std::move(tokens_);
    }

private:
    bool at_end() const { return i_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }

    void advance()
    {
        const char c = src_[i_++];
        if (c == '\n') {
            ++pos_.line;
            pos_.col = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++pos_.col;
        }
    }

    void emit(Tok kind, std::string text, SourcePos pos, double number = 0.0)
    {
        tokens_.push_back(Token{kind, std::move(text), number, pos});
    }

    void error(SourcePos pos, std::string message)
    {
        diags_.push_back(Diagnostic::error(DiagCode::Syntax, pos, std::move(message)));
    }

    void number()
    {
        const SourcePos pos = pos_;
        const std::size_t start = i_;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            advance();
        // "1..4" is a range, not a fraction.
        if (peek() == '.' && peek(1) != '.') {
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek())))
                advance();
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            advance();
            if (peek() == '+' || peek() == '-')
                advance();
            while (std::isdigit(static_cast<unsigned char>(peek())))
                advance();
        }
        const std::string_view lexeme = src_.substr(start, i_ - start);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
        if (ec != std::errc() || ptr != lexeme.data() + lexeme.size()) {
            error(pos, "malformed number '" + std::string(lexeme) + "'");
            value = 0.0;
        }
        if (ident_char(peek())) {
            const SourcePos suffix_pos = pos_;
            std::string suffix;
            while (ident_char(peek())) {
                suffix.push_back(peek());
                advance();
            }
            error(suffix_pos, "numeric suffix '" + suffix + "' is not allowed; write plain numbers such as " +
                                  std::string(lexeme));
        }
        emit(Tok::Number, std::string(lexeme), pos, value);
    }

    void identifier()
    {
        const SourcePos pos = pos_;
        const std::size_t start = i_;
        while (ident_char(peek()))
            advance();
        const std::string_view word = src_.substr(start, i_ - start);
        const auto& kw = keywords();
        if (auto it = kw.find(word); it != kw.end())
            emit(it->second, std::string(word), pos);
        else
            emit(Tok::Ident, std::string(word), pos);
    }

    void string()
    {
        const SourcePos pos = pos_;
        advance();
        std::string value;
        while (true) {
            if (at_end() || peek() == '\n') {
                error(pos, "unterminated string literal");
                break;
            }
            const char c = peek();
            advance();
            if (c == '"')
                break;
            if (c == '\\') {
                const char e = peek();
                advance();
                switch (e) {
                case 'n': value.push_back('\n'); break;
                case 't': value.push_back('\t'); break;
                case '"': value.push_back('"'); break;
                case '\\': value.push_back('\\'); break;
                default:
                    error(pos, std::string("unknown escape sequence '\\") + e + "'");
                    break;
                }
                continue;
            }
            value.push_back(c);
        }
        emit(Tok::String, std::move(value), pos);
    }

    void punctuation()
    {
        const SourcePos pos = pos_;
        const char c = peek();
        const char n = peek(1);
        auto two = [&](Tok kind, const char* text) {
            advance();
            advance();
            emit(kind, text, pos);
        };
        auto one = [&](Tok kind) {
            advance();
            emit(kind, std::string(1, c), pos);
        };
        switch (c) {
        case '(': ++nesting_; one(Tok::LParen); return;
        case ')': if (nesting_ > 0) --nesting_; one(Tok::RParen); return;
        case '[': ++nesting_; one(Tok::LBracket); return;
        case ']': if (nesting_ > 0) --nesting_; one(Tok::RBracket); return;
        case '{': one(Tok::LBrace); return;
        case '}': one(Tok::RBrace); return;
        case ',': one(Tok::Comma); return;
        case ';': one(Tok::Semicolon); return;
        case '%': one(Tok::Percent); return;
        case '.':
            if (n == '.')
                two(Tok::DotDot, "..");
            else
                one(Tok::Dot);
            return;
        case '+': if (n == '=') two(Tok::PlusAssign, "+="); else one(Tok::Plus); return;
        case '-': if (n == '=') two(Tok::MinusAssign, "-="); else one(Tok::Minus); return;
        case '*': if (n == '=') two(Tok::StarAssign, "*="); else one(Tok::Star); return;
        case '/': if (n == '=') two(Tok::SlashAssign, "/="); else one(Tok::Slash); return;
        case '=': if (n == '=') two(Tok::Eq, "=="); else one(Tok::Assign); return;
        case '!': if (n == '=') two(Tok::Ne, "!="); else one(Tok::Not); return;
        case '<': if (n == '=') two(Tok::Le, "<="); else one(Tok::Lt); return;
        case '>': if (n == '=') two(Tok::Ge, ">="); else one(Tok::Gt); return;
        case '&':
            if (n == '&') {
                two(Tok::And, "&&");
                return;
            }
            break;
        case '|':
            if (n == '|') {
                two(Tok::Or, "||");
                return;
            }
            break;
        default:
            break;
        }
        std::string shown;
        if (static_cast<unsigned char>(c) < 0x80 && std::isprint(static_cast<unsigned char>(c)))
            shown = std::string("'") + c + "'";
        else
            shown = "byte 0x" + std::to_string(static_cast<unsigned char>(c));
        error(pos, "unexpected character " + shown);
        advance();
        while (!at_end() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80)
            advance();
    }

    std::string_view src_;
    std::vector<Diagnostic>& diags_;
    std::vector<Token> tokens_;
    std::size_t i_ = 0;
    SourcePos pos_;
    int nesting_ = 0;
};

} // namespace

std::string_view describe(Tok kind)
{
    switch (kind) {
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::Ident: return "identifier";
    case Tok::Newline: return "end of line";
    case Tok::Eof: return "end of file";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::Semicolon: return "';'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Assign: return "'='";
    case Tok::PlusAssign: return "'+='";
    case Tok::MinusAssign: return "'-='";
    case Tok::StarAssign: return "'*='";
    case Tok::SlashAssign: return "'/='";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::And: return "'and'";
    case Tok::Or: return "'or'";
    case Tok::Not: return "'not'";
    case Tok::KwTitle: return "'title'";
    case Tok::KwSummary: return "'summary'";
    case Tok::KwLet: return "'let'";
    case Tok::KwFn: return "'fn'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwFor: return "'for'";
    case Tok::KwIn: return "'in'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwBreak: return "'break'";
    case Tok::KwContinue: return "'continue'";
    }
    return "token";
}

std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diagnostics)
{
    return Lexer(source, diagnostics).run();
}

} // namespace sono::script
