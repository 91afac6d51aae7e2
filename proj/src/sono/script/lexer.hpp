#pragma once

#include "sono/script/diagnostic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace sono::script {

enum class Tok {
    Number,
    String,
    Ident,
    Newline,
    Eof,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Dot,
    DotDot,
    Semicolon,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Assign,
    PlusAssign,
    MinusAssign,
    StarAssign,
    SlashAssign,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    KwTitle,
    KwSummary,
    KwLet,
    KwFn,
    KwIf,
    KwElse,
    KwFor,
    KwIn,
    KwWhile,
    KwTrue,
    KwFalse,
    KwReturn,
    KwBreak,
    KwContinue,
};

struct Token {
    Tok kind = Tok::Eof;
    std::string text;     // identifier name, decoded string literal, or raw lexeme
    double number = 0.0;
    SourcePos pos;
};

std::string_view describe(Tok kind);

/// Newlines inside (...) and [...] are dropped so argument lists may span
/// lines. Lexical errors are reported as E_SYNTAX and the offending bytes
/// skipped.
std::vector<Token> tokenize(std::string_view source, std::vector<Diagnostic>& diagnostics);

} // namespace sono::script
