#include "sono/script/parser.hpp"

#include <utility>

namespace sono::script {
namespace {

struct SyntaxFailure {
    Diagnostic diagnostic;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags) : toks_(std::move(tokens)), diags_(diags) {}

    Program run()
    {
        Program program;
        skip_separators();
        while (!check(Tok::Eof)) {
            try {
                item(program);
            } catch (const SyntaxFailure& f) {
                diags_.push_back(f.diagnostic);
                recover_top_level();
            }
            skip_separators();
        }
        program.eof_pos = peek().pos;
        return program;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
        return toks_[i];
    }
    bool check(Tok kind) const { return peek().kind == kind; }

    const Token& advance()
    {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size())
            ++pos_;
        return t;
    }

    bool match(Tok kind)
    {
        if (!check(kind))
            return false;
        advance();
        return true;
    }

    [[noreturn]] void fail(const Token& at, std::string message)
    {
        throw SyntaxFailure{Diagnostic::error(DiagCode::Syntax, at.pos, std::move(message))};
    }

    const Token& expect(Tok kind, std::string_view context)
    {
        if (!check(kind))
            fail(peek(), "expected " + std::string(describe(kind)) + " " + std::string(context) + ", found " +
                             found(peek()));
        return advance();
    }

    static std::string found(const Token& t)
    {
        switch (t.kind) {
        case Tok::Ident: return "'" + t.text + "'";
        case Tok::Number: return "number " + t.text;
        case Tok::String: return "a string";
        default: return std::string(describe(t.kind));
        }
    }

    void skip_separators()
    {
        while (check(Tok::Newline) || check(Tok::Semicolon))
            advance();
    }

    void skip_newlines()
    {
        while (check(Tok::Newline))
            advance();
    }

    void end_of_statement()
    {
        if (check(Tok::Newline) || check(Tok::Semicolon)) {
            advance();
            return;
        }
        if (check(Tok::RBrace) || check(Tok::Eof))
            return;
        fail(peek(), "expected end of line after statement, found " + found(peek()));
    }

    // Skip to the next line that starts a top-level item.
    void recover_top_level()
    {
        int depth = 0;
        while (!check(Tok::Eof)) {
            const Tok k = peek().kind;
            if (k == Tok::LBrace) {
                ++depth;
            } else if (k == Tok::RBrace) {
                if (depth > 0)
                    --depth;
            } else if (depth == 0 && (k == Tok::Newline || k == Tok::Semicolon)) {
                advance();
                skip_separators();
                const Tok next = peek().kind;
                if (next == Tok::KwLet || next == Tok::KwFn || next == Tok::KwTitle || next == Tok::KwSummary ||
                    next == Tok::Eof)
                    return;
                continue;
            }
            advance();
        }
    }

    // Skip the rest of a statement inside a block, leaving the closing brace.
    void recover_statement()
    {
        int depth = 0;
        while (!check(Tok::Eof)) {
            const Tok k = peek().kind;
            if (k == Tok::LBrace) {
                ++depth;
            } else if (k == Tok::RBrace) {
                if (depth == 0)
                    return;
                --depth;
            } else if (depth == 0 && (k == Tok::Newline || k == Tok::Semicolon)) {
                advance();
                return;
            }
            advance();
        }
    }

    void item(Program& program)
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::KwTitle: {
            advance();
            const Token& text = expect(Tok::String, "after 'title'");
            if (program.title) {
                diags_.push_back(Diagnostic::error(DiagCode::Duplicate, t.pos, "title is declared more than once"));
            } else {
                program.title = text.text;
                program.title_pos = t.pos;
            }
            end_of_statement();
            return;
        }
        case Tok::KwSummary: {
            advance();
            const Token& text = expect(Tok::String, "after 'summary'");
            program.summary = text.text;
            end_of_statement();
            return;
        }
        case Tok::KwLet: {
            advance();
            const Token& name = expect(Tok::Ident, "after 'let'");
            VarDecl decl{name.text, name.pos, nullptr};
            if (match(Tok::Assign))
                decl.init = expression();
            program.vars.push_back(std::move(decl));
            end_of_statement();
            return;
        }
        case Tok::KwFn: {
            program.fns.push_back(function());
            return;
        }
        default:
            fail(t, "expected 'title', 'summary', 'let' or 'fn' at top level, found " + found(t));
        }
    }

    FnDecl function()
    {
        advance();
        FnDecl fn;
        const Token& name = peek();
        if (name.kind != Tok::Ident) {
            // `fn draw()` lexes `draw` as an identifier; anything else is an error.
            fail(name, "expected a handler name after 'fn', found " + found(name));
        }
        advance();
        fn.name = name.text;
        fn.pos = name.pos;
        expect(Tok::LParen, "after handler name");
        if (!check(Tok::RParen)) {
            do {
                const Token& p = expect(Tok::Ident, "as parameter name");
                fn.params.push_back(Param{p.text, p.pos});
            } while (match(Tok::Comma));
        }
        expect(Tok::RParen, "to close the parameter list");
        fn.body = block();
        return fn;
    }

    Block block()
    {
        skip_newlines();
        expect(Tok::LBrace, "to open a block");
        Block stmts;
        skip_separators();
        while (!check(Tok::RBrace)) {
            if (check(Tok::Eof))
                fail(peek(), "unclosed block: expected '}' before end of file");
            try {
                stmts.push_back(statement());
            } catch (const SyntaxFailure& f) {
                diags_.push_back(f.diagnostic);
                recover_statement();
            }
            skip_separators();
        }
        advance();
        return stmts;
    }

    StmtPtr make_stmt(SourcePos pos, auto node)
    {
        auto s = std::make_unique<Stmt>();
        s->pos = pos;
        s->node = std::move(node);
        return s;
    }

    StmtPtr statement()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::KwLet: {
            advance();
            const Token& name = expect(Tok::Ident, "after 'let'");
            LetStmt let{name.text, nullptr, {}};
            if (match(Tok::Assign))
                let.init = expression();
            end_of_statement();
            return make_stmt(name.pos, std::move(let));
        }
        case Tok::KwIf: {
            auto s = if_statement();
            return s;
        }
        case Tok::KwFor: {
            advance();
            const Token& var = expect(Tok::Ident, "as loop variable");
            expect(Tok::KwIn, "after loop variable");
            ForStmt loop;
            loop.var = var.text;
            loop.var_pos = var.pos;
            loop.start = expression();
            if (match(Tok::DotDot))
                loop.end = expression();
            loop.body = block();
            return make_stmt(t.pos, std::move(loop));
        }
        case Tok::KwWhile: {
            advance();
            WhileStmt loop;
            loop.cond = expression();
            loop.body = block();
            return make_stmt(t.pos, std::move(loop));
        }
        case Tok::KwReturn:
            advance();
            end_of_statement();
            return make_stmt(t.pos, ReturnStmt{});
        case Tok::KwBreak:
            advance();
            end_of_statement();
            return make_stmt(t.pos, BreakStmt{});
        case Tok::KwContinue:
            advance();
            end_of_statement();
            return make_stmt(t.pos, ContinueStmt{});
        case Tok::KwFn:
            fail(t, "handlers must be defined at top level");
        case Tok::KwTitle:
        case Tok::KwSummary:
            fail(t, "'" + t.text + "' is only allowed at top level");
        default:
            break;
        }

        const SourcePos pos = t.pos;
        ExprPtr lhs = expression();
        std::optional<AssignOp> op;
        switch (peek().kind) {
        case Tok::Assign: op = AssignOp::Set; break;
        case Tok::PlusAssign: op = AssignOp::Add; break;
        case Tok::MinusAssign: op = AssignOp::Sub; break;
        case Tok::StarAssign: op = AssignOp::Mul; break;
        case Tok::SlashAssign: op = AssignOp::Div; break;
        default: break;
        }
        if (op) {
            const Token& op_tok = advance();
            if (!is_assignable(*lhs))
                fail(op_tok, "left side of " + std::string(describe(op_tok.kind)) +
                                 " must be a variable, a .field or an [index]");
            AssignStmt assign{std::move(lhs), *op, expression()};
            end_of_statement();
            return make_stmt(pos, std::move(assign));
        }
        end_of_statement();
        return make_stmt(pos, ExprStmt{std::move(lhs)});
    }

    static bool is_assignable(const Expr& e)
    {
        if (std::holds_alternative<Ident>(e.node))
            return true;
        if (const auto* m = std::get_if<Member>(&e.node))
            return is_assignable(*m->object);
        if (const auto* ix = std::get_if<Index>(&e.node))
            return is_assignable(*ix->object);
        return false;
    }

    StmtPtr if_statement()
    {
        const Token& kw = advance();
        IfStmt s;
        s.cond = expression();
        s.then_block = block();
        // Allow `}` newline `else`.
        std::size_t save = pos_;
        skip_newlines();
        if (match(Tok::KwElse)) {
            if (check(Tok::KwIf)) {
                s.else_block.push_back(if_statement());
            } else {
                s.else_block = block();
            }
        } else {
            pos_ = save;
        }
        return make_stmt(kw.pos, std::move(s));
    }

    ExprPtr make_expr(SourcePos pos, auto node)
    {
        auto e = std::make_unique<Expr>();
        e->pos = pos;
        e->node = std::move(node);
        return e;
    }

    ExprPtr expression() { return or_expr(); }

    ExprPtr or_expr()
    {
        auto lhs = and_expr();
        while (check(Tok::Or)) {
            const SourcePos pos = advance().pos;
            lhs = make_expr(pos, Binary{BinaryOp::Or, std::move(lhs), and_expr()});
        }
        return lhs;
    }

    ExprPtr and_expr()
    {
        auto lhs = equality();
        while (check(Tok::And)) {
            const SourcePos pos = advance().pos;
            lhs = make_expr(pos, Binary{BinaryOp::And, std::move(lhs), equality()});
        }
        return lhs;
    }

    ExprPtr equality()
    {
        auto lhs = comparison();
        while (check(Tok::Eq) || check(Tok::Ne)) {
            const Token& op = advance();
            lhs = make_expr(op.pos, Binary{op.kind == Tok::Eq ? BinaryOp::Eq : BinaryOp::Ne, std::move(lhs),
                                           comparison()});
        }
        return lhs;
    }

    ExprPtr comparison()
    {
        auto lhs = additive();
        while (true) {
            BinaryOp op;
            switch (peek().kind) {
            case Tok::Lt: op = BinaryOp::Lt; break;
            case Tok::Le: op = BinaryOp::Le; break;
            case Tok::Gt: op = BinaryOp::Gt; break;
            case Tok::Ge: op = BinaryOp::Ge; break;
            default: return lhs;
            }
            const SourcePos pos = advance().pos;
            lhs = make_expr(pos, Binary{op, std::move(lhs), additive()});
        }
    }

    ExprPtr additive()
    {
        auto lhs = multiplicative();
        while (check(Tok::Plus) || check(Tok::Minus)) {
            const Token& op = advance();
            lhs = make_expr(op.pos, Binary{op.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub, std::move(lhs),
                                           multiplicative()});
        }
        return lhs;
    }

    ExprPtr multiplicative()
    {
        auto lhs = unary();
        while (true) {
            BinaryOp op;
            switch (peek().kind) {
            case Tok::Star: op = BinaryOp::Mul; break;
            case Tok::Slash: op = BinaryOp::Div; break;
            case Tok::Percent: op = BinaryOp::Mod; break;
            default: return lhs;
            }
            const SourcePos pos = advance().pos;
            lhs = make_expr(pos, Binary{op, std::move(lhs), unary()});
        }
    }

    ExprPtr unary()
    {
        if (check(Tok::Minus)) {
            const SourcePos pos = advance().pos;
            return make_expr(pos, Unary{UnaryOp::Negate, unary()});
        }
        if (check(Tok::Not)) {
            const SourcePos pos = advance().pos;
            return make_expr(pos, Unary{UnaryOp::Not, unary()});
        }
        return postfix();
    }

    std::vector<ExprPtr> arguments()
    {
        std::vector<ExprPtr> args;
        if (!check(Tok::RParen)) {
            do {
                args.push_back(expression());
            } while (match(Tok::Comma));
        }
        expect(Tok::RParen, "to close the argument list");
        return args;
    }

    ExprPtr postfix()
    {
        auto e = primary();
        while (true) {
            if (check(Tok::Dot)) {
                advance();
                const Token& field = expect(Tok::Ident, "after '.'");
                const SourcePos pos = field.pos;
                e = make_expr(pos, Member{std::move(e), field.text});
            } else if (check(Tok::LBracket)) {
                const SourcePos pos = advance().pos;
                auto index = expression();
                expect(Tok::RBracket, "to close the index");
                e = make_expr(pos, Index{std::move(e), std::move(index)});
            } else if (check(Tok::LParen)) {
                fail(peek(), "only builtins and draw.<shape> can be called");
            } else {
                return e;
            }
        }
    }

    ExprPtr primary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Number:
            advance();
            return make_expr(t.pos, NumberLit{t.number});
        case Tok::String:
            advance();
            return make_expr(t.pos, StringLit{t.text});
        case Tok::KwTrue:
            advance();
            return make_expr(t.pos, BoolLit{true});
        case Tok::KwFalse:
            advance();
            return make_expr(t.pos, BoolLit{false});
        case Tok::LParen: {
            advance();
            auto inner = expression();
            expect(Tok::RParen, "to close the parenthesis");
            return inner;
        }
        case Tok::LBracket: {
            advance();
            ListLit list;
            if (!check(Tok::RBracket)) {
                do {
                    if (check(Tok::RBracket))
                        break;   // trailing comma
                    list.items.push_back(expression());
                } while (match(Tok::Comma));
            }
            expect(Tok::RBracket, "to close the list");
            return make_expr(t.pos, std::move(list));
        }
        case Tok::Ident: {
            advance();
            if (t.text == "draw" && check(Tok::Dot)) {
                advance();
                const Token& name = expect(Tok::Ident, "after 'draw.'");
                expect(Tok::LParen, "after draw." + name.text);
                DrawCall call{name.text, name.pos, arguments(), -1};
                return make_expr(t.pos, std::move(call));
            }
            if (check(Tok::LParen)) {
                advance();
                Call call{t.text, arguments(), -1, -1};
                return make_expr(t.pos, std::move(call));
            }
            return make_expr(t.pos, Ident{t.text, {}});
        }
        default:
            fail(t, "expected an expression, found " + found(t));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic>& diags_;
};

} // namespace

Program parse(std::string_view source, std::vector<Diagnostic>& diagnostics)
{
    auto tokens = tokenize(source, diagnostics);
    return Parser(std::move(tokens), diagnostics).run();
}

} // namespace sono::script
