#pragma once

#include "sono/script/diagnostic.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sono::script {

// Static kinds used by the checker. Any means "not known until runtime".
enum class Type { Any, Void, Number, Bool, String, Color, Vec2, List };

std::string_view type_name(Type t);

// Where an identifier lives once resolved.
struct Slot {
    enum class Scope { Unresolved, Global, Local, Constant };
    Scope scope = Scope::Unresolved;
    int index = -1;
};

enum class UnaryOp { Negate, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class AssignOp { Set, Add, Sub, Mul, Div };

enum class HandlerKind { OnSound = 0, Update = 1, Draw = 2 };
inline constexpr int kHandlerCount = 3;

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct NumberLit {
    double value = 0.0;
};
struct StringLit {
    std::string value;
};
struct BoolLit {
    bool value = false;
};
struct ListLit {
    std::vector<ExprPtr> items;
};
struct Ident {
    std::string name;
    Slot slot;
};
struct Unary {
    UnaryOp op;
    ExprPtr operand;
};
struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
/// name(args): a builtin, or one handler calling another.
struct Call {
    std::string callee;
    std::vector<ExprPtr> args;
    int builtin = -1;   // index into the builtin table
    int handler = -1;   // HandlerKind when calling a handler
};
/// draw.name(args)
struct DrawCall {
    std::string primitive;
    SourcePos name_pos;
    std::vector<ExprPtr> args;
    int primitive_id = -1;
};
struct Member {
    ExprPtr object;
    std::string field;
};
struct Index {
    ExprPtr object;
    ExprPtr index;
};

struct Expr {
    SourcePos pos;
    std::variant<NumberLit, StringLit, BoolLit, ListLit, Ident, Unary, Binary, Call, DrawCall, Member, Index> node;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct LetStmt {
    std::string name;
    ExprPtr init;   // null when the initializer is missing (a checker error)
    Slot slot;
};
struct AssignStmt {
    ExprPtr target;
    AssignOp op = AssignOp::Set;
    ExprPtr value;
};
struct IfStmt {
    ExprPtr cond;
    Block then_block;
    Block else_block;   // `else if` nests a single IfStmt here
};
struct ForStmt {
    std::string var;
    SourcePos var_pos;
    Slot slot;
    ExprPtr start;   // range start, or the list being iterated
    ExprPtr end;     // null for list iteration
    Block body;
};
struct WhileStmt {
    ExprPtr cond;
    Block body;
};
struct ReturnStmt {};
struct BreakStmt {};
struct ContinueStmt {};
struct ExprStmt {
    ExprPtr expr;
};

struct Stmt {
    SourcePos pos;
    std::variant<LetStmt, AssignStmt, IfStmt, ForStmt, WhileStmt, ReturnStmt, BreakStmt, ContinueStmt, ExprStmt> node;
};

struct VarDecl {
    std::string name;
    SourcePos pos;
    ExprPtr init;
};

struct Param {
    std::string name;
    SourcePos pos;
};

struct FnDecl {
    std::string name;
    SourcePos pos;
    std::vector<Param> params;
    Block body;
    int local_count = 0;   // filled by the checker
};

struct Program {
    std::optional<std::string> title;
    SourcePos title_pos;
    std::optional<std::string> summary;
    std::vector<VarDecl> vars;
    std::vector<FnDecl> fns;
    SourcePos eof_pos;
};

} // namespace sono::script
