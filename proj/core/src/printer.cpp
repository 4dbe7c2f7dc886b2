#include "stipula/syntax.hpp"

#include <sstream>

namespace stipula {

namespace {

// Binding strength used to decide where parentheses are needed.
int precedence(const Expr& e) {
    if (e.kind == ExprKind::Not)
        return 3;
    if (e.kind != ExprKind::Binary)
        return 7;
    switch (e.op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 6;
    default: return 4;
    }
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i)
            out += ", ";
        out += names[i];
    }
    return out;
}

void print_expr(std::ostream& os, const Expr& e);

void print_operand(std::ostream& os, const Expr& e, int min_prec) {
    if (precedence(e) < min_prec) {
        os << '(';
        print_expr(os, e);
        os << ')';
    } else {
        print_expr(os, e);
    }
}

void print_expr(std::ostream& os, const Expr& e) {
    switch (e.kind) {
    case ExprKind::Now: os << "now"; break;
    case ExprKind::Real: {
        // shortest form that parses back to the same value
        std::string s = e.real.to_string();
        while (s.back() == '0')
            s.pop_back();
        if (s.back() == '.')
            s.pop_back();
        if (s.front() == '-')
            os << "(0 - " << s.substr(1) << ')';
        else
            os << s;
        break;
    }
    case ExprKind::String: os << quote(e.text); break;
    case ExprKind::Bool: os << (e.boolean ? "true" : "false"); break;
    case ExprKind::Name: os << e.text; break;
    case ExprKind::Pair:
        os << '(';
        print_expr(os, e.operands[0]);
        os << ", ";
        print_expr(os, e.operands[1]);
        os << ')';
        break;
    case ExprKind::Binary: {
        int p = precedence(e);
        // left-associative: the right operand needs strictly tighter binding;
        // relational operators do not chain without parentheses either way
        print_operand(os, e.operands[0], is_relational(e.op) ? p + 1 : p);
        os << ' ' << spelling(e.op) << ' ';
        print_operand(os, e.operands[1], p + 1);
        break;
    }
    case ExprKind::Not:
        os << '!';
        print_operand(os, e.operands[0], 3);
        break;
    case ExprKind::Uses:
    case ExprKind::UseOnce:
        os << (e.kind == ExprKind::Uses ? "uses(" : "use_once(") << e.text;
        if (!e.party.empty())
            os << ", " << e.party;
        os << ')';
        break;
    }
}

// Leading expressions of a statement must not be a bare parenthesized term,
// which the parser would read as a conditional when followed by '{'. Only the
// If statement itself starts with one.
void print_stmt_value(std::ostream& os, const Expr& e) { print_expr(os, e); }

void print_stmts(std::ostream& os, const std::vector<Stmt>& body, int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
    std::string pad(indent, ' ');
    os << pad;
    switch (s.kind) {
    case StmtKind::FieldAssign:
    case StmtKind::ValueSend:
        print_stmt_value(os, s.value);
        os << " -> " << s.target << '\n';
        break;
    case StmtKind::AssetMove:
    case StmtKind::AssetSend:
        print_stmt_value(os, s.value);
        if (s.value.kind == ExprKind::Name && s.value.text == s.source)
            os << " -o " << s.target << '\n';
        else
            os << " -o " << s.source << ", " << s.target << '\n';
        break;
    case StmtKind::If:
        os << '(';
        print_expr(os, s.value);
        os << ") {\n";
        print_stmts(os, s.body, indent + 2);
        os << pad << "}\n";
        break;
    }
}

void print_stmts(std::ostream& os, const std::vector<Stmt>& body, int indent) {
    for (const auto& s : body)
        print_stmt(os, s, indent);
}

} // namespace

std::string pretty_print(const Expr& expr) {
    std::ostringstream os;
    print_expr(os, expr);
    return os.str();
}

std::string pretty_print(const Stmt& stmt) {
    std::ostringstream os;
    print_stmt(os, stmt, 0);
    std::string out = os.str();
    if (!out.empty() && out.back() == '\n')
        out.pop_back();
    return out;
}

std::string pretty_print(const ContractDecl& c) {
    std::ostringstream os;
    os << "stipula " << c.name << " {\n";
    if (!c.assets.empty())
        os << "  assets " << join(c.assets) << '\n';
    if (!c.fields.empty())
        os << "  fields " << join(c.fields) << '\n';
    if (!c.assets.empty() || !c.fields.empty())
        os << '\n';
    const auto& a = c.agreement;
    os << "  agreement (" << join(a.parties) << ")(" << join(a.init_fields) << ") {\n";
    for (const auto& g : a.groups)
        os << "    " << join(g.parties) << " : " << join(g.fields) << '\n';
    os << "  } => @" << a.initial_state << '\n';
    for (const auto& f : c.functions) {
        os << "\n  @" << f.guard_state << ' ' << f.caller << " : " << f.name;
        bool need_parens = !f.value_params.empty() || (f.precondition && f.asset_params.empty());
        if (need_parens)
            os << " (" << join(f.value_params) << ')';
        if (!f.asset_params.empty())
            os << " [" << join(f.asset_params) << ']';
        if (f.precondition) {
            os << " (";
            print_expr(os, *f.precondition);
            os << ')';
        }
        os << " {\n";
        print_stmts(os, f.body, 4);
        for (const auto& ev : f.events) {
            os << "    ";
            print_expr(os, ev.trigger);
            os << " >> @" << ev.guard_state << " {\n";
            print_stmts(os, ev.handler, 6);
            os << "    } => @" << ev.next_state << '\n';
        }
        os << "  } => @" << f.next_state << '\n';
    }
    os << "}\n";
    return os.str();
}

} // namespace stipula
