#include "limitlog/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "limitlog/poly.hpp"

namespace limitlog {

namespace {

// ---------------------------------------------------------------------------
// Lexer.
// ---------------------------------------------------------------------------

enum class Tok {
    Ident,     // lowercase-led or quoted name
    Var,       // uppercase-led name
    Integer,
    Arrow,     // :-
    Dot, Comma, LParen, RParen,
    Plus, Minus, Star, Slash,
    Lt, Le, Eq,
    KwNot, KwLub, KwMin, KwMax,
    End,
};

struct Token {
    Tok kind;
    std::string text;  // Ident/Var verbatim, Integer digits
    Int value;         // Integer
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_space();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Tok::End;
            return;
        }
        char c = src_[pos_];
        if (c == '\'') {
            bump();
            std::string name;
            while (pos_ < src_.size() && src_[pos_] != '\'') {
                if (src_[pos_] == '\n') throw ParseError(line_, col_, "unterminated quoted name");
                name.push_back(src_[pos_]);
                bump();
            }
            if (pos_ >= src_.size()) throw ParseError(line_, col_, "unterminated quoted name");
            bump();  // closing quote
            if (name.empty()) throw ParseError(tok_.line, tok_.col, "empty quoted name");
            tok_.kind = Tok::Ident;
            tok_.text = name;
            return;
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            std::string name = take_word();
            if (name == "not") tok_.kind = Tok::KwNot;
            else if (name == "lub") tok_.kind = Tok::KwLub;
            else if (name == "min") tok_.kind = Tok::KwMin;
            else if (name == "max") tok_.kind = Tok::KwMax;
            else {
                tok_.kind = Tok::Ident;
                tok_.text = name;
            }
            return;
        }
        if (std::isupper(static_cast<unsigned char>(c))) {
            tok_.kind = Tok::Var;
            tok_.text = take_word();
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                digits.push_back(src_[pos_]);
                bump();
            }
            tok_.kind = Tok::Integer;
            tok_.text = digits;
            tok_.value = Int(digits);
            return;
        }
        switch (c) {
            case ':':
                bump();
                if (pos_ < src_.size() && src_[pos_] == '-') {
                    bump();
                    tok_.kind = Tok::Arrow;
                    return;
                }
                throw ParseError(line_, col_, "expected ':-'");
            case '.': bump(); tok_.kind = Tok::Dot; return;
            case ',': bump(); tok_.kind = Tok::Comma; return;
            case '(': bump(); tok_.kind = Tok::LParen; return;
            case ')': bump(); tok_.kind = Tok::RParen; return;
            case '+': bump(); tok_.kind = Tok::Plus; return;
            case '-': bump(); tok_.kind = Tok::Minus; return;
            case '*': bump(); tok_.kind = Tok::Star; return;
            case '/': bump(); tok_.kind = Tok::Slash; return;
            case '<':
                bump();
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    bump();
                    tok_.kind = Tok::Le;
                } else {
                    tok_.kind = Tok::Lt;
                }
                return;
            case '=': bump(); tok_.kind = Tok::Eq; return;
            default:
                throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
        }
    }

    std::string take_word() {
        std::string out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(c);
                bump();
            } else {
                break;
            }
        }
        return out;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// ---------------------------------------------------------------------------
// Raw (sort-unresolved) clause structures.
// ---------------------------------------------------------------------------

struct RawArg {
    enum class Kind { Object, Var, Expr, Star };
    Kind kind;
    std::string name;  // Object / Var
    Term term;         // Expr (may contain variables; all of them numeric)
    int line = 1, col = 1;
};

struct RawAtom {
    std::string pred;
    std::vector<RawArg> args;
    int line = 1, col = 1;
};

struct RawLiteral {
    enum class Kind { Pos, Neg, Lub, Cmp };
    Kind kind;
    RawAtom atom;
    // comparison: op among <, <=, = (expanded later)
    enum class Op { Lt, Le, Eq };
    Op op = Op::Le;
    Term lhs, rhs;
    int line = 1, col = 1;
};

struct RawClause {
    RawAtom head;
    std::vector<RawLiteral> body;
    bool is_rule = false;  // had ':-'
    int line = 1;
};

struct RawDecl {
    bool is_min;
    std::string pred;
    int arity;
    int line = 1;
};

// ---------------------------------------------------------------------------
// Grammar.
// ---------------------------------------------------------------------------

class ClauseParser {
public:
    explicit ClauseParser(const std::string& text) : lex_(text) {}

    void run() {
        while (lex_.peek().kind != Tok::End) {
            if (lex_.peek().kind == Tok::KwMin || lex_.peek().kind == Tok::KwMax) {
                parse_decl();
            } else {
                parse_clause();
            }
        }
    }

    std::vector<RawClause> clauses;
    std::vector<RawDecl> decls;

private:
    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg);
    }
    Token expect(Tok k, const std::string& what) {
        Token t = lex_.take();
        if (t.kind != k) fail(t, "expected " + what);
        return t;
    }

    void parse_decl() {
        Token kw = lex_.take();  // min / max
        Token name = lex_.take();
        if (name.kind != Tok::Ident) fail(name, "predicate name after min/max");
        expect(Tok::Slash, "'/' in declaration");
        Token ar = expect(Tok::Integer, "arity");
        expect(Tok::Dot, "'.' after declaration");
        RawDecl d;
        d.is_min = (kw.kind == Tok::KwMin);
        d.pred = name.text;
        d.arity = static_cast<int>(ar.value);
        d.line = kw.line;
        if (d.arity < 1) throw ParseError(ar.line, ar.col, "min/max predicates need at least arity 1");
        decls.push_back(std::move(d));
    }

    void parse_clause() {
        RawClause c;
        c.line = lex_.peek().line;
        c.head = parse_atom();
        if (lex_.peek().kind == Tok::Arrow) {
            lex_.take();
            c.is_rule = true;
            c.body.push_back(parse_literal());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                c.body.push_back(parse_literal());
            }
        }
        expect(Tok::Dot, "'.' at end of clause");
        clauses.push_back(std::move(c));
    }

    RawLiteral parse_literal() {
        RawLiteral l;
        l.line = lex_.peek().line;
        l.col = lex_.peek().col;
        switch (lex_.peek().kind) {
            case Tok::KwNot:
                lex_.take();
                l.kind = RawLiteral::Kind::Neg;
                l.atom = parse_atom();
                return l;
            case Tok::KwLub:
                lex_.take();
                l.kind = RawLiteral::Kind::Lub;
                l.atom = parse_atom();
                return l;
            case Tok::Ident:
                l.kind = RawLiteral::Kind::Pos;
                l.atom = parse_atom();
                return l;
            default:
                // Anything else starts a comparison (Var, Integer, '-', '(').
                l.kind = RawLiteral::Kind::Cmp;
                l.lhs = parse_expr();
                switch (lex_.take().kind) {
                    case Tok::Lt: l.op = RawLiteral::Op::Lt; break;
                    case Tok::Le: l.op = RawLiteral::Op::Le; break;
                    case Tok::Eq: l.op = RawLiteral::Op::Eq; break;
                    default: throw ParseError(l.line, l.col, "expected comparison operator");
                }
                l.rhs = parse_expr();
                return l;
        }
    }

    RawAtom parse_atom() {
        Token name = lex_.take();
        if (name.kind != Tok::Ident) fail(name, "predicate name");
        RawAtom a;
        a.pred = name.text;
        a.line = name.line;
        a.col = name.col;
        if (lex_.peek().kind == Tok::LParen) {
            lex_.take();
            a.args.push_back(parse_arg());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                a.args.push_back(parse_arg());
            }
            expect(Tok::RParen, "')'");
        }
        return a;
    }

    RawArg parse_arg() {
        RawArg arg;
        const Token& t = lex_.peek();
        arg.line = t.line;
        arg.col = t.col;
        switch (t.kind) {
            case Tok::Ident:
                arg.kind = RawArg::Kind::Object;
                arg.name = lex_.take().text;
                return arg;
            case Tok::Var: {
                Token v = lex_.take();
                // A bare variable followed by arithmetic is an expression.
                if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus ||
                    lex_.peek().kind == Tok::Star) {
                    arg.kind = RawArg::Kind::Expr;
                    arg.term = parse_expr_after(Term::variable(v.text));
                } else {
                    arg.kind = RawArg::Kind::Var;
                    arg.name = v.text;
                }
                return arg;
            }
            case Tok::Star: {
                lex_.take();
                // A lone '*' (followed by ',' or ')') is the all-integers marker.
                if (lex_.peek().kind == Tok::Comma || lex_.peek().kind == Tok::RParen) {
                    arg.kind = RawArg::Kind::Star;
                    return arg;
                }
                throw ParseError(t.line, t.col, "'*' must stand alone as an argument");
            }
            default:
                arg.kind = RawArg::Kind::Expr;
                arg.term = parse_expr();
                return arg;
        }
    }

    // expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
    // factor := INT | VAR | '-' factor | '(' expr ')'
    Term parse_expr() { return parse_expr_after(parse_mul()); }

    Term parse_expr_after(Term first) {
        // `first` is a completed factor; continue any '*' chain, then +/-.
        Term acc = continue_mul(std::move(first));
        while (true) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus) {
                lex_.take();
                acc = Term::add(std::move(acc), parse_mul());
            } else if (k == Tok::Minus) {
                lex_.take();
                acc = Term::sub(std::move(acc), parse_mul());
            } else {
                return acc;
            }
        }
    }

    Term parse_mul() { return continue_mul(parse_factor()); }

    Term continue_mul(Term acc) {
        while (lex_.peek().kind == Tok::Star) {
            lex_.take();
            acc = Term::mul(std::move(acc), parse_factor());
        }
        return acc;
    }

    Term parse_factor() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::Integer:
                return Term::constant(t.value);
            case Tok::Var:
                return Term::variable(t.text);
            case Tok::Minus: {
                Term inner = parse_factor();
                if (inner.is_constant()) return Term::constant(-inner.value);
                return Term::mul(Term::constant(-1), std::move(inner));
            }
            case Tok::LParen: {
                Term inner = parse_expr();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident:
                fail(t, "object constant '" + t.text + "' inside a numeric expression");
            default:
                fail(t, "numeric term");
        }
    }

    Lexer lex_;
};

// ---------------------------------------------------------------------------
// Sort inference: decide for every predicate whether its final position is
// numeric, and for every variable whether it is an object or numeric
// variable.  Evidence is propagated to a fixpoint; conflicts are errors.
// ---------------------------------------------------------------------------

struct PredSig {
    int arity = -1;
    int numeric_last = -1;  // -1 unknown, 0 object, 1 numeric
    bool declared = false;
    bool declared_min = false;
    int line = 0;
};

struct SortState {
    std::map<std::string, PredSig> sigs;
    // variable sorts, keyed per clause index then name: -1 unknown, 0 object, 1 numeric
    std::vector<std::map<std::string, int>> var_sorts;
};

void note_pred_numeric(SortState& st, const std::string& pred, bool numeric, int line, int col) {
    PredSig& s = st.sigs[pred];
    int v = numeric ? 1 : 0;
    if (s.numeric_last == -1) {
        s.numeric_last = v;
    } else if (s.numeric_last != v) {
        throw ParseError(line, col, "predicate " + pred +
                                        " is used with both object and numeric final arguments");
    }
}

void note_var_sort(SortState& st, size_t clause, const std::string& var, bool numeric, int line,
                   int col) {
    int v = numeric ? 1 : 0;
    auto [it, inserted] = st.var_sorts[clause].try_emplace(var, v);
    if (!inserted && it->second != v) {
        throw ParseError(line, col, "variable " + var + " is used both as an object and a number");
    }
}

void register_atom_arity(SortState& st, const RawAtom& a) {
    PredSig& s = st.sigs[a.pred];
    int arity = static_cast<int>(a.args.size());
    if (s.arity == -1) {
        s.arity = arity;
    } else if (s.arity != arity) {
        throw ParseError(a.line, a.col, "predicate " + a.pred + " used with arity " +
                                            std::to_string(arity) + " and " + std::to_string(s.arity));
    }
}

SortState infer_sorts(const std::vector<RawClause>& clauses, const std::vector<RawDecl>& decls) {
    SortState st;
    st.var_sorts.resize(clauses.size());
    for (size_t i = 0; i < clauses.size(); ++i) st.var_sorts[i] = {};

    for (const RawDecl& d : decls) {
        PredSig& s = st.sigs[d.pred];
        if (s.declared) {
            throw ParseError(d.line, 1, "duplicate declaration for predicate " + d.pred);
        }
        s.declared = true;
        s.declared_min = d.is_min;
        if (s.arity == -1) s.arity = d.arity;
        if (s.arity != d.arity)
            throw ParseError(d.line, 1, "declaration arity for " + d.pred +
                                            " disagrees with its use (" + std::to_string(s.arity) + ")");
        s.numeric_last = 1;
    }

    // Arity registration and immediate evidence.
    auto scan_atom = [&](size_t ci, const RawAtom& a) {
        register_atom_arity(st, a);
        for (size_t j = 0; j < a.args.size(); ++j) {
            const RawArg& arg = a.args[j];
            bool last = (j + 1 == a.args.size());
            switch (arg.kind) {
                case RawArg::Kind::Object:
                    if (last) note_pred_numeric(st, a.pred, false, arg.line, arg.col);
                    break;
                case RawArg::Kind::Expr:
                    if (!last)
                        throw ParseError(arg.line, arg.col,
                                         "numeric term outside the final argument of " + a.pred);
                    note_pred_numeric(st, a.pred, true, arg.line, arg.col);
                    for (const std::string& v : arg.term.vars())
                        note_var_sort(st, ci, v, true, arg.line, arg.col);
                    break;
                case RawArg::Kind::Star:
                    if (!last)
                        throw ParseError(arg.line, arg.col,
                                         "'*' outside the final argument of " + a.pred);
                    note_pred_numeric(st, a.pred, true, arg.line, arg.col);
                    break;
                case RawArg::Kind::Var:
                    if (!last) note_var_sort(st, ci, arg.name, false, arg.line, arg.col);
                    break;
            }
        }
    };

    for (size_t i = 0; i < clauses.size(); ++i) {
        const RawClause& c = clauses[i];
        scan_atom(i, c.head);
        for (const RawLiteral& l : c.body) {
            if (l.kind == RawLiteral::Kind::Cmp) {
                for (const std::string& v : l.lhs.vars()) note_var_sort(st, i, v, true, l.line, l.col);
                for (const std::string& v : l.rhs.vars()) note_var_sort(st, i, v, true, l.line, l.col);
            } else {
                scan_atom(i, l.atom);
            }
        }
    }

    // Propagate variable <-> predicate-position constraints to fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        auto visit_atom = [&](size_t ci, const RawAtom& a) {
            if (a.args.empty()) return;
            const RawArg& lastArg = a.args.back();
            if (lastArg.kind != RawArg::Kind::Var) return;
            const PredSig& s = st.sigs[a.pred];
            int vs = st.var_sorts[ci].count(lastArg.name) ? st.var_sorts[ci][lastArg.name] : -1;
            if (s.numeric_last != -1 && vs == -1) {
                note_var_sort(st, ci, lastArg.name, s.numeric_last == 1, lastArg.line, lastArg.col);
                changed = true;
            } else if (s.numeric_last == -1 && vs != -1) {
                note_pred_numeric(st, a.pred, vs == 1, lastArg.line, lastArg.col);
                changed = true;
            } else if (s.numeric_last != -1 && vs != -1 && (s.numeric_last == 1) != (vs == 1)) {
                // note_* would have thrown already, but keep the guard tight.
                throw ParseError(lastArg.line, lastArg.col,
                                 "sort clash between " + a.pred + " and variable " + lastArg.name);
            }
        };
        for (size_t i = 0; i < clauses.size(); ++i) {
            visit_atom(i, clauses[i].head);
            for (const RawLiteral& l : clauses[i].body)
                if (l.kind != RawLiteral::Kind::Cmp) visit_atom(i, l.atom);
        }
    }

    // Default: positions with no evidence either way are object-sorted.
    for (auto& [name, s] : st.sigs)
        if (s.numeric_last == -1) s.numeric_last = 0;
    return st;
}

// ---------------------------------------------------------------------------
// Typed construction + normalisation.
// ---------------------------------------------------------------------------

struct Builder {
    const SortState& st;
    ParseOptions opts;
    Program out;

    PredKind kind_of(const std::string& pred) const {
        const PredSig& s = st.sigs.at(pred);
        if (s.numeric_last != 1) return PredKind::Object;
        if (!s.declared) return PredKind::Ordinary;
        return s.declared_min ? PredKind::LimitMin : PredKind::LimitMax;
    }

    Atom build_atom(const RawAtom& ra) const {
        Atom a;
        a.pred = ra.pred;
        const PredSig& s = st.sigs.at(ra.pred);
        bool numeric = (s.numeric_last == 1);
        size_t nobj = ra.args.size() - (numeric ? 1 : 0);
        for (size_t j = 0; j < nobj; ++j) {
            const RawArg& arg = ra.args[j];
            switch (arg.kind) {
                case RawArg::Kind::Object:
                    a.objects.push_back(ObjTerm::constant(arg.name));
                    break;
                case RawArg::Kind::Var:
                    a.objects.push_back(ObjTerm::var(arg.name));
                    break;
                default:
                    throw ParseError(arg.line, arg.col,
                                     "expected an object term in argument " + std::to_string(j + 1) +
                                         " of " + ra.pred);
            }
        }
        if (numeric) {
            const RawArg& arg = ra.args.back();
            switch (arg.kind) {
                case RawArg::Kind::Var:
                    a.numeric = Term::variable(arg.name);
                    break;
                case RawArg::Kind::Expr:
                    a.numeric = arg.term;
                    break;
                case RawArg::Kind::Star:
                    a.numeric = Term::star();
                    break;
                case RawArg::Kind::Object:
                    throw ParseError(arg.line, arg.col, "object constant '" + arg.name +
                                                            "' in the numeric position of " + ra.pred);
            }
        }
        return a;
    }

    // Fresh numeric variable name not used in the rule yet.
    static std::string fresh_var(std::set<std::string>& used) {
        for (int i = 1;; ++i) {
            std::string name = "V" + std::to_string(i);
            if (used.insert(name).second) return name;
        }
    }

    // Every variable name occurring anywhere in the raw clause; fresh
    // variables introduced by desugaring must avoid all of them.
    static std::set<std::string> clause_vars(const RawClause& rc) {
        std::set<std::string> used;
        auto scan_atom = [&used](const RawAtom& a) {
            for (const RawArg& arg : a.args) {
                if (arg.kind == RawArg::Kind::Var) used.insert(arg.name);
                if (arg.kind == RawArg::Kind::Expr) arg.term.collect_vars(used);
            }
        };
        scan_atom(rc.head);
        for (const RawLiteral& l : rc.body) {
            if (l.kind == RawLiteral::Kind::Cmp) {
                l.lhs.collect_vars(used);
                l.rhs.collect_vars(used);
            } else {
                scan_atom(l.atom);
            }
        }
        return used;
    }

    Rule build_rule(const RawClause& rc) const {
        Rule r;
        r.head = build_atom(rc.head);
        std::set<std::string> used = clause_vars(rc);

        // First pass: expand lub / '=' sugar into plain literals.
        std::vector<Literal> body;
        for (const RawLiteral& rl : rc.body) {
            switch (rl.kind) {
                case RawLiteral::Kind::Pos:
                    body.push_back(Literal::pos(build_atom(rl.atom)));
                    break;
                case RawLiteral::Kind::Neg:
                    body.push_back(Literal::neg(build_atom(rl.atom)));
                    break;
                case RawLiteral::Kind::Cmp: {
                    if (rl.op == RawLiteral::Op::Eq) {
                        body.push_back(Literal::compare({Comparison::Op::Le, rl.lhs, rl.rhs}));
                        body.push_back(Literal::compare({Comparison::Op::Le, rl.rhs, rl.lhs}));
                    } else {
                        Comparison::Op op = rl.op == RawLiteral::Op::Lt ? Comparison::Op::Lt
                                                                        : Comparison::Op::Le;
                        body.push_back(Literal::compare({op, rl.lhs, rl.rhs}));
                    }
                    break;
                }
                case RawLiteral::Kind::Lub: {
                    Atom a = build_atom(rl.atom);
                    PredKind k = kind_of(a.pred);
                    if (!is_limit(k))
                        throw ParseError(rl.line, rl.col,
                                         "lub requires a min/max declared predicate, but " + a.pred +
                                             " is not one");
                    if (!a.numeric || a.numeric->is_star())
                        throw ParseError(rl.line, rl.col, "lub needs a numeric argument");
                    Term t = *a.numeric;
                    std::string m = fresh_var(used);
                    Term shifted = (k == PredKind::LimitMax) ? Term::add(t, Term::constant(1))
                                                             : Term::sub(t, Term::constant(1));
                    Atom negAtom = a;
                    negAtom.numeric = Term::variable(m);
                    body.push_back(Literal::pos(a));
                    body.push_back(Literal::neg(negAtom));
                    body.push_back(Literal::compare({Comparison::Op::Le, Term::variable(m), shifted}));
                    body.push_back(Literal::compare({Comparison::Op::Le, shifted, Term::variable(m)}));
                    break;
                }
            }
        }

        // Second pass: flatten compound numeric arguments of standard body
        // literals into fresh variables plus equalities.
        if (opts.flatten_bodies) {
            std::vector<Literal> flat;
            std::vector<Literal> extras;
            for (Literal& l : body) {
                if (l.is_standard() && l.atom.numeric && !l.atom.numeric->is_constant() &&
                    !l.atom.numeric->is_variable()) {
                    if (l.atom.numeric->is_star())
                        throw ValidationError("'*' in a rule body of " + l.atom.pred);
                    Term t = *l.atom.numeric;
                    std::string v = fresh_var(used);
                    l.atom.numeric = Term::variable(v);
                    extras.push_back(Literal::compare({Comparison::Op::Le, Term::variable(v), t}));
                    extras.push_back(Literal::compare({Comparison::Op::Le, t, Term::variable(v)}));
                }
                flat.push_back(std::move(l));
            }
            for (Literal& e : extras) flat.push_back(std::move(e));
            body = std::move(flat);
        }

        r.body = std::move(body);

        // Ground compound numeric head terms fold to constants; a lone
        // numeric variable in a fact head means "all integers".
        if (r.head.numeric && !r.head.numeric->is_star()) {
            if (r.body.empty() && r.head.numeric->is_variable()) {
                PredKind k = kind_of(r.head.pred);
                if (!is_limit(k))
                    throw ValidationError("fact over " + r.head.pred +
                                          " needs a min/max declaration to range over all integers");
                r.head.numeric = Term::star();
            } else if (r.head.numeric->vars().empty()) {
                r.head.numeric = Term::constant(Poly::of(*r.head.numeric).eval());
            }
        }
        return r;
    }
};

// Validation used for stand-alone datasets: like validate_program but '*'
// over an undeclared numeric predicate is allowed (the merge with a program
// carrying the declaration re-validates strictly).
void validate_dataset_leniently(const Program& p) {
    for (const Rule& r : p.rules) {
        if (!r.body.empty()) throw ValidationError("datasets hold facts only; found a rule");
        for (const ObjTerm& o : r.head.objects)
            if (o.is_var) throw ValidationError("dataset facts must be ground");
        if (r.head.numeric && !r.head.numeric->is_star() && !r.head.numeric->is_constant())
            throw ValidationError("dataset facts must be ground over " + r.head.pred);
    }
}

Program build_program(const std::vector<RawClause>& clauses, const std::vector<RawDecl>& decls,
                      const ParseOptions& opts, bool dataset_mode) {
    SortState st = infer_sorts(clauses, decls);
    Builder b{st, opts, {}};

    for (const auto& [name, sig] : st.sigs) {
        PredicateInfo info;
        info.name = name;
        info.arity = sig.arity;
        info.kind = b.kind_of(name);
        info.declared = sig.declared;
        b.out.preds[name] = info;
    }
    for (const RawClause& c : clauses) b.out.rules.push_back(b.build_rule(c));

    for (const Rule& r : b.out.rules)
        if (!r.body.empty()) b.out.preds[r.head.pred].edb = false;

    if (dataset_mode) {
        validate_dataset_leniently(b.out);
    } else {
        validate_program(b.out, /*require_safe=*/!opts.allow_unsafe);
    }
    return b.out;
}

}  // namespace

Program parse_program(const std::string& text, const ParseOptions& opts) {
    ClauseParser cp(text);
    cp.run();
    return build_program(cp.clauses, cp.decls, opts, /*allow_undeclared_star=*/false);
}

Dataset parse_dataset(const std::string& text) {
    ClauseParser cp(text);
    cp.run();
    if (!cp.decls.empty())
        throw ValidationError("datasets hold facts only; min/max declarations belong in the program");
    for (const RawClause& c : cp.clauses)
        if (c.is_rule) throw ValidationError("datasets hold facts only; found a rule");
    return build_program(cp.clauses, cp.decls, ParseOptions{}, /*allow_undeclared_star=*/true);
}

GroundFact parse_query(const std::string& text, const Program& vocab) {
    std::string trimmed = text;
    // Tolerate a missing final '.'.
    size_t end = trimmed.find_last_not_of(" \t\r\n");
    if (end == std::string::npos) throw ValidationError("empty query");
    if (trimmed[end] != '.') trimmed += ".";

    ClauseParser cp(trimmed);
    cp.run();
    if (!cp.decls.empty() || cp.clauses.size() != 1 || cp.clauses[0].is_rule)
        throw ValidationError("a query is a single fact");
    const RawAtom& ra = cp.clauses[0].head;

    auto it = vocab.preds.find(ra.pred);
    if (it == vocab.preds.end()) throw ValidationError("unknown predicate in query: " + ra.pred);
    const PredicateInfo& info = it->second;
    if (static_cast<int>(ra.args.size()) != info.arity)
        throw ValidationError("query arity mismatch for " + ra.pred);

    GroundFact f;
    f.pred = ra.pred;
    size_t nobj = ra.args.size() - (is_numeric(info.kind) ? 1 : 0);
    for (size_t j = 0; j < nobj; ++j) {
        if (ra.args[j].kind != RawArg::Kind::Object)
            throw ValidationError("query arguments must be ground object constants");
        f.objects.push_back(ra.args[j].name);
    }
    if (is_numeric(info.kind)) {
        const RawArg& arg = ra.args.back();
        f.has_numeric = true;
        if (arg.kind == RawArg::Kind::Star) {
            if (!is_limit(info.kind))
                throw ValidationError("'*' query over non-limit predicate " + f.pred);
            f.all_ints = true;
        } else if (arg.kind == RawArg::Kind::Expr && arg.term.vars().empty()) {
            f.value = Poly::of(arg.term).eval();
        } else {
            throw ValidationError("query numeric argument must be a ground integer or '*'");
        }
    }
    return f;
}

OrderedCheck check_ordered(const Dataset& D) {
    OrderedCheck res;
    auto bad = [&res](std::string why) {
        res.ok = false;
        res.reason = std::move(why);
        return res;
    };

    for (const char* p : {"first", "next", "last"}) {
        auto it = D.preds.find(p);
        if (it != D.preds.end() && it->second.kind != PredKind::Object)
            return bad(std::string(p) + " must be an object predicate");
    }
    auto arity_of = [&](const std::string& p) -> int {
        auto it = D.preds.find(p);
        return it == D.preds.end() ? -1 : it->second.arity;
    };
    if (arity_of("first") == -1) return bad("no first fact");
    if (arity_of("first") != 1) return bad("first must have arity 1");
    if (arity_of("last") == -1) return bad("no last fact");
    if (arity_of("last") != 1) return bad("last must have arity 1");
    if (arity_of("next") != -1 && arity_of("next") != 2) return bad("next must have arity 2");

    std::set<std::string> objects;
    std::vector<std::string> firsts, lasts;
    std::map<std::string, std::string> succ;
    std::set<std::string> has_pred;
    for (const GroundFact& f : facts_of(D)) {
        for (const std::string& o : f.objects) objects.insert(o);
        if (f.pred == "first") firsts.push_back(f.objects[0]);
        if (f.pred == "last") lasts.push_back(f.objects[0]);
        if (f.pred == "next") {
            if (succ.count(f.objects[0]))
                return bad(f.objects[0] + " has two next successors");
            if (!has_pred.insert(f.objects[1]).second)
                return bad(f.objects[1] + " has two next predecessors");
            succ[f.objects[0]] = f.objects[1];
        }
    }
    if (firsts.size() != 1) return bad("expected exactly one first fact");
    if (lasts.size() != 1) return bad("expected exactly one last fact");

    std::vector<std::string> order;
    std::set<std::string> seen;
    std::string cur = firsts[0];
    while (true) {
        if (!seen.insert(cur).second) return bad("enumeration revisits " + cur);
        order.push_back(cur);
        auto it = succ.find(cur);
        if (it == succ.end()) break;
        cur = it->second;
    }
    if (order.back() != lasts[0]) return bad("enumeration does not end at the last object");
    if (order.size() != objects.size() || seen != objects)
        return bad("enumeration does not cover exactly the objects of the dataset");
    if (succ.size() != order.size() - 1) return bad("stray next facts outside the enumeration");

    res.ok = true;
    res.order = std::move(order);
    return res;
}

}  // namespace limitlog
