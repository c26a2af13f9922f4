#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace mvforge {

// MV term over constants 0, 1, variables x1..xn, unary ~ and binary (+).
// Derived connectives are desugared at construction:
//   a (.) b := ~(~a (+) ~b),  a (-) b := a (.) ~b,
//   a v b   := ~(~a (+) b) (+) b,  a ^ b := ~(~a v ~b).
class MVTerm {
public:
    enum class Kind { Zero, One, Var, Neg, Plus };

    static MVTerm zero() { return MVTerm(Kind::Zero, 0, nullptr, nullptr); }
    static MVTerm one() { return MVTerm(Kind::One, 0, nullptr, nullptr); }
    static MVTerm var(int i) {
        if (i < 1) throw std::invalid_argument("MVTerm: variable index must be >= 1");
        return MVTerm(Kind::Var, i, nullptr, nullptr);
    }
    static MVTerm neg(MVTerm a) { return MVTerm(Kind::Neg, 0, a.n_, nullptr); }
    static MVTerm plus(MVTerm a, MVTerm b) { return MVTerm(Kind::Plus, 0, a.n_, b.n_); }
    static MVTerm otimes(MVTerm a, MVTerm b) { return neg(plus(neg(a), neg(b))); }
    static MVTerm ominus(MVTerm a, MVTerm b) { return otimes(a, neg(b)); }
    static MVTerm join(MVTerm a, MVTerm b) { return plus(neg(plus(neg(a), b)), b); }
    static MVTerm meet(MVTerm a, MVTerm b) { return neg(join(neg(a), neg(b))); }

    Kind kind() const { return n_->k; }
    int var_index() const { return n_->var; }
    MVTerm lhs() const { return MVTerm(n_->a); }
    MVTerm rhs() const { return MVTerm(n_->b); }

    int max_var() const {
        switch (n_->k) {
            case Kind::Zero:
            case Kind::One: return 0;
            case Kind::Var: return n_->var;
            case Kind::Neg: return lhs().max_var();
            case Kind::Plus: return std::max(lhs().max_var(), rhs().max_var());
        }
        return 0;
    }

    MVTerm substitute(int v, const MVTerm& r) const {
        switch (n_->k) {
            case Kind::Zero:
            case Kind::One: return *this;
            case Kind::Var: return n_->var == v ? r : *this;
            case Kind::Neg: return neg(lhs().substitute(v, r));
            case Kind::Plus: return plus(lhs().substitute(v, r), rhs().substitute(v, r));
        }
        return *this;
    }

    // Core-connective rendering of the desugared tree.
    std::string str() const {
        switch (n_->k) {
            case Kind::Zero: return "0";
            case Kind::One: return "1";
            case Kind::Var: return "x" + std::to_string(n_->var);
            case Kind::Neg: return "~" + lhs().str();
            case Kind::Plus: return "(" + lhs().str() + " (+) " + rhs().str() + ")";
        }
        return "";
    }

private:
    struct Node {
        Kind k;
        int var;
        std::shared_ptr<const Node> a, b;
    };

    MVTerm(Kind k, int v, std::shared_ptr<const Node> a, std::shared_ptr<const Node> b)
        : n_(std::make_shared<Node>(Node{k, v, std::move(a), std::move(b)})) {}
    explicit MVTerm(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    std::shared_ptr<const Node> n_;
};

namespace detail {

// Grammar:
//   expr  := sum
//   sum   := latt (("(+)") latt)*
//   latt  := prod (("v" | "^") prod)*
//   prod  := unary (("(.)" | "(-)") unary)*
//   unary := "~" unary | "0" | "1" | "x" digits | "(" expr ")"
// All binary levels left-associative.
class TermParser {
public:
    TermParser(const std::string& src, int arity) : src_(src), arity_(arity) {}

    MVTerm parse() {
        MVTerm t = sum();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return t;
    }

private:
    MVTerm sum() {
        MVTerm t = latt();
        while (match("(+)")) t = MVTerm::plus(t, latt());
        return t;
    }

    MVTerm latt() {
        MVTerm t = prod();
        for (;;) {
            if (match("v")) t = MVTerm::join(t, prod());
            else if (match("^")) t = MVTerm::meet(t, prod());
            else return t;
        }
    }

    MVTerm prod() {
        MVTerm t = unary();
        for (;;) {
            if (match("(.)")) t = MVTerm::otimes(t, unary());
            else if (match("(-)")) t = MVTerm::ominus(t, unary());
            else return t;
        }
    }

    MVTerm unary() {
        skip_ws();
        if (match("~")) return MVTerm::neg(unary());
        if (match("0")) return MVTerm::zero();
        if (match("1")) return MVTerm::one();
        if (pos_ < src_.size() && src_[pos_] == 'x') {
            size_t start = pos_++;
            size_t digits = 0;
            int idx = 0;
            while (pos_ < src_.size() && isdigit(static_cast<unsigned char>(src_[pos_]))) {
                idx = idx * 10 + (src_[pos_] - '0');
                ++pos_;
                ++digits;
            }
            if (digits == 0) fail_at(start, "expected variable index after 'x'");
            if (idx < 1 || idx > arity_) fail_at(start, "variable index out of range for arity " + std::to_string(arity_));
            return MVTerm::var(idx);
        }
        if (match("(")) {
            MVTerm t = sum();
            if (!match(")")) fail("expected ')'");
            return t;
        }
        fail("expected term");
        return MVTerm::zero();  // unreachable
    }

    void skip_ws() {
        while (pos_ < src_.size() && isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool match(const std::string& tok) {
        skip_ws();
        // "(" must not swallow the first character of "(+)", "(-)", "(.)".
        if (tok == "(" && (src_.compare(pos_, 3, "(+)") == 0 || src_.compare(pos_, 3, "(-)") == 0 ||
                           src_.compare(pos_, 3, "(.)") == 0))
            return false;
        if (src_.compare(pos_, tok.size(), tok) != 0) return false;
        pos_ += tok.size();
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) { fail_at(pos_, msg); }
    [[noreturn]] void fail_at(size_t p, const std::string& msg) {
        throw std::invalid_argument("term syntax error at position " + std::to_string(p) + ": " + msg);
    }

    const std::string& src_;
    int arity_;
    size_t pos_ = 0;
};

}  // namespace detail

inline MVTerm parse_term(const std::string& src, int arity) {
    if (arity < 0) throw std::invalid_argument("parse_term: arity must be >= 0");
    return detail::TermParser(src, arity).parse();
}

}  // namespace mvforge
