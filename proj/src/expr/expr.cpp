#include "pw/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace pw::expr {

namespace {

NodePtr make_constant(double c)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Constant;
    n->value = c;
    return n;
}

NodePtr make_variable(const std::string& name)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Variable;
    n->name = name;
    return n;
}

std::optional<double> as_constant(const NodePtr& n)
{
    if (n->op == Op::Constant)
        return n->value;
    return std::nullopt;
}

bool is_value(const NodePtr& n, double v)
{
    return n->op == Op::Constant && n->value == v;
}

// Smart constructors fold constants and drop additive/multiplicative
// identities. Nothing else is simplified.
NodePtr make_unary(Op op, NodePtr a)
{
    if (op == Op::Negate) {
        if (auto c = as_constant(a))
            return make_constant(-*c);
        if (a->op == Op::Negate)
            return a->lhs;
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b)
{
    auto ca = as_constant(a);
    auto cb = as_constant(b);
    switch (op) {
    case Op::Add:
        if (ca && cb)
            return make_constant(*ca + *cb);
        if (is_value(a, 0.0))
            return b;
        if (is_value(b, 0.0))
            return a;
        break;
    case Op::Subtract:
        if (ca && cb)
            return make_constant(*ca - *cb);
        if (is_value(b, 0.0))
            return a;
        if (is_value(a, 0.0))
            return make_unary(Op::Negate, b);
        break;
    case Op::Multiply:
        if (ca && cb)
            return make_constant(*ca * *cb);
        if (is_value(a, 0.0) || is_value(b, 0.0))
            return make_constant(0.0);
        if (is_value(a, 1.0))
            return b;
        if (is_value(b, 1.0))
            return a;
        if (is_value(a, -1.0))
            return make_unary(Op::Negate, b);
        if (is_value(b, -1.0))
            return make_unary(Op::Negate, a);
        break;
    case Op::Divide:
        if (ca && cb && *cb != 0.0)
            return make_constant(*ca / *cb);
        if (is_value(a, 0.0) && !is_value(b, 0.0))
            return make_constant(0.0);
        if (is_value(b, 1.0))
            return a;
        break;
    default:
        break;
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr make_power(NodePtr a, double exponent)
{
    if (exponent == 0.0)
        return make_constant(1.0);
    if (exponent == 1.0)
        return a;
    if (auto c = as_constant(a)) {
        double v = std::pow(*c, exponent);
        if (std::isfinite(v))
            return make_constant(v);
    }
    auto n = std::make_shared<Node>();
    n->op = Op::Power;
    n->value = exponent;
    n->lhs = std::move(a);
    return n;
}

std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b)
{
    std::vector<std::string> out = a;
    for (const auto& v : b)
        if (std::find(out.begin(), out.end(), v) == out.end())
            out.push_back(v);
    return out;
}

void collect(const Node& n, std::set<std::string>& out)
{
    if (n.op == Op::Variable)
        out.insert(n.name);
    if (n.lhs)
        collect(*n.lhs, out);
    if (n.rhs)
        collect(*n.rhs, out);
}

NodePtr derive(const NodePtr& n, std::string_view x)
{
    const auto& a = n->lhs;
    const auto& b = n->rhs;
    switch (n->op) {
    case Op::Constant:
        return make_constant(0.0);
    case Op::Variable:
        return make_constant(n->name == x ? 1.0 : 0.0);
    case Op::Negate:
        return make_unary(Op::Negate, derive(a, x));
    case Op::Add:
        return make_binary(Op::Add, derive(a, x), derive(b, x));
    case Op::Subtract:
        return make_binary(Op::Subtract, derive(a, x), derive(b, x));
    case Op::Multiply:
        return make_binary(Op::Add, make_binary(Op::Multiply, derive(a, x), b),
                           make_binary(Op::Multiply, a, derive(b, x)));
    case Op::Divide: {
        // a'/b - a b'/b^2
        auto da = derive(a, x);
        auto db = derive(b, x);
        return make_binary(Op::Subtract, make_binary(Op::Divide, da, b),
                           make_binary(Op::Divide, make_binary(Op::Multiply, a, db), make_power(b, 2.0)));
    }
    case Op::Power: {
        auto da = derive(a, x);
        if (is_value(da, 0.0))
            return make_constant(0.0);
        return make_binary(Op::Multiply,
                           make_binary(Op::Multiply, make_constant(n->value), make_power(a, n->value - 1.0)), da);
    }
    case Op::Sin:
        return make_binary(Op::Multiply, make_unary(Op::Cos, a), derive(a, x));
    case Op::Cos:
        return make_unary(Op::Negate, make_binary(Op::Multiply, make_unary(Op::Sin, a), derive(a, x)));
    case Op::Exp:
        return make_binary(Op::Multiply, n, derive(a, x));
    case Op::Log:
        return make_binary(Op::Divide, derive(a, x), a);
    case Op::Sqrt:
        return make_binary(Op::Divide, derive(a, x), make_binary(Op::Multiply, make_constant(2.0), n));
    }
    return make_constant(0.0);
}

[[noreturn]] void domain_fail(const Node& n, const std::string& what)
{
    throw DomainError(what + " in '" + to_string(n) + "'", to_string(n));
}

double apply_unary(const Node& n, double a)
{
    switch (n.op) {
    case Op::Negate:
        return -a;
    case Op::Sin:
        return std::sin(a);
    case Op::Cos:
        return std::cos(a);
    case Op::Exp:
        return std::exp(a);
    case Op::Log:
        if (!(a > 0.0))
            domain_fail(n, "log of nonpositive value " + std::to_string(a));
        return std::log(a);
    case Op::Sqrt:
        if (a < 0.0)
            domain_fail(n, "sqrt of negative value " + std::to_string(a));
        return std::sqrt(a);
    case Op::Power: {
        const double e = n.value;
        if (a < 0.0 && e != std::floor(e))
            domain_fail(n, "non-integer power of negative value " + std::to_string(a));
        if (a == 0.0 && e < 0.0)
            domain_fail(n, "negative power of zero");
        return std::pow(a, e);
    }
    default:
        return a;
    }
}

double apply_binary(const Node& n, double a, double b)
{
    switch (n.op) {
    case Op::Add:
        return a + b;
    case Op::Subtract:
        return a - b;
    case Op::Multiply:
        return a * b;
    case Op::Divide:
        if (b == 0.0)
            domain_fail(n, "division by zero");
        return a / b;
    default:
        return 0.0;
    }
}

double eval_node(const Node& n, const Point& p)
{
    switch (n.op) {
    case Op::Constant:
        return n.value;
    case Op::Variable: {
        auto it = p.find(n.name);
        if (it == p.end())
            throw MissingCoordinateError(n.name);
        return it->second;
    }
    case Op::Add:
    case Op::Subtract:
    case Op::Multiply:
    case Op::Divide:
        return apply_binary(n, eval_node(*n.lhs, p), eval_node(*n.rhs, p));
    default:
        return apply_unary(n, eval_node(*n.lhs, p));
    }
}

int precedence(const Node& n)
{
    switch (n.op) {
    case Op::Add:
    case Op::Subtract:
        return 1;
    case Op::Multiply:
    case Op::Divide:
        return 2;
    case Op::Negate:
        return 3;
    case Op::Power:
        return 4;
    default:
        return 5;
    }
}

std::string number_text(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void print(const Node& n, std::ostringstream& os);

void print_wrapped(const Node& n, bool wrap, std::ostringstream& os)
{
    if (wrap)
        os << '(';
    print(n, os);
    if (wrap)
        os << ')';
}

void print(const Node& n, std::ostringstream& os)
{
    switch (n.op) {
    case Op::Constant:
        if (n.value < 0.0 || std::signbit(n.value))
            os << '(' << number_text(n.value) << ')';
        else
            os << number_text(n.value);
        return;
    case Op::Variable:
        os << n.name;
        return;
    case Op::Negate:
        os << '-';
        print_wrapped(*n.lhs, precedence(*n.lhs) < 3, os);
        return;
    case Op::Add:
    case Op::Subtract:
    case Op::Multiply:
    case Op::Divide: {
        const int p = precedence(n);
        print_wrapped(*n.lhs, precedence(*n.lhs) < p, os);
        switch (n.op) {
        case Op::Add: os << " + "; break;
        case Op::Subtract: os << " - "; break;
        case Op::Multiply: os << "*"; break;
        default: os << "/"; break;
        }
        // Left-associative: an equal-precedence right operand needs parens.
        print_wrapped(*n.rhs, precedence(*n.rhs) <= p, os);
        return;
    }
    case Op::Power:
        print_wrapped(*n.lhs, precedence(*n.lhs) < 5, os);
        os << '^' << number_text(n.value);
        return;
    case Op::Sin: os << "sin("; break;
    case Op::Cos: os << "cos("; break;
    case Op::Exp: os << "exp("; break;
    case Op::Log: os << "log("; break;
    case Op::Sqrt: os << "sqrt("; break;
    }
    print(*n.lhs, os);
    os << ')';
}

} // namespace

UnknownIdentifierError::UnknownIdentifierError(std::string identifier, std::size_t position)
    : ParseError("unknown identifier '" + identifier + "' at position " + std::to_string(position), position),
      identifier_(std::move(identifier))
{
}

ScalarField::ScalarField() : root_(make_constant(0.0)) {}

ScalarField::ScalarField(NodePtr root, std::vector<std::string> vars) : root_(std::move(root)), vars_(std::move(vars))
{
}

ScalarField ScalarField::constant(double c, std::vector<std::string> vars)
{
    return ScalarField(make_constant(c), std::move(vars));
}

ScalarField ScalarField::coordinate(const std::string& name, std::vector<std::string> vars)
{
    if (std::find(vars.begin(), vars.end(), name) == vars.end())
        throw InvalidArgumentError("coordinate '" + name + "' is not among the field's variables");
    return ScalarField(make_variable(name), std::move(vars));
}

std::optional<double> ScalarField::constant_value() const { return as_constant(root_); }

bool ScalarField::is_zero() const { return is_value(root_, 0.0); }

bool ScalarField::references(std::string_view name) const
{
    std::set<std::string> used;
    collect(*root_, used);
    return used.count(std::string(name)) > 0;
}

std::vector<std::string> ScalarField::referenced() const
{
    std::set<std::string> used;
    collect(*root_, used);
    return {used.begin(), used.end()};
}

ScalarField ScalarField::with_vars(std::vector<std::string> vars) const
{
    for (const auto& name : referenced())
        if (std::find(vars.begin(), vars.end(), name) == vars.end())
            throw InvalidArgumentError("expression '" + str() + "' references '" + name +
                                       "', which is not a coordinate of the target chart");
    return ScalarField(root_, std::move(vars));
}

std::string ScalarField::str() const { return to_string(*root_); }

ScalarField ScalarField::operator-() const { return {make_unary(Op::Negate, root_), vars_}; }

ScalarField operator+(const ScalarField& a, const ScalarField& b)
{
    return {make_binary(Op::Add, a.root_, b.root_), merge_vars(a.vars_, b.vars_)};
}

ScalarField operator-(const ScalarField& a, const ScalarField& b)
{
    return {make_binary(Op::Subtract, a.root_, b.root_), merge_vars(a.vars_, b.vars_)};
}

ScalarField operator*(const ScalarField& a, const ScalarField& b)
{
    return {make_binary(Op::Multiply, a.root_, b.root_), merge_vars(a.vars_, b.vars_)};
}

ScalarField operator/(const ScalarField& a, const ScalarField& b)
{
    return {make_binary(Op::Divide, a.root_, b.root_), merge_vars(a.vars_, b.vars_)};
}

ScalarField operator*(double a, const ScalarField& b) { return ScalarField::constant(a, b.vars()) * b; }

ScalarField operator+(double a, const ScalarField& b) { return ScalarField::constant(a, b.vars()) + b; }

ScalarField pow(const ScalarField& base, double exponent) { return {make_power(base.node(), exponent), base.vars()}; }
ScalarField sin(const ScalarField& s) { return {make_unary(Op::Sin, s.node()), s.vars()}; }
ScalarField cos(const ScalarField& s) { return {make_unary(Op::Cos, s.node()), s.vars()}; }
ScalarField exp(const ScalarField& s) { return {make_unary(Op::Exp, s.node()), s.vars()}; }
ScalarField log(const ScalarField& s) { return {make_unary(Op::Log, s.node()), s.vars()}; }
ScalarField sqrt(const ScalarField& s) { return {make_unary(Op::Sqrt, s.node()), s.vars()}; }

ScalarField differentiate(const ScalarField& s, std::string_view x)
{
    if (std::find(s.vars().begin(), s.vars().end(), x) == s.vars().end())
        throw InvalidArgumentError("cannot differentiate with respect to '" + std::string(x) +
                                   "': not a variable of the field");
    return {derive(s.node(), x), s.vars()};
}

double evaluate(const ScalarField& s, const Point& p)
{
    const double v = eval_node(*s.node(), p);
    if (!std::isfinite(v))
        domain_fail(*s.node(), "non-finite value");
    return v;
}

CompiledField::CompiledField(const ScalarField& s, const std::vector<std::string>& coords) : keep_alive_(s.node())
{
    // Post-order flattening; operands are pushed before their operator.
    std::function<void(const Node&)> emit = [&](const Node& n) {
        if (n.lhs)
            emit(*n.lhs);
        if (n.rhs)
            emit(*n.rhs);
        Instr in{n.op, n.value, 0, &n};
        if (n.op == Op::Variable) {
            auto it = std::find(coords.begin(), coords.end(), n.name);
            if (it == coords.end())
                throw MissingCoordinateError(n.name);
            in.index = static_cast<std::size_t>(it - coords.begin());
        }
        code_.push_back(in);
    };
    emit(*s.node());
}

double CompiledField::operator()(std::span<const double> x) const
{
    double stack[128];
    std::vector<double> heap;
    double* st = stack;
    if (code_.size() > 128) {
        heap.resize(code_.size());
        st = heap.data();
    }
    std::size_t top = 0;
    for (const auto& in : code_) {
        switch (in.op) {
        case Op::Constant:
            st[top++] = in.value;
            break;
        case Op::Variable:
            st[top++] = x[in.index];
            break;
        case Op::Add:
        case Op::Subtract:
        case Op::Multiply:
        case Op::Divide: {
            const double b = st[--top];
            const double a = st[top - 1];
            st[top - 1] = apply_binary(*in.node, a, b);
            break;
        }
        default:
            st[top - 1] = apply_unary(*in.node, st[top - 1]);
            break;
        }
    }
    const double v = top ? st[0] : 0.0;
    if (!std::isfinite(v))
        domain_fail(*keep_alive_, "non-finite value");
    return v;
}

std::string to_string(const Node& n)
{
    std::ostringstream os;
    print(n, os);
    return os.str();
}

std::string to_string(const ScalarField& s) { return to_string(*s.node()); }

} // namespace pw::expr
