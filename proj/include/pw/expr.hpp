#pragma once

// Scalar fields over named chart coordinates: parsing, exact symbolic
// differentiation and checked point evaluation.

#include "pw/error.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pw::expr {

/// A point assigns a real value to coordinate names. Coordinates a field does
/// not reference are ignored.
using Point = std::map<std::string, double, std::less<>>;

enum class Op {
    Constant,
    Variable,
    Negate,
    Add,
    Subtract,
    Multiply,
    Divide,
    Power,   // constant real exponent stored in `value`
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
};

struct Node {
    Op op = Op::Constant;
    double value = 0.0;          // constant, or exponent of Power
    std::string name;            // Variable
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error("parse_error", message), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownIdentifierError : public ParseError {
public:
    UnknownIdentifierError(std::string identifier, std::size_t position);

    const std::string& identifier() const noexcept { return identifier_; }

private:
    std::string identifier_;
};

/// log of a nonpositive value, sqrt of a negative value, division by zero,
/// or a power that is undefined over the reals.
class DomainError : public Error {
public:
    DomainError(const std::string& message, std::string subexpression)
        : Error("domain_error", message), subexpression_(std::move(subexpression)) {}

    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

class MissingCoordinateError : public Error {
public:
    explicit MissingCoordinateError(const std::string& name)
        : Error("missing_coordinate", "point has no value for coordinate '" + name + "'"), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Immutable expression tree together with the ordered coordinate names it may
/// reference. Copies share the tree.
class ScalarField {
public:
    ScalarField();
    ScalarField(NodePtr root, std::vector<std::string> vars);

    static ScalarField constant(double c, std::vector<std::string> vars = {});
    static ScalarField coordinate(const std::string& name, std::vector<std::string> vars);

    const std::vector<std::string>& vars() const noexcept { return vars_; }
    const NodePtr& node() const noexcept { return root_; }

    std::optional<double> constant_value() const;
    bool is_zero() const;
    bool references(std::string_view name) const;
    std::vector<std::string> referenced() const;

    /// Same tree with a different declared coordinate list. Throws if the tree
    /// references a name outside `vars`.
    ScalarField with_vars(std::vector<std::string> vars) const;

    std::string str() const;

    ScalarField operator-() const;
    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double a, const ScalarField& b);
    friend ScalarField operator+(double a, const ScalarField& b);

private:
    NodePtr root_;
    std::vector<std::string> vars_;
};

ScalarField pow(const ScalarField& base, double exponent);
ScalarField sin(const ScalarField& s);
ScalarField cos(const ScalarField& s);
ScalarField exp(const ScalarField& s);
ScalarField log(const ScalarField& s);
ScalarField sqrt(const ScalarField& s);

/// Parses `text` (grammar in README) against the coordinate names `vars`.
ScalarField parse(std::string_view text, std::vector<std::string> vars);

/// Exact partial derivative. `x` must be one of `s.vars()`.
ScalarField differentiate(const ScalarField& s, std::string_view x);

double evaluate(const ScalarField& s, const Point& p);

/// A field flattened into a postfix program whose variables are resolved to
/// positions in a fixed coordinate list. Evaluation has the same domain checks
/// as `evaluate` and is what the geometry code runs per sample point.
class CompiledField {
public:
    CompiledField() = default;
    CompiledField(const ScalarField& s, const std::vector<std::string>& coords);

    double operator()(std::span<const double> x) const;

private:
    struct Instr {
        Op op;
        double value;
        std::size_t index;
        const Node* node;
    };
    std::vector<Instr> code_;
    NodePtr keep_alive_;
};

/// Text that `parse` accepts and that evaluates identically.
std::string to_string(const ScalarField& s);
std::string to_string(const Node& n);

} // namespace pw::expr
