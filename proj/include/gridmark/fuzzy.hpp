#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridmark {

/// Piecewise-linear membership function. A triangle (a, b, c) is stored as
/// the trapezoid (a, b, b, c); a == b or c == d gives a vertical shoulder
/// with membership 1 at the coincident breakpoint.
class MembershipFunction {
public:
    static MembershipFunction triangular(double a, double b, double c);
    static MembershipFunction trapezoidal(double a, double b, double c, double d);

    double operator()(double x) const;
    bool is_triangular() const { return triangular_; }
    const std::array<double, 4>& breakpoints() const { return p_; }

private:
    MembershipFunction(std::array<double, 4> p, bool tri);
    std::array<double, 4> p_;
    bool triangular_;
};

struct FuzzyTerm {
    std::string name;
    MembershipFunction mf;
};

class FuzzyVariable {
public:
    FuzzyVariable(std::string name, double lo, double hi, std::vector<FuzzyTerm> terms);

    const std::string& name() const { return name_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<FuzzyTerm>& terms() const { return terms_; }

    // Case-insensitive lookup; -1 when absent.
    int term_index(std::string_view term) const;

    // Membership of the clamped input in every term, in term order.
    std::vector<double> fuzzify(double x) const;

private:
    std::string name_;
    double lo_;
    double hi_;
    std::vector<FuzzyTerm> terms_;
};

struct Clause {
    std::string variable;
    std::string term;
    friend bool operator==(const Clause&, const Clause&) = default;
};

// IF a1 AND a2 ... THEN consequent, scaled by weight.
struct Rule {
    std::vector<Clause> antecedents;
    Clause consequent;
    double weight = 1.0;
    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Parses the rule DSL:
///   rule   := IF clause (AND clause)* THEN ident IS ident (WEIGHT number)? ;
///   clause := ident IS ident        (== is accepted in place of IS)
/// Keywords and identifiers are case-insensitive; identifiers are resolved
/// against `vocabulary` and stored with the vocabulary's spelling. The last
/// vocabulary entry is the output variable.
std::vector<Rule> parse_rules(std::string_view text, std::span<const FuzzyVariable> vocabulary);
std::vector<Rule> parse_rules(std::string_view text);

std::string print_rule(const Rule& r);
std::string print_rules(std::span<const Rule> rules);

/// Mamdani engine: AND = min, implication = min, aggregation = max,
/// centroid defuzzification sampled at kCentroidSamples uniform points.
class FuzzySystem {
public:
    static constexpr int kCentroidSamples = 1001;

    FuzzySystem(std::vector<FuzzyVariable> inputs, FuzzyVariable output, std::vector<Rule> rules);

    const std::vector<FuzzyVariable>& inputs() const { return inputs_; }
    const FuzzyVariable& output() const { return output_; }
    const std::vector<Rule>& rules() const { return rules_; }

    // Throws EmptyAggregate if no rule fires.
    double evaluate(std::span<const double> inputs) const;
    double evaluate(double curvature, double bumpiness, double area) const;

    // Output term with the largest membership at w; ties go to the lower index.
    int weight_class_index(double w) const;
    const std::string& weight_class(double w) const;

    // True when every combination of input terms is matched by some rule,
    // so every input point fires at least one rule.
    bool is_total() const;

private:
    struct Compiled {
        std::vector<std::pair<int, int>> antecedents; // (input index, term index)
        int consequent;
        double weight;
    };

    std::vector<FuzzyVariable> inputs_;
    FuzzyVariable output_;
    std::vector<Rule> rules_;
    std::vector<Compiled> compiled_;
    std::vector<double> grid_;
    std::vector<std::vector<double>> samples_; // [term][k]
};

// curvature, bumpiness, area on [0, 1] with LOW / MEDIUM / HIGH.
std::vector<FuzzyVariable> default_inputs();
// weight on [0, 1] with LOWEST .. HIGHEST, peaks at k/6.
FuzzyVariable default_output();
std::vector<FuzzyVariable> default_vocabulary();

// The shipped 15-rule base (identical to rules/default.frs).
std::string_view default_rules_text();

FuzzySystem make_system(std::vector<Rule> rules);
FuzzySystem default_system();

/// Builds a system from rule text and checks the shape the codec relies on:
/// seven output terms, fifteen rules, total coverage. Throws BadParameter.
FuzzySystem load_standard_system(std::string_view rules_text);

} // namespace gridmark
