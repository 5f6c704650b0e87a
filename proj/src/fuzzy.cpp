#include "gridmark/fuzzy.hpp"

#include "gridmark/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

namespace gridmark {

namespace {

constexpr std::string_view kDefaultRules =
#include "default_rules.inc"
    ;

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
           });
}

enum class Tok { Ident, Number, Semicolon, Equals, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
};

std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    int line = 1;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            while (i < src.size() && src[i] != '\n')
                ++i;
        } else if (c == ';') {
            out.push_back({Tok::Semicolon, ";", line});
            ++i;
        } else if (c == '=' && i + 1 < src.size() && src[i + 1] == '=') {
            out.push_back({Tok::Equals, "==", line});
            i += 2;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), line});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
            std::size_t j = i + 1;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '.' ||
                                      ((src[j] == '-' || src[j] == '+') && (src[j - 1] == 'e' || src[j - 1] == 'E'))))
                ++j;
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), line});
            i = j;
        } else {
            throw ParseError(ErrorCode::SyntaxError, line, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "end of input", line});
    return out;
}

bool is_keyword(const Token& t, std::string_view kw) { return t.kind == Tok::Ident && iequals(t.text, kw); }

class RuleParser {
public:
    RuleParser(std::string_view text, std::span<const FuzzyVariable> vocab) : toks_(tokenize(text)), vocab_(vocab) {}

    std::vector<Rule> parse()
    {
        std::vector<Rule> rules;
        while (peek().kind != Tok::End)
            rules.push_back(rule());
        return rules;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    [[noreturn]] void expected(std::string_view what) const
    {
        const Token& t = peek();
        throw ParseError(ErrorCode::SyntaxError, t.line,
                         "expected " + std::string(what) + ", found '" + t.text + "'");
    }

    void keyword(std::string_view kw)
    {
        if (!is_keyword(peek(), kw))
            expected(kw);
        take();
    }

    void is_operator()
    {
        if (peek().kind == Tok::Equals || is_keyword(peek(), "IS")) {
            take();
            return;
        }
        expected("IS");
    }

    std::string ident(std::string_view what)
    {
        if (peek().kind != Tok::Ident || is_reserved(peek().text))
            expected(what);
        return take().text;
    }

    static bool is_reserved(std::string_view s)
    {
        for (std::string_view kw : {"IF", "AND", "OR", "THEN", "IS", "NOT"})
            if (iequals(s, kw))
                return true;
        return false;
    }

    Clause clause()
    {
        const int line = peek().line;
        const std::string var = ident("variable name");
        is_operator();
        const std::string term = ident("term name");
        const FuzzyVariable* v = nullptr;
        for (const auto& cand : vocab_)
            if (iequals(cand.name(), var))
                v = &cand;
        if (!v)
            throw ParseError(ErrorCode::UnknownIdentifier, line, "unknown variable '" + var + "'");
        const int t = v->term_index(term);
        if (t < 0)
            throw ParseError(ErrorCode::UnknownIdentifier, line,
                             "unknown term '" + term + "' for variable '" + v->name() + "'");
        return {v->name(), v->terms()[static_cast<std::size_t>(t)].name};
    }

    Rule rule()
    {
        Rule r;
        keyword("IF");
        r.antecedents.push_back(clause());
        while (true) {
            if (is_keyword(peek(), "AND")) {
                take();
                r.antecedents.push_back(clause());
            } else if (is_keyword(peek(), "OR")) {
                throw ParseError(ErrorCode::SyntaxError, peek().line,
                                 "OR is not supported; write each alternative as its own AND rule");
            } else {
                break;
            }
        }
        if (!is_keyword(peek(), "THEN"))
            expected("AND or THEN");
        take();
        const int cline = peek().line;
        r.consequent = clause();
        if (vocab_.empty() || !iequals(r.consequent.variable, vocab_.back().name()))
            throw ParseError(ErrorCode::UnknownIdentifier, cline,
                             "'" + r.consequent.variable + "' is not the output variable");
        for (const auto& a : r.antecedents)
            if (iequals(a.variable, vocab_.back().name()))
                throw ParseError(ErrorCode::SyntaxError, cline, "output variable used in an antecedent");
        if (is_keyword(peek(), "WEIGHT")) {
            take();
            if (peek().kind != Tok::Number)
                expected("rule weight");
            const Token& t = take();
            double w = 0.0;
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), w);
            if (ec != std::errc() || ptr != t.text.data() + t.text.size() || !(w >= 0.0 && w <= 1.0))
                throw ParseError(ErrorCode::SyntaxError, t.line, "rule weight must be a number in [0, 1]");
            r.weight = w;
        }
        if (peek().kind != Tok::Semicolon)
            expected("';'");
        take();
        return r;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::span<const FuzzyVariable> vocab_;
};

} // namespace

MembershipFunction::MembershipFunction(std::array<double, 4> p, bool tri) : p_(p), triangular_(tri)
{
    if (!(p[0] <= p[1] && p[1] <= p[2] && p[2] <= p[3]) ||
        !std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); }))
        throw Error(ErrorCode::BadParameter, "membership breakpoints must be finite and non-decreasing");
}

MembershipFunction MembershipFunction::triangular(double a, double b, double c)
{
    return MembershipFunction({a, b, b, c}, true);
}

MembershipFunction MembershipFunction::trapezoidal(double a, double b, double c, double d)
{
    return MembershipFunction({a, b, c, d}, false);
}

double MembershipFunction::operator()(double x) const
{
    const auto [a, b, c, d] = p_;
    if (x >= b && x <= c)
        return 1.0;
    if (x <= a || x >= d)
        return 0.0;
    if (x < b)
        return (x - a) / (b - a);
    return (d - x) / (d - c);
}

FuzzyVariable::FuzzyVariable(std::string name, double lo, double hi, std::vector<FuzzyTerm> terms)
    : name_(std::move(name)), lo_(lo), hi_(hi), terms_(std::move(terms))
{
    if (!(lo < hi))
        throw Error(ErrorCode::BadParameter, "variable '" + name_ + "' has an empty universe");
    for (std::size_t i = 0; i < terms_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (iequals(terms_[i].name, terms_[j].name))
                throw Error(ErrorCode::BadParameter, "duplicate term '" + terms_[i].name + "' in '" + name_ + "'");
}

int FuzzyVariable::term_index(std::string_view term) const
{
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (iequals(terms_[i].name, term))
            return static_cast<int>(i);
    return -1;
}

std::vector<double> FuzzyVariable::fuzzify(double x) const
{
    x = std::clamp(x, lo_, hi_);
    std::vector<double> mu;
    mu.reserve(terms_.size());
    for (const auto& t : terms_)
        mu.push_back(t.mf(x));
    return mu;
}

std::vector<Rule> parse_rules(std::string_view text, std::span<const FuzzyVariable> vocabulary)
{
    return RuleParser(text, vocabulary).parse();
}

std::vector<Rule> parse_rules(std::string_view text)
{
    const auto vocab = default_vocabulary();
    return parse_rules(text, vocab);
}

std::string print_rule(const Rule& r)
{
    std::string out = "IF ";
    for (std::size_t i = 0; i < r.antecedents.size(); ++i) {
        if (i)
            out += " AND ";
        out += r.antecedents[i].variable + " IS " + r.antecedents[i].term;
    }
    out += " THEN " + r.consequent.variable + " IS " + r.consequent.term;
    if (r.weight != 1.0) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", r.weight);
        out += " WEIGHT ";
        out += buf;
    }
    out += ";";
    return out;
}

std::string print_rules(std::span<const Rule> rules)
{
    std::string out;
    for (const auto& r : rules)
        out += print_rule(r) + "\n";
    return out;
}

FuzzySystem::FuzzySystem(std::vector<FuzzyVariable> inputs, FuzzyVariable output, std::vector<Rule> rules)
    : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules))
{
    for (const auto& r : rules_) {
        Compiled c{};
        for (const auto& a : r.antecedents) {
            int vi = -1;
            for (std::size_t i = 0; i < inputs_.size(); ++i)
                if (iequals(inputs_[i].name(), a.variable))
                    vi = static_cast<int>(i);
            const int ti = vi < 0 ? -1 : inputs_[static_cast<std::size_t>(vi)].term_index(a.term);
            if (ti < 0)
                throw Error(ErrorCode::UnknownIdentifier, "rule references unknown '" + a.variable + " IS " + a.term + "'");
            c.antecedents.emplace_back(vi, ti);
        }
        if (!iequals(r.consequent.variable, output_.name()) || output_.term_index(r.consequent.term) < 0)
            throw Error(ErrorCode::UnknownIdentifier, "rule consequent '" + r.consequent.variable + " IS " +
                                                          r.consequent.term + "' is not an output term");
        c.consequent = output_.term_index(r.consequent.term);
        c.weight = r.weight;
        compiled_.push_back(std::move(c));
    }

    grid_.resize(kCentroidSamples);
    for (int k = 0; k < kCentroidSamples; ++k)
        grid_[static_cast<std::size_t>(k)] =
            output_.lo() + (output_.hi() - output_.lo()) * k / static_cast<double>(kCentroidSamples - 1);
    for (const auto& t : output_.terms()) {
        std::vector<double> s(grid_.size());
        for (std::size_t k = 0; k < grid_.size(); ++k)
            s[k] = t.mf(grid_[k]);
        samples_.push_back(std::move(s));
    }

    // Terms that mirror each other about the midpoint get bitwise mirrored
    // samples; evaluating x and 1 - x separately can differ in the last bit.
    const auto& terms = output_.terms();
    const double span = output_.hi() - output_.lo();
    auto mirrors = [&](const MembershipFunction& a, const MembershipFunction& b) {
        for (int i = 0; i < 4; ++i)
            if (std::abs(a.breakpoints()[i] + b.breakpoints()[3 - i] - (output_.lo() + output_.hi())) > 1e-12 * span)
                return false;
        return true;
    };
    const std::size_t n = grid_.size();
    for (std::size_t t = 0; t < terms.size(); ++t)
        for (std::size_t u = t; u < terms.size(); ++u) {
            if (!mirrors(terms[t].mf, terms[u].mf))
                continue;
            for (std::size_t k = 0; k < (t == u ? n / 2 : n); ++k)
                samples_[u][n - 1 - k] = samples_[t][k];
        }
}

double FuzzySystem::evaluate(std::span<const double> inputs) const
{
    if (inputs.size() != inputs_.size())
        throw Error(ErrorCode::BadParameter, "evaluate expects " + std::to_string(inputs_.size()) + " inputs");

    std::vector<std::vector<double>> mu;
    mu.reserve(inputs_.size());
    for (std::size_t i = 0; i < inputs_.size(); ++i)
        mu.push_back(inputs_[i].fuzzify(inputs[i]));

    // Clipping is monotone in the level, so rules sharing a consequent
    // aggregate to a single clip at their maximum level.
    std::vector<double> level(output_.terms().size(), 0.0);
    for (const auto& r : compiled_) {
        double strength = 1.0;
        for (auto [vi, ti] : r.antecedents)
            strength = std::min(strength, mu[static_cast<std::size_t>(vi)][static_cast<std::size_t>(ti)]);
        level[static_cast<std::size_t>(r.consequent)] =
            std::max(level[static_cast<std::size_t>(r.consequent)], strength * r.weight);
    }

    const std::size_t n = grid_.size();
    std::vector<double> agg(n, 0.0);
    for (std::size_t t = 0; t < level.size(); ++t) {
        if (level[t] <= 0.0)
            continue;
        for (std::size_t k = 0; k < n; ++k)
            agg[k] = std::max(agg[k], std::min(level[t], samples_[t][k]));
    }

    // Moments about the midpoint, summed in mirrored pairs so a symmetric
    // aggregate lands exactly on the centre.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0, m = n - 1; k < m; ++k, --m) {
        num += static_cast<double>(m - k) * (agg[m] - agg[k]);
        den += agg[k] + agg[m];
    }
    if (n % 2 == 1)
        den += agg[n / 2];
    if (den <= 0.0)
        throw Error(ErrorCode::EmptyAggregate, "no rule fired for the given inputs");
    const double half = 0.5 * (output_.hi() - output_.lo());
    const double step = (output_.hi() - output_.lo()) / static_cast<double>(n - 1);
    return output_.lo() + half + 0.5 * step * num / den;
}

double FuzzySystem::evaluate(double curvature, double bumpiness, double area) const
{
    const std::array<double, 3> x{curvature, bumpiness, area};
    return evaluate(x);
}

int FuzzySystem::weight_class_index(double w) const
{
    const auto mu = output_.fuzzify(w);
    int best = 0;
    // Memberships that agree to rounding count as a tie.
    for (std::size_t i = 1; i < mu.size(); ++i)
        if (mu[i] > mu[static_cast<std::size_t>(best)] + 1e-12)
            best = static_cast<int>(i);
    return best;
}

const std::string& FuzzySystem::weight_class(double w) const
{
    return output_.terms()[static_cast<std::size_t>(weight_class_index(w))].name;
}

bool FuzzySystem::is_total() const
{
    std::size_t combos = 1;
    for (const auto& v : inputs_)
        combos *= v.terms().size();
    std::vector<int> pick(inputs_.size());
    for (std::size_t n = 0; n < combos; ++n) {
        std::size_t rem = n;
        for (std::size_t i = 0; i < inputs_.size(); ++i) {
            pick[i] = static_cast<int>(rem % inputs_[i].terms().size());
            rem /= inputs_[i].terms().size();
        }
        const bool covered = std::any_of(compiled_.begin(), compiled_.end(), [&](const Compiled& r) {
            return r.weight > 0.0 && std::all_of(r.antecedents.begin(), r.antecedents.end(), [&](auto a) {
                       return pick[static_cast<std::size_t>(a.first)] == a.second;
                   });
        });
        if (!covered)
            return false;
    }
    return true;
}

std::vector<FuzzyVariable> default_inputs()
{
    auto three = [](std::string name) {
        return FuzzyVariable(std::move(name), 0.0, 1.0,
                             {{"LOW", MembershipFunction::triangular(0.0, 0.0, 0.5)},
                              {"MEDIUM", MembershipFunction::triangular(0.0, 0.5, 1.0)},
                              {"HIGH", MembershipFunction::triangular(0.5, 1.0, 1.0)}});
    };
    return {three("curvature"), three("bumpiness"), three("area")};
}

FuzzyVariable default_output()
{
    static const char* names[] = {"LOWEST", "LOWER", "LOW", "MEDIUM", "HIGH", "HIGHER", "HIGHEST"};
    std::vector<FuzzyTerm> terms;
    for (int k = 0; k < 7; ++k) {
        const double peak = k / 6.0;
        const double left = k == 0 ? 0.0 : (k - 1) / 6.0;
        const double right = k == 6 ? 1.0 : (k + 1) / 6.0;
        terms.push_back({names[k], MembershipFunction::triangular(left, peak, right)});
    }
    return FuzzyVariable("weight", 0.0, 1.0, std::move(terms));
}

std::vector<FuzzyVariable> default_vocabulary()
{
    auto v = default_inputs();
    v.push_back(default_output());
    return v;
}

std::string_view default_rules_text() { return kDefaultRules; }

FuzzySystem make_system(std::vector<Rule> rules)
{
    return FuzzySystem(default_inputs(), default_output(), std::move(rules));
}

FuzzySystem default_system() { return load_standard_system(default_rules_text()); }

FuzzySystem load_standard_system(std::string_view rules_text)
{
    FuzzySystem sys = make_system(parse_rules(rules_text));
    if (sys.output().terms().size() != 7)
        throw Error(ErrorCode::BadParameter, "output variable must have 7 terms");
    if (sys.rules().size() != 15)
        throw Error(ErrorCode::BadParameter,
                    "rule base must contain exactly 15 rules, found " + std::to_string(sys.rules().size()));
    if (!sys.is_total())
        throw Error(ErrorCode::BadParameter, "rule base leaves some input combination without a firing rule");
    return sys;
}

} // namespace gridmark
