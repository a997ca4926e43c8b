#pragma once

// Abstract syntax of the small functional language: underlying types,
// datatype declarations, patterns and terms.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace setpat::lang {

struct Span {
    int line = 0;
    int column = 0;

    friend bool operator==(const Span&, const Span&) = default;
    friend auto operator<=>(const Span&, const Span&) = default;
};

std::string to_string(const Span& s);

/// Syntax or type error at a source position.
class LangError : public std::runtime_error {
  public:
    LangError(const std::string& what, Span span) : std::runtime_error(to_string(span) + ": " + what), span_(span) {}
    [[nodiscard]] Span span() const { return span_; }

  private:
    Span span_;
};

class SyntaxError : public LangError {
  public:
    using LangError::LangError;
};

class TypeError : public LangError {
  public:
    using LangError::LangError;
};

// ---------------------------------------------------------------------------
// Underlying types
// ---------------------------------------------------------------------------

struct UType;
using UTypePtr = std::shared_ptr<const UType>;

enum class UKind { Var, Data, Arrow };

struct UType {
    UKind kind = UKind::Data;
    int var = -1;          // Var
    std::string name;      // Data
    UTypePtr from, to;     // Arrow

    static UTypePtr type_var(int id);
    static UTypePtr data(std::string name);
    static UTypePtr arrow(UTypePtr from, UTypePtr to);
};

bool same_type(const UTypePtr& a, const UTypePtr& b);
std::string to_string(const UTypePtr& t);

struct CtorDecl {
    std::string name;
    std::vector<UTypePtr> args;
    Span span;
};

struct DataDecl {
    std::string name;
    std::vector<CtorDecl> ctors;
    /// Builtin base type with no constructors (Int, Double).
    bool opaque = false;
    Span span;
};

/// Datatype environment. Int and Double are predeclared opaque types.
class DataEnv {
  public:
    DataEnv();

    /// Throws SyntaxError on a duplicate type or constructor name.
    void add(DataDecl decl);

    [[nodiscard]] const DataDecl* find_data(const std::string& name) const;
    /// The declaring datatype and the constructor, or nullptr.
    [[nodiscard]] std::pair<const DataDecl*, const CtorDecl*> find_ctor(const std::string& name) const;
    [[nodiscard]] const std::vector<DataDecl>& decls() const { return decls_; }

  private:
    std::vector<DataDecl> decls_;
};

// ---------------------------------------------------------------------------
// Patterns and terms
// ---------------------------------------------------------------------------

struct Pattern {
    bool is_var = true;
    std::string name;  // variable or constructor
    std::string data;  // constructor's datatype
    std::vector<Pattern> args;
    Span span;

    static Pattern var(std::string x, Span s);
    static Pattern ctor(std::string k, std::string d, std::vector<Pattern> args, Span s);
};

std::string to_string(const Pattern& p);

enum class TermKind { Var, Lam, App, Ctor, Match, Let, Lit };

struct Term;
using TermPtr = std::shared_ptr<Term>;

struct Term {
    TermKind kind = TermKind::Var;
    Span span;
    /// Var: the variable; Lam: the parameter; Let: the bound name;
    /// Ctor: the constructor; Lit: the literal text.
    std::string name;
    /// Ctor: the datatype; Lit: Int or Double.
    std::string data;
    /// Lam: [body]; App: [fn, arg]; Ctor: args; Match: [discriminee,
    /// branch bodies...]; Let: [definition, body].
    std::vector<TermPtr> kids;
    /// Match only, one per branch.
    std::vector<Pattern> patterns;

    // Filled in by the type checker.
    UTypePtr type;
    /// Var: instantiation of the generalized type variables of the binding.
    std::vector<std::pair<int, UTypePtr>> inst;
    /// Let: the type variables generalized at this binding.
    std::vector<int> generalized;
    /// Match: sequence number in source order.
    int match_id = -1;

    static TermPtr var(std::string x, Span s);
    static TermPtr lam(std::string x, TermPtr body, Span s);
    static TermPtr app(TermPtr fn, TermPtr arg, Span s);
    static TermPtr ctor(std::string k, std::string d, std::vector<TermPtr> args, Span s);
    static TermPtr match(TermPtr discriminee, std::vector<std::pair<Pattern, TermPtr>> branches, Span s);
    static TermPtr let(std::string x, TermPtr def, TermPtr body, Span s);
    static TermPtr lit(std::string text, std::string type, Span s);

    [[nodiscard]] const TermPtr& fn() const { return kids.at(0); }
    [[nodiscard]] const TermPtr& arg() const { return kids.at(1); }
    [[nodiscard]] const TermPtr& body() const { return kids.back(); }
    [[nodiscard]] const TermPtr& discriminee() const { return kids.at(0); }
    [[nodiscard]] const TermPtr& branch(std::size_t i) const { return kids.at(i + 1); }
    [[nodiscard]] std::size_t branch_count() const { return patterns.size(); }
};

/// Compact one-line rendering, for diagnostics and tests.
std::string to_string(const TermPtr& t);

struct Program {
    DataEnv data;
    TermPtr term;
    /// Names of the top-level definitions in source order.
    std::vector<std::string> definitions;
};

}  // namespace setpat::lang
