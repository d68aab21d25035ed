#pragma once

#include <memory>
#include <string>

namespace rfs {

// Tiny expression grammar over the index variable k, used by JSON law
// descriptors ("mu": "k^2", "sigma": "3*sqrt(log(k+2))").
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | primary ('^' factor)?
//   primary := number | 'k' | 'pi' | func '(' expr (',' expr)? ')' | '(' expr ')'
//   func    := log | sqrt | exp | abs | min | max
//
// Parsed by hand-written recursive descent; errors carry the column offset.
class Expression {
 public:
  Expression();                       // the constant 0
  explicit Expression(double value);  // a constant

  // Throws ConfigError with a column diagnostic on malformed input.
  static Expression parse(const std::string& text);

  double eval(double k) const;
  const std::string& text() const { return text_; }
  bool is_constant() const;

  struct Node;  // exposed for the implementation file only

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace rfs
