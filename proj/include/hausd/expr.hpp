#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

namespace hausd::expr {

// Small closed-form expression grammar used for kernels and automorphism
// families in config files.  Variables u1..ud, operators + - * / ^,
// functions abs/exp/log/min/max, numeric constants and pi.
class Expression {
 public:
  Expression() = default;
  double operator()(const Eigen::VectorXd& u) const;
  bool valid() const { return node_ != nullptr; }
  const std::string& text() const { return text_; }

  static Expression parse(const std::string& text);

  struct Node;

 private:
  std::shared_ptr<const Node> node_;
  std::string text_;
};

}  // namespace hausd::expr
