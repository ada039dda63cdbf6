#pragma once

#include <memory>
#include <string>

#include "obd/algorithms.hpp"

namespace obd {

// Stateful wrapper around a memoryless step rule.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual void reset(const Vector& x0) = 0;
  virtual StepRecord step(int t, const CostFunction& f) = 0;
  virtual const Vector& current() const = 0;
  virtual std::unique_ptr<OnlineAlgorithm> clone() const = 0;
};

class PrimalObd final : public OnlineAlgorithm {
 public:
  explicit PrimalObd(PrimalConfig cfg);
  std::string name() const override { return "primal_obd"; }
  void reset(const Vector& x0) override { x_ = x0; }
  StepRecord step(int t, const CostFunction& f) override;
  const Vector& current() const override { return x_; }
  std::unique_ptr<OnlineAlgorithm> clone() const override;
  const PrimalConfig& config() const { return cfg_; }

 private:
  PrimalConfig cfg_;
  Vector x_;
};

class DualObd final : public OnlineAlgorithm {
 public:
  explicit DualObd(DualConfig cfg);
  std::string name() const override { return "dual_obd"; }
  void reset(const Vector& x0) override { x_ = x0; }
  StepRecord step(int t, const CostFunction& f) override;
  const Vector& current() const override { return x_; }
  std::unique_ptr<OnlineAlgorithm> clone() const override;
  const DualConfig& config() const { return cfg_; }

 private:
  DualConfig cfg_;
  Vector x_;
};

class Baseline final : public OnlineAlgorithm {
 public:
  Baseline(BaselineConfig cfg, Norm switching);
  std::string name() const override { return to_string(cfg_.kind); }
  void reset(const Vector& x0) override;
  StepRecord step(int t, const CostFunction& f) override;
  const Vector& current() const override { return state_.x; }
  std::unique_ptr<OnlineAlgorithm> clone() const override;

 private:
  BaselineConfig cfg_;
  Norm switching_;
  BaselineState state_;
};

}  // namespace obd
