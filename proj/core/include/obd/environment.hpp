#pragma once

#include <memory>
#include <vector>

#include "obd/cost_function.hpp"
#include "obd/instance.hpp"

namespace obd {

// Source of cost functions; f_t may depend on the previous decision (adaptive adversary).
class Environment {
 public:
  virtual ~Environment() = default;
  virtual Eigen::Index dimension() const = 0;
  virtual int horizon() const = 0;
  // t is 1-based.
  virtual CostFunction reveal(int t, const Vector& x_prev) = 0;
};

class SequenceEnvironment final : public Environment {
 public:
  explicit SequenceEnvironment(std::vector<CostFunction> costs);
  Eigen::Index dimension() const override;
  int horizon() const override { return static_cast<int>(costs_.size()); }
  CostFunction reveal(int t, const Vector& x_prev) override;

 private:
  std::vector<CostFunction> costs_;
};

class HyperplaneAdversary final : public Environment {
 public:
  explicit HyperplaneAdversary(int d);
  Eigen::Index dimension() const override { return d_; }
  int horizon() const override { return d_; }
  CostFunction reveal(int t, const Vector& x_prev) override;

 private:
  int d_;
};

std::unique_ptr<Environment> make_environment(const InstanceSpec& spec);

}  // namespace obd
