#include "obd/online.hpp"

namespace obd {

PrimalObd::PrimalObd(PrimalConfig cfg) : cfg_(std::move(cfg)) { validate(cfg_); }

StepRecord PrimalObd::step(int t, const CostFunction& f) {
  StepRecord rec = primal_obd_step(x_, f, cfg_, t);
  x_ = rec.x;
  return rec;
}

std::unique_ptr<OnlineAlgorithm> PrimalObd::clone() const {
  return std::make_unique<PrimalObd>(*this);
}

DualObd::DualObd(DualConfig cfg) : cfg_(std::move(cfg)) { validate(cfg_); }

StepRecord DualObd::step(int t, const CostFunction& f) {
  StepRecord rec = dual_obd_step(x_, f, cfg_, t);
  x_ = rec.x;
  return rec;
}

std::unique_ptr<OnlineAlgorithm> DualObd::clone() const {
  return std::make_unique<DualObd>(*this);
}

Baseline::Baseline(BaselineConfig cfg, Norm switching)
    : cfg_(std::move(cfg)), switching_(std::move(switching)) {}

void Baseline::reset(const Vector& x0) {
  state_ = BaselineState{};
  state_.x = x0;
}

StepRecord Baseline::step(int t, const CostFunction& f) {
  const Vector prev = state_.x;
  StepRecord rec;
  rec.t = t;
  rec.x = baseline_step(cfg_, state_, f);
  rec.hit = f.value(rec.x);
  rec.move = switching_(rec.x - prev);
  rec.branch = f.is_indicator() ? StepBranch::kSetProjection : StepBranch::kBalanced;
  return rec;
}

std::unique_ptr<OnlineAlgorithm> Baseline::clone() const {
  return std::make_unique<Baseline>(*this);
}

}  // namespace obd
