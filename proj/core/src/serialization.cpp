#include "obd/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "obd/errors.hpp"

namespace obd {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.count(it.key()) == 0) {
      throw InvalidArgument(where + it.key() + ": unknown key");
    }
  }
}

const Json& require_key(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InvalidArgument(where + key + ": missing");
  return j.at(key);
}

std::string require_string(const Json& j, const std::string& field) {
  if (!j.is_string()) throw InvalidArgument(field + ": expected a string");
  return j.get<std::string>();
}

}  // namespace

Json real_to_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double real_from_json(const Json& j, const std::string& field) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw InvalidArgument(field + ": expected a number");
  return j.get<double>();
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real_to_json(v(i)));
  return a;
}

Vector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InvalidArgument(field + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = real_from_json(j[i], field);
  }
  return v;
}

Json to_json(const Norm& norm) {
  if (norm.kind() != NormKind::kMahalanobis) return norm.name();
  Json rows = Json::array();
  const Matrix& q = norm.q();
  for (Eigen::Index r = 0; r < q.rows(); ++r) rows.push_back(to_json(Vector(q.row(r).transpose())));
  return Json{{"kind", norm.name()}, {"q", rows}};
}

Norm norm_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) {
    const NormKind kind = norm_kind_from_string(j.get<std::string>());
    switch (kind) {
      case NormKind::kL2: return Norm::l2();
      case NormKind::kL1: return Norm::l1();
      case NormKind::kLInf: return Norm::linf();
      case NormKind::kMahalanobis: break;
    }
    throw InvalidArgument(field + ": mahalanobis needs a matrix q");
  }
  if (!j.is_object()) throw InvalidArgument(field + ": expected a string or object");
  reject_unknown(j, {"kind", "q"}, field + ".");
  if (require_string(require_key(j, "kind", field + "."), field + ".kind") != "mahalanobis") {
    throw InvalidArgument(field + ".kind: only mahalanobis takes parameters");
  }
  const Json& rows = require_key(j, "q", field + ".");
  if (!rows.is_array() || rows.empty()) throw InvalidArgument(field + ".q: expected a square matrix");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix q(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Vector row = vector_from_json(rows[static_cast<std::size_t>(r)], field + ".q");
    if (row.size() != n) throw InvalidArgument(field + ".q: expected a square matrix");
    q.row(r) = row.transpose();
  }
  return Norm::mahalanobis(q);
}

Json to_json(const FeasibleSet& set) {
  Json j{{"kind", to_string(set.kind())}};
  switch (set.kind()) {
    case SetKind::kWholeSpace: j["d"] = set.dimension(); break;
    case SetKind::kBox:
      j["lo"] = to_json(set.lo());
      j["hi"] = to_json(set.hi());
      break;
    case SetKind::kBall:
      j["center"] = to_json(set.center());
      j["radius"] = set.radius();
      j["norm"] = to_json(set.ball_norm());
      break;
    case SetKind::kSimplex:
      j["d"] = set.dimension();
      j["delta"] = set.delta();
      break;
    case SetKind::kHalfspace:
    case SetKind::kHyperplane:
      j["a"] = to_json(set.normal());
      j["b"] = set.offset();
      break;
  }
  return j;
}

FeasibleSet feasible_set_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw InvalidArgument(field + ": expected an object");
  const std::string where = field + ".";
  const SetKind kind = set_kind_from_string(require_string(require_key(j, "kind", where), where + "kind"));
  auto number = [&](const std::string& key) {
    const Json& v = require_key(j, key, where);
    if (!v.is_number()) throw InvalidArgument(where + key + ": expected a number");
    return v.get<double>();
  };
  auto dim = [&]() {
    const Json& v = require_key(j, "d", where);
    if (!v.is_number_integer()) throw InvalidArgument(where + "d: expected an integer");
    return static_cast<Eigen::Index>(v.get<long long>());
  };
  switch (kind) {
    case SetKind::kWholeSpace:
      reject_unknown(j, {"kind", "d"}, where);
      return FeasibleSet::whole_space(dim());
    case SetKind::kBox:
      reject_unknown(j, {"kind", "lo", "hi"}, where);
      return FeasibleSet::box(vector_from_json(require_key(j, "lo", where), where + "lo"),
                              vector_from_json(require_key(j, "hi", where), where + "hi"));
    case SetKind::kBall: {
      reject_unknown(j, {"kind", "center", "radius", "norm"}, where);
      const Norm n = j.contains("norm") ? norm_from_json(j.at("norm"), where + "norm") : Norm::l2();
      return FeasibleSet::ball(vector_from_json(require_key(j, "center", where), where + "center"),
                               number("radius"), n);
    }
    case SetKind::kSimplex:
      reject_unknown(j, {"kind", "d", "delta"}, where);
      return FeasibleSet::simplex(dim(), number("delta"));
    case SetKind::kHalfspace:
    case SetKind::kHyperplane: {
      reject_unknown(j, {"kind", "a", "b"}, where);
      const Vector a = vector_from_json(require_key(j, "a", where), where + "a");
      return kind == SetKind::kHalfspace ? FeasibleSet::halfspace(a, number("b"))
                                         : FeasibleSet::hyperplane(a, number("b"));
    }
  }
  throw InvalidArgument(where + "kind: unsupported");
}

Json to_json(const InstanceSpec& spec) {
  Json j{{"d", spec.d},
         {"T", spec.T},
         {"family", to_string(spec.family)},
         {"tracking_norm", to_string(spec.tracking_norm)},
         {"switching_norm", to_string(spec.switching_norm)},
         {"cond", spec.cond},
         {"diameter", spec.diameter},
         {"alpha", spec.alpha},
         {"offset_max", spec.offset_max},
         {"seed", spec.seed}};
  if (spec.feasible) j["feasible"] = to_json(*spec.feasible);
  if (spec.x0) j["x0"] = to_json(*spec.x0);
  return j;
}

InstanceSpec instance_spec_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("spec: expected an object");
  reject_unknown(j, {"d", "T", "family", "tracking_norm", "switching_norm", "cond", "diameter",
                     "alpha", "offset_max", "seed", "feasible", "x0"},
                 "");
  InstanceSpec s;
  auto integer = [&](const char* key, auto& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer()) throw InvalidArgument(std::string(key) + ": expected an integer");
    out = j.at(key).get<std::decay_t<decltype(out)>>();
  };
  auto real = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw InvalidArgument(std::string(key) + ": expected a number");
    out = j.at(key).get<double>();
  };
  integer("d", s.d);
  integer("T", s.T);
  integer("seed", s.seed);
  real("cond", s.cond);
  real("diameter", s.diameter);
  real("alpha", s.alpha);
  real("offset_max", s.offset_max);
  if (j.contains("family")) s.family = cost_family_from_string(require_string(j.at("family"), "family"));
  if (j.contains("tracking_norm")) {
    s.tracking_norm = norm_kind_from_string(require_string(j.at("tracking_norm"), "tracking_norm"));
  }
  if (j.contains("switching_norm")) {
    s.switching_norm = norm_kind_from_string(require_string(j.at("switching_norm"), "switching_norm"));
  }
  if (j.contains("feasible")) s.feasible = feasible_set_from_json(j.at("feasible"), "feasible");
  if (j.contains("x0")) s.x0 = vector_from_json(j.at("x0"), "x0");
  return s;
}

Json to_json(const StepRecord& rec) {
  return Json{{"t", rec.t},
              {"x", to_json(rec.x)},
              {"hit", real_to_json(rec.hit)},
              {"move", real_to_json(rec.move)},
              {"level", real_to_json(rec.level)},
              {"eta_t", real_to_json(rec.eta_t)},
              {"branch", to_string(rec.branch)}};
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string spec_hash(const InstanceSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json(spec).dump())));
  return buf;
}

Json trajectory_json(const Json& spec, const std::string& algo,
                     const std::vector<StepRecord>& steps, const Json& totals) {
  Json s = Json::array();
  for (const StepRecord& r : steps) s.push_back(to_json(r));
  return Json{{"spec", spec}, {"algo", algo}, {"steps", s}, {"totals", totals}};
}

Json trajectory_json(const Json& spec, const std::string& algo,
                     const std::vector<CostFunction>& fs, const Vector& x0,
                     const OfflineSolution& sol, const Norm& switching) {
  Json s = Json::array();
  for (std::size_t t = 0; t < sol.trajectory.size(); ++t) {
    const Vector& x = sol.trajectory[t];
    const double hit = fs[t].value(x);
    s.push_back(Json{{"t", t + 1},
                     {"x", to_json(x)},
                     {"hit", real_to_json(hit)},
                     {"move", real_to_json(switching(x - (t == 0 ? x0 : sol.trajectory[t - 1])))},
                     {"level", real_to_json(hit)},
                     {"eta_t", nullptr},
                     {"branch", "offline"}});
  }
  Json totals{{"hit", real_to_json(sol.total_hit)},
              {"move", real_to_json(sol.total_move)},
              {"cost", real_to_json(sol.objective)},
              {"lambda", real_to_json(sol.lambda)},
              {"converged", sol.converged},
              {"method", sol.method}};
  return Json{{"spec", spec}, {"algo", algo}, {"steps", s}, {"totals", totals}};
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + target.string() + ": " + ec.message());
  }
}

}  // namespace obd
