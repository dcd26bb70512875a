#include "manip/arm_kin.hpp"

#include <cmath>
#include <numbers>

namespace manip {

namespace {

constexpr double kPi = std::numbers::pi;

// |value| may exceed 1 by at most slack; beyond that the branch is dead.
bool clamped_acos(double value, double slack, double* out) {
  if (std::abs(value) > 1.0 + slack) return false;
  *out = std::acos(std::clamp(value, -1.0, 1.0));
  return true;
}

struct Ur5eParams {
  double d1, a2, a3, d4, d5, d6;
};

Ur5eParams params_of(const DhTable& dh) {
  return {dh.rows[0].d, dh.rows[1].a, dh.rows[2].a,
          dh.rows[3].d, dh.rows[4].d, dh.rows[5].d};
}

}  // namespace

DhTable DhTable::ur5e() {
  DhTable t;
  t.rows[0] = {0.0, 0.08916, kPi / 2, 0.0};
  t.rows[1] = {-0.425, 0.0, 0.0, 0.0};
  t.rows[2] = {-0.39225, 0.0, 0.0, 0.0};
  t.rows[3] = {0.0, 0.10915, kPi / 2, 0.0};
  t.rows[4] = {0.0, 0.09456, -kPi / 2, 0.0};
  t.rows[5] = {0.0, 0.0823, 0.0, 0.0};
  return t;
}

JointLimits JointLimits::full() {
  JointLimits l;
  l.lo.fill(-2.0 * kPi);
  l.hi.fill(2.0 * kPi);
  return l;
}

RigidTransform dh_link_transform(const DhRow& row, double theta) {
  double th = theta + row.theta_offset;
  double ct = std::cos(th), st = std::sin(th);
  double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  RigidTransform t;
  t.R << ct, -st * ca, st * sa,
         st, ct * ca, -ct * sa,
         0.0, sa, ca;
  t.t << row.a * ct, row.a * st, row.d;
  return t;
}

RigidTransform fk_transform(const JointConfig& q, const DhTable& dh) {
  RigidTransform t = dh_link_transform(dh.rows[0], q[0]);
  for (int i = 1; i < 6; ++i) {
    t = compose(t, dh_link_transform(dh.rows[i], q[i]));
  }
  return t;
}

Vec3 fk_position(const JointConfig& q, const DhTable& dh) {
  auto [d1, a2, a3, d4, d5, d6] = params_of(dh);
  double c1 = std::cos(q[0]), s1 = std::sin(q[0]);
  double c2 = std::cos(q[1]), s2 = std::sin(q[1]);
  double c23 = std::cos(q[1] + q[2]), s23 = std::sin(q[1] + q[2]);
  double c5 = std::cos(q[4]), s5 = std::sin(q[4]);
  double t234 = q[1] + q[2] + q[3];
  double c234 = std::cos(t234), s234 = std::sin(t234);
  double x = a2 * c2 + a3 * c23;
  double y = a2 * s2 + a3 * s23;
  return {c1 * (x + d5 * s234) + d4 * s1 + d6 * (c5 * s1 - s5 * c1 * c234),
          s1 * (x + d5 * s234) - d4 * c1 - d6 * (c5 * c1 + s5 * s1 * c234),
          d1 + y - d5 * c234 - d6 * s5 * s234};
}

Vec3 fk_position_published(const JointConfig& q, const DhTable& dh) {
  auto [d1, a2, a3, d4, d5, d6] = params_of(dh);
  double c1 = std::cos(q[0]), s1 = std::sin(q[0]);
  double c2 = std::cos(q[1]), s2 = std::sin(q[1]);
  double c3 = std::cos(q[2]), s3 = std::sin(q[2]);
  double c5 = std::cos(q[4]);
  double t234 = q[1] + q[2] + q[3];
  double c234 = std::cos(t234), s234 = std::sin(t234);
  double px = d5 * c1 * s234 + d4 * c1 - d6 * c1 * c234 + a2 * c1 * c2 +
              d6 * c5 * s1 + a3 * c1 * c2 * c3 - a3 * c1 * s2 * s3;
  double py = d5 * s1 * s234 - d4 * s1 - d6 * s1 * c234 - d6 * c1 * c5 +
              a2 * s1 * c2 + a3 * s1 * c2 * c3 - a3 * s1 * s2 * s3;
  double pz = d1 - d6 * s234 * c5 + a3 * s2 * c3 + a3 * c2 * s3 + a2 * s2 -
              d5 * c234;
  return {px, py, pz};
}

Result<PlanarReference> planar_subchain_published(const Vec3& p, const DhTable& dh,
                                                  int elbow) {
  auto [d1, a2, a3, d4, d5, d6] = params_of(dh);
  (void)d4;
  (void)d5;
  (void)d6;
  PlanarReference out;
  double rho = std::sqrt(p.x() * p.x() + p.y() * p.y());
  out.r_s = std::sqrt(p.x() * p.x() + p.y() * p.y() +
                      (p.z() - d1) * (p.z() - d1));
  out.phi = std::atan2(p.z() - d1, rho);
  double c3 = (out.r_s * out.r_s - a2 * a2 - a3 * a3) / (2.0 * a2 * a3);
  double t3 = 0.0;
  if (!clamped_acos(c3, 1e-9, &t3)) {
    return Result<PlanarReference>::failure(Status::Unreachable,
                                            "planar subchain target out of reach");
  }
  out.theta3 = elbow >= 0 ? t3 : -t3;
  double s3 = std::sin(out.theta3);
  out.theta2 = out.phi - std::atan2(a3 * s3, a2 + a3 * std::cos(out.theta3));
  return Result<PlanarReference>::success(out);
}

Result<IkSolutionSet> ik_solve(const RigidTransform& target, const DhTable& dh,
                               double theta6_reference) {
  auto [d1, a2, a3, d4, d5, d6] = params_of(dh);
  (void)d1;
  const Vec3 n = target.R.col(0);
  const Vec3 o = target.R.col(1);
  const Vec3 a = target.R.col(2);
  const Vec3& p = target.t;

  IkSolutionSet set;

  // Joint-5 origin; its xy-distance from the base axis is d4 for every
  // reachable pose, which isolates theta1.
  const Vec3 p5 = p - d6 * a;
  const double rho = std::hypot(p5.x(), p5.y());
  if (rho < 1e-12) {
    return Result<IkSolutionSet>::failure(Status::Unreachable,
                                          "wrist center on the base axis");
  }
  const double beta = std::atan2(p5.y(), p5.x());

  for (int shoulder : {+1, -1}) {
    double acos1 = 0.0;
    if (!clamped_acos(d4 / rho, 1e-9, &acos1)) continue;
    const double t1 = wrap_angle(beta + kPi / 2 + shoulder * acos1);
    const double c1 = std::cos(t1), s1 = std::sin(t1);

    for (int wrist : {+1, -1}) {
      double acos5 = 0.0;
      if (!clamped_acos((p.x() * s1 - p.y() * c1 - d4) / d6, 1e-9, &acos5)) continue;
      double t5 = wrist * acos5;
      double s5 = std::sin(t5);

      const bool near_singular = std::abs(s5) < 1e-6;
      if (near_singular) {
        // Snap onto the singular value; acos near +-1 only resolves sqrt(eps),
        // and with theta6 pinned the exact value is what makes theta4 close.
        t5 = acos5 < kPi / 2 ? 0.0 : wrist * kPi;
        s5 = 0.0;
      }
      double t6;
      if (near_singular) {
        // Axes 4 and 6 are collinear; theta4 absorbs the remainder below.
        t6 = theta6_reference;
      } else {
        t6 = std::atan2((o.y() * c1 - o.x() * s1) / s5,
                        (n.x() * s1 - n.y() * c1) / s5);
      }

      // Peel joints 1, 5, 6 off the target to expose the planar 2-3-4 chain.
      const RigidTransform t01 = dh_link_transform(dh.rows[0], t1);
      const RigidTransform t45 = dh_link_transform(dh.rows[4], t5);
      const RigidTransform t56 = dh_link_transform(dh.rows[5], t6);
      const RigidTransform t14 =
          compose(invert(t01), compose(target, invert(compose(t45, t56))));

      const double px = t14.t.x(), py = t14.t.y();
      const double c3v = (px * px + py * py - a2 * a2 - a3 * a3) / (2.0 * a2 * a3);
      double acos3 = 0.0;
      if (!clamped_acos(c3v, 1e-9, &acos3)) continue;
      const double t234 = std::atan2(t14.R(1, 0), t14.R(0, 0));

      for (int elbow : {+1, -1}) {
        const double t3 = elbow * acos3;
        const double t2 =
            std::atan2(py, px) - std::atan2(a3 * std::sin(t3), a2 + a3 * std::cos(t3));
        const double t4 = wrap_angle(t234 - t2 - t3);

        IkSolution sol;
        sol.q = {t1, wrap_angle(t2), wrap_angle(t3), t4, wrap_angle(t5), wrap_angle(t6)};
        sol.shoulder = shoulder;
        sol.wrist = wrist;
        sol.elbow = elbow;
        sol.near_singular = near_singular;

        const RigidTransform check = fk_transform(sol.q, dh);
        if ((check.t - p).norm() < 1e-9 && rotation_distance(check.R, target.R) < 1e-8) {
          set.solutions.push_back(sol);
          set.near_singular = set.near_singular || near_singular;
        }
      }
    }
  }

  if (set.solutions.empty()) {
    return Result<IkSolutionSet>::failure(Status::Unreachable,
                                          "no closed-form branch reaches the target");
  }
  return Result<IkSolutionSet>::success(set);
}

Result<JointConfig> ik_select(const IkSolutionSet& set, const JointConfig& q_ref) {
  if (set.solutions.empty()) {
    return Result<JointConfig>::failure(Status::EmptyInput, "empty solution set");
  }
  static constexpr double kWeights[6] = {6, 5, 4, 3, 2, 1};
  const IkSolution* best = nullptr;
  double best_cost = 0.0;
  for (const IkSolution& sol : set.solutions) {
    double cost = 0.0;
    for (int i = 0; i < 6; ++i) {
      double d = wrap_angle(sol.q[i] - q_ref[i]);
      cost += kWeights[i] * d * d;
    }
    if (best == nullptr || cost < best_cost) {
      best = &sol;
      best_cost = cost;
    }
  }
  return Result<JointConfig>::success(best->q);
}

}  // namespace manip
