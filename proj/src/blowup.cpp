#include "mobius/blowup.hpp"

#include <cmath>

namespace mobius {

double injectivity_radius() { return 0.5; }

bool deck_ball_overlap(const BandPoint& p, double r) {
  // balls of the lift and its deck translates; overlap iff some translate is
  // closer than 2r
  for (int n = -3; n <= 3; ++n) {
    if (n == 0) continue;
    const CoverPoint q = tau_pow(p.lift, n);
    const double dx = p.lift.x - q.x;
    const double dy = p.lift.y - q.y;
    if (std::sqrt(dx * dx + dy * dy) < 2.0 * r) return true;
  }
  return false;
}

std::optional<HalfPlane> defining_half_plane(const BandPoint& p) {
  const double to_top = kHalf - p.y();
  const double to_bottom = p.y() + kHalf;
  if (to_top < 0.5 && to_top <= to_bottom) {
    return HalfPlane{{0.0, 1.0}, to_top};
  }
  if (to_bottom < 0.5) {
    return HalfPlane{{0.0, -1.0}, to_bottom};
  }
  return std::nullopt;
}

BandPoint exp_map(const BandPoint& p, const Vec2& v) {
  if (v.norm() >= injectivity_radius()) {
    throw DomainError("exp_map: |v| >= inj(M)");
  }
  if (const auto hp = defining_half_plane(p)) {
    if (!hp->contains(v, 1e-12)) {
      throw DomainError("exp_map: direction leaves the defining half-plane");
    }
  }
  return project({p.lift.x + v.x, p.lift.y + v.y});
}

BlowupPoint BlowupPoint::off_diagonal(const BandPoint& p, const BandPoint& q) {
  BlowupPoint pt;
  pt.p = p;
  pt.q = q;
  // direction of exp_p^{-1}(q): toward the distance-minimizing lift
  double best = std::numeric_limits<double>::infinity();
  Vec2 dir{1.0, 0.0};
  for (int n = -1; n <= 1; ++n) {
    const CoverPoint l = tau_pow(q.lift, n);
    const Vec2 d{l.x - p.lift.x, l.y - p.lift.y};
    const double nn = d.norm();
    if (nn < best && nn > 0) {
      best = nn;
      dir = d * (1.0 / nn);
    }
  }
  pt.ray = dir;
  return pt;
}

BlowupPoint BlowupPoint::diagonal(const BandPoint& p, const Vec2& direction) {
  BlowupPoint pt;
  pt.p = p;
  pt.q = p;
  const double n = direction.norm();
  if (n <= 0) throw DomainError("diagonal blow-up point needs a direction");
  pt.ray = direction * (1.0 / n);
  return pt;
}

Vec2 blowup_embed(const BlowupPoint& pt, double eps) {
  const double d = distance(pt.p, pt.q);
  if (d > eps + kPointTol) {
    throw DomainError("blowup_embed: d(p,q) exceeds eps");
  }
  return pt.ray * std::exp(d);
}

Mat2 chart_differential(const Isotopy& f, const BandPoint& p) {
  const Mat2 j = f.jacobian(1.0, p);
  const CoverPoint image = f.eval_cover(1.0, p.lift);
  const int sheet = static_cast<int>(std::floor(image.x + kHalf));
  if (sheet % 2 == 0) return j;
  // reprojection composes with the deck differential diag(1, -1)
  return Mat2{j.a, j.b, -j.c, -j.d};
}

BlowupPoint extend_action(const Isotopy& f, const BlowupPoint& pt) {
  const BandPoint fp = f.time1(pt.p);
  if (!(distance(pt.p, pt.q) <= kPointTol)) {
    return BlowupPoint::off_diagonal(fp, f.time1(pt.q));
  }
  const Mat2 dj = chart_differential(f, pt.p);
  if (std::abs(dj.det()) < 1e-12) {
    throw std::runtime_error("extend_action: singular differential");
  }
  return BlowupPoint::diagonal(fp, dj.apply(pt.ray));
}

}  // namespace mobius
