#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "mobius/geometry.hpp"

namespace mobius {

// Smooth step profile: 1 on [0, w-d], strictly decreasing on [w-d, w-d/2],
// 0 on [w-d/2, w].  Seams use the classical exp(-1/t) transition.
class StepProfile {
 public:
  StepProfile() = default;
  StepProfile(double w, double d);

  double w() const { return w_; }
  double d() const { return d_; }
  double value(double r) const;
  double derivative(double r) const;

 private:
  double w_ = 1.0;
  double d_ = 0.5;
};

// Even extension of a step profile to [-w, w].
class BumpProfile {
 public:
  BumpProfile() = default;
  BumpProfile(double w, double d) : step_(w, d) {}

  const StepProfile& step() const { return step_; }
  double value(double y) const { return step_.value(std::abs(y)); }
  double derivative(double y) const {
    const double s = y < 0 ? -1.0 : 1.0;
    return s * step_.derivative(std::abs(y));
  }

 private:
  StepProfile step_;
};

struct Mat2 {
  // row-major: [a b; c d]
  double a = 1, b = 0, c = 0, d = 1;

  double det() const { return a * d - b * c; }
  Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 times(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
            c * o.b + d * o.d};
  }
};

// Time-dependent diffeomorphism of M given by a tau-equivariant formula on
// the cover.  eval(0, .) is the identity.
class IsotopyImpl {
 public:
  virtual ~IsotopyImpl() = default;
  virtual CoverPoint eval_cover(double t, const CoverPoint& p) const = 0;
  virtual CoverPoint eval_cover_inverse(double t, const CoverPoint& p) const = 0;
  virtual Mat2 jacobian_cover(double t, const CoverPoint& p) const;
  virtual bool closed_form_jacobian() const { return false; }
  // conservative: false guarantees the point never moves
  virtual bool may_move(const BandPoint& p) const = 0;
  virtual std::string describe() const = 0;
};

class Isotopy {
 public:
  Isotopy() = default;
  explicit Isotopy(std::shared_ptr<const IsotopyImpl> impl)
      : impl_(std::move(impl)) {}

  bool valid() const { return impl_ != nullptr; }

  BandPoint eval(double t, const BandPoint& p) const {
    return project(impl_->eval_cover(t, p.lift));
  }
  BandPoint eval_inverse(double t, const BandPoint& p) const {
    return project(impl_->eval_cover_inverse(t, p.lift));
  }
  CoverPoint eval_cover(double t, const CoverPoint& p) const {
    return impl_->eval_cover(t, p);
  }
  CoverPoint eval_cover_inverse(double t, const CoverPoint& p) const {
    return impl_->eval_cover_inverse(t, p);
  }
  BandPoint time1(const BandPoint& p) const { return eval(1.0, p); }
  Mat2 jacobian(double t, const BandPoint& p) const {
    return impl_->jacobian_cover(t, p.lift);
  }
  bool closed_form_jacobian() const { return impl_->closed_form_jacobian(); }
  bool may_move(const BandPoint& p) const { return impl_->may_move(p); }
  std::string describe() const { return impl_->describe(); }

 private:
  std::shared_ptr<const IsotopyImpl> impl_;
};

// Shear of the sub-band M_a: (x, y) -> (x + t b(y), y) with b an
// (a/2, d)-bump.  Unit determinant; the plateau traverses the core loop.
Isotopy band_slide(double a, double d);

// Plateau rotation of an embedded disk: polar (r, th) -> (r, th + angle t s(r))
// with s a (w, d)-step.  disk_slide uses angle = 2 pi.
Isotopy plateau_rotation(const BandPoint& center, double w, double d,
                         double total_angle);
Isotopy disk_slide(const BandPoint& center, double area, double d);

Isotopy compose(const std::vector<Isotopy>& parts);  // first part first in time
Isotopy invert(const Isotopy& iso);
Isotopy power(const Isotopy& iso, int p);
Isotopy identity_isotopy();

struct DensityReport {
  double max_abs_det_minus_one = 0.0;
  int samples = 0;
  bool closed_form = false;
};

DensityReport density_check(const Isotopy& iso, int samples, uint64_t seed);

}  // namespace mobius
