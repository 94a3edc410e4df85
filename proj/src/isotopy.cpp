#include "mobius/isotopy.hpp"

#include <cmath>

#include "mobius/rng.hpp"

namespace mobius {

namespace {

double seam(double t) {  // exp(-1/t) for t > 0, extended by 0
  return t <= 0.0 ? 0.0 : std::exp(-1.0 / t);
}

double seam_deriv(double t) {
  return t <= 0.0 ? 0.0 : std::exp(-1.0 / t) / (t * t);
}

}  // namespace

StepProfile::StepProfile(double w, double d) : w_(w), d_(d) {
  if (!(w > 0) || !(d > 0) || !(d < w)) {
    throw ConfigError("StepProfile: need 0 < d < w");
  }
}

double StepProfile::value(double r) const {
  const double lo = w_ - d_;
  const double hi = w_ - d_ / 2.0;
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  const double s = (r - lo) / (hi - lo);
  const double n = seam(1.0 - s);
  return n / (n + seam(s));
}

double StepProfile::derivative(double r) const {
  const double lo = w_ - d_;
  const double hi = w_ - d_ / 2.0;
  if (r <= lo || r >= hi) return 0.0;
  const double scale = 1.0 / (hi - lo);
  const double s = (r - lo) * scale;
  const double n = seam(1.0 - s);
  const double m = seam(s);
  const double np = -seam_deriv(1.0 - s);
  const double mp = seam_deriv(s);
  const double denom = (n + m) * (n + m);
  return scale * (np * m - n * mp) / denom;
}

Mat2 IsotopyImpl::jacobian_cover(double t, const CoverPoint& p) const {
  const double h = 1e-5;
  const CoverPoint xp = eval_cover(t, {p.x + h, p.y});
  const CoverPoint xm = eval_cover(t, {p.x - h, p.y});
  const CoverPoint yp = eval_cover(t, {p.x, p.y + h});
  const CoverPoint ym = eval_cover(t, {p.x, p.y - h});
  Mat2 j;
  j.a = (xp.x - xm.x) / (2 * h);
  j.c = (xp.y - xm.y) / (2 * h);
  j.b = (yp.x - ym.x) / (2 * h);
  j.d = (yp.y - ym.y) / (2 * h);
  return j;
}

namespace {

class IdentityIsotopy final : public IsotopyImpl {
 public:
  CoverPoint eval_cover(double, const CoverPoint& p) const override { return p; }
  CoverPoint eval_cover_inverse(double, const CoverPoint& p) const override {
    return p;
  }
  Mat2 jacobian_cover(double, const CoverPoint&) const override { return {}; }
  bool closed_form_jacobian() const override { return true; }
  bool may_move(const BandPoint&) const override { return false; }
  std::string describe() const override { return "identity"; }
};

class BandSlide final : public IsotopyImpl {
 public:
  BandSlide(double a, double d) : a_(a), bump_(a / 2.0, d) {
    if (!(a < 1.0) || !(d < a / 4.0)) {
      throw ConfigError("band_slide: need a < 1 and d < a/4");
    }
  }

  CoverPoint eval_cover(double t, const CoverPoint& p) const override {
    return {p.x + t * bump_.value(p.y), p.y};
  }
  CoverPoint eval_cover_inverse(double t, const CoverPoint& p) const override {
    return {p.x - t * bump_.value(p.y), p.y};
  }
  Mat2 jacobian_cover(double t, const CoverPoint& p) const override {
    Mat2 j;
    j.b = t * bump_.derivative(p.y);
    return j;
  }
  bool closed_form_jacobian() const override { return true; }
  bool may_move(const BandPoint& p) const override {
    return std::abs(p.y()) < a_ / 2.0;
  }
  std::string describe() const override {
    return "band_slide(a=" + std::to_string(a_) + ")";
  }

 private:
  double a_;
  BumpProfile bump_;
};

class PlateauRotation final : public IsotopyImpl {
 public:
  PlateauRotation(const BandPoint& center, double w, double d, double angle)
      : center_(center), w_(w), step_(w, d), angle_(angle) {
    // embedded disk: stay inside the open chart and the band interior
    if (std::abs(center.x()) + w >= kHalf || std::abs(center.y()) + w >= kHalf) {
      throw ConfigError("plateau_rotation: disk not embedded in the chart");
    }
  }

  CoverPoint eval_cover(double t, const CoverPoint& p) const override {
    return map(t, p, +1);
  }
  CoverPoint eval_cover_inverse(double t, const CoverPoint& p) const override {
    return map(t, p, -1);
  }

  Mat2 jacobian_cover(double t, const CoverPoint& p) const override {
    int n = 0;
    double flip = 1.0;
    if (!nearest_center(p, n, flip)) return {};
    const CoverPoint c = tau_pow(center_.lift, n);
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double r = std::sqrt(dx * dx + dy * dy);
    if (r >= w_ || r < 1e-12) return {};
    const double th = flip * angle_ * t * step_.value(r);
    const double dth = flip * angle_ * t * step_.derivative(r);
    const double ct = std::cos(th);
    const double st = std::sin(th);
    // d/dp [ R(th(r)) (p - c) ] = R(th) + R'(th)(p-c) * grad(th)^T
    const double gx = dth * dx / r;
    const double gy = dth * dy / r;
    const double rx = -st * dx - ct * dy;  // R'(th)(p-c), x component
    const double ry = ct * dx - st * dy;
    Mat2 j;
    j.a = ct + rx * gx;
    j.b = -st + rx * gy;
    j.c = st + ry * gx;
    j.d = ct + ry * gy;
    return j;
  }
  bool closed_form_jacobian() const override { return true; }

  bool may_move(const BandPoint& p) const override {
    int n = 0;
    double flip = 1.0;
    return nearest_center(p.lift, n, flip);
  }
  std::string describe() const override {
    return "plateau_rotation(w=" + std::to_string(w_) +
           ",angle=" + std::to_string(angle_) + ")";
  }

 private:
  bool nearest_center(const CoverPoint& p, int& n_out, double& flip) const {
    // at most one deck translate of the center lies within w of p (w < 1/2)
    for (int n = -2; n <= 2; ++n) {
      const CoverPoint c = tau_pow(center_.lift, n);
      const double dx = p.x - c.x;
      const double dy = p.y - c.y;
      if (dx * dx + dy * dy < w_ * w_) {
        n_out = n;
        flip = (n % 2 == 0) ? 1.0 : -1.0;  // deck flip reverses orientation
        return true;
      }
    }
    return false;
  }

  CoverPoint map(double t, const CoverPoint& p, int dir) const {
    int n = 0;
    double flip = 1.0;
    if (!nearest_center(p, n, flip)) return p;
    const CoverPoint c = tau_pow(center_.lift, n);
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double r = std::sqrt(dx * dx + dy * dy);
    if (r >= w_) return p;
    const double th = dir * flip * angle_ * t * step_.value(r);
    const double ct = std::cos(th);
    const double st = std::sin(th);
    return {c.x + ct * dx - st * dy, c.y + st * dx + ct * dy};
  }

  BandPoint center_;
  double w_;
  StepProfile step_;
  double angle_;
};

class Composite final : public IsotopyImpl {
 public:
  explicit Composite(std::vector<Isotopy> parts) : parts_(std::move(parts)) {}

  CoverPoint eval_cover(double t, const CoverPoint& p) const override {
    const int k = static_cast<int>(parts_.size());
    const double u = t * k;
    int stage = std::min(static_cast<int>(u), k - 1);
    CoverPoint q = p;
    for (int i = 0; i < stage; ++i) q = parts_[i].eval_cover(1.0, q);
    return parts_[stage].eval_cover(u - stage, q);
  }

  CoverPoint eval_cover_inverse(double t, const CoverPoint& p) const override {
    const int k = static_cast<int>(parts_.size());
    const double u = t * k;
    int stage = std::min(static_cast<int>(u), k - 1);
    CoverPoint q = parts_[stage].eval_cover_inverse(u - stage, p);
    for (int i = stage - 1; i >= 0; --i) q = parts_[i].eval_cover_inverse(1.0, q);
    return q;
  }

  bool may_move(const BandPoint& p) const override {
    for (const auto& f : parts_) {
      if (f.may_move(p)) return true;
    }
    return false;
  }
  std::string describe() const override {
    std::string s = "compose(";
    for (size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ", ";
      s += parts_[i].describe();
    }
    return s + ")";
  }

 private:
  std::vector<Isotopy> parts_;
};

class Inverted final : public IsotopyImpl {
 public:
  explicit Inverted(Isotopy f) : f_(std::move(f)) {}

  // h_t = f_{1-t} o f_1^{-1}; h_0 = id, h_1 = f_1^{-1}
  CoverPoint eval_cover(double t, const CoverPoint& p) const override {
    return f_.eval_cover(1.0 - t, f_.eval_cover_inverse(1.0, p));
  }
  CoverPoint eval_cover_inverse(double t, const CoverPoint& p) const override {
    return f_.eval_cover(1.0, f_.eval_cover_inverse(1.0 - t, p));
  }
  bool may_move(const BandPoint& p) const override { return f_.may_move(p); }
  std::string describe() const override {
    return "invert(" + f_.describe() + ")";
  }

 private:
  Isotopy f_;
};

}  // namespace

Isotopy identity_isotopy() {
  return Isotopy(std::make_shared<IdentityIsotopy>());
}

Isotopy band_slide(double a, double d) {
  return Isotopy(std::make_shared<BandSlide>(a, d));
}

Isotopy plateau_rotation(const BandPoint& center, double w, double d,
                         double total_angle) {
  return Isotopy(std::make_shared<PlateauRotation>(center, w, d, total_angle));
}

Isotopy disk_slide(const BandPoint& center, double area, double d) {
  const double w = std::sqrt(area / M_PI);
  if (!(d < area / 4.0) || !(d < w)) {
    throw ConfigError("disk_slide: need d < a/4 and d < radius");
  }
  return plateau_rotation(center, w, d, 2.0 * M_PI);
}

Isotopy compose(const std::vector<Isotopy>& parts) {
  if (parts.empty()) return identity_isotopy();
  if (parts.size() == 1) return parts.front();
  return Isotopy(std::make_shared<Composite>(parts));
}

Isotopy invert(const Isotopy& iso) {
  return Isotopy(std::make_shared<Inverted>(iso));
}

Isotopy power(const Isotopy& iso, int p) {
  if (p == 0) return identity_isotopy();
  const Isotopy base = p > 0 ? iso : invert(iso);
  std::vector<Isotopy> parts(static_cast<size_t>(std::abs(p)), base);
  return compose(parts);
}

DensityReport density_check(const Isotopy& iso, int samples, uint64_t seed) {
  DensityReport rep;
  rep.samples = samples;
  rep.closed_form = iso.closed_form_jacobian();
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const double t = rng.uniform();
    const BandPoint p =
        band_point(rng.uniform(-kHalf, kHalf), rng.uniform(-kHalf, kHalf));
    const double det = iso.jacobian(t, p).det();
    rep.max_abs_det_minus_one =
        std::max(rep.max_abs_det_minus_one, std::abs(det - 1.0));
  }
  return rep;
}

}  // namespace mobius
