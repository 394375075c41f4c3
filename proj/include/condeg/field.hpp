#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "condeg/jet.hpp"

namespace condeg {

// A smooth scalar map on (a neighborhood of) the disk, with exact jet
// evaluation up to max_order(). Immutable after construction and safe to
// evaluate concurrently.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual int dim() const = 0;
  virtual int max_order() const { return 3; }
  virtual Jet jet(const Vec& z, int order) const = 0;

  double value(const Vec& z) const { return jet(z, 0).value; }
};

using FieldPtr = std::shared_ptr<const ScalarField>;

class ConstantField final : public ScalarField {
 public:
  ConstantField(double c, int n) : c_(c), n_(n) {}
  int dim() const override { return n_; }
  Jet jet(const Vec&, int order) const override {
    return Jet::constant(c_, n_, order);
  }

 private:
  double c_;
  int n_;
};

class SumField final : public ScalarField {
 public:
  SumField(FieldPtr a, FieldPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  int dim() const override { return a_->dim(); }
  int max_order() const override {
    return std::min(a_->max_order(), b_->max_order());
  }
  Jet jet(const Vec& z, int order) const override {
    return a_->jet(z, order) + b_->jet(z, order);
  }

 private:
  FieldPtr a_, b_;
};

class DifferenceField final : public ScalarField {
 public:
  DifferenceField(FieldPtr a, FieldPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  int dim() const override { return a_->dim(); }
  int max_order() const override {
    return std::min(a_->max_order(), b_->max_order());
  }
  Jet jet(const Vec& z, int order) const override {
    return a_->jet(z, order) - b_->jet(z, order);
  }

 private:
  FieldPtr a_, b_;
};

class ScaledField final : public ScalarField {
 public:
  ScaledField(double c, FieldPtr f) : c_(c), f_(std::move(f)) {}
  int dim() const override { return f_->dim(); }
  int max_order() const override { return f_->max_order(); }
  Jet jet(const Vec& z, int order) const override {
    return c_ * f_->jet(z, order);
  }

 private:
  double c_;
  FieldPtr f_;
};

// f(x) = base(scale * (x - shift)).
class RescaledArgField final : public ScalarField {
 public:
  RescaledArgField(FieldPtr base, double scale, Vec shift)
      : base_(std::move(base)), scale_(scale), shift_(shift) {}
  int dim() const override { return base_->dim(); }
  int max_order() const override { return base_->max_order(); }
  Jet jet(const Vec& z, int order) const override {
    Jet j = base_->jet(scale_ * (z - shift_), order);
    int n = j.n;
    double s = scale_, s2 = s * s, s3 = s2 * s;
    for (int i = 0; i < n; ++i) {
      j.grad[i] *= s;
      for (int a = 0; a < n; ++a) {
        j.hess[i][a] *= s2;
        for (int b = 0; b < n; ++b) j.third[i][a][b] *= s3;
      }
    }
    return j;
  }

 private:
  FieldPtr base_;
  double scale_;
  Vec shift_;
};

// sign * amp * exp(-|x - c|^2 / w^2); jets up to order 3.
class GaussianBumpField final : public ScalarField {
 public:
  GaussianBumpField(double amp, Vec c, double w, int n)
      : amp_(amp), c_(c), w2_(w * w), n_(n) {}
  int dim() const override { return n_; }
  Jet jet(const Vec& z, int order) const override {
    Jet u = Jet::constant(0.0, n_, order);
    for (int i = 0; i < n_; ++i) {
      Jet xi = Jet::variable(i, z[i] - c_[i], n_, order);
      u = u + xi * xi;
    }
    u = (-1.0 / w2_) * u;
    return amp_ * jet_exp(u);
  }

 private:
  double amp_;
  Vec c_;
  double w2_;
  int n_;
};

}  // namespace condeg
