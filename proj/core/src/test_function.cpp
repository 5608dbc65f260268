#include "pcalc/test_function.hpp"

#include "pcalc/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace pcalc {

namespace {

double smoothstep(double s) {
    if (s <= 0) return 0.0;
    if (s >= 1) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep_d(double s) {
    if (s <= 0 || s >= 1) return 0.0;
    double t = s * (1.0 - s);
    return 30.0 * t * t;
}

}  // namespace

Profile1D Profile1D::constant(double c) {
    Profile1D p;
    p.kind_ = Kind::Constant;
    p.c_ = c;
    return p;
}

Profile1D Profile1D::bump(double center, double radius) {
    if (!(radius > 0)) throw BadParams("bump radius must be positive");
    Profile1D p;
    p.kind_ = Kind::Bump;
    p.center_ = center;
    p.scale_ = radius;
    return p;
}

Profile1D Profile1D::plateau(double a, double b, double w) {
    if (!(a <= b) || !(w > 0)) throw BadParams("plateau needs a <= b and w > 0");
    Profile1D p;
    p.kind_ = Kind::Plateau;
    p.a_ = a;
    p.b_ = b;
    p.w_ = w;
    return p;
}

Profile1D Profile1D::odd_ramp(double center, double delta, double a, double b, double w) {
    Profile1D p = plateau(a, b, w);
    if (!(delta > 0)) throw BadParams("ramp width must be positive");
    p.kind_ = Kind::OddRamp;
    p.center_ = center;
    p.scale_ = delta;
    return p;
}

Profile1D Profile1D::cosine_train(double start, double h, double a, double b, double w) {
    Profile1D p = plateau(a, b, w);
    if (!(h > 0)) throw BadParams("train half-period must be positive");
    p.kind_ = Kind::CosineTrain;
    p.center_ = start;
    p.scale_ = h;
    return p;
}

double Profile1D::plateau_value(double x) const {
    if (x < a_) return smoothstep((x - (a_ - w_)) / w_);
    if (x > b_) return smoothstep(((b_ + w_) - x) / w_);
    return 1.0;
}

double Profile1D::plateau_derivative(double x) const {
    if (x < a_) return smoothstep_d((x - (a_ - w_)) / w_) / w_;
    if (x > b_) return -smoothstep_d(((b_ + w_) - x) / w_) / w_;
    return 0.0;
}

double Profile1D::value(double x) const {
    switch (kind_) {
        case Kind::Constant: return c_;
        case Kind::Bump: {
            double s = (x - center_) / scale_;
            if (std::fabs(s) >= 1) return 0.0;
            double t = 1.0 - s * s;
            return t * t * t;
        }
        case Kind::Plateau: return plateau_value(x);
        case Kind::OddRamp: {
            double d = x - center_;
            double r = smoothstep(std::fabs(d) / scale_);
            return (d < 0 ? -r : r) * plateau_value(x);
        }
        case Kind::CosineTrain:
            return -std::cos(std::numbers::pi * (x - center_) / scale_) * plateau_value(x);
    }
    return 0.0;
}

double Profile1D::derivative(double x) const {
    switch (kind_) {
        case Kind::Constant: return 0.0;
        case Kind::Bump: {
            double s = (x - center_) / scale_;
            if (std::fabs(s) >= 1) return 0.0;
            double t = 1.0 - s * s;
            return -6.0 * s * t * t / scale_;
        }
        case Kind::Plateau: return plateau_derivative(x);
        case Kind::OddRamp: {
            double d = x - center_;
            double r = smoothstep(std::fabs(d) / scale_);
            double dr = smoothstep_d(std::fabs(d) / scale_) / scale_;
            double sr = d < 0 ? -r : r;
            return dr * plateau_value(x) + sr * plateau_derivative(x);
        }
        case Kind::CosineTrain: {
            double th = std::numbers::pi * (x - center_) / scale_;
            return std::numbers::pi / scale_ * std::sin(th) * plateau_value(x) -
                   std::cos(th) * plateau_derivative(x);
        }
    }
    return 0.0;
}

double Profile1D::support_lo() const {
    switch (kind_) {
        case Kind::Constant: return -std::numeric_limits<double>::infinity();
        case Kind::Bump: return center_ - scale_;
        default: return a_ - w_;
    }
}

double Profile1D::support_hi() const {
    switch (kind_) {
        case Kind::Constant: return std::numeric_limits<double>::infinity();
        case Kind::Bump: return center_ + scale_;
        default: return b_ + w_;
    }
}

std::vector<double> Profile1D::breakpoints() const {
    switch (kind_) {
        case Kind::Constant: return {};
        case Kind::Bump: return {center_ - scale_, center_ + scale_};
        case Kind::Plateau: return {a_ - w_, a_, b_, b_ + w_};
        case Kind::OddRamp: return {a_ - w_, a_, b_, b_ + w_, center_ - scale_, center_, center_ + scale_};
        case Kind::CosineTrain: return {a_ - w_, a_, b_, b_ + w_};
    }
    return {};
}

double Profile1D::sup_norm() const { return kind_ == Kind::Constant ? std::fabs(c_) : 1.0; }

std::string Profile1D::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Constant: os << "const(" << c_ << ")"; break;
        case Kind::Bump: os << "bump(" << center_ << ", " << scale_ << ")"; break;
        case Kind::Plateau: os << "plateau(" << a_ << ", " << b_ << ", " << w_ << ")"; break;
        case Kind::OddRamp: os << "odd_ramp(" << center_ << ", " << scale_ << ")"; break;
        case Kind::CosineTrain: os << "cosine_train(" << center_ << ", " << scale_ << ")"; break;
    }
    return os.str();
}

TestFunction::TestFunction(std::vector<Profile1D> profiles) : p_(std::move(profiles)) {}

TestFunction TestFunction::bump(const std::vector<double>& center, double radius) {
    std::vector<Profile1D> p;
    for (double c : center) p.push_back(Profile1D::bump(c, radius));
    return TestFunction(std::move(p));
}

double TestFunction::value(const std::vector<double>& x) const {
    double v = 1.0;
    for (int k = 0; k < dim() && v != 0.0; ++k) v *= p_[k].value(x[k]);
    return v;
}

double TestFunction::partial(int axis, const std::vector<double>& x) const {
    double v = p_[axis].derivative(x[axis]);
    for (int k = 0; k < dim() && v != 0.0; ++k)
        if (k != axis) v *= p_[k].value(x[k]);
    return v;
}

std::vector<double> TestFunction::gradient(const std::vector<double>& x) const {
    std::vector<double> g(dim());
    for (int k = 0; k < dim(); ++k) g[k] = partial(k, x);
    return g;
}

Box TestFunction::support() const {
    std::vector<double> lo(dim()), hi(dim());
    for (int k = 0; k < dim(); ++k) {
        lo[k] = p_[k].support_lo();
        hi[k] = p_[k].support_hi();
    }
    return Box(lo, hi);
}

std::vector<std::vector<double>> TestFunction::breakpoints() const {
    std::vector<std::vector<double>> b(dim());
    for (int k = 0; k < dim(); ++k) b[k] = p_[k].breakpoints();
    return b;
}

double TestFunction::sup_norm() const {
    double s = 1.0;
    for (const auto& p : p_) s *= p.sup_norm();
    return s;
}

}  // namespace pcalc
