#include "bispec/scalar.hpp"

#include <cstdio>

#include "bispec/error.hpp"

namespace bispec {

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    const mpq_class den = o.norm();
    if (sgn(den) == 0) throw Error(ErrorCode::SingularMatrix, "division by exact zero");
    mpq_class re = (re_ * o.re_ + im_ * o.im_) / den;
    mpq_class im = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

std::string rational_to_string(const mpq_class& in) {
    mpq_class q = in;
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class rational_from_string(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0)
        throw Error(ErrorCode::InvalidArgument, "not a rational: '" + s + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const GaussianRational& z) {
    return "(" + rational_to_string(z.real()) + ", " + rational_to_string(z.imag()) + ")";
}

std::string to_string(const Complex& z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", z.real(), z.imag());
    return buf;
}

}  // namespace bispec
