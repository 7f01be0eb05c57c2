#include "remres/stats.hpp"

#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "remres/errors.hpp"

namespace remres {

double sample_mean(std::span<const double> xs)
{
    if (xs.empty())
        throw ValidationError("mean of an empty sample");
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs)
{
    if (xs.size() < 2)
        throw ValidationError("sample variance needs at least 2 observations");
    const double m = sample_mean(xs);
    double ss = 0.0;
    for (double x : xs)
        ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

double student_t_two_sided_p(double t, double df)
{
    if (!(df > 0.0))
        throw ValidationError("Student-t degrees of freedom must be positive");
    if (std::isinf(t))
        return 0.0;
    const boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b)
{
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    if (a.size() < 2 || b.size() < 2)
        throw ValidationError("Welch t-test needs at least 2 observations per sample");
    const double ma = sample_mean(a);
    const double mb = sample_mean(b);
    const double va = sample_variance(a) / na;
    const double vb = sample_variance(b) / nb;
    const double se2 = va + vb;

    if (se2 <= 0.0)
        throw ValidationError("Welch t-test degenerate: zero variance in both samples");

    WelchResult r;
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

} // namespace remres
