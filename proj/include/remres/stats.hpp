#ifndef REMRES_STATS_HPP
#define REMRES_STATS_HPP

#include <span>

namespace remres {

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs); // unbiased, n-1

// Welch's unequal-variance t statistic with Satterthwaite degrees of
// freedom; two-sided p from the Student-t survival function. Requires at
// least two observations per sample and a positive variance in at least one.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Two-sided p-value helper: P(|T_df| >= |t|).
double student_t_two_sided_p(double t, double df);

} // namespace remres

#endif
