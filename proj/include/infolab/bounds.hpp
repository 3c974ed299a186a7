#pragma once

#include "infolab/infomeasures.hpp"

#include <string>
#include <vector>

namespace infolab {

/// 1 / (E_X[J(Y|X)] + J(X)); Gaussian noise only.
double bcrlb(const AdditiveNoiseChannel& ch);
/// N(X|Y), the conditional entropy power.
double new_lower_bound(const AdditiveNoiseChannel& ch);

struct OrderingReport {
    double a = 0.0;
    double mmse = 0.0;
    double mc_error = 0.0;
    double new_lb = 0.0;
    double bcrlb = 0.0;
    double tolerance = 0.0;  ///< 3 mc_error + 1e-4
    bool mmse_above_new_lb = false;
    bool new_lb_above_bcrlb = false;
    bool pass = false;
};

/// MMSE >= N(X|Y) >= BCRLB within tolerance. The MMSE is by quadrature unless
/// a Monte Carlo configuration is supplied.
OrderingReport check_ordering(const AdditiveNoiseChannel& ch);
OrderingReport check_ordering(const AdditiveNoiseChannel& ch, const MonteCarloConfig& mc);
OrderingReport ordering_from(double a, double mmse, double mc_error, double new_lb, double bcrlb);

struct CostaReport {
    std::vector<double> a;
    std::vector<double> power;        ///< N(X + sqrt(a) W) at each grid point
    std::vector<double> second_diff;  ///< divided second differences at interior points
    std::vector<double> chord_gap;    ///< N(a) - [(1-a) N(X) + a N(X+W)] at interior points in (0, 1]
    double max_second_diff = 0.0;
    double min_chord_gap = 0.0;
    double tolerance = 1e-5;
    bool concave = false;
    bool chord = false;
    bool pass = false;
};

/// Concavity of a -> N(X + sqrt(a) W) along a_grid (increasing, >= 3 points)
/// and the chord inequality at interior grid points with a <= 1.
CostaReport costa_epi_check(const Distribution& prior, const Distribution& noise, const std::vector<double>& a_grid,
                            const QuadratureConfig& quad = {});

struct BoundsRow {
    double snr_db = 0.0;
    double a = 0.0;
    double mmse = 0.0;
    double bcrlb = 0.0;
    double new_lb = 0.0;
    double mc_error = 0.0;
};

struct MmseCrossCheck {
    double snr_db = 0.0;
    double monte_carlo = 0.0;
    double quadrature = 0.0;
    double mc_error = 0.0;
    bool agree = false;  ///< |mc - quad| <= 3 mc_error
};

struct BoundsCurve {
    std::string prior_desc;
    std::string noise_desc;
    std::string snr_definition;
    std::vector<BoundsRow> rows;
    std::vector<MmseCrossCheck> cross_checks;
};

/// a for a given SNR in dB, with SNR = Var(X) / (a Var(W)).
double a_from_snr_db(const Distribution& prior, const Distribution& noise, double snr_db);
double snr_db_from_a(const Distribution& prior, const Distribution& noise, double a);

/// Evenly spaced grid from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// Rows at the given a values, ordered by increasing SNR.
BoundsCurve bounds_sweep(const Distribution& prior, const Distribution& noise, const std::vector<double>& a_values,
                         Method mmse_method, const MonteCarloConfig& mc = {}, const QuadratureConfig& quad = {});

/// MMSE (Monte Carlo), BCRLB and N(X|Y) at each SNR; the MMSE is also computed
/// by quadrature at the first, middle and last points.
BoundsCurve figure1_sweep(const Distribution& prior, const Distribution& noise, const std::vector<double>& snr_grid_db,
                          const MonteCarloConfig& mc, const QuadratureConfig& quad = {});

struct SweepVerdict {
    std::vector<OrderingReport> ordering;
    bool ordering_ok = false;
    double low_snr_db = 0.0, low_gap = 0.0;
    double high_snr_db = 0.0, high_gap = 0.0;
    bool gap_ok = false;       ///< new_lb - bcrlb larger at the low-SNR point
    bool cross_check_ok = false;
};

/// Ordering at every row, and the gap comparison between the rows nearest to
/// low_snr_db and high_snr_db.
SweepVerdict evaluate_sweep(const BoundsCurve& curve, double low_snr_db = -10.0, double high_snr_db = 20.0);

}  // namespace infolab
