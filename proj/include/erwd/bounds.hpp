#pragma once

#include <optional>
#include <string>

#include "erwd/greens.hpp"

namespace erwd {

/// Green's-function constants of dimension d. An entry is empty when the
/// convolution powers it needs diverge (d - 1 <= 2n).
struct StructuralConstants {
    int d;
    std::optional<double> E0;       // (d/(d-1)) G_{d-1} - 1
    std::optional<double> E1;       // (d/(d-1))^2 G_{d-1}^{*2} - 1
    std::optional<double> a_d;      // d/(d-1)^2 G_{d-1}^{*2}
    std::optional<double> epsilon;  // 2d/(d-1)^4 G G^{*3} + E1/(d(d-1)^2) G^{*2}
};

/// Throws DomainError if `greens` lacks a finite entry that is needed.
StructuralConstants structural_constants(int d, const GreensTable& greens);

/// Upper bound on sum_{x,y} sum_m |pi_m^(N)(x,y)| for one expansion order N,
/// with s = beta + mu. Throws DivergenceError if a needed constant diverges.
double pi_bound_for_order(int d, double s, int N, const GreensTable& greens);

struct PiBoundTotals {
    double N1_term;
    /// Sum over N >= 2; infinite when divergent.
    double tail_total;
    /// (beta + mu) a_d >= 1, or a_d itself diverges.
    bool divergent;
};

/// Order-1 bound and the closed geometric sum of the N >= 2 bounds.
PiBoundTotals pi_bound_totals(int d, double beta, double mu, const GreensTable& greens);

/// d times the geometric tail sum_{N >= from} of the order bounds, closed form.
double pi_bound_tail_from(int d, double s, int from, const GreensTable& greens);

struct DerivativeBoundTotals {
    double rho_total;
    double chi_total;
    double gamma_total;
    double grand_total;
};

/// Worst-case (beta = mu = 1) sums of the derivative bounds, each already
/// multiplied by d. Throws DomainError unless 2 a_d < 1.
DerivativeBoundTotals derivative_bound_totals(int d, const GreensTable& greens);

/// 2 E0 + 4 G_{d-1} E1 / ((d-1)(1 - 2 a_d)): d times the total coefficient
/// bound at beta = mu = 1. Below 1 means the speed is positive for large beta.
double positivity_expression(int d, const GreensTable& greens);

struct Verdict {
    bool evaluable = false;
    bool pass = false;
    /// The quantity compared against 1.
    double value = 0.0;
    /// 1 - value; positive when the certificate holds.
    double margin = 0.0;
    std::string note;
};

struct Certificates {
    Verdict continuity_d6;     // 2 a_d < 1
    Verdict monotonicity_d12;  // derivative grand total < 1
    Verdict positivity_d9;     // positivity_expression < 1
};

Certificates certificates(int d, const GreensTable& greens);

struct BoundReport {
    int d;
    double beta;
    double mu;
    StructuralConstants constants;
    std::optional<double> pi_total_N1;
    std::optional<double> pi_total_tail;
    std::optional<DerivativeBoundTotals> derivative;
    Certificates certificates;
};

BoundReport bound_report(int d, double beta, double mu, const GreensTable& greens);

}  // namespace erwd
